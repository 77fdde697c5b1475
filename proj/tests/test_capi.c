#include <stdio.h>
#include <string.h>

#include "harmcover.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

static void roundtrip_and_sizes(void) {
  hc_covering* u = NULL;
  EXPECT(hc_covering_build("{\"family\":\"uniform\",\"dim\":1,\"trunc\":10}", &u) == HC_OK);
  size_t n = 0;
  EXPECT(hc_covering_size(u, &n) == HC_OK && n == 21);

  char* a = NULL;
  char* b = NULL;
  hc_covering* back = NULL;
  EXPECT(hc_covering_write(u, &a) == HC_OK);
  EXPECT(hc_covering_read(a, &back) == HC_OK);
  EXPECT(hc_covering_write(back, &b) == HC_OK);
  EXPECT(a && b && strcmp(a, b) == 0);

  char* r1 = NULL;
  char* r2 = NULL;
  EXPECT(hc_covering_check(u, NULL, &r1) == HC_OK);
  EXPECT(hc_covering_check(back, NULL, &r2) == HC_OK);
  EXPECT(r1 && r2 && strcmp(r1, r2) == 0);
  EXPECT(r1 && strstr(r1, "\"N_Q\": 3") != NULL);

  hc_string_free(a);
  hc_string_free(b);
  hc_string_free(r1);
  hc_string_free(r2);
  hc_covering_free(back);
  hc_covering_free(u);
}

static void errors(void) {
  hc_covering* c = NULL;
  EXPECT(hc_covering_build("{\"family\":\"hexagonal\"}", &c) == HC_ERR_ARGUMENT);
  EXPECT(c == NULL);
  EXPECT(strlen(hc_last_error()) > 0);
  EXPECT(hc_covering_build("{not json", &c) == HC_ERR_ARGUMENT);
  EXPECT(hc_covering_size(NULL, NULL) == HC_ERR_ARGUMENT);

  size_t n = 0;
  hc_covering* u = NULL;
  EXPECT(hc_covering_build("{\"family\":\"uniform\",\"trunc\":10}", &u) == HC_OK);
  EXPECT(strlen(hc_last_error()) == 0);
  EXPECT(hc_covering_size(u, &n) == HC_OK && n == 21);

  hc_covering* d = NULL;
  EXPECT(hc_covering_build("{\"family\":\"dyadic\",\"trunc\":6}", &d) == HC_OK);
  char* v = NULL;
  EXPECT(hc_embed_general(d, u, NULL, NULL, NULL, &v, NULL) == HC_ERR_PRECONDITION);
  EXPECT(hc_frame_check(d, NULL, &v) == HC_ERR_PRECONDITION);
  EXPECT(v == NULL);

  hc_signal* s = NULL;
  EXPECT(hc_signal_create("{\"kind\":\"gaussian\",\"center\":[0],\"width\":1}", "{\"d\":1,\"L\":4,\"N\":64}", NULL, &s) ==
         HC_OK);
  EXPECT(hc_phi_roundtrip(s, NULL, &v) == HC_ERR_RESOLUTION);
  EXPECT(hc_signal_read_raw("/nonexistent/signal.bin", "{\"d\":1,\"L\":4,\"N\":64}", &s) == HC_ERR_IO);
  EXPECT(strcmp(hc_status_name(HC_ERR_RESOLUTION), "resolution") == 0);
  hc_signal_free(s);
  hc_covering_free(d);
  hc_covering_free(u);
}

static void verdicts(void) {
  char* v = NULL;
  EXPECT(hc_embed_alpha("{\"alpha\":0,\"beta\":0,\"p1\":2,\"q1\":2,\"s1\":1,\"p2\":2,\"q2\":2,\"s2\":2,\"d\":1,"
                        "\"direction\":\"forward\"}",
                        &v) == HC_OK);
  EXPECT(v && strstr(v, "\"holds\": \"no\"") != NULL);
  EXPECT(v && strstr(v, "s₂ ≤ s₁ + d·s^{(0)}") != NULL);
  hc_string_free(v);
  v = NULL;
  EXPECT(hc_embed_alpha("{\"p1\":\"inf\",\"q1\":2,\"p2\":\"inf\",\"q2\":2}", &v) == HC_OK);
  EXPECT(v && strstr(v, "\"holds\": \"yes\"") != NULL);
  hc_string_free(v);
}

static void transforms(void) {
  const char* grid = "{\"d\":1,\"L\":64,\"N\":4096}";
  hc_signal* s = NULL;
  EXPECT(hc_signal_create("{\"kind\":\"modulatedGaussian\",\"center\":[2],\"frequency\":[3],\"width\":2}", grid, NULL,
                          &s) == HC_OK);
  char* r = NULL;
  EXPECT(hc_phi_roundtrip(s, "{\"numax\":5}", &r) == HC_OK);
  EXPECT(r && strstr(r, "\"relativeError\"") != NULL);
  hc_string_free(r);

  char* coef = NULL;
  hc_signal* back = NULL;
  EXPECT(hc_phi_analyze(s, "{\"numax\":3}", &coef) == HC_OK);
  EXPECT(hc_phi_synthesize(coef, grid, NULL, &back) == HC_OK);
  char* n1 = NULL;
  char* n2 = NULL;
  EXPECT(hc_phi_norm(s, NULL, NULL, "{\"numax\":3,\"kind\":\"b\",\"s\":1}", &n1) == HC_OK);
  EXPECT(hc_phi_norm(NULL, coef, grid, "{\"kind\":\"b\",\"s\":1}", &n2) == HC_OK);
  EXPECT(n1 && n2 && strcmp(n1, n2) == 0);
  hc_string_free(n1);
  hc_string_free(n2);
  hc_string_free(coef);
  hc_signal_free(back);

  hc_covering* u = NULL;
  EXPECT(hc_covering_build("{\"family\":\"uniform\",\"trunc\":20}", &u) == HC_OK);
  hc_signal* rec = NULL;
  EXPECT(hc_frame_reconstruct(s, u, "{\"nmax\":64}", &rec, &r) == HC_OK);
  EXPECT(rec != NULL);
  hc_string_free(r);
  EXPECT(hc_norm(s, u, NULL, "{\"p\":2,\"q\":\"inf\"}", &r) == HC_OK);
  hc_string_free(r);

  hc_signal_free(rec);
  hc_covering_free(u);
  hc_signal_free(s);
}

int main(void) {
  EXPECT(hc_set_threads(1) == HC_OK);
  roundtrip_and_sizes();
  errors();
  verdicts();
  transforms();
  EXPECT(hc_set_threads(-1) == HC_ERR_ARGUMENT);
  EXPECT(hc_set_threads(0) == HC_OK);
  if (failures) fprintf(stderr, "%d failures\n", failures);
  else printf("capi: all checks passed\n");
  return failures ? 1 : 0;
}
