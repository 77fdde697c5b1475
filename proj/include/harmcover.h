#ifndef HARMCOVER_H
#define HARMCOVER_H

#include <stddef.h>

#if defined(_WIN32)
#define HC_API __declspec(dllexport)
#else
#define HC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hc_status {
  HC_OK = 0,
  HC_ERR_ARGUMENT = 1,
  HC_ERR_INDEX = 2,
  HC_ERR_PRECONDITION = 3,
  HC_ERR_RESOLUTION = 4,
  HC_ERR_COVERAGE = 5,
  HC_ERR_CONSTRUCTION = 6,
  HC_ERR_IO = 7,
  HC_ERR_INTERNAL = 8
} hc_status;

typedef struct hc_covering hc_covering;
typedef struct hc_weight hc_weight;
typedef struct hc_signal hc_signal;

/* Strings returned through char** are owned by the caller; release with hc_string_free.
   Every JSON argument is a UTF-8 document; NULL options mean "{}". */

HC_API const char* hc_version(void);
HC_API const char* hc_status_name(hc_status s);
/* Message of the last failing call on this thread ("" if none). */
HC_API const char* hc_last_error(void);
HC_API void hc_string_free(char* s);
/* Caps internal worker threads; 0 restores HARMCOVER_THREADS / hardware default. */
HC_API hc_status hc_set_threads(int n);

/* Coverings. spec: {"family": "uniform"|"dyadic"|"alpha"|"shearlet", "dim", "trunc",
   "alpha", "radius", "c", "delta", "jmin", "jmax", "kmax", "u0", "u1", "w"}. */
HC_API hc_status hc_covering_build(const char* spec, hc_covering** out);
HC_API hc_status hc_covering_read(const char* json, hc_covering** out);
HC_API hc_status hc_covering_write(const hc_covering* cov, char** json);
HC_API hc_status hc_covering_size(const hc_covering* cov, size_t* n);
/* Constants report; options {"perAxis", "blindMargin", "randomCount", "seed"} add a coverage check. */
HC_API hc_status hc_covering_check(const hc_covering* cov, const char* options, char** report);
HC_API void hc_covering_free(hc_covering* cov);

/* Weights: {"generator": ..., params} or {"values": [{label, value}]}. */
HC_API hc_status hc_weight_create(const char* spec, const hc_covering* cov, hc_weight** out);
HC_API hc_status hc_weight_write(const hc_weight* w, char** json);
HC_API void hc_weight_free(hc_weight* w);

/* Intersection sets, subordinateness and (with a weight) moderateness constants. */
HC_API hc_status hc_relate(const hc_covering* fine, const hc_covering* coarse, const hc_weight* weight, char** report);

/* {"alpha","beta","p1","q1","s1","p2","q2","s2","d","direction"}; exponents may be "inf". */
HC_API hc_status hc_embed_alpha(const char* query, char** verdict);
/* source/target coverings with their weights (NULL means u ≡ 1); query {"p1","q1" (source),
   "p2","q2" (target), "fine": "source"|"target", "schedule"}. trace_csv may be NULL. */
HC_API hc_status hc_embed_general(const hc_covering* source, const hc_covering* target, const hc_weight* wsource,
                           const hc_weight* wtarget, const char* query, char** verdict, char** trace_csv);
/* {"c","alpha","beta","gamma","p1","q1","p2","q2"} */
HC_API hc_status hc_embed_shearlet_besov(const char* query, char** verdict);

/* grid: {"d","L","N"}. spec: analytic signal description; cov is needed for coveringBump. */
HC_API hc_status hc_signal_create(const char* spec, const char* grid, const hc_covering* cov, hc_signal** out);
/* Raw space samples: row-major little-endian complex64 pairs. */
HC_API hc_status hc_signal_read_raw(const char* path, const char* grid, hc_signal** out);
HC_API hc_status hc_signal_write_raw(const hc_signal* sig, const char* path);
HC_API hc_status hc_signal_info(const hc_signal* sig, char** json);
HC_API void hc_signal_free(hc_signal* sig);

/* Decomposition norm; options {"p","q","shrink","profile"}. weight NULL means u ≡ 1. */
HC_API hc_status hc_norm(const hc_signal* sig, const hc_covering* cov, const hc_weight* weight, const char* options,
                  char** report);

/* φ-transform; options {"numax","profile","kind","s","p","q"}. */
HC_API hc_status hc_phi_analyze(const hc_signal* sig, const char* options, char** coefficients);
HC_API hc_status hc_phi_synthesize(const char* coefficients, const char* grid, const char* options, hc_signal** out);
HC_API hc_status hc_phi_roundtrip(const hc_signal* sig, const char* options, char** report);
/* Sequence norm of sig's coefficients, or of coefficients (with grid) when sig is NULL. */
HC_API hc_status hc_phi_norm(const hc_signal* sig, const char* coefficients, const char* grid, const char* options,
                      char** report);

/* Tight frames on structured coverings; options {"grid","nmax","a","shrink","profile","p"}. */
HC_API hc_status hc_frame_check(const hc_covering* cov, const char* options, char** report);
HC_API hc_status hc_frame_parseval(const hc_signal* sig, const hc_covering* cov, const char* options, char** report);
HC_API hc_status hc_frame_analyze(const hc_signal* sig, const hc_covering* cov, const char* options, char** coefficients);
/* reconstructed may be NULL. */
HC_API hc_status hc_frame_reconstruct(const hc_signal* sig, const hc_covering* cov, const char* options,
                               hc_signal** reconstructed, char** report);

/* Wavelet transform on a group truncation; options {"c","delta","jmin","jmax","kmin","kmax","mode",
   "window","samples"}. */
HC_API hc_status hc_wavelet_transform(const hc_signal* sig, const char* options, char** report);
/* Coorbit/decomposition ratio probe; options {"c","p","q","alpha","beta","grid","signals",...}. */
HC_API hc_status hc_wavelet_probe(const char* options, char** report);

#ifdef __cplusplus
}
#endif

#endif
