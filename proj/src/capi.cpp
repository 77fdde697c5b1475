#include "harmcover.h"

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "harmcover/embedding.hpp"
#include "harmcover/errors.hpp"
#include "harmcover/frames.hpp"
#include "harmcover/parallel.hpp"
#include "harmcover/phi.hpp"
#include "harmcover/relations.hpp"
#include "harmcover/wavelet.hpp"
#include "harmcover/zoo.hpp"

using namespace harmcover;
using nlohmann::json;

struct hc_covering {
  Covering cov;
};
struct hc_weight {
  WeightFamily w;
};
struct hc_signal {
  GridFunction f;
};

namespace {

thread_local std::string lastError;

hc_status statusOf(ErrorKind k) {
  switch (k) {
    case ErrorKind::Argument:
      return HC_ERR_ARGUMENT;
    case ErrorKind::Index:
      return HC_ERR_INDEX;
    case ErrorKind::Precondition:
      return HC_ERR_PRECONDITION;
    case ErrorKind::Resolution:
      return HC_ERR_RESOLUTION;
    case ErrorKind::Coverage:
      return HC_ERR_COVERAGE;
    case ErrorKind::Construction:
      return HC_ERR_CONSTRUCTION;
    case ErrorKind::Io:
      return HC_ERR_IO;
    default:
      return HC_ERR_INTERNAL;
  }
}

template <class F>
hc_status guard(F&& body) {
  lastError.clear();
  try {
    body();
    return HC_OK;
  } catch (const Error& e) {
    lastError = e.what();
    return statusOf(e.kind());
  } catch (const json::exception& e) {
    lastError = std::string("invalid JSON input: ") + e.what();
    return HC_ERR_ARGUMENT;
  } catch (const std::bad_alloc&) {
    lastError = "out of memory";
    return HC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    lastError = e.what();
    return HC_ERR_INTERNAL;
  }
}

template <class T>
void need(T* p, const char* what) {
  if (!p) throw ArgumentError(std::string(what) + " must not be NULL");
}

json parse(const char* text) {
  if (!text || !*text) return json::object();
  json j = json::parse(text);
  if (!j.is_object()) throw ArgumentError("expected a JSON object");
  return j;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

char* dump(const json& j) { return dup(j.dump(2)); }

Exponent exponentOf(const json& o, const char* key, double fallback) {
  if (!o.contains(key)) return Exponent(fallback);
  const json& v = o.at(key);
  if (v.is_string()) return parseExponent(v.get<std::string>());
  if (v.is_number()) return Exponent(v.get<double>());
  throw ArgumentError(std::string("exponent '") + key + "' must be a number or \"inf\"");
}

double num(const json& o, const char* key, double fallback) {
  if (!o.contains(key)) return fallback;
  if (!o.at(key).is_number()) throw ArgumentError(std::string("'") + key + "' must be a number");
  return o.at(key).get<double>();
}

int integer(const json& o, const char* key, int fallback) {
  if (!o.contains(key)) return fallback;
  if (!o.at(key).is_number_integer()) throw ArgumentError(std::string("'") + key + "' must be an integer");
  return o.at(key).get<int>();
}

Profile profileOf(const json& o) {
  return o.contains("profile") ? parseProfile(o.at("profile").get<std::string>()) : Profile::BumpIntegral;
}

GridSpec gridOf(const json& g) {
  GridSpec s = gridFromJson(g);
  s.validate();
  return s;
}

GridSpec defaultGrid(int d) { return d == 1 ? GridSpec{1, 64.0, 4096} : GridSpec{d, 32.0, 256}; }

GridFunction inSpace(const GridFunction& f) { return f.domain == Domain::Space ? f : toSpace(f); }

double relativeError(const GridFunction& a, const GridFunction& b) {
  GridFunction x = inSpace(a), y = inSpace(b);
  if (x.samples.size() != y.samples.size()) throw InternalError("grid mismatch");
  GridFunction diff = x;
  for (std::size_t k = 0; k < diff.samples.size(); ++k) diff.samples[k] -= y.samples[k];
  double n = l2Norm(y);
  return n > 0.0 ? l2Norm(diff) / n : l2Norm(diff);
}

Covering buildCovering(const json& s) {
  if (!s.contains("family")) throw ArgumentError("covering spec needs 'family'");
  std::string fam = s.at("family").get<std::string>();
  int d = integer(s, "dim", 1);
  if (fam == "uniform") return makeUniform(d, integer(s, "trunc", 10));
  if (fam == "dyadic") return makeDyadic(d, integer(s, "trunc", 8));
  if (fam == "alpha") {
    AlphaCoveringParams p;
    p.alpha = num(s, "alpha", 0.5);
    p.d = d;
    p.r = num(s, "radius", 0.0);
    p.truncationRadius = integer(s, "trunc", 20);
    return makeAlpha(p);
  }
  if (fam == "shearlet") {
    if (d != 2) throw ArgumentError("shearlet coverings live in dimension 2");
    ShearletParams p;
    p.c = num(s, "c", 0.5);
    p.delta = num(s, "delta", 1.0);
    p.jMin = integer(s, "jmin", p.jMin);
    p.jMax = integer(s, "jmax", p.jMax);
    p.kMax = integer(s, "kmax", s.contains("trunc") ? integer(s, "trunc", 0) : p.kMax);
    p.q.u0 = num(s, "u0", 0.0);
    p.q.u1 = num(s, "u1", 0.0);
    p.q.w = num(s, "w", 0.0);
    return makeShearletInduced(p);
  }
  throw ArgumentError("unknown covering family '" + fam + "'");
}

SamplingSpec samplingFor(const Covering& cov, const json& o) {
  SamplingSpec s;
  int perAxis = integer(o, "perAxis", 0);
  std::size_t randomCount = static_cast<std::size_t>(integer(o, "randomCount", 0));
  if (perAxis == 0 && randomCount == 0) perAxis = cov.dim() == 1 ? 4001 : 201;
  if (o.contains("lo") && o.contains("hi")) {
    auto lo = o.at("lo").get<std::vector<double>>(), hi = o.at("hi").get<std::vector<double>>();
    if (static_cast<int>(lo.size()) != cov.dim() || static_cast<int>(hi.size()) != cov.dim())
      throw ArgumentError("sampling box dimension mismatch");
    s.lo = Eigen::Map<const Vec>(lo.data(), lo.size());
    s.hi = Eigen::Map<const Vec>(hi.data(), hi.size());
    s.blindMargin = num(o, "blindMargin", 0.0);
  } else if (cov.truncation().claim) {
    s = claimSampling(cov, perAxis, num(o, "blindMargin", 0.0));
  } else {
    Vec lo = cov.bbox(0).lo, hi = cov.bbox(0).hi;
    for (std::size_t i = 1; i < cov.size(); ++i) {
      lo = lo.cwiseMin(cov.bbox(i).lo);
      hi = hi.cwiseMax(cov.bbox(i).hi);
    }
    s.lo = 0.8 * lo;
    s.hi = 0.8 * hi;
    s.blindMargin = num(o, "blindMargin", 0.0);
  }
  s.perAxis = randomCount ? 0 : perAxis;
  s.randomCount = randomCount;
  s.seed = static_cast<std::uint64_t>(integer(o, "seed", 0));
  return s;
}

WeightFamily weightOrOne(const hc_weight* w, const Covering& cov) {
  return w ? w->w : makeWeight({{"generator", "constant"}, {"value", 1.0}}, cov);
}

CubeCoefficients phiCoefficients(const GridFunction& f, const WindowSystem& w, const json& o) {
  int nuMax = integer(o, "numax", maxScale(f.grid));
  return analyze(f, w, nuMax);
}

SequenceKind kindOf(const json& o) {
  std::string k = o.contains("kind") ? o.at("kind").get<std::string>() : "b";
  if (k == "f" || k == "F") return SequenceKind::F;
  if (k == "b" || k == "B") return SequenceKind::B;
  throw ArgumentError("sequence kind must be f or b");
}

json phiNormReport(const CubeCoefficients& c, const json& o) {
  SequenceKind kind = kindOf(o);
  double s = num(o, "s", 0.0);
  Exponent p = exponentOf(o, "p", 2.0), q = exponentOf(o, "q", 2.0);
  return {{"kind", kind == SequenceKind::F ? "f" : "b"},
          {"s", s},
          {"p", p.toString()},
          {"q", q.toString()},
          {"nuMax", c.nuMax},
          {"norm", sequenceNorm(c, kind, s, p, q)}};
}

TightFrame frameFor(const Covering& cov, const GridSpec& g, const json& o) {
  FrameParams p;
  p.a = num(o, "a", 0.0);
  p.nMax = integer(o, "nmax", p.nMax);
  p.shrink = num(o, "shrink", p.shrink);
  p.profile = profileOf(o);
  return buildTightFrame(cov, g, p);
}

WaveletWindow windowFor(const json& o, double delta, std::optional<ShearletQParams> q = std::nullopt) {
  if (o.contains("window")) {
    const json& w = o.at("window");
    auto kind = parseWindowKind(w.value("kind", std::string("bump")));
    return makeWindow(kind, num(w, "center", 1.75), num(w, "halfWidth1", 1.25), num(w, "halfWidth2", 1.5),
                      num(w, "blindMargin", 0.1));
  }
  double u0 = std::pow(2.0, -0.6), u1 = 2.0 * std::pow(2.0, 0.6), w = 1.1 * delta / 2.0;
  if (q) {
    u0 = q->u0;
    u1 = q->u1;
    w = q->w;
  }
  return makeWindow(WaveletWindow::Kind::Bump, 0.5 * (u0 + u1), 0.5 * (u1 - u0), w * u1);
}

json defaultProbeSignals() {
  const double table[10][3] = {{0.45, 0.0, 10}, {-0.5, 0.1, 8},   {0.6, -0.3, 6},  {-1.0, 0.2, 6},
                               {1.1, 0.4, 7},   {-0.8, -0.3, 6},  {0.7, 0.5, 9},   {0.9, -0.5, 7},
                               {-0.55, -0.45, 8}, {1.05, -0.2, 5}};
  json out = json::array();
  for (const auto& r : table)
    out.push_back({{"kind", "modulatedGaussian"}, {"center", {0.0, 1.0}}, {"frequency", {r[0], r[1]}}, {"width", r[2]}});
  return out;
}

}  // namespace

extern "C" {

const char* hc_version(void) { return "1.0.0"; }

const char* hc_status_name(hc_status s) {
  switch (s) {
    case HC_OK:
      return "ok";
    case HC_ERR_ARGUMENT:
      return "argument";
    case HC_ERR_INDEX:
      return "index";
    case HC_ERR_PRECONDITION:
      return "precondition";
    case HC_ERR_RESOLUTION:
      return "resolution";
    case HC_ERR_COVERAGE:
      return "coverage";
    case HC_ERR_CONSTRUCTION:
      return "construction";
    case HC_ERR_IO:
      return "io";
    default:
      return "internal";
  }
}

const char* hc_last_error(void) { return lastError.c_str(); }

void hc_string_free(char* s) { std::free(s); }

hc_status hc_set_threads(int n) {
  return guard([&] {
    if (n < 0) throw ArgumentError("thread count must be >= 0");
    setThreadCount(static_cast<std::size_t>(n));
  });
}

hc_status hc_covering_build(const char* spec, hc_covering** out) {
  return guard([&] {
    need(out, "out");
    *out = new hc_covering{buildCovering(parse(spec))};
  });
}

hc_status hc_covering_read(const char* text, hc_covering** out) {
  return guard([&] {
    need(out, "out");
    need(text, "json");
    *out = new hc_covering{coveringFromJson(json::parse(text))};
  });
}

hc_status hc_covering_write(const hc_covering* cov, char** out) {
  return guard([&] {
    need(cov, "covering");
    need(out, "out");
    *out = dump(toJson(cov->cov));
  });
}

hc_status hc_covering_size(const hc_covering* cov, size_t* n) {
  return guard([&] {
    need(cov, "covering");
    need(n, "n");
    *n = cov->cov.size();
  });
}

hc_status hc_covering_check(const hc_covering* cov, const char* options, char** report) {
  return guard([&] {
    need(cov, "covering");
    need(report, "report");
    json o = parse(options);
    const Covering& c = cov->cov;
    json r{{"family", c.truncation().family}, {"dim", c.dim()}, {"size", c.size()}};
    r["constants"] = toJson(coveringConstants(c));
    if (o.contains("perAxis") || o.contains("randomCount") || c.truncation().claim)
      r["coverage"] = toJson(verifyCovering(c, samplingFor(c, o)));
    *report = dump(r);
  });
}

void hc_covering_free(hc_covering* cov) { delete cov; }

hc_status hc_weight_create(const char* spec, const hc_covering* cov, hc_weight** out) {
  return guard([&] {
    need(cov, "covering");
    need(out, "out");
    *out = new hc_weight{makeWeight(parse(spec), cov->cov)};
  });
}

hc_status hc_weight_write(const hc_weight* w, char** out) {
  return guard([&] {
    need(w, "weight");
    need(out, "out");
    *out = dump(toJson(w->w));
  });
}

void hc_weight_free(hc_weight* w) { delete w; }

hc_status hc_relate(const hc_covering* fine, const hc_covering* coarse, const hc_weight* weight, char** report) {
  return guard([&] {
    need(fine, "fine");
    need(coarse, "coarse");
    need(report, "report");
    RelationReport r =
        weight ? moderateConstants(fine->cov, weight->w, &coarse->cov) : intersectionSets(fine->cov, coarse->cov);
    std::size_t skipped = 0;
    try {
      r.subordinationOrder = almostSubordinate(fine->cov, coarse->cov, 8, &skipped);
    } catch (const PreconditionError&) {
      r.subordinationOrder.reset();
    }
    r.subordinationSkipped = skipped;
    *report = dump(toJson(r, fine->cov, coarse->cov));
  });
}

hc_status hc_embed_alpha(const char* query, char** verdict) {
  return guard([&] {
    need(verdict, "verdict");
    json o = parse(query);
    AlphaModulationQuery q;
    q.alpha = num(o, "alpha", 0.0);
    q.beta = num(o, "beta", 0.0);
    q.p1 = exponentOf(o, "p1", 2.0);
    q.q1 = exponentOf(o, "q1", 2.0);
    q.p2 = exponentOf(o, "p2", 2.0);
    q.q2 = exponentOf(o, "q2", 2.0);
    q.s1 = num(o, "s1", 0.0);
    q.s2 = num(o, "s2", 0.0);
    q.d = integer(o, "d", 1);
    if (o.contains("direction")) q.direction = parseDirection(o.at("direction").get<std::string>());
    *verdict = dump(toJson(decideAlphaModulation(q)));
  });
}

hc_status hc_embed_general(const hc_covering* source, const hc_covering* target, const hc_weight* wsource,
                           const hc_weight* wtarget, const char* query, char** verdict, char** trace_csv) {
  return guard([&] {
    need(source, "source");
    need(target, "target");
    need(verdict, "verdict");
    json o = parse(query);
    std::string fine = o.value("fine", std::string("source"));
    if (fine != "source" && fine != "target") throw ArgumentError("'fine' must be source or target");
    bool srcFine = fine == "source";
    WeightFamily us = weightOrOne(wsource, source->cov), ut = weightOrOne(wtarget, target->cov);
    EmbeddingQuery q;
    q.fine = srcFine ? &source->cov : &target->cov;
    q.coarse = srcFine ? &target->cov : &source->cov;
    q.u = srcFine ? &us : &ut;
    q.v = srcFine ? &ut : &us;
    Exponent sp = exponentOf(o, "p1", 2.0), sq = exponentOf(o, "q1", 2.0);
    Exponent tp = exponentOf(o, "p2", 2.0), tq = exponentOf(o, "q2", 2.0);
    q.p1 = srcFine ? sp : tp;
    q.q1 = srcFine ? sq : tq;
    q.p2 = srcFine ? tp : sp;
    q.q2 = srcFine ? tq : sq;
    q.direction = srcFine ? Direction::QIntoP : Direction::PIntoQ;
    if (o.contains("schedule")) q.truncationSchedule = o.at("schedule").get<std::vector<double>>();
    auto v = decideGeneral(q);
    *verdict = dump(toJson(v));
    if (trace_csv) *trace_csv = dup(traceCsv(v));
  });
}

hc_status hc_embed_shearlet_besov(const char* query, char** verdict) {
  return guard([&] {
    need(verdict, "verdict");
    json o = parse(query);
    ShearletBesovQuery q;
    q.c = num(o, "c", 0.5);
    q.alpha = num(o, "alpha", 0.0);
    q.beta = num(o, "beta", 0.0);
    q.gamma = num(o, "gamma", 0.0);
    q.p1 = exponentOf(o, "p1", 2.0);
    q.q1 = exponentOf(o, "q1", 2.0);
    q.p2 = exponentOf(o, "p2", 2.0);
    q.q2 = exponentOf(o, "q2", 2.0);
    *verdict = dump(toJson(decideShearletBesov(q)));
  });
}

hc_status hc_signal_create(const char* spec, const char* grid, const hc_covering* cov, hc_signal** out) {
  return guard([&] {
    need(out, "out");
    GridSpec g = gridOf(parse(grid));
    *out = new hc_signal{makeSignal(parse(spec), g, cov ? &cov->cov : nullptr)};
  });
}

hc_status hc_signal_read_raw(const char* path, const char* grid, hc_signal** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    GridSpec g = gridOf(parse(grid));
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(std::string("cannot open ") + path);
    GridFunction f = GridFunction::zeros(g, Domain::Space);
    std::vector<float> buf(2 * f.samples.size());
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(float)) || in.peek() != EOF)
      throw IoError(std::string(path) + ": expected " + std::to_string(f.samples.size()) + " complex64 samples");
    for (std::size_t k = 0; k < f.samples.size(); ++k) f.samples[k] = {buf[2 * k], buf[2 * k + 1]};
    *out = new hc_signal{std::move(f)};
  });
}

hc_status hc_signal_write_raw(const hc_signal* sig, const char* path) {
  return guard([&] {
    need(sig, "signal");
    need(path, "path");
    GridFunction f = inSpace(sig->f);
    std::vector<float> buf(2 * f.samples.size());
    for (std::size_t k = 0; k < f.samples.size(); ++k) {
      buf[2 * k] = static_cast<float>(f.samples[k].real());
      buf[2 * k + 1] = static_cast<float>(f.samples[k].imag());
    }
    std::ofstream os(path, std::ios::binary);
    os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!os) throw IoError(std::string("cannot write ") + path);
  });
}

hc_status hc_signal_info(const hc_signal* sig, char** out) {
  return guard([&] {
    need(sig, "signal");
    need(out, "out");
    const GridFunction& f = sig->f;
    GridFunction fh = f.domain == Domain::Frequency ? f : toFrequency(f);
    *out = dump({{"grid", toJson(f.grid)},
                 {"l2Norm", l2Norm(f)},
                 {"energyWithinHalfNyquist", energyWithin(fh, 0.5 * f.grid.nyquist())}});
  });
}

void hc_signal_free(hc_signal* sig) { delete sig; }

hc_status hc_norm(const hc_signal* sig, const hc_covering* cov, const hc_weight* weight, const char* options,
                  char** report) {
  return guard([&] {
    need(sig, "signal");
    need(cov, "covering");
    need(report, "report");
    json o = parse(options);
    if (sig->f.grid.d != cov->cov.dim()) throw ArgumentError("signal and covering dimensions differ");
    Exponent p = exponentOf(o, "p", 2.0), q = exponentOf(o, "q", 2.0);
    auto bapu = buildBAPU(cov->cov, sig->f.grid, num(o, "shrink", 0.7), profileOf(o));
    WeightFamily u = weightOrOne(weight, cov->cov);
    *report = dump({{"p", p.toString()},
                    {"q", q.toString()},
                    {"norm", decompositionNorm(sig->f, bapu, p, q, u)},
                    {"partitionDeviation", partitionDeviation(bapu)},
                    {"sets", cov->cov.size()}});
  });
}

hc_status hc_phi_analyze(const hc_signal* sig, const char* options, char** coefficients) {
  return guard([&] {
    need(sig, "signal");
    need(coefficients, "coefficients");
    json o = parse(options);
    auto w = makeWindows(sig->f.grid, profileOf(o));
    *coefficients = dump(toJson(phiCoefficients(sig->f, w, o)));
  });
}

hc_status hc_phi_synthesize(const char* coefficients, const char* grid, const char* options, hc_signal** out) {
  return guard([&] {
    need(coefficients, "coefficients");
    need(out, "out");
    json o = parse(options);
    GridSpec g = gridOf(parse(grid));
    auto c = coefficientsFromJson(json::parse(coefficients), g);
    auto w = makeWindows(g, profileOf(o));
    *out = new hc_signal{synthesize(c, w)};
  });
}

hc_status hc_phi_roundtrip(const hc_signal* sig, const char* options, char** report) {
  return guard([&] {
    need(sig, "signal");
    need(report, "report");
    json o = parse(options);
    auto w = makeWindows(sig->f.grid, profileOf(o));
    auto c = phiCoefficients(sig->f, w, o);
    GridFunction back = synthesize(c, w);
    *report = dump({{"grid", toJson(sig->f.grid)},
                    {"nuMax", c.nuMax},
                    {"identityResidual", identityResidual(w)},
                    {"relativeError", relativeError(back, sig->f)}});
  });
}

hc_status hc_phi_norm(const hc_signal* sig, const char* coefficients, const char* grid, const char* options,
                      char** report) {
  return guard([&] {
    need(report, "report");
    json o = parse(options);
    if (sig) {
      auto w = makeWindows(sig->f.grid, profileOf(o));
      *report = dump(phiNormReport(phiCoefficients(sig->f, w, o), o));
    } else {
      need(coefficients, "coefficients");
      auto c = coefficientsFromJson(json::parse(coefficients), gridOf(parse(grid)));
      *report = dump(phiNormReport(c, o));
    }
  });
}

hc_status hc_frame_check(const hc_covering* cov, const char* options, char** report) {
  return guard([&] {
    need(cov, "covering");
    need(report, "report");
    json o = parse(options);
    GridSpec g = o.contains("grid") ? gridOf(o.at("grid")) : defaultGrid(cov->cov.dim());
    auto fr = frameFor(cov->cov, g, o);
    double gram = 0.0;
    std::size_t interior = 0;
    int range = std::min(fr.nMax, 8);
    for (std::size_t i = 0; i < fr.interior.size(); ++i) {
      if (!fr.interior[i]) continue;
      if (interior++ < 3) gram = std::max(gram, exponentialGramDefect(fr, i, range));
    }
    *report = dump({{"grid", toJson(g)},
                    {"a", fr.a},
                    {"nMax", fr.nMax},
                    {"atomsPerSet", fr.atomsPerSet()},
                    {"interiorSets", interior},
                    {"quadraticPartitionDefect", quadraticPartitionDefect(fr)},
                    {"exponentialGramDefect", gram},
                    {"thetaDerivativeBound", {thetaDerivativeBound(fr, 1), thetaDerivativeBound(fr, 2)}}});
  });
}

hc_status hc_frame_parseval(const hc_signal* sig, const hc_covering* cov, const char* options, char** report) {
  return guard([&] {
    need(sig, "signal");
    need(cov, "covering");
    need(report, "report");
    auto fr = frameFor(cov->cov, sig->f.grid, parse(options));
    *report = dump(toJson(parsevalAndReconstruct(sig->f, fr)));
  });
}

hc_status hc_frame_analyze(const hc_signal* sig, const hc_covering* cov, const char* options, char** coefficients) {
  return guard([&] {
    need(sig, "signal");
    need(cov, "covering");
    need(coefficients, "coefficients");
    json o = parse(options);
    auto fr = frameFor(cov->cov, sig->f.grid, o);
    *coefficients = dump(toJson(frameAnalyze(sig->f, fr, std::nullopt, exponentOf(o, "p", 2.0)), cov->cov));
  });
}

hc_status hc_frame_reconstruct(const hc_signal* sig, const hc_covering* cov, const char* options,
                               hc_signal** reconstructed, char** report) {
  return guard([&] {
    need(sig, "signal");
    need(cov, "covering");
    need(report, "report");
    auto fr = frameFor(cov->cov, sig->f.grid, parse(options));
    GridFunction back = frameSynthesize(frameAnalyze(sig->f, fr), fr);
    json r = toJson(parsevalAndReconstruct(sig->f, fr));
    r["relativeError"] = relativeError(back, sig->f);
    *report = dump(r);
    if (reconstructed) *reconstructed = new hc_signal{std::move(back)};
  });
}

hc_status hc_wavelet_transform(const hc_signal* sig, const char* options, char** report) {
  return guard([&] {
    need(sig, "signal");
    need(report, "report");
    json o = parse(options);
    const GridFunction& f = sig->f;
    if (f.grid.d != 2) throw ArgumentError("the wavelet transform acts on 2-D signals");
    ShearletGroup G(num(o, "c", 0.5));
    double delta = num(o, "delta", 1.0);
    int jMin = integer(o, "jmin", 0), jMax = integer(o, "jmax", 1);
    int kMin = integer(o, "kmin", -1), kMax = integer(o, "kmax", 1);
    if (kMin != -kMax) throw ArgumentError("shear ranges must be symmetric (kmin = -kmax)");
    WaveletMode mode = parseWaveletMode(o.value("mode", std::string("fourier")));
    auto w = windowFor(o, delta);
    auto pts = groupQuadrature(G, delta, jMin, jMax, kMax, 1, 1);
    int samples = integer(o, "samples", 8);
    if (samples < 1 || samples > f.grid.N) throw ArgumentError("'samples' must lie in [1, N]");
    int step = f.grid.N / samples;
    std::vector<std::size_t> flat;
    for (int a = 0; a < samples; ++a)
      for (int b = 0; b < samples; ++b)
        flat.push_back(f.grid.flatIndex({f.grid.signedIndex(a * step), f.grid.signedIndex(b * step)}));

    json out{{"grid", toJson(f.grid)}, {"c", G.c()}, {"delta", delta}, {"mode", nameOf(mode)}};
    out["window"] = {{"kind", nameOf(w.kind)}, {"center", w.center1}, {"halfWidth1", w.halfWidth1},
                     {"halfWidth2", w.halfWidth2}, {"normSquared", w.normSquared()}};
    json slices = json::array();
    std::vector<std::vector<Complex>> values(pts.size());
    if (mode == WaveletMode::Fourier) {
      GridFunction fh = f.domain == Domain::Frequency ? f : toFrequency(f);
      auto W = waveletTransform(fh, w, G, pts);
      for (std::size_t t = 0; t < pts.size(); ++t)
        for (std::size_t k : flat) values[t].push_back(W.values[t][k]);
      out["groupL2Norm"] = groupLpNorm(W, Exponent(2.0));
    } else {
      GridFunction fs = inSpace(f);
      parallelFor(pts.size(), [&](std::size_t t) {
        for (std::size_t k : flat)
          values[t].push_back(waveletAt(fs, w, G, f.grid.position(k), pts[t].h, WaveletMode::Direct));
      });
    }
    for (std::size_t t = 0; t < pts.size(); ++t) {
      json rec = json::array();
      for (std::size_t s = 0; s < flat.size(); ++s) {
        Vec x = f.grid.position(flat[s]);
        rec.push_back({{"x", {x(0), x(1)}}, {"re", values[t][s].real()}, {"im", values[t][s].imag()}});
      }
      slices.push_back({{"h", toJson(pts[t].h)}, {"weight", pts[t].weight}, {"values", rec}});
    }
    out["slices"] = slices;
    *report = dump(out);
  });
}

hc_status hc_wavelet_probe(const char* options, char** report) {
  return guard([&] {
    need(report, "report");
    json o = parse(options);
    ShearletParams sp;
    sp.c = num(o, "c", 0.5);
    sp.delta = num(o, "delta", 1.0);
    sp.jMin = integer(o, "jmin", 0);
    sp.jMax = integer(o, "jmax", 2);
    sp.kMax = integer(o, "kmax", 2);
    auto cov = makeShearletInduced(sp);
    GridSpec g = o.contains("grid") ? gridOf(o.at("grid")) : GridSpec{2, 32.0, 512};
    CoorbitProbeOptions po;
    po.window = windowFor(o, sp.delta, shearletParamsOf(cov).q);
    po.p = exponentOf(o, "p", 2.0);
    po.q = exponentOf(o, "q", 2.0);
    po.m = {num(o, "alpha", 0.0), num(o, "beta", 0.0), 1.0};
    po.perOctave = integer(o, "perOctave", 2);
    po.perShear = integer(o, "perShear", 2);
    json specs = o.contains("signals") ? o.at("signals") : defaultProbeSignals();
    if (!specs.is_array() || specs.empty()) throw ArgumentError("'signals' must be a non-empty array");
    std::vector<GridFunction> signals;
    for (const auto& s : specs) signals.push_back(makeSignal(s, g));
    json r = toJson(coorbitDecompositionProbe(signals, cov, po));
    r["c"] = sp.c;
    r["p"] = po.p.toString();
    r["q"] = po.q.toString();
    r["sets"] = cov.size();
    r["grid"] = toJson(g);
    *report = dump(r);
  });
}

}  // extern "C"
