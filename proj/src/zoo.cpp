#include "harmcover/zoo.hpp"

#include <algorithm>
#include <cmath>

#include "harmcover/errors.hpp"
#include "harmcover/exponent.hpp"

namespace harmcover {

namespace {

void forEachLattice(int d, int R, const std::function<void(const Label&)>& fn) {
  Label k(d, -R);
  for (;;) {
    fn(k);
    int i = d - 1;
    while (i >= 0 && k[i] == R) k[i--] = -R;
    if (i < 0) return;
    ++k[i];
  }
}

double euclid(const Label& k) {
  double s = 0.0;
  for (int v : k) s += static_cast<double>(v) * v;
  return std::sqrt(s);
}

int chebyshevNorm(const Label& k) {
  int m = 0;
  for (int v : k) m = std::max(m, std::abs(v));
  return m;
}

Vec alphaCenter(const Label& k, double alpha0) {
  double n = euclid(k);
  Vec c(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) c(i) = std::pow(n, alpha0) * k[i];
  return c;
}

Covering buildAlpha(double alpha, int d, double r, int R) {
  double alpha0 = alpha / (1.0 - alpha);
  std::vector<CoveringSet> sets;
  forEachLattice(d, R, [&](const Label& k) {
    if (chebyshevNorm(k) == 0) return;
    double scale = r * std::pow(euclid(k), alpha0);
    sets.push_back({k, AffineMap::scaling(scale, alphaCenter(k, alpha0)), 0});
  });
  Truncation t;
  t.family = "alpha";
  t.params = {{"alpha", alpha}, {"r", r}, {"R", R}};
  t.truncated = true;
  ClaimRegion claim;
  claim.maxRadius = 0.95 * std::pow(static_cast<double>(R), 1.0 + alpha0);
  t.claim = claim;
  return Covering(d, {BaseSet::ball(Vec::Zero(d), 1.0)}, std::move(sets), Region::whole(), OracleId::Alpha,
                  std::move(t));
}

SamplingSpec alphaVerificationGrid(double alpha, int d) {
  SamplingSpec s;
  double rho = d == 1 ? 50.0 : 20.0;
  s.lo = Vec::Constant(d, -rho);
  s.hi = Vec::Constant(d, rho);
  s.perAxis = d == 1 ? 4001 : (d == 2 ? 201 : 41);
  s.maxRadius = rho;
  (void)alpha;
  return s;
}

int alphaTruncationFor(double alpha, double rho) {
  double alpha0 = alpha / (1.0 - alpha);
  return static_cast<int>(std::ceil(std::pow(rho, 1.0 / (1.0 + alpha0)))) + 3;
}

BaseSet trapezoid(double u0, double u1, double w) {
  Mat A(4, 2);
  Vec c(4);
  A << -1.0, 0.0,  //
      1.0, 0.0,    //
      -w, 1.0,     //
      -w, -1.0;
  c << -u0, u1, 0.0, 0.0;
  return BaseSet::polytope(A, c);
}

struct ShearletGeometry {
  double u0, u1, w;
};

ShearletGeometry resolveQ(const ShearletParams& p) {
  ShearletGeometry g{p.q.u0 > 0 ? p.q.u0 : std::pow(2.0, -0.6), p.q.u1 > 0 ? p.q.u1 : 2.0 * std::pow(2.0, 0.6),
                     p.q.w > 0 ? p.q.w : 1.1 * p.delta / 2.0};
  if (!(g.u0 < g.u1)) throw ArgumentError("shearlet base set needs u0 < u1");
  return g;
}

ClaimRegion shearletClaim(const ShearletParams& p, const ShearletGeometry& g) {
  double xlo = 1.02 * g.u0 * std::ldexp(1.0, -p.jMax);
  double xhi = g.u1 * std::ldexp(1.0, -p.jMin) / 1.02;
  if (!(xlo < xhi)) throw ConstructionError("shearlet truncation leaves no frequency band");
  double Y = std::numeric_limits<double>::infinity();
  const int steps = 4000;
  for (int s = 0; s <= steps; ++s) {
    double x = xlo * std::pow(xhi / xlo, static_cast<double>(s) / steps);
    double best = -1.0;
    for (int j = p.jMin; j <= p.jMax; ++j) {
      double a = std::ldexp(1.0, j);
      if (x * a > g.u0 && x * a < g.u1) best = std::max(best, x * std::pow(a, 1.0 - p.c) * (p.delta * p.kMax + g.w));
    }
    if (best < 0.0) throw ConstructionError("shearlet scales leave a gap at |ξ₁| = " + std::to_string(x));
    Y = std::min(Y, best);
  }
  Y *= 0.98;
  ClaimRegion claim;
  claim.lo = Vec(2);
  claim.hi = Vec(2);
  claim.lo << -xhi, -Y;
  claim.hi << xhi, Y;
  claim.blindMargin = xlo;
  return claim;
}

Covering buildShearlet(const ShearletParams& p, const ShearletGeometry& g) {
  ShearletGroup group(p.c);
  std::vector<CoveringSet> sets;
  for (int j = p.jMin; j <= p.jMax; ++j)
    for (int k = -p.kMax; k <= p.kMax; ++k)
      for (int eps : {-1, 1}) {
        GroupElement h = group.sample(j, k, eps, p.delta);
        Mat hinvT = group.matrix(group.inv(h)).transpose();
        sets.push_back({{j, k, eps}, AffineMap(hinvT, Vec::Zero(2)), 0});
      }
  Truncation t;
  t.family = "shearlet";
  t.params = {{"c", p.c}, {"delta", p.delta}, {"jMin", p.jMin}, {"jMax", p.jMax}, {"kMax", p.kMax},
              {"u0", g.u0}, {"u1", g.u1}, {"w", g.w}};
  t.truncated = true;
  t.claim = shearletClaim(p, g);
  return Covering(2, {trapezoid(g.u0, g.u1, g.w)}, std::move(sets), Region::shearletOrbit(), OracleId::Shearlet,
                  std::move(t));
}

}  // namespace

Covering makeUniform(int d, int truncation) {
  if (d < 1) throw ArgumentError("dimension must be positive");
  if (truncation < 0) throw ArgumentError("truncation must be nonnegative");
  std::vector<CoveringSet> sets;
  forEachLattice(d, truncation, [&](const Label& k) {
    Vec b(d);
    for (int i = 0; i < d; ++i) b(i) = k[i];
    sets.push_back({k, AffineMap(Mat::Identity(d, d), b), 0});
  });
  Truncation t;
  t.family = "uniform";
  t.params = {{"R", truncation}};
  t.truncated = true;
  ClaimRegion claim;
  claim.lo = Vec::Constant(d, -truncation);
  claim.hi = Vec::Constant(d, truncation);
  t.claim = claim;
  return Covering(d, {BaseSet::box(Vec::Constant(d, -1.0), Vec::Constant(d, 1.0))}, std::move(sets),
                  Region::whole(), OracleId::Uniform, std::move(t));
}

Covering makeDyadic(int d, int nMax) {
  if (d < 1) throw ArgumentError("dimension must be positive");
  if (nMax < 1) throw ArgumentError("dyadic covering needs nMax >= 1");
  std::vector<CoveringSet> sets;
  sets.push_back({{0}, AffineMap::identity(d), 0});
  for (int n = 1; n <= nMax; ++n) sets.push_back({{n}, AffineMap::scaling(std::ldexp(1.0, n), Vec::Zero(d)), 1});
  Truncation t;
  t.family = "dyadic";
  t.params = {{"nMax", nMax}};
  t.truncated = true;
  ClaimRegion claim;
  claim.maxRadius = 1.5 * std::ldexp(1.0, nMax);
  t.claim = claim;
  return Covering(d, {BaseSet::ball(Vec::Zero(d), 2.0), BaseSet::radialShell(d, 0.5, 2.0)}, std::move(sets),
                  Region::whole(), OracleId::Dyadic, std::move(t));
}

double minimalAlphaRadius(double alpha, int d) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw ArgumentError(alpha == 1.0 ? "alpha = 1 is the dyadic limit case; use makeDyadic"
                                     : "alpha must lie in [0, 1)");
  }
  SamplingSpec grid = alphaVerificationGrid(alpha, d);
  int R = alphaTruncationFor(alpha, grid.maxRadius * 1.5);
  auto covers = [&](double r) { return verifyCovering(buildAlpha(alpha, d, r, R), grid).coverageFraction >= 1.0; };
  double hi = 0.25;
  while (!covers(hi)) {
    hi *= 2.0;
    if (hi > 1e3) throw ConstructionError("no alpha radius covers the verification grid");
  }
  double lo = hi / 2.0;
  if (covers(lo)) lo = 0.0;
  for (int it = 0; it < 40; ++it) {
    double mid = 0.5 * (lo + hi);
    if (covers(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

Covering makeAlpha(const AlphaCoveringParams& params) {
  if (params.alpha == 1.0) throw ArgumentError("alpha = 1 is the dyadic limit case; use makeDyadic");
  if (!(params.alpha >= 0.0 && params.alpha < 1.0)) throw ArgumentError("alpha must lie in [0, 1)");
  if (params.d < 1) throw ArgumentError("dimension must be positive");
  if (params.truncationRadius < 1) throw ArgumentError("alpha truncation must be >= 1");
  double r = params.r > 0.0 ? params.r : 1.1 * minimalAlphaRadius(params.alpha, params.d);
  return buildAlpha(params.alpha, params.d, r, params.truncationRadius);
}

Covering makeShearletInduced(const ShearletParams& params) {
  if (!(params.c > 0.0 && params.c <= 1.0)) throw ArgumentError("anisotropy c must lie in (0, 1]");
  if (!(params.delta > 0.0)) throw ArgumentError("shear spacing δ must be positive");
  if (params.jMin > params.jMax || params.kMax < 0) throw ArgumentError("empty shearlet index range");
  ShearletGeometry g = resolveQ(params);
  Covering cov = buildShearlet(params, g);
  if (!params.q.autoWiden) return cov;
  for (int attempt = 0; attempt < 12; ++attempt) {
    SamplingSpec spec = claimSampling(cov, 161);
    if (verifyCovering(cov, spec).coverageFraction >= 1.0) return cov;
    g.w *= 1.1;
    g.u1 *= std::pow(2.0, 0.1);
    cov = buildShearlet(params, g);
  }
  throw ConstructionError("shearlet base set could not be widened to cover the truncated orbit");
}

ShearletParams shearletParamsOf(const Covering& cov) {
  if (cov.truncation().family != "shearlet") throw ArgumentError("covering is not shearlet-induced");
  const auto& p = cov.truncation().params;
  ShearletParams s;
  s.c = p.at("c").get<double>();
  s.delta = p.at("delta").get<double>();
  s.jMin = p.at("jMin").get<int>();
  s.jMax = p.at("jMax").get<int>();
  s.kMax = p.at("kMax").get<int>();
  s.q.u0 = p.at("u0").get<double>();
  s.q.u1 = p.at("u1").get<double>();
  s.q.w = p.at("w").get<double>();
  s.q.autoWiden = false;
  return s;
}

GroupElement shearletElement(const Covering& cov, const Label& label) {
  ShearletParams p = shearletParamsOf(cov);
  if (label.size() != 3) throw ArgumentError("shearlet labels are (j, k, ε)");
  return ShearletGroup(p.c).sample(label[0], label[1], label[2], p.delta);
}

SamplingSpec claimSampling(const Covering& cov, int perAxis, double blindMargin) {
  const auto& claim = cov.truncation().claim;
  if (!claim) throw ArgumentError("covering has no claim region");
  SamplingSpec s;
  int d = cov.dim();
  if (claim->lo.size()) {
    s.lo = claim->lo;
    s.hi = claim->hi;
  } else {
    s.lo = Vec::Constant(d, -claim->maxRadius);
    s.hi = Vec::Constant(d, claim->maxRadius);
  }
  s.perAxis = perAxis;
  s.maxRadius = claim->maxRadius;
  s.blindMargin = std::max(claim->blindMargin, blindMargin);
  return s;
}

std::optional<bool> zooOracle(const Covering& cov, std::size_t i, std::size_t j) {
  const Label& a = cov.label(i);
  const Label& b = cov.label(j);
  const auto& p = cov.truncation().params;
  switch (cov.oracle()) {
    case OracleId::None:
      return std::nullopt;
    case OracleId::Uniform: {
      int m = 0;
      for (std::size_t t = 0; t < a.size(); ++t) m = std::max(m, std::abs(a[t] - b[t]));
      return m <= 1;
    }
    case OracleId::Dyadic:
      return std::abs(a[0] - b[0]) <= 1;
    case OracleId::Alpha: {
      double alpha = p.at("alpha").get<double>();
      double r = p.at("r").get<double>();
      double alpha0 = alpha / (1.0 - alpha);
      double ra = r * std::pow(euclid(a), alpha0);
      double rb = r * std::pow(euclid(b), alpha0);
      return (alphaCenter(a, alpha0) - alphaCenter(b, alpha0)).norm() < ra + rb;
    }
    case OracleId::Shearlet: {
      ShearletGroup group(p.at("c").get<double>());
      double delta = p.at("delta").get<double>();
      Mat A(4, 2);
      Vec c(4);
      double u0 = p.at("u0").get<double>(), u1 = p.at("u1").get<double>(), w = p.at("w").get<double>();
      A << -1.0, 0.0, 1.0, 0.0, -w, 1.0, -w, -1.0;
      c << -u0, u1, 0.0, 0.0;
      Mat ha = group.matrix(group.sample(a[0], a[1], a[2], delta));
      Mat hb = group.matrix(group.sample(b[0], b[1], b[2], delta));
      if (a[2] != b[2]) return false;
      double depth = chebyshevDepth(A * ha.transpose(), c, A * hb.transpose(), c);
      return depth > 0.0;
    }
  }
  return std::nullopt;
}

double zooLabelRadius(const Covering& cov, const Label& label) {
  const std::string& f = cov.truncation().family;
  if (f == "shearlet") {
    const auto& p = cov.truncation().params;
    double jc = 0.5 * (p.at("jMin").get<int>() + p.at("jMax").get<int>());
    double jh = std::max(1.0, 0.5 * (p.at("jMax").get<int>() - p.at("jMin").get<int>()));
    double kh = std::max(1, p.at("kMax").get<int>());
    return std::max(std::abs(label[0] - jc) / jh, std::abs(label[1]) / kh);
  }
  if (f == "dyadic") return label.empty() ? 0.0 : label[0];
  return chebyshevNorm(label);
}

double WeightFamily::at(const Covering& cov, std::size_t i) const {
  if (i >= values.size() || labels[i] != cov.label(i)) {
    throw ArgumentError("weight has no value for label " + labelToString(cov.label(i)));
  }
  return values[i];
}

WeightFamily makeWeight(const nlohmann::json& spec, const Covering& cov) {
  WeightFamily w;
  w.generator = spec;
  std::size_t n = cov.size();
  w.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) w.labels.push_back(cov.label(i));
  std::map<Label, double> table;
  if (spec.contains("values"))
    for (const auto& rec : spec["values"]) table[rec.at("label").get<Label>()] = rec.at("value").get<double>();
  if (!spec.contains("values") || spec.contains("generator")) {
    std::string gen = spec.value("generator", std::string("constant"));
    for (std::size_t i = 0; i < n; ++i) {
      const Label& k = cov.label(i);
      double v = 0.0;
      if (gen == "constant") {
        v = spec.value("value", 1.0);
      } else if (gen == "alphaPower") {
        if (cov.truncation().family == "shearlet" || cov.truncation().family == "dyadic")
          throw ArgumentError("alphaPower needs lattice labels k");
        v = std::pow(1.0 + euclid(k), spec.at("gamma").get<double>());
      } else if (gen == "dyadicPower") {
        if (cov.truncation().family != "dyadic") throw ArgumentError("dyadicPower needs dyadic labels n");
        v = std::pow(2.0, k[0] * spec.at("s").get<double>());
      } else if (gen == "coorbit") {
        if (cov.truncation().family != "shearlet") throw ArgumentError("coorbit weights need shearlet labels");
        ShearletGroup group(cov.truncation().params.at("c").get<double>());
        GroupElement h = shearletElement(cov, k);
        Exponent q = spec.contains("q") ? (spec["q"].is_string() ? parseExponent(spec["q"].get<std::string>())
                                                                : Exponent(spec["q"].get<double>()))
                                        : Exponent(2.0);
        double det = group.det(h);
        double m = std::pow(group.inverseNorm(h), spec.value("alpha", 0.0)) * std::pow(det, spec.value("beta", 0.0));
        v = std::pow(det, 0.5 - q.reciprocal()) * m;
      } else if (gen == "determinant") {
        v = std::pow(cov.set(i).map.absDet(), spec.value("power", 1.0));
      } else {
        throw ArgumentError("unknown weight generator '" + gen + "'");
      }
      w.values[i] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto it = table.find(cov.label(i));
    if (it != table.end())
      w.values[i] = it->second;
    else if (!spec.contains("generator") && spec.contains("values"))
      throw ArgumentError("weight table misses label " + labelToString(cov.label(i)));
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!(w.values[i] > 0.0) || !std::isfinite(w.values[i]))
      throw ArgumentError("weight must be positive and finite at " + labelToString(cov.label(i)));
  return w;
}

nlohmann::json toJson(const WeightFamily& w) {
  nlohmann::json vals = nlohmann::json::array();
  for (std::size_t i = 0; i < w.values.size(); ++i) vals.push_back({{"label", w.labels[i]}, {"value", w.values[i]}});
  nlohmann::json g = w.generator;
  if (g.is_object()) g.erase("values");
  return {{"generator", g}, {"values", vals}};
}

}  // namespace harmcover
