#include "harmcover/wavelet.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "harmcover/errors.hpp"
#include "harmcover/parallel.hpp"
#include "harmcover/zoo.hpp"

namespace harmcover {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGaussSpan = 4.5;
constexpr int kTrapezoidNodes = 512;

double haarCellMass(double c, double aLo, double aHi, double ds) {
  if (std::abs(c - 1.0) < 1e-14) return ds * std::log(aHi / aLo);
  return ds * (std::pow(aHi, c - 1.0) - std::pow(aLo, c - 1.0)) / (c - 1.0);
}

ShearScale toShearScale(double c, const GroupElement& h) { return {h.a, h.b / std::pow(h.a, c)}; }

/// Profile value on a single axis with center m and half width r.
double profile1(WaveletWindow::Kind kind, double x, double m, double r) {
  if (kind == WaveletWindow::Kind::Gaussian) {
    double sigma = r / kGaussSpan;
    double t = (x - m) / sigma;
    return std::exp(-kPi * t * t);
  }
  return bump((x - m) / r);
}

/// ∫ profile1(η) e^{2πi z η} dη.
Complex inverse1(WaveletWindow::Kind kind, double z, double m, double r) {
  if (kind == WaveletWindow::Kind::Gaussian) {
    double sigma = r / kGaussSpan;
    return sigma * std::exp(-kPi * sigma * sigma * z * z) * std::polar(1.0, 2.0 * kPi * m * z);
  }
  static const std::vector<double> nodes = [] {
    std::vector<double> v(kTrapezoidNodes);
    for (int k = 1; k < kTrapezoidNodes; ++k) v[k] = bump(-1.0 + 2.0 * k / kTrapezoidNodes);
    return v;
  }();
  double h = 2.0 * r / kTrapezoidNodes;
  double lo = m - r;
  Complex step = std::polar(1.0, 2.0 * kPi * h * z);
  Complex e = std::polar(1.0, 2.0 * kPi * lo * z);
  Complex acc = 0.0;
  for (int k = 1; k < kTrapezoidNodes; ++k) {
    e *= step;
    acc += nodes[k] * e;
  }
  return h * acc;
}

double squaredIntegral1(WaveletWindow::Kind kind, double r) {
  if (kind == WaveletWindow::Kind::Gaussian) return r / kGaussSpan / std::sqrt(2.0);
  boost::math::quadrature::tanh_sinh<double> ts;
  return r * ts.integrate([](double t) { return bump(t) * bump(t); }, -1.0, 1.0);
}

void checkGrids(const GridSpec& g) {
  if (g.d != 2) throw ArgumentError("wavelet transforms act on two-dimensional grids");
}

/// ψ̂(hᵀξ) with hᵀξ = ε(aξ₁, bξ₁ + a^c ξ₂).
double dilatedHat(const WaveletWindow& w, const GroupElement& h, double ac, double x1, double x2) {
  return w.hat(h.eps * h.a * x1, h.eps * (h.b * x1 + ac * x2));
}

/// Frequency coordinates of a flat index on a 2-d grid.
std::pair<double, double> freq2(const GridSpec& g, std::size_t k) {
  return {g.signedIndex(static_cast<int>(k / g.N)) / g.L, g.signedIndex(static_cast<int>(k % g.N)) / g.L};
}

void checkResolution(const WaveletWindow& w, const ShearletGroup& group, const GroupElement& h, const GridSpec& g) {
  AxisBox box = w.support();
  double lim = g.nyquist() - 1.0 / g.L;
  Vec lo = Vec::Constant(2, 1e300), hi = Vec::Constant(2, -1e300);
  for (int c1 = 0; c1 < 2; ++c1)
    for (int c2 = 0; c2 < 2; ++c2) {
      Vec eta(2);
      eta << (c1 ? box.hi(0) : box.lo(0)), (c2 ? box.hi(1) : box.lo(1));
      Vec xi = group.dualAction(h, eta);
      lo = lo.cwiseMin(xi);
      hi = hi.cwiseMax(xi);
    }
  if (lo.minCoeff() < -lim || hi.maxCoeff() > lim) {
    throw ResolutionError("window dilated by (a, b) = (" + std::to_string(h.a) + ", " + std::to_string(h.b) +
                          ") reaches beyond the grid band " + std::to_string(lim));
  }
  double w1 = (box.hi(0) - box.lo(0)) / h.a;
  double w2 = (box.hi(1) - box.lo(1)) / std::pow(h.a, group.c());
  if (std::min(w1, w2) < 8.0 / g.L) {
    throw ResolutionError("window dilated by a = " + std::to_string(h.a) +
                          " spans fewer than 8 frequency samples; increase L");
  }
}

std::vector<double> sliceNorms(const GridFunction& fhat, const WaveletWindow& w, const ShearletGroup& group,
                               const std::vector<GroupPoint>& points, Exponent p) {
  const GridSpec& g = fhat.grid;
  std::vector<double> out(points.size());
  for (const auto& pt : points) checkResolution(w, group, pt.h, g);
  parallelFor(points.size(), [&](std::size_t t) {
    const GroupElement& h = points[t].h;
    double ac = std::pow(h.a, group.c());
    double amp = std::sqrt(group.det(h));
    GridFunction d = GridFunction::zeros(g, Domain::Frequency);
    for (std::size_t k = 0; k < g.total(); ++k) {
      if (fhat.samples[k] == Complex(0.0)) continue;
      auto [x1, x2] = freq2(g, k);
      double v = dilatedHat(w, h, ac, x1, x2);
      if (v != 0.0) d.samples[k] = amp * v * fhat.samples[k];
    }
    out[t] = lpNorm(toSpace(d), p);
  });
  return out;
}

double combine(const ShearletGroup& group, const std::vector<GroupPoint>& points, const std::vector<double>& slices,
               Exponent q, const GroupWeight& m) {
  if (q.isInfinite()) {
    double best = 0.0;
    for (std::size_t t = 0; t < points.size(); ++t) best = std::max(best, m(group, points[t].h) * slices[t]);
    return best;
  }
  double acc = 0.0;
  for (std::size_t t = 0; t < points.size(); ++t) {
    double mass = points[t].weight / group.det(points[t].h);
    acc += mass * std::pow(m(group, points[t].h) * slices[t], q.value());
  }
  return std::pow(acc, 1.0 / q.value());
}

}  // namespace

ShearScale composeShearScale(double c, ShearScale g, ShearScale h) {
  return {g.a * h.a, g.s + std::pow(g.a, 1.0 - c) * h.s};
}

ShearScale invertShearScale(double c, ShearScale g) { return {1.0 / g.a, -g.s * std::pow(g.a, c - 1.0)}; }

std::vector<GroupElement> wellSpreadFamily(const ShearletGroup& group, double delta, int jMin, int jMax, int kMax) {
  if (!(delta > 0.0)) throw ArgumentError("shear spacing δ must be positive");
  if (jMin > jMax || kMax < 0) throw ArgumentError("empty well-spread index range");
  std::vector<GroupElement> out;
  for (int j = jMin; j <= jMax; ++j)
    for (int k = -kMax; k <= kMax; ++k)
      for (int eps : {-1, 1}) out.push_back(group.sample(j, k, eps, delta));
  return out;
}

WellSpreadReport validateWellSpread(const ShearletGroup& group, const std::vector<GroupElement>& family, double delta,
                                    double aLo, double aHi, double sMax, int perAxis) {
  if (!(aLo > 0.0 && aLo < aHi && sMax > 0.0 && perAxis > 0)) throw ArgumentError("invalid well-spread sampling box");
  double c = group.c();
  WellSpreadReport r;
  r.familySize = family.size();
  std::vector<ShearScale> coords;
  for (const auto& h : family) coords.push_back(toShearScale(c, h));
  std::size_t hits = 0;
  for (int ia = 0; ia < perAxis; ++ia) {
    double a = aLo * std::pow(aHi / aLo, (ia + 0.5) / perAxis);
    for (int is = 0; is < perAxis; ++is) {
      double s = -sMax + 2.0 * sMax * (is + 0.5) / perAxis;
      int eps = (ia + is) % 2 ? -1 : 1;
      bool found = false;
      for (std::size_t t = 0; t < family.size() && !found; ++t) {
        if (family[t].eps != eps) continue;
        ShearScale k = composeShearScale(c, invertShearScale(c, coords[t]), {a, s});
        found = k.a >= 1.0 && k.a < 2.0 && k.s >= -0.5 * delta && k.s < 0.5 * delta;
      }
      ++r.samples;
      if (found)
        ++hits;
      else if (!r.uncovered)
        r.uncovered = ShearScale{a, s};
    }
  }
  r.coveredFraction = static_cast<double>(hits) / r.samples;
  double top = std::pow(2.0, 0.9);
  for (std::size_t t = 0; t < family.size() && r.separated; ++t)
    for (std::size_t u = t + 1; u < family.size(); ++u) {
      if (family[t].eps != family[u].eps) continue;
      const ShearScale &x = coords[t], &y = coords[u];
      double hx = 0.45 * delta * std::pow(x.a, 1.0 - c), hy = 0.45 * delta * std::pow(y.a, 1.0 - c);
      bool aMeet = x.a <= y.a * top && y.a <= x.a * top;
      bool sMeet = std::abs(x.s - y.s) <= hx + hy;
      if (aMeet && sMeet) {
        r.separated = false;
        r.overlapping = std::make_pair(t, u);
        break;
      }
    }
  return r;
}

void requireWellSpread(const ShearletGroup& group, const std::vector<GroupElement>& family, double delta, double aLo,
                       double aHi, double sMax) {
  auto r = validateWellSpread(group, family, delta, aLo, aHi, sMax);
  if (r.uncovered) {
    throw ConstructionError("well-spread family misses the group point (a, s) = (" + std::to_string(r.uncovered->a) +
                            ", " + std::to_string(r.uncovered->s) + ")");
  }
  if (!r.separated) {
    throw ConstructionError("well-spread family has overlapping K₂ translates at indices " +
                            std::to_string(r.overlapping->first) + " and " + std::to_string(r.overlapping->second));
  }
}

double haarIntegral(const ShearletGroup&, const std::function<double(const GroupElement&)>& F, double tLo, double tHi,
                    double bLo, double bHi, int perAxis) {
  if (!(tLo < tHi && bLo < bHi) || perAxis < 2) throw ArgumentError("invalid Haar quadrature box");
  double dt = (tHi - tLo) / perAxis, db = (bHi - bLo) / perAxis;
  double acc = 0.0;
  for (int i = 0; i <= perAxis; ++i) {
    double t = tLo + i * dt;
    double a = std::exp(t);
    double wt = (i == 0 || i == perAxis) ? 0.5 : 1.0;
    double row = 0.0;
    for (int k = 0; k <= perAxis; ++k) {
      double wb = (k == 0 || k == perAxis) ? 0.5 : 1.0;
      row += wb * F({1, a, bLo + k * db});
    }
    acc += wt * row / a;
  }
  return acc * dt * db;
}

double haarInvarianceDefect(const ShearletGroup& group, const GroupElement& g0, int perAxis) {
  const double t0 = 0.3, rt = 0.8, b0c = 0.2, rb = 1.1;
  auto F = [&](const GroupElement& h) { return bump((std::log(h.a) - t0) / rt) * bump((h.b - b0c) / rb); };
  auto G = [&](const GroupElement& h) { return F(group.mul(g0, h)); };
  double base = haarIntegral(group, F, t0 - rt, t0 + rt, b0c - rb, b0c + rb, perAxis);
  double tLo = t0 - rt - std::log(g0.a), tHi = t0 + rt - std::log(g0.a);
  double c = group.c();
  double s1 = g0.b * std::exp(c * tLo), s2 = g0.b * std::exp(c * tHi);
  double bLo = (b0c - rb - std::max(s1, s2)) / g0.a, bHi = (b0c + rb - std::min(s1, s2)) / g0.a;
  double moved = haarIntegral(group, G, tLo, tHi, bLo, bHi, perAxis);
  return std::abs(moved - base) / std::abs(base);
}

double WaveletWindow::hat(const Vec& eta) const { return hat(eta(0), eta(1)); }

double WaveletWindow::hat(double e1, double e2) const {
  if (std::abs(e1 - center1) >= halfWidth1 || std::abs(e2) >= halfWidth2) return 0.0;
  return profile1(kind, e1, center1, halfWidth1) * profile1(kind, e2, 0.0, halfWidth2);
}

Complex WaveletWindow::space(const Vec& z) const {
  return inverse1(kind, z(0), center1, halfWidth1) * inverse1(kind, z(1), 0.0, halfWidth2);
}

AxisBox WaveletWindow::support() const {
  Vec lo(2), hi(2);
  lo << center1 - halfWidth1, -halfWidth2;
  hi << center1 + halfWidth1, halfWidth2;
  return {lo, hi};
}

double WaveletWindow::normSquared() const { return squaredIntegral1(kind, halfWidth1) * squaredIntegral1(kind, halfWidth2); }

WaveletWindow makeWindow(WaveletWindow::Kind kind, double center1, double halfWidth1, double halfWidth2,
                         double blindMargin) {
  if (!(halfWidth1 > 0.0 && halfWidth2 > 0.0)) throw ArgumentError("window half widths must be positive");
  if (center1 - halfWidth1 < blindMargin) {
    throw PreconditionError("window support reaches |η₁| = " + std::to_string(center1 - halfWidth1) +
                            ", inside the blind-spot margin " + std::to_string(blindMargin));
  }
  return {kind, center1, halfWidth1, halfWidth2};
}

std::string nameOf(WaveletWindow::Kind k) { return k == WaveletWindow::Kind::Gaussian ? "gaussian" : "bump"; }

WaveletWindow::Kind parseWindowKind(const std::string& s) {
  if (s == "bump") return WaveletWindow::Kind::Bump;
  if (s == "gaussian") return WaveletWindow::Kind::Gaussian;
  throw ArgumentError("unknown window kind '" + s + "' (expected bump or gaussian)");
}

std::string nameOf(WaveletMode m) { return m == WaveletMode::Direct ? "direct" : "fourier"; }

WaveletMode parseWaveletMode(const std::string& s) {
  if (s == "fourier") return WaveletMode::Fourier;
  if (s == "direct") return WaveletMode::Direct;
  throw ArgumentError("unknown wavelet mode '" + s + "' (expected fourier or direct)");
}

Complex waveletAt(const GridFunction& f, const WaveletWindow& w, const ShearletGroup& group, const Vec& x,
                  const GroupElement& h, WaveletMode mode) {
  const GridSpec& g = f.grid;
  checkGrids(g);
  if (x.size() != 2) throw ArgumentError("position must be a 2-vector");
  if (mode == WaveletMode::Fourier) {
    checkResolution(w, group, h, g);
    GridFunction fhat = f.domain == Domain::Frequency ? f : toFrequency(f);
    double ac = std::pow(h.a, group.c());
    Complex acc = 0.0;
    for (std::size_t k = 0; k < g.total(); ++k) {
      auto [x1, x2] = freq2(g, k);
      double v = dilatedHat(w, h, ac, x1, x2);
      if (v != 0.0) acc += fhat.samples[k] * v * std::polar(1.0, 2.0 * kPi * (x(0) * x1 + x(1) * x2));
    }
    return std::sqrt(group.det(h)) * acc / (g.L * g.L);
  }
  GridFunction fs = f.domain == Domain::Space ? f : toSpace(f);
  double peak = 0.0;
  for (auto v : fs.samples) peak = std::max(peak, std::abs(v));
  double floor = 1e-15 * peak;
  Mat hinv = group.matrix(group.inv(h));
  // h^{-1} is upper triangular, so the second coordinate depends on y₂ only
  std::vector<Complex> col(g.N);
  for (int n = 0; n < g.N; ++n) {
    double y2 = g.signedIndex(n) * g.spacing() - x(1);
    col[n] = std::conj(inverse1(w.kind, hinv(1, 1) * y2, 0.0, w.halfWidth2));
  }
  std::vector<Complex> rows(g.N, 0.0);
  parallelFor(static_cast<std::size_t>(g.N), [&](std::size_t n1) {
    double y1 = g.signedIndex(static_cast<int>(n1)) * g.spacing() - x(0);
    Complex acc = 0.0;
    for (int n2 = 0; n2 < g.N; ++n2) {
      Complex fv = fs.samples[n1 * g.N + n2];
      if (std::abs(fv) <= floor) continue;
      double y2 = g.signedIndex(n2) * g.spacing() - x(1);
      double z1 = hinv(0, 0) * y1 + hinv(0, 1) * y2;
      acc += fv * std::conj(inverse1(w.kind, z1, w.center1, w.halfWidth1)) * col[n2];
    }
    rows[n1] = acc;
  });
  Complex acc = 0.0;
  for (auto v : rows) acc += v;
  return acc * g.spacing() * g.spacing() / std::sqrt(group.det(h));
}

std::vector<GroupPoint> groupQuadrature(const ShearletGroup& group, double delta, int jMin, int jMax, int kMax,
                                        int perOctave, int perShear) {
  if (perOctave < 1 || perShear < 1) throw ArgumentError("quadrature subdivisions must be positive");
  double c = group.c();
  std::vector<GroupPoint> out;
  for (const auto& h : wellSpreadFamily(group, delta, jMin, jMax, kMax))
    for (int t = 0; t < perOctave; ++t)
      for (int u = 0; u < perShear; ++u) {
        double aLo = std::pow(2.0, static_cast<double>(t) / perOctave);
        double aHi = std::pow(2.0, static_cast<double>(t + 1) / perOctave);
        double ds = delta / perShear;
        double s = -0.5 * delta + (u + 0.5) * ds;
        GroupElement k = group.fromShear(1, std::sqrt(aLo * aHi), s);
        out.push_back({group.mul(h, k), haarCellMass(c, aLo, aHi, ds)});
      }
  return out;
}

WaveletField waveletTransform(const GridFunction& f, const WaveletWindow& w, const ShearletGroup& group,
                              const std::vector<GroupPoint>& points) {
  const GridSpec& g = f.grid;
  checkGrids(g);
  for (const auto& pt : points) checkResolution(w, group, pt.h, g);
  GridFunction fhat = f.domain == Domain::Frequency ? f : toFrequency(f);
  WaveletField W;
  W.grid = g;
  W.c = group.c();
  W.points = points;
  W.values.resize(points.size());
  parallelFor(points.size(), [&](std::size_t t) {
    const GroupElement& h = points[t].h;
    double ac = std::pow(h.a, group.c());
    double amp = std::sqrt(group.det(h));
    GridFunction d = GridFunction::zeros(g, Domain::Frequency);
    for (std::size_t k = 0; k < g.total(); ++k) {
      auto [x1, x2] = freq2(g, k);
      double v = dilatedHat(w, h, ac, x1, x2);
      if (v != 0.0) d.samples[k] = amp * v * fhat.samples[k];
    }
    W.values[t] = toSpace(d).samples;
  });
  return W;
}

double GroupWeight::operator()(const ShearletGroup& group, const GroupElement& h) const {
  double v = scale;
  if (alpha != 0.0) v *= std::pow(group.inverseNorm(h), alpha);
  if (beta != 0.0) v *= std::pow(group.det(h), beta);
  return v;
}

double mixedNorm(const WaveletField& W, Exponent p, Exponent q, const GroupWeight& m) {
  if (W.values.size() != W.points.size()) throw ArgumentError("wavelet field lacks quadrature weights for its samples");
  ShearletGroup group(W.c);
  std::vector<double> slices(W.points.size());
  for (std::size_t t = 0; t < slices.size(); ++t) {
    GridFunction s{W.grid, Domain::Space, W.values[t]};
    slices[t] = lpNorm(s, p);
  }
  return combine(group, W.points, slices, q, m);
}

double groupLpNorm(const WaveletField& W, Exponent p, const GroupWeight& m) {
  if (W.values.size() != W.points.size()) throw ArgumentError("wavelet field lacks quadrature weights for its samples");
  ShearletGroup group(W.c);
  double cell = std::pow(W.grid.spacing(), W.grid.d);
  if (p.isInfinite()) {
    double best = 0.0;
    for (std::size_t t = 0; t < W.points.size(); ++t)
      for (auto v : W.values[t]) best = std::max(best, m(group, W.points[t].h) * std::abs(v));
    return best;
  }
  double acc = 0.0;
  for (std::size_t t = 0; t < W.points.size(); ++t) {
    double wt = W.points[t].weight / group.det(W.points[t].h) * cell;
    double mh = m(group, W.points[t].h);
    for (auto v : W.values[t]) acc += wt * std::pow(mh * std::abs(v), p.value());
  }
  return std::pow(acc, 1.0 / p.value());
}

CoorbitProbeReport coorbitDecompositionProbe(const std::vector<GridFunction>& signals, const Covering& cov,
                                             const CoorbitProbeOptions& o) {
  if (signals.empty()) throw ArgumentError("coorbit probe needs at least one signal");
  ShearletParams sp = shearletParamsOf(cov);
  ShearletGroup group(sp.c);
  const GridSpec& g = signals.front().grid;
  checkGrids(g);
  auto points = groupQuadrature(group, sp.delta, sp.jMin, sp.jMax, sp.kMax, o.perOctave, o.perShear);
  BAPUFamily bapu = buildBAPU(cov, g);
  nlohmann::json wspec{{"generator", "coorbit"}, {"q", o.q.toString()}, {"alpha", o.m.alpha}, {"beta", o.m.beta}};
  WeightFamily u = makeWeight(wspec, cov);
  for (auto& v : u.values) v *= o.m.scale;
  CoorbitProbeReport r;
  for (const auto& f : signals) {
    if (f.grid.d != g.d || f.grid.N != g.N || f.grid.L != g.L) throw ArgumentError("probe signals must share one grid");
    GridFunction fhat = f.domain == Domain::Frequency ? f : toFrequency(f);
    double co = combine(group, points, sliceNorms(fhat, o.window, group, points, o.p), o.q, o.m);
    double de = decompositionNorm(fhat, bapu, o.p, o.q, u);
    if (!(de > 0.0)) throw PreconditionError("signal has no energy on the truncated covering");
    r.coorbitNorms.push_back(co);
    r.decompositionNorms.push_back(de);
    r.ratios.push_back(co / de);
  }
  r.minRatio = *std::min_element(r.ratios.begin(), r.ratios.end());
  r.maxRatio = *std::max_element(r.ratios.begin(), r.ratios.end());
  r.spread = r.maxRatio / r.minRatio;
  return r;
}

nlohmann::json toJson(const WellSpreadReport& r) {
  nlohmann::json j{{"familySize", r.familySize},
                   {"samples", r.samples},
                   {"coveredFraction", r.coveredFraction},
                   {"separated", r.separated}};
  if (r.uncovered) j["uncovered"] = {{"a", r.uncovered->a}, {"s", r.uncovered->s}};
  if (r.overlapping) j["overlapping"] = {r.overlapping->first, r.overlapping->second};
  return j;
}

nlohmann::json toJson(const CoorbitProbeReport& r) {
  return {{"coorbitNorms", r.coorbitNorms},
          {"decompositionNorms", r.decompositionNorms},
          {"ratios", r.ratios},
          {"minRatio", r.minRatio},
          {"maxRatio", r.maxRatio},
          {"spread", r.spread}};
}

nlohmann::json toJson(const GroupElement& h) { return {{"eps", h.eps}, {"a", h.a}, {"b", h.b}}; }

}  // namespace harmcover
