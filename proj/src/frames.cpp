#include "harmcover/frames.hpp"

#include <cmath>
#include <numbers>

#include "harmcover/errors.hpp"
#include "harmcover/parallel.hpp"

namespace harmcover {

namespace {

double rawBump(const TightFrame& fr, std::size_t j, const Vec& xi) {
  const Covering& cov = *fr.covering;
  if (!cov.region().contains(xi)) return 0.0;
  double g = cov.baseOf(j).gauge(cov.set(j).map.pullback(xi));
  return transition(fr.profile, (g - fr.shrink) / (1.0 - fr.shrink));
}

std::size_t power(std::size_t base, int d) {
  std::size_t r = 1;
  for (int a = 0; a < d; ++a) r *= base;
  return r;
}

/// Per-axis phase tables e^{−iπ n y_a / a} for n ∈ [−nMax, nMax].
std::vector<Complex> phases(double y, double a, int nMax) {
  std::vector<Complex> out(2 * nMax + 1);
  Complex step = std::polar(1.0, -std::numbers::pi * y / a);
  Complex cur = std::polar(1.0, std::numbers::pi * nMax * y / a);
  for (auto& v : out) {
    v = cur;
    cur *= step;
  }
  return out;
}

bool insideQa(const Vec& y, double a) {
  for (int k = 0; k < y.size(); ++k)
    if (y(k) < -a || y(k) >= a) return false;
  return true;
}

double normalization(const TightFrame& fr, std::size_t i) {
  int d = fr.grid.d;
  return std::pow(2.0 * fr.a, -0.5 * d) / std::sqrt(fr.covering->set(i).map.absDet());
}

}  // namespace

std::size_t TightFrame::atomsPerSet() const { return power(static_cast<std::size_t>(2 * nMax + 1), grid.d); }

std::vector<int> TightFrame::modulation(std::size_t flat) const {
  std::vector<int> n(grid.d);
  std::size_t side = 2 * nMax + 1;
  for (int a = grid.d - 1; a >= 0; --a) {
    n[a] = static_cast<int>(flat % side) - nMax;
    flat /= side;
  }
  return n;
}

std::size_t TightFrame::modulationIndex(const std::vector<int>& n) const {
  if (static_cast<int>(n.size()) != grid.d) throw ArgumentError("modulation index has the wrong dimension");
  std::size_t f = 0;
  for (int v : n) {
    if (std::abs(v) > nMax) throw IndexError("modulation index exceeds nMax = " + std::to_string(nMax));
    f = f * (2 * nMax + 1) + static_cast<std::size_t>(v + nMax);
  }
  return f;
}

Complex TightFrame::exponential(std::size_t i, const std::vector<int>& n, const Vec& xi) const {
  Vec y = covering->set(i).map.pullback(xi);
  if (!insideQa(y, a)) return 0.0;
  double ph = 0.0;
  for (int k = 0; k < grid.d; ++k) ph += n[k] * y(k);
  return normalization(*this, i) * std::polar(1.0, std::numbers::pi * ph / a);
}

GridFunction TightFrame::atom(std::size_t i, const std::vector<int>& n) const {
  if (i >= theta.size()) throw IndexError("frame set index out of range");
  GridFunction h = GridFunction::zeros(grid, Domain::Frequency);
  for (const auto& [k, t] : theta[i]) h.samples[k] = t * exponential(i, n, grid.frequency(k));
  return toSpace(h);
}

double TightFrame::thetaAt(std::size_t i, const Vec& xi) const {
  double own = rawBump(*this, i, xi);
  if (own == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t j : covering->containing(xi)) {
    double v = rawBump(*this, j, xi);
    s += v * v;
  }
  return own / std::sqrt(s);
}

TightFrame buildTightFrame(const Covering& cov, const GridSpec& grid, const FrameParams& params) {
  if (cov.bases().size() != 1) {
    throw PreconditionError("tight frame needs a structured covering (one base set), got " +
                            std::to_string(cov.bases().size()) + " base sets");
  }
  if (params.nMax < 1) throw ArgumentError("nMax must be at least 1");
  TightFrame fr;
  fr.covering = &cov;
  fr.grid = grid;
  fr.nMax = params.nMax;
  fr.shrink = params.shrink;
  fr.profile = params.profile;
  AxisBox bb = cov.bases()[0].boundingBox();
  double need = std::max(bb.lo.cwiseAbs().maxCoeff(), bb.hi.cwiseAbs().maxCoeff());
  if (params.a > 0.0) {
    if (params.a < need) throw ArgumentError("Q_a must contain the base set (a >= " + std::to_string(need) + ")");
    fr.a = params.a;
  } else {
    fr.a = std::ceil(2.0 * 1.05 * need * grid.L) / (2.0 * grid.L);
  }
  BAPUFamily b = buildBAPU(cov, grid, params.shrink, params.profile);
  std::vector<double> sq(grid.total(), 0.0);
  for (const auto& list : b.phi)
    for (const auto& [k, v] : list) sq[k] += v * v;
  fr.theta = std::move(b.phi);
  parallelFor(fr.theta.size(), [&](std::size_t i) {
    for (auto& [k, v] : fr.theta[i]) v /= std::sqrt(sq[k]);
  });
  fr.covered = std::move(b.covered);
  const auto& nb = cov.neighbors();
  std::size_t top = 0;
  for (const auto& l : nb) top = std::max(top, l.size());
  fr.interior.resize(cov.size());
  for (std::size_t i = 0; i < cov.size(); ++i) fr.interior[i] = nb[i].size() == top;
  return fr;
}

double quadraticPartitionDefect(const TightFrame& fr) {
  std::vector<double> sum(fr.grid.total(), 0.0);
  for (const auto& list : fr.theta)
    for (const auto& [k, v] : list) sum[k] += v * v;
  const auto& claim = fr.covering->truncation().claim;
  double worst = 0.0;
  for (std::size_t k = 0; k < sum.size(); ++k) {
    if (!fr.covered[k]) continue;
    if (claim && !claim->contains(fr.grid.frequency(k))) continue;
    worst = std::max(worst, std::abs(sum[k] - 1.0));
  }
  return worst;
}

double exponentialGramDefect(const TightFrame& fr, std::size_t i, int range) {
  if (i >= fr.covering->size()) throw IndexError("frame set index out of range");
  if (range < 0 || range > fr.nMax) throw ArgumentError("range must lie in [0, nMax]");
  const GridSpec& g = fr.grid;
  const AffineMap& map = fr.covering->set(i).map;
  std::vector<Vec> pts;
  for (std::size_t k = 0; k < g.total(); ++k) {
    Vec xi = g.frequency(k);
    if (insideQa(map.pullback(xi), fr.a)) pts.push_back(xi);
  }
  double w = std::pow(g.L, -g.d);
  TightFrame sub = fr;
  sub.nMax = range;
  std::size_t m = sub.atomsPerSet();
  std::vector<std::vector<Complex>> vals(m);
  for (std::size_t n = 0; n < m; ++n) {
    auto nn = sub.modulation(n);
    vals[n].reserve(pts.size());
    for (const auto& xi : pts) vals[n].push_back(fr.exponential(i, nn, xi));
  }
  double worst = 0.0;
  for (std::size_t n = 0; n < m; ++n)
    for (std::size_t n2 = n; n2 < m; ++n2) {
      Complex s = 0.0;
      for (std::size_t t = 0; t < pts.size(); ++t) s += vals[n][t] * std::conj(vals[n2][t]);
      worst = std::max(worst, std::abs(w * s - (n == n2 ? 1.0 : 0.0)));
    }
  return worst;
}

double thetaDerivativeBound(const TightFrame& fr, int order, int perAxis) {
  if (order < 0 || order > 2) throw ArgumentError("derivative order must lie in [0, 2]");
  const Covering& cov = *fr.covering;
  int d = cov.dim();
  AxisBox bb = cov.bases()[0].boundingBox();
  double h = 1e-3 * fr.a;
  std::vector<double> best(cov.size(), 0.0);
  parallelFor(cov.size(), [&](std::size_t i) {
    if (!fr.interior[i]) return;
    const AffineMap& map = cov.set(i).map;
    auto f = [&](const Vec& y) { return fr.thetaAt(i, map.apply(y)); };
    std::size_t total = power(static_cast<std::size_t>(perAxis), d);
    for (std::size_t t = 0; t < total; ++t) {
      Vec y(d);
      std::size_t r = t;
      for (int a = 0; a < d; ++a) {
        y(a) = bb.lo(a) + (bb.hi(a) - bb.lo(a)) * ((r % perAxis) + 0.5) / perAxis;
        r /= perAxis;
      }
      double v = std::abs(f(y));
      if (order >= 1)
        for (int a = 0; a < d; ++a) {
          Vec e = Vec::Zero(d);
          e(a) = h;
          v = std::max(v, std::abs(f(y + e) - f(y - e)) / (2 * h));
          if (order >= 2) {
            v = std::max(v, std::abs(f(y + e) - 2 * f(y) + f(y - e)) / (h * h));
            for (int b2 = a + 1; b2 < d; ++b2) {
              Vec e2 = Vec::Zero(d);
              e2(b2) = h;
              v = std::max(v, std::abs(f(y + e + e2) - f(y + e - e2) - f(y - e + e2) + f(y - e - e2)) / (4 * h * h));
            }
          }
        }
      best[i] = std::max(best[i], v);
    }
  });
  double m = 0.0;
  for (double v : best) m = std::max(m, v);
  return m;
}

FrameCoefficients frameAnalyze(const GridFunction& f, const TightFrame& fr, std::optional<std::vector<std::size_t>> subset,
                               Exponent p) {
  const GridSpec& g = fr.grid;
  if (f.grid.d != g.d || f.grid.N != g.N || f.grid.L != g.L) throw ArgumentError("signal grid differs from the frame grid");
  GridFunction fhat = f.domain == Domain::Frequency ? f : toFrequency(f);
  FrameCoefficients c;
  c.d = g.d;
  c.nMax = fr.nMax;
  c.p = p;
  if (subset) {
    for (std::size_t i : *subset)
      if (i >= fr.theta.size()) throw IndexError("frame set index " + std::to_string(i) + " out of range");
    c.sets = *subset;
  } else {
    for (std::size_t i = 0; i < fr.theta.size(); ++i) c.sets.push_back(i);
  }
  c.values.assign(c.sets.size(), std::vector<Complex>(fr.atomsPerSet(), 0.0));
  double w = std::pow(g.L, -g.d);
  parallelFor(c.sets.size(), [&](std::size_t s) {
    std::size_t i = c.sets[s];
    const AffineMap& map = fr.covering->set(i).map;
    double scale = w * normalization(fr, i) * std::pow(map.absDet(), 0.5 - p.reciprocal());
    auto& out = c.values[s];
    std::size_t side = 2 * fr.nMax + 1;
    for (const auto& [k, t] : fr.theta[i]) {
      Complex v = fhat.samples[k] * t;
      if (v == Complex(0.0)) continue;
      Vec y = map.pullback(g.frequency(k));
      if (!insideQa(y, fr.a)) continue;
      std::vector<std::vector<Complex>> ph;
      for (int a = 0; a < g.d; ++a) ph.push_back(phases(y(a), fr.a, fr.nMax));
      if (g.d == 1) {
        for (std::size_t n = 0; n < side; ++n) out[n] += v * ph[0][n];
      } else {
        for (std::size_t n = 0; n < out.size(); ++n) {
          Complex e = v;
          std::size_t r = n;
          for (int a = g.d - 1; a >= 0; --a) {
            e *= ph[a][r % side];
            r /= side;
          }
          out[n] += e;
        }
      }
    }
    for (auto& v : out) v *= scale;
  });
  return c;
}

GridFunction frameSynthesize(const FrameCoefficients& c, const TightFrame& fr) {
  const GridSpec& g = fr.grid;
  if (c.d != g.d || c.nMax != fr.nMax) throw ArgumentError("coefficients do not match the frame");
  std::vector<std::vector<std::pair<std::size_t, Complex>>> parts(c.sets.size());
  parallelFor(c.sets.size(), [&](std::size_t s) {
    std::size_t i = c.sets[s];
    const AffineMap& map = fr.covering->set(i).map;
    double scale = normalization(fr, i) / std::pow(map.absDet(), 0.5 - c.p.reciprocal());
    std::size_t side = 2 * fr.nMax + 1;
    for (const auto& [k, t] : fr.theta[i]) {
      Vec y = map.pullback(g.frequency(k));
      if (!insideQa(y, fr.a)) continue;
      std::vector<std::vector<Complex>> ph;
      for (int a = 0; a < g.d; ++a) ph.push_back(phases(y(a), fr.a, fr.nMax));
      Complex acc = 0.0;
      for (std::size_t n = 0; n < c.values[s].size(); ++n) {
        Complex e = c.values[s][n];
        std::size_t r = n;
        for (int a = g.d - 1; a >= 0; --a) {
          e *= std::conj(ph[a][r % side]);
          r /= side;
        }
        acc += e;
      }
      parts[s].emplace_back(k, scale * t * acc);
    }
  });
  GridFunction out = GridFunction::zeros(g, Domain::Frequency);
  for (const auto& list : parts)
    for (const auto& [k, v] : list) out.samples[k] += v;
  return toSpace(out);
}

FrameCheck parsevalAndReconstruct(const GridFunction& f, const TightFrame& fr) {
  const GridSpec& g = fr.grid;
  GridFunction fhat = f.domain == Domain::Frequency ? f : toFrequency(f);
  std::vector<char> trusted(g.total(), 0);
  for (std::size_t i = 0; i < fr.theta.size(); ++i) {
    if (!fr.interior[i]) continue;
    for (const auto& [k, t] : fr.theta[i]) trusted[k] = 1;
  }
  double total = 0.0, inside = 0.0;
  for (std::size_t k = 0; k < g.total(); ++k) {
    double e = std::norm(fhat.samples[k]);
    total += e;
    if (trusted[k]) inside += e;
  }
  if (total == 0.0) throw PreconditionError("signal is zero");
  FrameCheck r;
  r.nMax = fr.nMax;
  r.inBandEnergy = inside / total;
  if (r.inBandEnergy < 0.9999) {
    throw PreconditionError("only " + std::to_string(100.0 * r.inBandEnergy) +
                            "% of the signal energy lies inside the interior of the truncated covering");
  }
  double norm2 = total * std::pow(g.L, -g.d);
  auto c = frameAnalyze(fhat, fr);
  double energy = 0.0, tail = 0.0;
  for (const auto& vals : c.values)
    for (std::size_t n = 0; n < vals.size(); ++n) {
      double e = std::norm(vals[n]);
      energy += e;
      auto nn = fr.modulation(n);
      int m = 0;
      for (int v : nn) m = std::max(m, std::abs(v));
      if (2 * m > fr.nMax) tail += e;
    }
  r.energyRatio = energy / norm2;
  r.parsevalDefect = std::abs(1.0 - r.energyRatio);
  r.tailEstimate = tail / norm2;
  GridFunction rec = toFrequency(frameSynthesize(c, fr));
  double num = 0.0;
  for (std::size_t k = 0; k < g.total(); ++k) num += std::norm(rec.samples[k] - fhat.samples[k]);
  r.reconstructionError = std::sqrt(num / total);
  return r;
}

nlohmann::json toJson(const FrameCoefficients& c, const Covering& cov) {
  nlohmann::json recs = nlohmann::json::array();
  TightFrame shape;
  shape.grid.d = c.d;
  shape.nMax = c.nMax;
  for (std::size_t s = 0; s < c.sets.size(); ++s)
    for (std::size_t n = 0; n < c.values[s].size(); ++n) {
      Complex v = c.values[s][n];
      if (v == Complex(0.0)) continue;
      recs.push_back({{"i", cov.label(c.sets[s])}, {"n", shape.modulation(n)}, {"re", v.real()}, {"im", v.imag()}});
    }
  return {{"nMax", c.nMax}, {"p", c.p.toString()}, {"coefficients", recs}};
}

nlohmann::json toJson(const FrameCheck& r) {
  return {{"nMax", r.nMax},
          {"parsevalDefect", r.parsevalDefect},
          {"reconstructionError", r.reconstructionError},
          {"tailEstimate", r.tailEstimate},
          {"energyRatio", r.energyRatio},
          {"inBandEnergy", r.inBandEnergy}};
}

}  // namespace harmcover
