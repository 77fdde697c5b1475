#include "harmcover/phi.hpp"

#include <cmath>
#include <numbers>

#include "harmcover/embedding.hpp"
#include "harmcover/errors.hpp"
#include "harmcover/parallel.hpp"

namespace harmcover {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool isInteger(double x) { return std::abs(x - std::round(x)) < 1e-9; }

/// Grid stride between lattice points at scale ν, or 0 if not aligned.
int latticeStride(const GridSpec& g, int nu) {
  double s = std::ldexp(g.N / g.L, -nu);
  return s >= 1.0 && isInteger(s) ? static_cast<int>(std::lround(s)) : 0;
}

void checkScale(const GridSpec& g, int nuMax) {
  if (nuMax < 0) throw ArgumentError("nuMax must be nonnegative");
  int m = maxScale(g);
  if (nuMax > m) {
    throw ResolutionError("nuMax = " + std::to_string(nuMax) + " exceeds the grid limit " + std::to_string(m) +
                          " (band 2^{nuMax+1} must stay below half the Nyquist frequency and cubes must be grid aligned)");
  }
}

GridFunction sampleWindow(const GridSpec& g, double (*fn)(Profile, double), Profile p) {
  GridFunction out = GridFunction::zeros(g, Domain::Frequency);
  for (std::size_t k = 0; k < out.samples.size(); ++k) out.samples[k] = fn(p, kTwoPi * g.frequency(k).norm());
  return out;
}

}  // namespace

Vec DyadicCube::corner() const {
  Vec c(static_cast<int>(k.size()));
  for (std::size_t a = 0; a < k.size(); ++a) c(static_cast<int>(a)) = std::ldexp(static_cast<double>(k[a]), -nu);
  return c;
}

double thetaWindow(Profile p, double omega) { return transition(p, std::abs(omega) - 1.0); }

double lowWindow(Profile p, double omega) { return std::sqrt(thetaWindow(p, omega)); }

double bandWindow(Profile p, double omega) {
  return std::sqrt(std::max(0.0, thetaWindow(p, omega) - thetaWindow(p, 2.0 * omega)));
}

double WindowSystem::analysisWindow(int nu, const Vec& xi) const {
  double omega = kTwoPi * xi.norm();
  return nu == 0 ? lowWindow(profile, omega) : bandWindow(profile, std::ldexp(omega, -nu));
}

WindowSystem makeWindows(const GridSpec& grid, Profile profile) {
  grid.validate();
  if (grid.L < 2.0 * std::numbers::pi) {
    throw ResolutionError("grid length L = " + std::to_string(grid.L) +
                          " leaves fewer than two frequency samples across the window transition");
  }
  if (maxScale(grid) < 0) throw ResolutionError("grid cannot host the ν = 0 windows");
  WindowSystem w;
  w.profile = profile;
  w.grid = grid;
  w.phi0 = sampleWindow(grid, lowWindow, profile);
  w.phi = sampleWindow(grid, bandWindow, profile);
  w.psi0 = w.phi0;
  w.psi = w.phi;
  int top = maxScale(grid);
  w.onGrid.resize(top + 1);
  parallelFor(static_cast<std::size_t>(top + 1), [&](std::size_t nu) {
    auto& t = w.onGrid[nu];
    t.resize(grid.total());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = w.analysisWindow(static_cast<int>(nu), grid.frequency(k));
  });
  return w;
}

double identityResidual(const WindowSystem& w) {
  const GridSpec& g = w.grid;
  double band = kTwoPi * g.nyquist() * std::sqrt(static_cast<double>(g.d));
  int top = std::max(1, static_cast<int>(std::ceil(std::log2(std::max(band, 1.0)))) + 1);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.total(); ++k) {
    Vec xi = g.frequency(k);
    double s = 0.0;
    for (int nu = 0; nu <= top; ++nu) {
      double a = w.analysisWindow(nu, xi);
      s += a * w.synthesisWindow(nu, xi);
    }
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

int maxScale(const GridSpec& grid) {
  grid.validate();
  double halfNyquistOmega = 0.5 * kTwoPi * grid.nyquist();
  int best = -1;
  for (int nu = 0; nu < 30; ++nu) {
    if (!(std::ldexp(1.0, nu + 1) < halfNyquistOmega)) break;
    if (latticeStride(grid, nu) == 0 || !isInteger(std::ldexp(grid.L, nu))) break;
    best = nu;
  }
  return best;
}

CubeCoefficients CubeCoefficients::zeros(const GridSpec& grid, int nuMax) {
  checkScale(grid, nuMax);
  CubeCoefficients c;
  c.grid = grid;
  c.nuMax = nuMax;
  for (int nu = 0; nu <= nuMax; ++nu) {
    std::size_t m = static_cast<std::size_t>(c.perAxis(nu));
    c.values.emplace_back(grid.d == 1 ? m : m * m, Complex(0.0));
  }
  return c;
}

int CubeCoefficients::perAxis(int nu) const { return static_cast<int>(std::lround(std::ldexp(grid.L, nu))); }

std::size_t CubeCoefficients::flat(int nu, const std::vector<int>& k) const {
  if (nu < 0 || nu > nuMax) throw IndexError("scale out of range");
  if (static_cast<int>(k.size()) != grid.d) throw IndexError("cube index has wrong dimension");
  int m = perAxis(nu);
  std::size_t f = 0;
  for (int a = 0; a < grid.d; ++a) {
    if (k[a] < -m / 2 || k[a] >= m / 2) throw IndexError("cube index outside the periodic box");
    f = f * m + static_cast<std::size_t>(k[a] + m / 2);
  }
  return f;
}

std::vector<int> CubeCoefficients::multiIndex(int nu, std::size_t f) const {
  int m = perAxis(nu);
  std::vector<int> k(grid.d);
  for (int a = grid.d - 1; a >= 0; --a) {
    k[a] = static_cast<int>(f % m) - m / 2;
    f /= m;
  }
  return k;
}

bool CubeCoefficients::kept(int nu, std::size_t f) const {
  if (!box) return true;
  DyadicCube q{nu, multiIndex(nu, f)};
  Vec x = q.corner();
  double margin = q.side();
  for (int a = 0; a < grid.d; ++a)
    if (x(a) + margin < box->lo(a) || x(a) - margin > box->hi(a)) return false;
  return true;
}

Complex& CubeCoefficients::at(const DyadicCube& q) { return values[q.nu][flat(q.nu, q.k)]; }
Complex CubeCoefficients::at(const DyadicCube& q) const { return values[q.nu][flat(q.nu, q.k)]; }

CubeCoefficients analyze(const GridFunction& f, const WindowSystem& w, int nuMax, std::optional<AxisBox> box) {
  const GridSpec& g = w.grid;
  if (f.grid.d != g.d || f.grid.N != g.N || f.grid.L != g.L) throw ArgumentError("signal grid differs from the window grid");
  CubeCoefficients c = CubeCoefficients::zeros(g, nuMax);
  c.box = box;
  GridFunction fhat = toFrequency(f);
  parallelFor(static_cast<std::size_t>(nuMax + 1), [&](std::size_t n) {
    int nu = static_cast<int>(n);
    GridFunction h = fhat;
    const auto& win = w.onGrid.at(nu);
    for (std::size_t k = 0; k < h.samples.size(); ++k) h.samples[k] *= win[k];
    GridFunction x = toSpace(h);
    double scale = std::sqrt(std::ldexp(1.0, -nu * g.d));
    int stride = latticeStride(g, nu);
    auto& out = c.values[nu];
    for (std::size_t q = 0; q < out.size(); ++q) {
      if (!c.kept(nu, q)) continue;
      auto k = c.multiIndex(nu, q);
      for (auto& v : k) v *= stride;
      out[q] = scale * x.samples[g.flatIndex(k)];
    }
  });
  return c;
}

GridFunction synthesize(const CubeCoefficients& c, const WindowSystem& w) {
  const GridSpec& g = w.grid;
  if (c.grid.d != g.d || c.grid.N != g.N || c.grid.L != g.L) throw ArgumentError("coefficient grid differs from the window grid");
  std::vector<GridFunction> parts(c.nuMax + 1);
  double unweight = std::pow(g.spacing(), -g.d);
  parallelFor(static_cast<std::size_t>(c.nuMax + 1), [&](std::size_t n) {
    int nu = static_cast<int>(n);
    GridFunction train = GridFunction::zeros(g, Domain::Space);
    int stride = latticeStride(g, nu);
    const auto& vals = c.values[nu];
    for (std::size_t q = 0; q < vals.size(); ++q) {
      if (vals[q] == Complex(0.0) || !c.kept(nu, q)) continue;
      auto k = c.multiIndex(nu, q);
      for (auto& v : k) v *= stride;
      train.samples[g.flatIndex(k)] += vals[q];
    }
    GridFunction d = toFrequency(train);
    double scale = std::sqrt(std::ldexp(1.0, -nu * g.d)) * unweight;
    const auto& win = w.onGrid.at(nu);
    for (std::size_t k = 0; k < d.samples.size(); ++k) d.samples[k] *= scale * win[k];
    parts[n] = std::move(d);
  });
  GridFunction out = GridFunction::zeros(g, Domain::Frequency);
  for (const auto& p : parts)
    for (std::size_t k = 0; k < out.samples.size(); ++k) out.samples[k] += p.samples[k];
  return toSpace(out);
}

double sequenceNorm(const CubeCoefficients& c, SequenceKind kind, double s, Exponent p, Exponent q) {
  int d = c.grid.d;
  if (kind == SequenceKind::B) {
    std::vector<double> perScale;
    for (int nu = 0; nu <= c.nuMax; ++nu) {
      double w = std::ldexp(1.0, -nu);
      double factor = std::pow(w, d * (p.reciprocal() - 0.5) - s);
      std::vector<double> terms;
      for (std::size_t k = 0; k < c.values[nu].size(); ++k)
        if (c.kept(nu, k)) terms.push_back(factor * std::abs(c.values[nu][k]));
      perScale.push_back(sequenceNorm(terms, p));
    }
    return sequenceNorm(perScale, q);
  }
  if (p.isInfinite()) throw ArgumentError("f-type sequence norms need p < ∞");
  // constant on the finest cubes, so the L^p integral is an exact sum over them
  int top = c.nuMax;
  int m = c.perAxis(top);
  std::size_t cells = d == 1 ? m : static_cast<std::size_t>(m) * m;
  double volume = std::ldexp(1.0, -top * d);
  std::vector<double> cellValue(cells);
  parallelFor(cells, [&](std::size_t cell) {
    auto k = c.multiIndex(top, cell);
    std::vector<double> terms;
    for (int nu = 0; nu <= top; ++nu) {
      std::vector<int> parent(d);
      for (int a = 0; a < d; ++a) parent[a] = static_cast<int>(std::floor(std::ldexp(static_cast<double>(k[a]), nu - top)));
      std::size_t f = c.flat(nu, parent);
      if (!c.kept(nu, f)) continue;
      double side = std::ldexp(1.0, -nu);
      terms.push_back(std::pow(side, -s) * std::abs(c.values[nu][f]) * std::pow(side, -0.5 * d));
    }
    cellValue[cell] = sequenceNorm(terms, q);
  });
  double mx = 0.0;
  for (double v : cellValue) mx = std::max(mx, v);
  if (mx == 0.0) return 0.0;
  double acc = 0.0;
  for (double v : cellValue) acc += std::pow(v / mx, p.value());
  return mx * std::pow(acc * volume, 1.0 / p.value());
}

nlohmann::json toJson(const CubeCoefficients& c) {
  nlohmann::json recs = nlohmann::json::array();
  for (int nu = 0; nu <= c.nuMax; ++nu)
    for (std::size_t q = 0; q < c.values[nu].size(); ++q) {
      if (!c.kept(nu, q) || c.values[nu][q] == Complex(0.0)) continue;
      recs.push_back({{"nu", nu}, {"k", c.multiIndex(nu, q)}, {"re", c.values[nu][q].real()}, {"im", c.values[nu][q].imag()}});
    }
  return {{"grid", toJson(c.grid)}, {"nuMax", c.nuMax}, {"coefficients", recs}};
}

CubeCoefficients coefficientsFromJson(const nlohmann::json& j, const GridSpec& grid) {
  int nuMax = j.at("nuMax").get<int>();
  CubeCoefficients c = CubeCoefficients::zeros(grid, nuMax);
  for (const auto& r : j.at("coefficients")) {
    DyadicCube q{r.at("nu").get<int>(), r.at("k").get<std::vector<int>>()};
    c.at(q) = Complex(r.value("re", 0.0), r.value("im", 0.0));
  }
  return c;
}

}  // namespace harmcover
