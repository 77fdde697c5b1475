#include "harmcover/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "harmcover/errors.hpp"
#include "harmcover/parallel.hpp"

namespace harmcover {

namespace {

std::mutex& planMutex() {
  static std::mutex m;
  return m;
}

fftw_plan planFor(int d, int N, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(planMutex());
  auto key = std::make_tuple(d, N, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::size_t n = d == 1 ? N : static_cast<std::size_t>(N) * N;
  auto* in = fftw_alloc_complex(n);
  auto* out = fftw_alloc_complex(n);
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan p = d == 1 ? fftw_plan_dft_1d(N, in, out, sign, flags) : fftw_plan_dft_2d(N, N, in, out, sign, flags);
  fftw_free(in);
  fftw_free(out);
  cache.emplace(key, p);
  return p;
}

std::vector<Complex> transform(const GridSpec& g, const std::vector<Complex>& in, int sign, double scale) {
  std::vector<Complex> out(in.size());
  std::vector<Complex> src = in;
  fftw_execute_dft(planFor(g.d, g.N, sign), reinterpret_cast<fftw_complex*>(src.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<double> numberArray(const nlohmann::json& j, int d, const char* name) {
  if (j.is_number()) return std::vector<double>(d, j.get<double>());
  auto v = j.get<std::vector<double>>();
  if (static_cast<int>(v.size()) != d) throw ArgumentError(std::string(name) + " must have one entry per dimension");
  return v;
}

}  // namespace

void GridSpec::validate() const {
  if (d != 1 && d != 2) throw ArgumentError("grid dimension must be 1 or 2");
  if (N < 2 || (N & (N - 1)) != 0) throw ArgumentError("grid size N must be a power of two");
  if (!(L > 0.0)) throw ArgumentError("grid length L must be positive");
}

std::size_t GridSpec::total() const { return d == 1 ? N : static_cast<std::size_t>(N) * N; }

Vec GridSpec::frequency(std::size_t flat) const {
  Vec xi(d);
  if (d == 1) {
    xi(0) = signedIndex(static_cast<int>(flat)) / L;
  } else {
    xi(0) = signedIndex(static_cast<int>(flat / N)) / L;
    xi(1) = signedIndex(static_cast<int>(flat % N)) / L;
  }
  return xi;
}

Vec GridSpec::position(std::size_t flat) const { return frequency(flat) * (L * L / N); }

std::size_t GridSpec::flatIndex(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < d; ++a) {
    int m = idx[a];
    if (m < -N / 2 || m >= N / 2) throw IndexError("grid index out of range");
    flat = flat * N + static_cast<std::size_t>(m < 0 ? m + N : m);
  }
  return flat;
}

nlohmann::json toJson(const GridSpec& g) { return {{"d", g.d}, {"L", g.L}, {"N", g.N}}; }

GridSpec gridFromJson(const nlohmann::json& j) {
  GridSpec g{j.value("d", 1), j.value("L", 64.0), j.value("N", 4096)};
  g.validate();
  return g;
}

GridFunction GridFunction::zeros(const GridSpec& g, Domain dom) {
  return GridFunction{g, dom, std::vector<Complex>(g.total(), Complex(0.0))};
}

GridFunction toFrequency(const GridFunction& f) {
  if (f.domain == Domain::Frequency) return f;
  return {f.grid, Domain::Frequency, transform(f.grid, f.samples, FFTW_FORWARD, std::pow(f.grid.spacing(), f.grid.d))};
}

GridFunction toSpace(const GridFunction& f) {
  if (f.domain == Domain::Space) return f;
  return {f.grid, Domain::Space, transform(f.grid, f.samples, FFTW_BACKWARD, std::pow(1.0 / f.grid.L, f.grid.d))};
}

double lpNorm(const GridFunction& f, Exponent p) {
  if (f.domain != Domain::Space) return lpNorm(toSpace(f), p);
  double m = 0.0;
  for (const auto& v : f.samples) m = std::max(m, std::abs(v));
  if (p.isInfinite() || m == 0.0) return m;
  double s = 0.0;
  for (const auto& v : f.samples) s += std::pow(std::abs(v) / m, p.value());
  return m * std::pow(s * std::pow(f.grid.spacing(), f.grid.d), 1.0 / p.value());
}

double l2Norm(const GridFunction& f) {
  double s = 0.0;
  for (const auto& v : f.samples) s += std::norm(v);
  double w = f.domain == Domain::Space ? std::pow(f.grid.spacing(), f.grid.d) : std::pow(1.0 / f.grid.L, f.grid.d);
  return std::sqrt(s * w);
}

GridFunction makeSignal(const nlohmann::json& spec, const GridSpec& g, const Covering* cov) {
  g.validate();
  std::string kind = spec.at("kind").get<std::string>();
  if (kind == "coveringBump") {
    if (!cov) throw ArgumentError("coveringBump signals need a covering");
    return witnessFamily(*cov, {spec.at("label").get<Label>()}, g).front();
  }
  if (kind != "gaussian" && kind != "modulatedGaussian") throw ArgumentError("unknown signal kind '" + kind + "'");
  auto c = numberArray(spec.value("center", nlohmann::json(0.0)), g.d, "center");
  double w = spec.value("width", 1.0);
  if (!(w > 0.0)) throw ArgumentError("signal width must be positive");
  double amp = spec.value("amplitude", 1.0);
  std::vector<double> om(g.d, 0.0);
  if (kind == "modulatedGaussian") om = numberArray(spec.at("frequency"), g.d, "frequency");
  GridFunction f = GridFunction::zeros(g, Domain::Frequency);
  const double pi = std::numbers::pi;
  for (std::size_t k = 0; k < f.samples.size(); ++k) {
    Vec xi = g.frequency(k);
    double r2 = 0.0, phase = 0.0;
    for (int a = 0; a < g.d; ++a) {
      r2 += (xi(a) - om[a]) * (xi(a) - om[a]);
      phase += c[a] * xi(a);
    }
    f.samples[k] = amp * std::pow(w, g.d) * std::exp(-pi * w * w * r2) * std::polar(1.0, -2.0 * pi * phase);
  }
  return f;
}

double energyWithin(const GridFunction& f, double band) {
  GridFunction h = toFrequency(f);
  double in = 0.0, all = 0.0;
  for (std::size_t k = 0; k < h.samples.size(); ++k) {
    double e = std::norm(h.samples[k]);
    all += e;
    if (h.grid.frequency(k).cwiseAbs().maxCoeff() <= band) in += e;
  }
  return all > 0.0 ? in / all : 1.0;
}

GridFunction BAPUFamily::dense(std::size_t i) const {
  if (i >= phi.size()) throw IndexError("BAPU index out of range");
  GridFunction out = GridFunction::zeros(grid, Domain::Frequency);
  for (const auto& [k, v] : phi[i]) out.samples[k] = v;
  return out;
}

BAPUFamily buildBAPU(const Covering& cov, const GridSpec& grid, double shrink, Profile profile) {
  grid.validate();
  if (cov.dim() != grid.d) throw ArgumentError("covering and grid differ in dimension");
  if (!(shrink > 0.0 && shrink < 1.0)) throw ArgumentError("shrink must lie in (0, 1)");
  BAPUFamily b;
  b.covering = &cov;
  b.grid = grid;
  b.shrink = shrink;
  b.profile = profile;
  std::size_t n = cov.size();
  b.phi.assign(n, {});
  int half = grid.N / 2;
  parallelFor(n, [&](std::size_t i) {
    const AxisBox& box = cov.bbox(i);
    const auto& s = cov.set(i);
    const BaseSet& base = cov.bases()[s.base];
    std::vector<int> lo(grid.d), hi(grid.d);
    for (int a = 0; a < grid.d; ++a) {
      lo[a] = static_cast<int>(std::max<double>(-half, std::ceil(box.lo(a) * grid.L)));
      hi[a] = static_cast<int>(std::min<double>(half - 1, std::floor(box.hi(a) * grid.L)));
      if (lo[a] > hi[a]) return;
    }
    std::vector<int> idx = lo;
    Vec xi(grid.d);
    while (true) {
      for (int a = 0; a < grid.d; ++a) xi(a) = idx[a] / grid.L;
      if (cov.region().contains(xi)) {
        double g = transition(profile, (base.gauge(s.map.pullback(xi)) - shrink) / (1.0 - shrink));
        if (g > 0.0) b.phi[i].emplace_back(grid.flatIndex(idx), g);
      }
      int a = grid.d - 1;
      while (a >= 0 && idx[a] == hi[a]) {
        idx[a] = lo[a];
        --a;
      }
      if (a < 0) break;
      ++idx[a];
    }
  });
  std::vector<double> sum(grid.total(), 0.0);
  for (const auto& list : b.phi)
    for (const auto& [k, v] : list) sum[k] += v;
  const auto& claim = cov.truncation().claim;
  for (std::size_t k = 0; k < sum.size(); ++k) {
    if (sum[k] > 0.0) continue;
    Vec xi = grid.frequency(k);
    if (!cov.region().contains(xi)) continue;
    if (!claim || claim->contains(xi)) {
      std::ostringstream os;
      os << "BAPU: grid point ξ = (" << xi.transpose() << ") in O is not covered by any set";
      throw CoverageError(os.str());
    }
  }
  b.covered.assign(grid.total(), 0);
  for (std::size_t k = 0; k < sum.size(); ++k) b.covered[k] = sum[k] > 0.0;
  parallelFor(n, [&](std::size_t i) {
    for (auto& [k, v] : b.phi[i]) v /= sum[k];
  });
  return b;
}

double partitionDeviation(const BAPUFamily& bapu) {
  std::vector<double> sum(bapu.grid.total(), 0.0);
  for (const auto& list : bapu.phi)
    for (const auto& [k, v] : list) sum[k] += v;
  const auto& claim = bapu.covering->truncation().claim;
  double dev = 0.0;
  for (std::size_t k = 0; k < sum.size(); ++k) {
    Vec xi = bapu.grid.frequency(k);
    if (!bapu.covering->region().contains(xi)) continue;
    if (claim && !claim->contains(xi)) continue;
    dev = std::max(dev, std::abs(sum[k] - 1.0));
  }
  return dev;
}

std::vector<double> pieceNorms(const GridFunction& f, const BAPUFamily& bapu, Exponent p) {
  GridFunction h = toFrequency(f);
  if (h.grid.d != bapu.grid.d || h.grid.N != bapu.grid.N || h.grid.L != bapu.grid.L) {
    throw ArgumentError("signal grid differs from the BAPU grid");
  }
  std::vector<double> out(bapu.phi.size(), 0.0);
  double w2 = std::pow(1.0 / h.grid.L, h.grid.d);
  parallelFor(bapu.phi.size(), [&](std::size_t i) {
    const auto& list = bapu.phi[i];
    if (p.value() == 2.0) {
      double s = 0.0;
      for (const auto& [k, v] : list) s += std::norm(v * h.samples[k]);
      out[i] = std::sqrt(s * w2);
      return;
    }
    GridFunction piece = GridFunction::zeros(h.grid, Domain::Frequency);
    bool any = false;
    for (const auto& [k, v] : list) {
      piece.samples[k] = v * h.samples[k];
      any = any || piece.samples[k] != Complex(0.0);
    }
    out[i] = any ? lpNorm(toSpace(piece), p) : 0.0;
  });
  return out;
}

double decompositionNorm(const GridFunction& f, const BAPUFamily& bapu, Exponent p, Exponent q,
                         const WeightFamily& u) {
  auto norms = pieceNorms(f, bapu, p);
  std::vector<double> terms;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (norms[i] == 0.0) continue;
    terms.push_back(u.at(*bapu.covering, i) * norms[i]);
  }
  double m = 0.0;
  for (double t : terms) m = std::max(m, t);
  if (q.isInfinite() || m == 0.0) return m;
  double s = 0.0;
  for (double t : terms) s += std::pow(t / m, q.value());
  return m * std::pow(s, 1.0 / q.value());
}

std::pair<Vec, double> inscribedBallOf(const Covering& cov, std::size_t i) {
  const auto& s = cov.set(i);
  auto [c, r] = cov.bases()[s.base].inscribedBall();
  Eigen::JacobiSVD<Mat> svd(s.map.matrix());
  return {s.map.apply(c), r * svd.singularValues().minCoeff()};
}

std::vector<GridFunction> witnessFamily(const Covering& cov, const std::vector<Label>& chain, const GridSpec& grid) {
  grid.validate();
  if (cov.dim() != grid.d) throw ArgumentError("covering and grid differ in dimension");
  std::vector<GridFunction> out;
  for (const auto& label : chain) {
    std::size_t i = cov.indexOf(label);
    auto [center, rho] = inscribedBallOf(cov, i);
    if (rho * grid.L < 2.0) {
      throw ResolutionError("witness for " + labelToString(label) + ": inscribed ball radius " + std::to_string(rho) +
                            " spans fewer than two grid spacings");
    }
    if (center.cwiseAbs().maxCoeff() + rho >= grid.nyquist()) {
      throw ResolutionError("witness for " + labelToString(label) + " exceeds the grid's Nyquist band");
    }
    GridFunction f = GridFunction::zeros(grid, Domain::Frequency);
    for (std::size_t k = 0; k < f.samples.size(); ++k) f.samples[k] = bump((grid.frequency(k) - center).norm() / rho);
    double n = l2Norm(f);
    if (n == 0.0) throw ResolutionError("witness for " + labelToString(label) + " has no grid support");
    for (auto& v : f.samples) v /= n;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace harmcover
