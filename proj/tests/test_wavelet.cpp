#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "harmcover/errors.hpp"
#include "harmcover/wavelet.hpp"
#include "harmcover/transition.hpp"
#include "harmcover/zoo.hpp"

using namespace harmcover;

namespace {

bool close(const GroupElement& g, const GroupElement& h, double tol) {
  return g.eps == h.eps && std::abs(g.a - h.a) < tol * std::max(1.0, g.a) && std::abs(g.b - h.b) < tol * std::max(1.0, std::abs(g.b));
}

GroupElement randomElement(std::mt19937_64& rng, double spread = 1.0) {
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  return {un(rng) < 0 ? -1 : 1, std::exp(spread * un(rng)), 2.0 * spread * un(rng)};
}

/// Gaussian packet f̂(ξ) = exp(−π w²|ξ − ω|²) transported by π(y, g): e^{−2πi y·ξ}|det g|^{1/2} f̂(gᵀξ).
GridFunction packet(const GridSpec& g, const ShearletGroup& G, const Vec& omega, double w, const Vec& y,
                    const GroupElement& h) {
  GridFunction f = GridFunction::zeros(g, Domain::Frequency);
  Mat hT = G.matrix(h).transpose();
  double amp = std::sqrt(G.det(h));
  for (std::size_t k = 0; k < g.total(); ++k) {
    Vec xi = g.frequency(k);
    Vec eta = hT * xi;
    double r2 = (eta - omega).squaredNorm();
    f.samples[k] = amp * std::exp(-std::numbers::pi * w * w * r2) * std::polar(1.0, -2.0 * std::numbers::pi * y.dot(xi));
  }
  return f;
}

std::vector<GridFunction> probeSignals(const GridSpec& g) {
  double cs[4][3] = {{0.45, 0.0, 10}, {-1.0, 0.2, 6}, {0.9, -0.5, 7}, {-0.55, -0.45, 8}};
  std::vector<GridFunction> out;
  for (auto& c : cs)
    out.push_back(makeSignal(
        {{"kind", "modulatedGaussian"}, {"center", {0.0, 1.0}}, {"frequency", {c[0], c[1]}}, {"width", c[2]}}, g));
  return out;
}

}  // namespace

TEST_CASE("shearlet group arithmetic") {
  ShearletGroup G1(1.0);
  CHECK(G1.det({-1, 2.0, 7.0}) == 4.0);
  auto m = G1.mul({1, 2.0, 1.0}, {1, 3.0, 5.0});
  CHECK(m.a == 6.0);
  CHECK(m.b == 13.0);
  auto inv = G1.inv({1, 2.0, 4.0});
  CHECK(inv.a == 0.5);
  CHECK(inv.b == -1.0);
  CHECK(close(G1.mul({1, 2.0, 4.0}, inv), G1.identity(), 1e-15));

  std::mt19937_64 rng(4);
  for (double c : {0.5, 0.8, 1.0}) {
    ShearletGroup G(c);
    for (int t = 0; t < 50; ++t) {
      auto x = randomElement(rng), y = randomElement(rng), z = randomElement(rng);
      CHECK(close(G.mul(G.mul(x, y), z), G.mul(x, G.mul(y, z)), 1e-12));
      CHECK(close(G.inv(G.mul(x, y)), G.mul(G.inv(y), G.inv(x)), 1e-12));
      Mat prod = G.matrix(x) * G.matrix(y);
      CHECK((prod - G.matrix(G.mul(x, y))).norm() < 1e-12 * prod.norm());
      Vec xi = Vec::Random(2);
      Vec back = G.dualAction(x, G.matrix(x).transpose() * xi);
      CHECK((back - xi).norm() < 1e-12);
      ShearScale sx{x.a, x.b / std::pow(x.a, c)}, sy{y.a, y.b / std::pow(y.a, c)};
      ShearScale sxy = composeShearScale(c, sx, sy);
      auto xy = G.mul(x, y);
      CHECK(sxy.a == doctest::Approx(xy.a));
      CHECK(sxy.s == doctest::Approx(xy.b / std::pow(xy.a, c)));
    }
  }
}

TEST_CASE("well-spread families") {
  for (double c : {0.5, 1.0}) {
    ShearletGroup G(c);
    auto h = G.sample(0, 0, 1, 1.0);
    CHECK(close(h, G.identity(), 1e-15));
    auto fam = wellSpreadFamily(G, 1.0, -3, 3, 16);
    CHECK(fam.size() == 7 * 33 * 2);
    auto r = validateWellSpread(G, fam, 1.0);
    CHECK(r.coveredFraction == 1.0);
    CHECK(r.separated);
    CHECK_NOTHROW(requireWellSpread(G, fam, 1.0));

    auto thin = wellSpreadFamily(G, 1.0, -3, 3, 2);
    auto rt = validateWellSpread(G, thin, 1.0);
    CHECK(rt.coveredFraction < 1.0);
    REQUIRE(rt.uncovered);
    CHECK_THROWS_AS(requireWellSpread(G, thin, 1.0), ConstructionError);
    CHECK(!validateWellSpread(G, fam, 2.5).separated);
  }
}

TEST_CASE("dual orbit stays in the open region") {
  ShearletGroup G(0.5);
  Vec xi0(2);
  xi0 << 1.0, 0.0;
  bool left = false, right = false;
  for (const auto& h : wellSpreadFamily(G, 1.0, -2, 2, 6)) {
    Vec xi = G.dualAction(h, xi0);
    CHECK(Region::shearletOrbit().contains(xi));
    left = left || xi(0) < 0;
    right = right || xi(0) > 0;
  }
  CHECK(left);
  CHECK(right);
}

TEST_CASE("left Haar density") {
  std::mt19937_64 rng(8);
  for (double c : {0.5, 1.0}) {
    ShearletGroup G(c);
    for (int t = 0; t < 5; ++t) CHECK(haarInvarianceDefect(G, randomElement(rng, 0.7)) < 1e-6);
    // right translation picks up the modular factor a₀^{1−c}
    GroupElement g0{1, 1.7, 0.4};
    auto F = [](const GroupElement& h) { return bump((std::log(h.a) - 0.3) / 0.8) * bump((h.b - 0.2) / 1.1); };
    double base = haarIntegral(G, F, -0.5, 1.1, -0.9, 1.3);
    double right =
        haarIntegral(G, [&](const GroupElement& h) { return F(G.mul(h, g0)); }, -2.0, 2.0, -4.0, 4.0, 1200);
    CHECK(right / base == doctest::Approx(std::pow(g0.a, 1.0 - c)).epsilon(1e-8));
  }
}

TEST_CASE("wavelet windows") {
  CHECK_THROWS_AS(makeWindow(WaveletWindow::Kind::Bump, 0.5, 0.45, 1.0), PreconditionError);
  CHECK_THROWS_AS(makeWindow(WaveletWindow::Kind::Bump, 1.0, -0.1, 1.0), ArgumentError);
  GridSpec g{2, 64, 512};
  ShearletGroup G(0.5);
  for (auto kind : {WaveletWindow::Kind::Bump, WaveletWindow::Kind::Gaussian}) {
    auto w = makeWindow(kind, 1.0, 0.7, 0.8);
    GridFunction psi = GridFunction::zeros(g, Domain::Frequency);
    for (std::size_t k = 0; k < g.total(); ++k) psi.samples[k] = w.hat(g.frequency(k));
    Vec x0 = Vec::Zero(2);
    Complex self = waveletAt(psi, w, G, x0, G.identity(), WaveletMode::Fourier);
    CHECK(std::abs(self - w.normSquared()) < 1e-8 * w.normSquared());
    CHECK(std::abs(waveletAt(psi, w, G, x0, G.identity(), WaveletMode::Direct) - w.normSquared()) <
          1e-8 * w.normSquared());
    Vec z(2);
    z << 0.3, -0.7;
    Complex direct = 0.0;
    for (std::size_t k = 0; k < g.total(); ++k)
      direct += psi.samples[k] * std::polar(1.0, 2.0 * std::numbers::pi * z.dot(g.frequency(k)));
    CHECK(std::abs(w.space(z) - direct / (g.L * g.L)) < 1e-8);
  }
  CHECK_THROWS_AS(waveletAt(GridFunction::zeros(g, Domain::Space), makeWindow(WaveletWindow::Kind::Bump, 1.0, 0.7, 0.8),
                            G, Vec::Zero(2), GroupElement{1, 0.2, 0.0}, WaveletMode::Fourier),
                  ResolutionError);
}

TEST_CASE("fourier and direct transforms agree") {
  GridSpec g{2, 128, 512};
  auto w = makeWindow(WaveletWindow::Kind::Bump, 1.0, 0.7, 0.8);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  auto f = makeSignal({{"kind", "modulatedGaussian"}, {"center", {0.5, -1.0}}, {"frequency", {0.8, 0.3}}, {"width", 1.5}}, g);
  auto f2 = makeSignal({{"kind", "modulatedGaussian"}, {"center", {-0.5, 0.5}}, {"frequency", {-0.9, 0.2}}, {"width", 1.2}}, g);
  for (std::size_t k = 0; k < f.samples.size(); ++k) f.samples[k] += f2.samples[k];
  auto fs = toSpace(f);
  for (double c : {0.5, 1.0}) {
    ShearletGroup G(c);
    for (int t = 0; t < 10; ++t) {
      GroupElement h{t % 2 ? -1 : 1, std::pow(2.0, 0.5 + 0.5 * un(rng)), 0.5 * un(rng)};
      Vec x(2);
      x << std::round(un(rng) * 16) / 8, std::round(un(rng) * 16) / 8;
      Complex a = waveletAt(f, w, G, x, h, WaveletMode::Fourier);
      Complex b = waveletAt(fs, w, G, x, h, WaveletMode::Direct);
      CHECK(std::abs(a - b) < 1e-6 * std::abs(a));
    }
    std::vector<GroupPoint> pts{{{1, 1.0, 0.3}, 1.0}, {{-1, std::sqrt(2.0), -0.3}, 1.0}};
    auto W = waveletTransform(f, w, G, pts);
    for (std::size_t t = 0; t < pts.size(); ++t) {
      std::size_t k = g.flatIndex({24, -40});
      Complex direct = waveletAt(f, w, G, g.position(k), pts[t].h, WaveletMode::Fourier);
      CHECK(std::abs(W.values[t][k] - direct) < 1e-10 * (1.0 + std::abs(direct)));
    }
  }
}

TEST_CASE("wavelet transform covariance") {
  GridSpec g{2, 32, 256};
  auto w = makeWindow(WaveletWindow::Kind::Gaussian, 1.0, 0.7, 0.8);
  ShearletGroup G(0.5);
  Vec omega(2), y(2), x(2), zero = Vec::Zero(2);
  omega << 0.9, 0.2;
  y << 0.75, -0.5;
  x << 1.25, 0.5;
  GroupElement gEl{1, 1.2, 0.15}, h{1, 0.9, -0.2};
  auto f = packet(g, G, omega, 2.0, zero, G.identity());
  auto moved = packet(g, G, omega, 2.0, y, gEl);
  Complex lhs = waveletAt(moved, w, G, x, h, WaveletMode::Fourier);
  GroupElement gi = G.inv(gEl);
  Vec x2 = G.matrix(gi) * (x - y);
  Complex rhs = waveletAt(f, w, G, x2, G.mul(gi, h), WaveletMode::Fourier);
  CHECK(std::abs(rhs) > 1e-4);
  CHECK(std::abs(lhs - rhs) < 1e-6 * std::abs(rhs));
}

TEST_CASE("mixed norms") {
  GridSpec g{2, 32, 256};
  ShearletGroup G(0.5);
  auto w = makeWindow(WaveletWindow::Kind::Bump, 1.0, 0.7, 0.8);
  auto pts = groupQuadrature(G, 1.0, 0, 1, 1, 2, 2);
  CHECK(pts.size() == 2 * 3 * 2 * 4);
  double mass = 0.0;
  for (const auto& p : pts) mass += p.weight;
  // each cell h·K₁ has left Haar mass ∫_1^2 a^{c−2} da · δ
  CHECK(mass == doctest::Approx(12 * (std::pow(2.0, -0.5) - 1.0) / -0.5));
  auto f = makeSignal({{"kind", "modulatedGaussian"}, {"center", {0.0, 0.0}}, {"frequency", {0.6, 0.1}}, {"width", 4.0}}, g);
  auto W = waveletTransform(f, w, G, pts);
  for (double p : {1.0, 2.0, 3.0}) {
    CHECK(mixedNorm(W, Exponent(p), Exponent(p)) == doctest::Approx(groupLpNorm(W, Exponent(p))).epsilon(1e-12));
  }
  CHECK(mixedNorm(W, Exponent(2), Exponent(2), {0, 0, 2.0}) == doctest::Approx(2.0 * mixedNorm(W, Exponent(2), Exponent(2))));
  CHECK(mixedNorm(W, Exponent(2), Exponent(1)) > 0.0);
  CHECK(std::isfinite(mixedNorm(W, Exponent(2), Exponent::infinity(), {0.5, -0.25, 1.0})));
  WaveletField Z = W;
  for (auto& v : Z.values) std::fill(v.begin(), v.end(), Complex(0.0));
  CHECK(mixedNorm(Z, Exponent(2), Exponent(3)) == 0.0);
  Z.values.pop_back();
  CHECK_THROWS_AS(mixedNorm(Z, Exponent(2), Exponent(2)), ArgumentError);
}

TEST_CASE("coorbit and decomposition norms stay comparable") {
  ShearletParams sp;
  sp.c = 0.5;
  sp.delta = 1.0;
  sp.jMin = 0;
  sp.jMax = 2;
  sp.kMax = 2;
  auto cov = makeShearletInduced(sp);
  auto q = shearletParamsOf(cov).q;
  GridSpec g{2, 32, 512};
  CoorbitProbeOptions o;
  o.window = makeWindow(WaveletWindow::Kind::Bump, 0.5 * (q.u0 + q.u1), 0.5 * (q.u1 - q.u0), q.w * q.u1);
  auto signals = probeSignals(g);
  GridFunction twice = signals[0];
  for (auto& v : twice.samples) v *= 2.0;
  signals.push_back(twice);
  auto r = coorbitDecompositionProbe(signals, cov, o);
  for (double v : r.ratios) CHECK(v > 0.0);
  CHECK(r.ratios[4] == doctest::Approx(r.ratios[0]).epsilon(1e-12));
  CHECK(r.spread < 32.0);
  CHECK(toJson(r).at("ratios").size() == 5);
}
