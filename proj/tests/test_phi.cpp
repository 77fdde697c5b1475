#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "doctest.h"
#include "harmcover/errors.hpp"
#include "harmcover/phi.hpp"

using namespace harmcover;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double relErr(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += std::norm(a[k] - b[k]);
    den += std::norm(b[k]);
  }
  return std::sqrt(num / den);
}

GridFunction randomSignal(const GridSpec& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  GridFunction f = GridFunction::zeros(g, Domain::Frequency);
  for (int t = 0; t < 3; ++t) {
    std::vector<double> c, om;
    for (int a = 0; a < g.d; ++a) {
      c.push_back(un(rng) * g.L / 6);
      om.push_back(un(rng) * (g.d == 1 ? 3.0 : 0.5));
    }
    auto h = makeSignal({{"kind", "modulatedGaussian"}, {"center", c}, {"frequency", om},
                         {"width", g.d == 1 ? 2.0 : 4.0}, {"amplitude", 1.0 + un(rng)}},
                        g);
    for (std::size_t k = 0; k < f.samples.size(); ++k) f.samples[k] += h.samples[k];
  }
  return f;
}

double maxAbs(const CubeCoefficients& c, int nu) {
  double m = 0.0;
  for (auto v : c.values[nu]) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("window system identity and supports") {
  GridSpec g{1, 64, 4096};
  for (Profile p : {Profile::BumpIntegral, Profile::ExpStep}) {
    auto w = makeWindows(g, p);
    CHECK(identityResidual(w) < 1e-12);
    CHECK(bandWindow(p, 0.4) == 0.0);
    CHECK(bandWindow(p, 2.1) == doctest::Approx(std::sqrt(thetaWindow(p, 2.1))));
    CHECK(bandWindow(p, 4.1) == 0.0);
    CHECK(lowWindow(p, 2.0) == 0.0);
    CHECK(lowWindow(p, 0.9) == 1.0);
  }
  GridSpec g2{2, 16, 256};
  CHECK(identityResidual(makeWindows(g2)) < 1e-12);
  CHECK(maxScale(g) == 5);
  CHECK(maxScale(g2) == 3);
  CHECK_THROWS_AS(makeWindows(GridSpec{1, 4, 64}), ResolutionError);
}

TEST_CASE("atoms keep the window norm") {
  GridSpec g{1, 64, 4096};
  auto w = makeWindows(g);
  auto c = CubeCoefficients::zeros(g, 5);
  c.at(DyadicCube{3, {5}}) = 1.0;
  double atom = l2Norm(synthesize(c, w));
  // ‖ψ‖² = ∫(θ(2π|ξ|) − θ(4π|ξ|))dξ = (1/2π)∫_0^∞θ(ω)dω = 3/(4π)
  CHECK(atom == doctest::Approx(std::sqrt(0.75 / std::numbers::pi)).epsilon(1e-9));
  c.at(DyadicCube{3, {5}}) = 0.0;
  c.at(DyadicCube{4, {-40}}) = 1.0;
  CHECK(l2Norm(synthesize(c, w)) == doctest::Approx(atom).epsilon(1e-9));
  CHECK(DyadicCube{3, {5}}.side() == 0.125);
  CHECK(DyadicCube{3, {5}}.corner()(0) == 0.625);
}

TEST_CASE("analysis is linear and respects band supports") {
  GridSpec g{1, 64, 4096};
  auto w = makeWindows(g);
  std::mt19937_64 rng(7);
  auto f = randomSignal(g, rng);
  auto c1 = analyze(f, w, 5);
  GridFunction f2 = f;
  Complex alpha(2.5, -1.0);
  for (auto& v : f2.samples) v *= alpha;
  auto c2 = analyze(f2, w, 5);
  for (int nu = 0; nu <= 5; ++nu)
    for (std::size_t k = 0; k < c1.values[nu].size(); ++k)
      CHECK(std::abs(c2.values[nu][k] - alpha * c1.values[nu][k]) < 1e-12 * (1.0 + std::abs(c1.values[nu][k])));

  GridFunction h = GridFunction::zeros(g, Domain::Frequency);
  for (std::size_t k = 0; k < h.samples.size(); ++k) {
    double om = kTwoPi * g.frequency(k).norm();
    if (om > 4.0 && om < 8.0) h.samples[k] = std::sin(om) + 0.5;
  }
  auto ch = analyze(h, w, 5);
  CHECK(maxAbs(ch, 0) < 1e-10);
  CHECK(maxAbs(ch, 1) < 1e-10);
  CHECK(maxAbs(ch, 2) > 1e-3);
  CHECK_THROWS_AS(analyze(h, w, 6), ResolutionError);
}

TEST_CASE("synthesis of simple coefficient sets") {
  GridSpec g{1, 64, 4096};
  auto w = makeWindows(g);
  auto zero = synthesize(CubeCoefficients::zeros(g, 4), w);
  for (auto v : zero.samples) CHECK(v == Complex(0.0));
  auto c = CubeCoefficients::zeros(g, 4);
  c.at(DyadicCube{0, {0}}) = 1.0;
  auto out = synthesize(c, w);
  CHECK(relErr(out.samples, toSpace(w.psi0).samples) < 1e-12);
}

TEST_CASE("roundtrip reconstructs band-limited signals") {
  std::mt19937_64 rng(11);
  for (auto [g, nuMax, tol] : {std::tuple{GridSpec{1, 64, 4096}, 5, 1e-8}, std::tuple{GridSpec{2, 16, 256}, 3, 1e-6}}) {
    auto w = makeWindows(g);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      auto f = randomSignal(g, rng);
      auto r = synthesize(analyze(f, w, nuMax), w);
      worst = std::max(worst, relErr(r.samples, toSpace(f).samples));
    }
    CHECK(worst < tol);
  }
}

TEST_CASE("sequence norm examples") {
  GridSpec g{1, 64, 4096};
  auto c = CubeCoefficients::zeros(g, 4);
  c.at(DyadicCube{0, {3}}) = Complex(3.0, 4.0);
  for (double s : {0.0, 0.7, -1.0})
    for (double p : {1.0, 2.0, 3.5}) {
      CHECK(sequenceNorm(c, SequenceKind::F, s, Exponent(p), Exponent(2.0)) == doctest::Approx(5.0));
      CHECK(sequenceNorm(c, SequenceKind::B, s, Exponent(p), Exponent(1.0)) == doctest::Approx(5.0));
    }
  auto e = CubeCoefficients::zeros(g, 4);
  e.at(DyadicCube{3, {-7}}) = 2.0;
  for (double s : {0.0, 1.0, 1.5})
    for (double p : {1.0, 2.0, 4.0}) {
      double expect = std::pow(0.125, 1.0 / p - 0.5 - s) * 2.0;
      CHECK(sequenceNorm(e, SequenceKind::B, s, Exponent(p), Exponent(2.0)) == doctest::Approx(expect));
    }
  CHECK(sequenceNorm(e, SequenceKind::B, 0.0, Exponent::infinity(), Exponent(2.0)) ==
        doctest::Approx(2.0 * std::pow(0.125, -0.5)));
  CHECK_THROWS_AS(sequenceNorm(e, SequenceKind::F, 0.0, Exponent::infinity(), Exponent(2.0)), ArgumentError);
}

TEST_CASE("b norm matches direct double sum") {
  GridSpec g{1, 64, 4096};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = CubeCoefficients::zeros(g, 5);
    std::map<std::pair<int, int>, Complex> sparse;
    for (int t = 0; t < 25; ++t) {
      int nu = static_cast<int>(rng() % 6);
      int m = c.perAxis(nu);
      int k = static_cast<int>(rng() % m) - m / 2;
      sparse[{nu, k}] = Complex(un(rng), un(rng));
    }
    for (const auto& [key, v] : sparse) c.at(DyadicCube{key.first, {key.second}}) = v;
    double s2 = 0.0;
    for (const auto& [key, v] : sparse) s2 += std::norm(v);
    CHECK(sequenceNorm(c, SequenceKind::B, 0.0, Exponent(2.0), Exponent(2.0)) == doctest::Approx(std::sqrt(s2)));

    double s = 0.8, p = 3.0, q = 1.5;
    std::map<int, double> scale;
    for (const auto& [key, v] : sparse)
      scale[key.first] += std::pow(std::pow(2.0, -key.first * (1.0 / p - 0.5 - s)) * std::abs(v), p);
    double total = 0.0;
    for (const auto& [nu, acc] : scale) total += std::pow(std::pow(acc, 1.0 / p), q);
    CHECK(sequenceNorm(c, SequenceKind::B, s, Exponent(p), Exponent(q)) == doctest::Approx(std::pow(total, 1.0 / q)));
  }
}

TEST_CASE("f and b norms agree on single-scale sets when p equals q") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  for (GridSpec g : {GridSpec{1, 64, 4096}, GridSpec{2, 16, 256}}) {
    for (int nu = 0; nu <= 3; ++nu) {
      auto c = CubeCoefficients::zeros(g, 3);
      for (auto& v : c.values[nu]) v = Complex(un(rng), un(rng));
      for (double p : {1.0, 2.0, 4.0}) {
        double f = sequenceNorm(c, SequenceKind::F, 0.5, Exponent(p), Exponent(p));
        double b = sequenceNorm(c, SequenceKind::B, 0.5, Exponent(p), Exponent(p));
        CHECK(f == doctest::Approx(b).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("norms are comparable across window profiles") {
  GridSpec g{1, 64, 4096};
  auto w1 = makeWindows(g, Profile::BumpIntegral);
  auto w2 = makeWindows(g, Profile::ExpStep);
  std::mt19937_64 rng(13);
  struct Param {
    double s;
    Exponent p, q;
  };
  std::vector<Param> params{{0, Exponent(2), Exponent(2)},
                            {1, Exponent(2), Exponent(2)},
                            {0.5, Exponent(1), Exponent(1)},
                            {1.5, Exponent::infinity(), Exponent::infinity()},
                            {1, Exponent(4), Exponent(4)}};
  std::vector<double> lo(params.size(), 1e300), hi(params.size(), 0.0);
  for (int t = 0; t < 20; ++t) {
    auto f = randomSignal(g, rng);
    auto c1 = analyze(f, w1, 5);
    auto c2 = analyze(f, w2, 5);
    for (std::size_t i = 0; i < params.size(); ++i) {
      double r = sequenceNorm(c1, SequenceKind::B, params[i].s, params[i].p, params[i].q) /
                 sequenceNorm(c2, SequenceKind::B, params[i].s, params[i].p, params[i].q);
      lo[i] = std::min(lo[i], r);
      hi[i] = std::max(hi[i], r);
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    CHECK(lo[i] >= 1.0 / 16);
    CHECK(hi[i] <= 16.0);
  }
}

TEST_CASE("dilation moves coefficients one scale up") {
  GridSpec wide{1, 128, 8192}, narrow{1, 64, 8192};
  auto ww = makeWindows(wide);
  auto wn = makeWindows(narrow);
  auto f = makeSignal({{"kind", "modulatedGaussian"}, {"center", {1.5}}, {"frequency", {0.9}}, {"width", 2.0}}, wide);
  auto f2 = makeSignal({{"kind", "modulatedGaussian"}, {"center", {0.75}}, {"frequency", {1.8}}, {"width", 1.0}}, narrow);
  auto c = analyze(f, ww, 4);
  auto c2 = analyze(f2, wn, 5);
  double worst = 0.0, ref = 0.0;
  for (int nu = 1; nu < 5; ++nu) {
    int m = c.perAxis(nu);
    for (int k = -m / 2; k < m / 2; ++k) {
      Complex a = c.at(DyadicCube{nu, {k}});
      Complex b = c2.at(DyadicCube{nu + 1, {k}});
      worst = std::max(worst, std::abs(b - std::sqrt(0.5) * a));
      ref = std::max(ref, std::abs(a));
    }
  }
  CHECK(ref > 1e-3);
  CHECK(worst < 1e-10 * ref);
}

TEST_CASE("coefficient json round trip") {
  GridSpec g{2, 16, 256};
  auto c = CubeCoefficients::zeros(g, 2);
  c.at(DyadicCube{0, {1, -3}}) = Complex(1.0, 2.0);
  c.at(DyadicCube{2, {-32, 31}}) = Complex(-0.5, 0.0);
  auto j = toJson(c);
  CHECK(j.at("coefficients").size() == 2);
  auto back = coefficientsFromJson(nlohmann::json::parse(j.dump()), g);
  CHECK(back.at(DyadicCube{0, {1, -3}}) == Complex(1.0, 2.0));
  CHECK(back.at(DyadicCube{2, {-32, 31}}) == Complex(-0.5, 0.0));
  CHECK(sequenceNorm(back, SequenceKind::B, 0.3, Exponent(2), Exponent(2)) ==
        doctest::Approx(sequenceNorm(c, SequenceKind::B, 0.3, Exponent(2), Exponent(2))));
}
