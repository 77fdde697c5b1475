#include <cmath>
#include <random>

#include "doctest.h"
#include "harmcover/errors.hpp"
#include "harmcover/frames.hpp"
#include "harmcover/zoo.hpp"

using namespace harmcover;

namespace {

GridFunction inBand(const GridSpec& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  GridFunction f = GridFunction::zeros(g, Domain::Frequency);
  for (int t = 0; t < 3; ++t) {
    auto h = makeSignal({{"kind", "modulatedGaussian"},
                         {"center", {un(rng) * 8.0}},
                         {"frequency", {un(rng) * 10.0}},
                         {"width", 2.0 + un(rng)},
                         {"amplitude", 1.0 + 0.5 * un(rng)}},
                        g);
    for (std::size_t k = 0; k < f.samples.size(); ++k) f.samples[k] += h.samples[k];
  }
  return f;
}

}  // namespace

TEST_CASE("quadratic partition and exponential basis") {
  GridSpec g{1, 64, 4096};
  auto cov = makeUniform(1, 20);
  auto fr = buildTightFrame(cov, g, {0.0, 16});
  CHECK(fr.a >= 1.05);
  CHECK(std::abs(2.0 * fr.a * g.L - std::round(2.0 * fr.a * g.L)) < 1e-12);
  CHECK(quadraticPartitionDefect(fr) < 1e-10);
  for (std::size_t i : {0ul, 20ul, 40ul}) CHECK(exponentialGramDefect(fr, i, 8) < 1e-10);
  for (std::size_t i = 0; i < cov.size(); ++i)
    for (const auto& [k, t] : fr.theta[i]) {
      CHECK(t >= 0.0);
      CHECK(t <= 1.0);
      CHECK(cov.contains(i, g.frequency(k)));
    }
  for (std::size_t i : {3ul, 20ul})
    for (int n : {-16, 0, 7}) CHECK(l2Norm(fr.atom(i, {n})) <= 1.0 + 1e-12);

  double d1 = thetaDerivativeBound(fr, 1), d2 = thetaDerivativeBound(fr, 2);
  CHECK(std::isfinite(d2));
  CHECK(d1 <= d2);
  auto wider = makeUniform(1, 30);
  auto fr2 = buildTightFrame(wider, g, {0.0, 16});
  CHECK(thetaDerivativeBound(fr2, 2) == doctest::Approx(d2).epsilon(1e-6));
}

TEST_CASE("non-structured coverings are refused") {
  GridSpec g{1, 64, 4096};
  CHECK_THROWS_AS(buildTightFrame(makeDyadic(1, 4), g), PreconditionError);
  CHECK_THROWS_AS(buildTightFrame(makeUniform(1, 5), g, {0.5, 8}), ArgumentError);
}

TEST_CASE("frame analysis examples") {
  GridSpec g{1, 64, 4096};
  auto cov = makeUniform(1, 20);
  auto fr = buildTightFrame(cov, g, {0.0, 16});
  auto zero = frameAnalyze(GridFunction::zeros(g, Domain::Space), fr);
  for (const auto& v : zero.values)
    for (auto x : v) CHECK(x == Complex(0.0));

  std::mt19937_64 rng(2);
  auto f = inBand(g, rng), h = inBand(g, rng);
  GridFunction sum = f;
  for (std::size_t k = 0; k < sum.samples.size(); ++k) sum.samples[k] += h.samples[k];
  auto cf = frameAnalyze(f, fr), ch = frameAnalyze(h, fr), cs = frameAnalyze(sum, fr);
  auto c2 = frameAnalyze(f, fr, std::nullopt, Exponent(2.0));
  auto c4 = frameAnalyze(f, fr, std::nullopt, Exponent(4.0));
  for (std::size_t s = 0; s < cf.values.size(); ++s)
    for (std::size_t n = 0; n < cf.values[s].size(); ++n) {
      CHECK(std::abs(cs.values[s][n] - cf.values[s][n] - ch.values[s][n]) < 1e-12);
      CHECK(c2.values[s][n] == cf.values[s][n]);
      CHECK(std::abs(c4.values[s][n] - cf.values[s][n]) < 1e-14);
    }

  GridFunction loc = GridFunction::zeros(g, Domain::Frequency);
  for (std::size_t k = 0; k < loc.samples.size(); ++k) {
    double xi = g.frequency(k)(0);
    if (std::abs(xi - 5.0) < 0.2) loc.samples[k] = std::cos(3.0 * xi);
  }
  auto cl = frameAnalyze(loc, fr);
  for (std::size_t s = 0; s < cl.sets.size(); ++s) {
    int label = cov.label(cl.sets[s])[0];
    double m = 0.0;
    for (auto v : cl.values[s]) m = std::max(m, std::abs(v));
    if (std::abs(label - 5) > 1) CHECK(m < 1e-10);
  }
  auto only = frameAnalyze(loc, fr, std::vector<std::size_t>{cov.indexOf({5})});
  CHECK(only.values.size() == 1);
  CHECK(only.values[0] == cl.values[cov.indexOf({5})]);
  CHECK_THROWS_AS(frameAnalyze(loc, fr, std::vector<std::size_t>{99}), IndexError);
}

TEST_CASE("tight frame parseval and reconstruction") {
  GridSpec g{1, 64, 4096};
  auto cov = makeUniform(1, 20);
  std::mt19937_64 rng(9);
  std::vector<GridFunction> signals;
  for (int t = 0; t < 10; ++t) signals.push_back(inBand(g, rng));
  std::vector<double> last(signals.size(), 2.0);
  for (int nMax : {16, 32, 64}) {
    auto fr = buildTightFrame(cov, g, {0.0, nMax});
    for (std::size_t t = 0; t < signals.size(); ++t) {
      auto r = parsevalAndReconstruct(signals[t], fr);
      CHECK(r.parsevalDefect <= last[t] + 1e-12);
      last[t] = r.parsevalDefect;
      CHECK(r.energyRatio <= 1.0 + 1e-12);
      if (nMax == 64) {
        CHECK(r.energyRatio >= 0.99);
        CHECK(r.parsevalDefect < 0.01);
        CHECK(r.reconstructionError < 0.01);
      }
    }
  }
  auto fr = buildTightFrame(cov, g, {0.0, 16});
  auto out = makeSignal({{"kind", "gaussian"}, {"center", {0.0}}, {"width", 0.02}}, g);
  CHECK_THROWS_AS(parsevalAndReconstruct(out, fr), PreconditionError);
}

TEST_CASE("frame coefficients serialize with labels") {
  GridSpec g{1, 64, 4096};
  auto cov = makeUniform(1, 4);
  auto fr = buildTightFrame(cov, g, {0.0, 2});
  auto f = makeSignal({{"kind", "gaussian"}, {"center", {0.0}}, {"width", 2.0}}, g);
  auto j = toJson(frameAnalyze(f, fr), cov);
  CHECK(j.at("nMax") == 2);
  CHECK(!j.at("coefficients").empty());
  CHECK(j.at("coefficients")[0].at("i").size() == 1);
  CHECK(j.at("coefficients")[0].at("n").size() == 1);
}
