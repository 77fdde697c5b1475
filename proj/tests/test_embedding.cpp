#include <cmath>
#include <random>

#include "doctest.h"
#include "harmcover/embedding.hpp"
#include "harmcover/errors.hpp"

using namespace harmcover;

namespace {

constexpr double kInf = Exponent::kInf;

EmbeddingQuery query(const Covering& fine, const Covering& coarse, const WeightFamily& u, const WeightFamily& v,
                     double p1, double q1, double p2, double q2, Direction dir) {
  EmbeddingQuery q;
  q.fine = &fine;
  q.coarse = &coarse;
  q.u = &u;
  q.v = &v;
  q.p1 = Exponent(p1);
  q.q1 = Exponent(q1);
  q.p2 = Exponent(p2);
  q.q2 = Exponent(q2);
  q.direction = dir;
  return q;
}

AlphaModulationQuery alphaQuery(double a, double b, double p1, double q1, double s1, double p2, double q2, double s2) {
  AlphaModulationQuery q;
  q.alpha = a;
  q.beta = b;
  q.p1 = Exponent(p1);
  q.q1 = Exponent(q1);
  q.p2 = Exponent(p2);
  q.q2 = Exponent(q2);
  q.s1 = s1;
  q.s2 = s2;
  return q;
}

ShearletBesovQuery sbQuery(double c, double gamma, double p1 = 2, double q1 = 2, double p2 = 2, double q2 = 2) {
  ShearletBesovQuery q;
  q.c = c;
  q.gamma = gamma;
  q.p1 = Exponent(p1);
  q.q1 = Exponent(q1);
  q.p2 = Exponent(p2);
  q.q2 = Exponent(q2);
  return q;
}

}  // namespace

TEST_CASE("exponent algebra") {
  CHECK(Exponent(1).conjugate().isInfinite());
  CHECK(Exponent(4).triangleUp().value() == 4.0);
  CHECK(Exponent(4).triangleDown().value() == doctest::Approx(4.0 / 3.0));
  CHECK(holderExponent(Exponent(2), Exponent(4)).value() == doctest::Approx(4.0));
  CHECK(holderExponent(Exponent(4), Exponent(2)).isInfinite());
  CHECK(holderExponent(Exponent(2), Exponent(2)).isInfinite());
  CHECK(holderExponent(Exponent(1), Exponent::infinity()).value() == 1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> inv(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    Exponent p = Exponent::fromReciprocal(inv(rng));
    Exponent pp = p.conjugate().conjugate();
    if (p.isInfinite())
      CHECK(pp.isInfinite());
    else
      CHECK(pp.value() == doctest::Approx(p.value()).epsilon(1e-12));
    CHECK(p.reciprocal() + p.conjugate().reciprocal() == doctest::Approx(1.0));
    CHECK(p.triangleDown() <= p.triangleUp());
  }
}

TEST_CASE("sequence norms") {
  CHECK(sequenceNorm({3, 4}, Exponent(2)) == doctest::Approx(5.0));
  CHECK(sequenceNorm({3, 4}, Exponent::infinity()) == 4.0);
  CHECK(sequenceNorm({1e200, 1e200}, Exponent(2)) == doctest::Approx(std::sqrt(2.0) * 1e200));
  CHECK(sequenceNorm({}, Exponent(1)) == 0.0);
}

TEST_CASE("finiteness classification of synthetic sequences") {
  auto run = [](double power, Exponent rho) {
    PartialValues pv;
    pv.outer = rho;
    pv.radius = {64, 128, 256, 512};
    std::vector<double> blocks(4, 0.0);
    double acc = 0.0;
    for (int j = 1; j <= 512; ++j) {
      std::size_t k = j <= 64 ? 0 : j <= 128 ? 1 : j <= 256 ? 2 : 3;
      double x = std::pow(j, power);
      blocks[k] = rho.isInfinite() ? std::max(blocks[k], x) : blocks[k] + std::pow(x, rho.value());
    }
    for (double b : blocks) {
      acc = rho.isInfinite() ? std::max(acc, b) : acc + b;
      pv.values.push_back(rho.isInfinite() ? acc : std::pow(acc, 1.0 / rho.value()));
    }
    return classifyPartials(pv, blocks);
  };
  CHECK(run(-2.0, Exponent(1)) == Finiteness::Finite);
  CHECK(run(-0.6, Exponent(2)) == Finiteness::Finite);
  CHECK(run(-0.4, Exponent(2)) == Finiteness::Infinite);
  CHECK(run(-1.0, Exponent(1)) == Finiteness::BoundaryUndecided);
  CHECK(run(0.0, Exponent::infinity()) == Finiteness::Finite);
  CHECK(run(-1.0, Exponent::infinity()) == Finiteness::Finite);
  CHECK(run(0.5, Exponent::infinity()) == Finiteness::Infinite);
}

TEST_CASE("identity query embeds") {
  Covering u = makeUniform(1, 40);
  auto w = makeWeight({{"generator", "alphaPower"}, {"gamma", 1.0}}, u);
  for (double p : {1.0, 2.0, kInf}) {
    auto q = query(u, u, w, w, p, 2, p, 2, Direction::QIntoP);
    auto v = decideGeneral(q);
    CHECK(v.holds == Holds::Yes);
    auto c = embeddingConstants(q, Exponent(p).triangleDown());
    CHECK(c.C1.verdict == Finiteness::Finite);
    CHECK(c.C1.values.back() <= 3.0 * std::pow(41.0 / 40.0, 1.0) + 1e-9);
    q.direction = Direction::PIntoQ;
    CHECK(decideGeneral(q).holds == Holds::Yes);
  }
}

TEST_CASE("uniform into dyadic constants") {
  Covering u = makeUniform(1, 80);
  Covering d = makeDyadic(1, 5);
  auto one = makeWeight({{"generator", "constant"}, {"value", 1.0}}, u);
  auto oneD = makeWeight({{"generator", "constant"}, {"value", 1.0}}, d);
  auto q = query(u, d, one, oneD, 2, 2, 2, 2, Direction::QIntoP);
  auto c = embeddingConstants(q, Exponent(2));
  CHECK(c.C1.outer.isInfinite());
  for (double x : c.C1.values) CHECK(x == doctest::Approx(1.0));
  CHECK(c.C1.verdict == Finiteness::Finite);
  auto v = decideGeneral(q);
  CHECK(v.holds == Holds::Yes);
  CHECK(v.trace.size() == 4);

  auto grow = makeWeight({{"generator", "dyadicPower"}, {"s", 1.0}}, d);
  q.v = &grow;
  auto cg = embeddingConstants(q, Exponent(2));
  CHECK(cg.C1.verdict == Finiteness::Infinite);
  CHECK(decideGeneral(q).holds == Holds::No);
}

TEST_CASE("p comparison binds") {
  Covering u = makeUniform(1, 40);
  Covering d = makeDyadic(1, 4);
  auto one = makeWeight({{"generator", "constant"}, {"value", 1.0}}, u);
  auto oneD = makeWeight({{"generator", "constant"}, {"value", 1.0}}, d);
  auto v = decideGeneral(query(u, d, one, oneD, 2, 2, 4, 2, Direction::PIntoQ));
  CHECK(v.holds == Holds::No);
  CHECK(v.bindingCondition == "p₂ ≤ p₁");
  auto w = decideGeneral(query(u, d, one, oneD, 4, 2, 2, 2, Direction::QIntoP));
  CHECK(w.holds == Holds::No);
  CHECK(w.bindingCondition == "p₁ ≤ p₂");
}

TEST_CASE("missing subordination is refused") {
  Covering d = makeDyadic(1, 5);
  Covering u = makeUniform(1, 80);
  auto wd = makeWeight({{"generator", "constant"}, {"value", 1.0}}, d);
  auto wu = makeWeight({{"generator", "constant"}, {"value", 1.0}}, u);
  CHECK_THROWS_AS(decideGeneral(query(d, u, wd, wu, 2, 2, 2, 2, Direction::QIntoP)), PreconditionError);
}

TEST_CASE("C1 partial values are monotone and representatives agree") {
  AlphaCoveringParams cp;
  cp.alpha = 0.5;
  cp.truncationRadius = 24;
  Covering coarse = makeAlpha(cp);
  AlphaCoveringParams fp;
  fp.alpha = 0.0;
  fp.truncationRadius = 760;
  Covering fine = makeAlpha(fp);
  auto rel = intersectionSets(fine, coarse);
  for (double s : {-0.5, 0.0, 0.5}) {
    auto u = makeWeight({{"generator", "alphaPower"}, {"gamma", 0.5}}, fine);
    auto v = makeWeight({{"generator", "alphaPower"}, {"gamma", 2 * (0.5 + s)}}, coarse);
    for (double q1 : {1.0, 2.0, kInf})
      for (double q2 : {1.0, 2.0, kInf})
        for (auto dir : {Direction::QIntoP, Direction::PIntoQ}) {
          auto q = query(fine, coarse, u, v, 2, q1, 2, q2, dir);
          q.relations = &rel;
          q.truncationSchedule = {20, 40, 80, 160, 320};
          auto a = embeddingConstants(q, Exponent(2));
          for (std::size_t k = 1; k < a.C1.values.size(); ++k) CHECK(a.C1.values[k] >= a.C1.values[k - 1]);
          q.representative = Representative::Last;
          auto b = embeddingConstants(q, Exponent(2));
          CHECK(a.C2.verdict == b.C2.verdict);
          double ratio = a.C2.values.back() / b.C2.values.back();
          double bound = relativeModerateConstant(fine, u, rel);
          CHECK(ratio <= bound + 1e-9);
          CHECK(ratio >= 1.0 / bound - 1e-9);
        }
  }
}

TEST_CASE("alpha modulation closed form") {
  CHECK(decideAlphaModulation(alphaQuery(0.3, 0.3, 2, 2, 1, 2, 2, 1)).holds == Holds::Yes);
  auto no = decideAlphaModulation(alphaQuery(0.3, 0.3, 2, 2, 1, 2, 2, 1.01));
  CHECK(no.holds == Holds::No);
  CHECK(no.mode == Mode::ClosedForm);
  CHECK(decideAlphaModulation(alphaQuery(0, 1, 2, 2, 0.7, 2, 2, 0.7)).holds == Holds::Yes);
  auto pBad = decideAlphaModulation(alphaQuery(0.2, 0.5, 4, 2, 0, 2, 2, -5));
  CHECK(pBad.holds == Holds::No);
  CHECK(pBad.bindingCondition == "p₁ ≤ p₂");
  CHECK(decideAlphaModulation(alphaQuery(0.5, 0.5, 4, 1, 0, 4, 1, 0)).holds == Holds::Yes);
  CHECK_THROWS_AS(decideAlphaModulation(alphaQuery(0.6, 0.2, 2, 2, 0, 2, 2, 0)), ArgumentError);
  // M^0_{2,2} -> B^{1/2}_{2,2} fails, M^0_{2,2} -> B^0_{2,2} holds
  CHECK(decideAlphaModulation(alphaQuery(0, 1, 2, 2, 0, 2, 2, 0.5)).holds == Holds::No);
  auto strict = alphaQuery(0, 0.5, 2, 2, 0, 2, 1, 0);
  auto sv = decideAlphaModulation(strict);
  CHECK(sv.holds == Holds::No);
  CHECK(sv.constants["strict"] == true);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ab(0.0, 1.0), inv(0.0, 1.0), s(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    double a = ab(rng), b = ab(rng);
    if (a > b) std::swap(a, b);
    double p = 1.0 / std::max(inv(rng), 1e-3), q = 1.0 / std::max(inv(rng), 1e-3), sx = s(rng);
    for (auto dir : {Direction::QIntoP, Direction::PIntoQ}) {
      auto aq = alphaQuery(a, a, p, q, sx, p, q, sx);
      aq.direction = dir;
      CHECK(decideAlphaModulation(aq).holds == Holds::Yes);
    }
  }
}

TEST_CASE("shearlet into Besov closed form") {
  auto y = decideShearletBesov(sbQuery(1, 0));
  CHECK(y.alpha1 == doctest::Approx(0.0));
  CHECK(y.gamma1Sufficient == doctest::Approx(0.0));
  CHECK(y.sufficient.holds == Holds::Yes);
  CHECK(decideShearletBesov(sbQuery(1, -0.5)).sufficient.holds == Holds::Yes);
  CHECK(decideShearletBesov(sbQuery(1, 0.25)).sufficient.holds == Holds::No);
  CHECK(decideShearletBesov(sbQuery(1, 0.25)).necessary.holds == Holds::No);
  CHECK(decideShearletBesov(sbQuery(0.5, 0)).sufficient.holds == Holds::Yes);
  CHECK(decideShearletBesov(sbQuery(0.5, 0.01)).sufficient.holds == Holds::No);
  CHECK_THROWS_AS(decideShearletBesov(sbQuery(0, 0)), ArgumentError);
  CHECK_THROWS_AS(decideShearletBesov(sbQuery(1.5, 0)), ArgumentError);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0), g(-2.0, 2.0);
  for (int k = 0; k < 200; ++k) {
    auto q = sbQuery(std::max(unit(rng), 1e-3), g(rng), 1.0 / std::max(unit(rng), 1e-3),
                     1.0 / std::max(unit(rng), 1e-3), 1.0 + unit(rng), 1.0 / std::max(unit(rng), 1e-3));
    q.alpha = g(rng);
    q.beta = g(rng) / 4;
    auto v = decideShearletBesov(q);
    bool same = v.sufficient.holds == v.necessary.holds;
    CHECK(same);
    if (v.sufficient.holds == Holds::Yes) CHECK(v.necessary.holds == Holds::Yes);
  }
}
