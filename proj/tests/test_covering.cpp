#include "doctest.h"
#include "harmcover/covering.hpp"
#include "harmcover/errors.hpp"
#include "harmcover/zoo.hpp"

using namespace harmcover;

namespace {
Vec v1(double x) { return Vec::Constant(1, x); }
Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}
}  // namespace

TEST_CASE("contains respects open sets") {
  Covering u = makeUniform(1, 5);
  std::size_t i0 = u.indexOf({0});
  CHECK(u.contains(i0, v1(0.0)));
  CHECK_FALSE(u.contains(i0, v1(1.0)));
  CHECK_THROWS_AS(u.contains(u.size(), v1(0.0)), IndexError);

  AlphaCoveringParams p;
  p.alpha = 0.5;
  p.r = 0.6;
  p.truncationRadius = 10;
  Covering a = makeAlpha(p);
  CHECK(a.contains(a.indexOf({2}), v1(4.0)));
}

TEST_CASE("pairwise intersection examples") {
  Covering u = makeUniform(1, 5);
  CHECK(setsIntersect(u, u.indexOf({0}), u.indexOf({1})));
  CHECK_FALSE(setsIntersect(u, u.indexOf({0}), u.indexOf({3})));
  CHECK_FALSE(setsIntersect(u, u.indexOf({0}), u.indexOf({2})));

  AlphaCoveringParams p;
  p.alpha = 0.5;
  p.r = 0.6;
  p.truncationRadius = 10;
  Covering a = makeAlpha(p);
  CHECK_FALSE(setsIntersect(a, a.indexOf({1}), a.indexOf({2})));
  CHECK_FALSE(setsIntersectGeometric(a, a.indexOf({1}), a.indexOf({2})));
}

TEST_CASE("neighbor sets iterate") {
  Covering u = makeUniform(1, 5);
  std::size_t i0 = u.indexOf({0});
  IndexSet one = neighborSets(u, {i0}, 1);
  IndexSet expect1{u.indexOf({-1}), i0, u.indexOf({1})};
  CHECK(one == expect1);
  IndexSet two = neighborSets(u, {i0}, 2);
  CHECK(two.size() == 5);
  CHECK(two.count(u.indexOf({-2})) == 1);
  CHECK(neighborSets(u, {i0}, 0) == IndexSet{i0});
}

TEST_CASE("covering constants") {
  auto r2 = coveringConstants(makeUniform(2, 4));
  CHECK(r2.N_Q == 9);
  CHECK(r2.C_Q == 1.0);
  CHECK(r2.nqStable);
  auto r1 = coveringConstants(makeUniform(1, 4));
  CHECK(r1.N_Q == 3);
  auto dy = coveringConstants(makeDyadic(1, 8));
  CHECK(dy.N_Q == 3);
  CHECK(dy.C_Q == 2.0);
  auto dy2 = coveringConstants(makeDyadic(2, 6));
  CHECK(dy2.N_Q == 3);
  CHECK(dy2.C_Q == 2.0);
}

TEST_CASE("dyadic sets and neighbors") {
  Covering d = makeDyadic(1, 6);
  std::size_t n2 = d.indexOf({2});
  CHECK(d.contains(n2, v1(3.0)));
  CHECK(d.contains(n2, v1(-7.9)));
  CHECK_FALSE(d.contains(n2, v1(2.0)));
  CHECK_FALSE(d.contains(n2, v1(8.0)));
  CHECK(d.neighbors()[d.indexOf({0})] == std::vector<std::size_t>{d.indexOf({0}), d.indexOf({1})});
}

TEST_CASE("verify covering") {
  SamplingSpec s;
  s.lo = v1(-10);
  s.hi = v1(10);
  s.perAxis = 10000;
  CHECK(verifyCovering(makeUniform(1, 12), s).coverageFraction == 1.0);

  SamplingSpec t;
  t.lo = v1(-100);
  t.hi = v1(100);
  t.perAxis = 20001;
  t.minRadius = 0.01;
  CHECK(verifyCovering(makeDyadic(1, 7), t).coverageFraction == 1.0);

  AlphaCoveringParams p;
  p.alpha = 0.5;
  p.r = 0.1;
  p.truncationRadius = 10;
  SamplingSpec a;
  a.lo = v1(-50);
  a.hi = v1(50);
  a.perAxis = 4001;
  a.minRadius = 0.5;
  CHECK(verifyCovering(makeAlpha(p), a).coverageFraction < 1.0);

  SamplingSpec empty;
  empty.lo = v1(0);
  empty.hi = v1(1);
  CHECK_THROWS_AS(verifyCovering(makeUniform(1, 2), empty), ArgumentError);
}

TEST_CASE("alpha auto radius covers") {
  AlphaCoveringParams p;
  p.alpha = 0.5;
  p.truncationRadius = 12;
  Covering a = makeAlpha(p);
  SamplingSpec s;
  s.lo = v1(-50);
  s.hi = v1(50);
  s.perAxis = 4001;
  s.minRadius = 0.5;
  CHECK(verifyCovering(a, s).coverageFraction == 1.0);
  CHECK(a.set(a.indexOf({2})).map.offset()(0) == doctest::Approx(4.0));
  double r = a.truncation().params["r"].get<double>();
  CHECK(*a.set(a.indexOf({2})).map.scalar() == doctest::Approx(2.0 * r));
  p.alpha = 1.0;
  CHECK_THROWS_AS(makeAlpha(p), ArgumentError);
}

TEST_CASE("alpha zero matches uniform neighbor graph") {
  for (int d : {1, 2}) {
    AlphaCoveringParams p;
    p.alpha = 0.0;
    p.d = d;
    p.r = 1.0;
    p.truncationRadius = 4;
    Covering a = makeAlpha(p);
    Covering u = makeUniform(d, 4);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j) {
        bool x = setsIntersect(a, i, j);
        bool y = setsIntersect(u, u.indexOf(a.label(i)), u.indexOf(a.label(j)));
        REQUIRE(x == y);
      }
  }
}

TEST_CASE("symmetry reflexivity and oracle agreement") {
  std::vector<Covering> zoo{makeUniform(1, 6), makeUniform(2, 3), makeDyadic(1, 5), makeDyadic(2, 5)};
  AlphaCoveringParams p;
  p.alpha = 0.5;
  p.truncationRadius = 15;
  zoo.push_back(makeAlpha(p));
  p.d = 2;
  p.truncationRadius = 4;
  zoo.push_back(makeAlpha(p));
  ShearletParams sp;
  sp.jMin = -1;
  sp.jMax = 2;
  sp.kMax = 4;
  zoo.push_back(makeShearletInduced(sp));
  for (const auto& cov : zoo) {
    for (std::size_t i = 0; i < cov.size(); ++i) {
      CHECK(setsIntersect(cov, i, i));
      for (std::size_t j = i + 1; j < cov.size(); ++j) {
        REQUIRE(setsIntersect(cov, i, j) == setsIntersect(cov, j, i));
        auto sep = setSeparation(cov, i, cov, j);
        REQUIRE(sep.has_value());
        double tol = 1e-9 * std::max({1.0, cov.bbox(i).hi.cwiseAbs().maxCoeff(), cov.bbox(i).lo.cwiseAbs().maxCoeff(),
                                      cov.bbox(j).hi.cwiseAbs().maxCoeff(), cov.bbox(j).lo.cwiseAbs().maxCoeff()});
        if (std::abs(*sep) <= tol) continue;
        INFO(cov.truncation().family, " ", labelToString(cov.label(i)), " ", labelToString(cov.label(j)));
        REQUIRE(*oracleIntersect(cov, i, j) == (*sep < 0));
        REQUIRE(setsIntersectGeometric(cov, i, j) == (*sep < 0));
      }
    }
  }
}

TEST_CASE("json round trip") {
  ShearletParams sp;
  sp.jMin = 0;
  sp.jMax = 1;
  sp.kMax = 2;
  for (const Covering& c : {makeUniform(2, 2), makeDyadic(1, 4), makeShearletInduced(sp)}) {
    auto j = toJson(c);
    Covering back = coveringFromJson(j);
    CHECK(toJson(back).dump() == j.dump());
    auto a = coveringConstants(c);
    auto b = coveringConstants(back);
    CHECK(a.N_Q == b.N_Q);
    CHECK(a.C_Q == b.C_Q);
  }
}

TEST_CASE("shearlet identity set and weights") {
  ShearletParams sp;
  sp.jMin = -1;
  sp.jMax = 1;
  sp.kMax = 2;
  sp.q.autoWiden = false;
  Covering s = makeShearletInduced(sp);
  const auto& m = s.set(s.indexOf({0, 0, 1})).map;
  CHECK((m.matrix() - Mat::Identity(2, 2)).norm() == 0.0);
  CHECK(s.bases().size() == 1);

  auto w = makeWeight({{"generator", "coorbit"}, {"q", 2.0}}, s);
  for (double v : w.values) CHECK(v == doctest::Approx(1.0));

  ShearletParams one = sp;
  one.c = 1.0;
  Covering s1 = makeShearletInduced(one);
  auto w1 = makeWeight({{"generator", "coorbit"}, {"q", 1.0}}, s1);
  CHECK(w1.at(s1, s1.indexOf({1, 0, 1})) == doctest::Approx(0.5));

  Covering u = makeUniform(1, 3);
  auto wa = makeWeight({{"generator", "alphaPower"}, {"gamma", 2.0}}, u);
  CHECK(wa.at(u, u.indexOf({1})) == doctest::Approx(4.0));
  CHECK_THROWS_AS(makeWeight({{"generator", "dyadicPower"}, {"s", 1.0}}, u), ArgumentError);
}
