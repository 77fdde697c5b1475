#include "doctest.h"
#include "harmcover/errors.hpp"
#include "harmcover/relations.hpp"

using namespace harmcover;

namespace {
std::vector<Label> labelsOf(const Covering& c, const std::vector<std::size_t>& idx) {
  std::vector<Label> out;
  for (auto i : idx) out.push_back(c.label(i));
  return out;
}
}  // namespace

TEST_CASE("intersection sets uniform into dyadic") {
  Covering u = makeUniform(1, 40);
  Covering d = makeDyadic(1, 4);
  auto r = intersectionSets(u, d);
  auto I0 = labelsOf(u, r.I[d.indexOf({0})]);
  CHECK(I0 == std::vector<Label>{{-2}, {-1}, {0}, {1}, {2}});
  for (std::size_t j = 0; j < d.size(); ++j) CHECK(r.inJO[j]);
  auto g = intersectionSetsGeometric(u, d);
  // geometric decision adds exactly the tangent pairs
  for (std::size_t j = 0; j < d.size(); ++j) {
    for (auto i : r.I[j]) CHECK(std::count(g.I[j].begin(), g.I[j].end(), i) == 1);
  }
}

TEST_CASE("intersection sets with itself equal neighbor sets") {
  AlphaCoveringParams p;
  p.alpha = 0.5;
  p.truncationRadius = 12;
  Covering a = makeAlpha(p);
  auto r = intersectionSets(a, a);
  for (std::size_t j = 0; j < a.size(); ++j) CHECK(r.I[j] == a.neighbors()[j]);
}

TEST_CASE("coarse set outside bounded O") {
  std::vector<CoveringSet> fineSets;
  for (int k = -3; k <= 3; ++k) fineSets.push_back({{k}, AffineMap(Mat::Identity(1, 1), Vec::Constant(1, k)), 0});
  Covering fine(1, {BaseSet::box(Vec::Constant(1, -1), Vec::Constant(1, 1))}, fineSets,
                Region::box(Vec::Constant(1, -3), Vec::Constant(1, 3)), OracleId::None, {});
  std::vector<CoveringSet> coarseSets{{{0}, AffineMap::scaling(4.0, Vec::Zero(1)), 0},
                                      {{1}, AffineMap::scaling(1.0, Vec::Constant(1, 100.0)), 0}};
  Covering coarse(1, {BaseSet::ball(Vec::Zero(1), 1.0)}, coarseSets, Region::whole(), OracleId::None, {});
  auto r = intersectionSets(fine, coarse);
  CHECK(r.inJO[0]);
  CHECK_FALSE(r.inJO[1]);
  CHECK(r.I[1].empty());
  CHECK(r.I[0].size() == 7);
}

TEST_CASE("almost subordinate examples") {
  Covering u = makeUniform(1, 30);
  Covering d = makeDyadic(1, 6);
  CHECK(almostSubordinate(u, d).value() == 0);
  CHECK(almostSubordinate(d, d).value() == 0);
  CHECK(almostSubordinate(u, u).value() == 0);
  Covering dSmall = makeDyadic(1, 5);
  Covering uBig = makeUniform(1, 80);
  CHECK_FALSE(almostSubordinate(dSmall, uBig, 5).has_value());

  AlphaCoveringParams pa;
  pa.alpha = 0.25;
  pa.truncationRadius = 60;
  Covering fine = makeAlpha(pa);
  pa.alpha = 0.5;
  pa.truncationRadius = 30;
  Covering coarse = makeAlpha(pa);
  auto n = almostSubordinate(fine, coarse);
  REQUIRE(n.has_value());
  for (int m = *n; m <= 8; ++m) CHECK(almostSubordinate(fine, coarse, m).has_value());

  ShearletParams sp;
  sp.jMin = 0;
  sp.jMax = 1;
  sp.kMax = 2;
  Covering s = makeShearletInduced(sp);
  CHECK_THROWS_AS(almostSubordinate(u, coarse.dim() == 1 ? makeDyadic(2, 3) : s), ArgumentError);
  std::vector<CoveringSet> bs{{{0}, AffineMap::identity(1), 0}};
  Covering boxed(1, {BaseSet::box(Vec::Constant(1, -5), Vec::Constant(1, 5))}, bs,
                 Region::box(Vec::Constant(1, -5), Vec::Constant(1, 5)), OracleId::None, {});
  CHECK_THROWS_AS(almostSubordinate(u, boxed), PreconditionError);
}

TEST_CASE("moderateness constants") {
  Covering u = makeUniform(1, 20);
  auto one = makeWeight({{"generator", "constant"}}, u);
  auto r = moderateConstants(u, one, &u);
  CHECK(*r.C_uQ == 1.0);
  CHECK(*r.relModConstant == 1.0);

  for (double g : {0.5, 1.0, 2.0}) {
    auto w = makeWeight({{"generator", "alphaPower"}, {"gamma", g}}, u);
    auto c = moderateConstant(u, w);
    CHECK(c.first == doctest::Approx(std::pow(2.0, g)));
    CHECK(c.second);
    auto self = moderateConstants(u, w, &u);
    CHECK(*self.relModConstant <= c.first * c.first * (1 + 1e-12));
  }

  Covering d = makeDyadic(1, 5);
  auto det = makeWeight({{"generator", "determinant"}}, u);
  auto rel = moderateConstants(u, det, &d);
  CHECK(*rel.relModConstant == 1.0);

  AlphaCoveringParams p;
  p.alpha = 0.5;
  p.truncationRadius = 100;
  Covering a = makeAlpha(p);
  auto wa = makeWeight({{"generator", "alphaPower"}, {"gamma", 3.0}}, a);
  auto ca = moderateConstant(a, wa);
  CHECK(ca.first < 100.0);
  p.truncationRadius = 200;
  Covering a2 = makeAlpha(p);
  CHECK(moderateConstant(a2, makeWeight({{"generator", "alphaPower"}, {"gamma", 3.0}}, a2)).first ==
        doctest::Approx(ca.first));
}

TEST_CASE("intersection sets closed form vs geometric on zoo pairs") {
  Covering u = makeUniform(1, 40);
  Covering d = makeDyadic(1, 4);
  AlphaCoveringParams p;
  p.alpha = 0.5;
  p.truncationRadius = 8;
  Covering a = makeAlpha(p);
  for (auto [f, c] : std::vector<std::pair<const Covering*, const Covering*>>{{&u, &d}, {&u, &a}, {&a, &d}}) {
    for (std::size_t j = 0; j < c->size(); ++j)
      for (std::size_t i = 0; i < f->size(); ++i) {
        auto sep = setSeparation(*f, i, *c, j);
        REQUIRE(sep.has_value());
        if (std::abs(*sep) <= 1e-9 * 100) continue;
        REQUIRE((*sep < 0) == setsMeetGeometric(*f, i, *c, j));
      }
  }
}
