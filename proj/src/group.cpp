#include "harmcover/group.hpp"

#include <cmath>

#include "harmcover/errors.hpp"

namespace harmcover {

ShearletGroup::ShearletGroup(double c) : c_(c) {
  if (!(c > 0.0 && c <= 1.0)) throw ArgumentError("anisotropy c must lie in (0, 1]");
}

GroupElement ShearletGroup::mul(const GroupElement& g, const GroupElement& h) const {
  return {g.eps * h.eps, g.a * h.a, g.a * h.b + g.b * std::pow(h.a, c_)};
}

GroupElement ShearletGroup::inv(const GroupElement& h) const {
  return {h.eps, 1.0 / h.a, -h.b * std::pow(h.a, -(1.0 + c_))};
}

Mat ShearletGroup::matrix(const GroupElement& h) const {
  Mat m(2, 2);
  m << h.a, h.b, 0.0, std::pow(h.a, c_);
  return h.eps * m;
}

double ShearletGroup::det(const GroupElement& h) const { return std::pow(h.a, 1.0 + c_); }

Vec ShearletGroup::dualAction(const GroupElement& h, const Vec& xi) const {
  if (xi.size() != 2) throw ArgumentError("dual action needs a 2-vector");
  double ac = std::pow(h.a, c_);
  Vec out(2);
  out(0) = xi(0) / h.a;
  out(1) = -h.b / (h.a * ac) * xi(0) + xi(1) / ac;
  return h.eps * out;
}

double ShearletGroup::inverseNorm(const GroupElement& h) const { return spectralNorm(matrix(inv(h))); }

GroupElement ShearletGroup::sample(int j, int k, int eps, double delta) const {
  if (eps != 1 && eps != -1) throw ArgumentError("ε must be ±1");
  double a = std::ldexp(1.0, j);
  return {eps, a, delta * k * a};
}

}  // namespace harmcover
