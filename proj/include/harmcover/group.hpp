#pragma once

#include <cmath>

#include "harmcover/geometry.hpp"

namespace harmcover {

/// ε·[[a, b], [0, a^c]] in the shearlet-type group H^{(c)}.
struct GroupElement {
  int eps = 1;
  double a = 1.0;
  double b = 0.0;
};

class ShearletGroup {
 public:
  explicit ShearletGroup(double c);

  double c() const { return c_; }
  GroupElement identity() const { return {}; }
  GroupElement mul(const GroupElement& g, const GroupElement& h) const;
  GroupElement inv(const GroupElement& h) const;
  Mat matrix(const GroupElement& h) const;
  double det(const GroupElement& h) const;
  /// h^{-T} ξ
  Vec dualAction(const GroupElement& h, const Vec& xi) const;
  /// ‖h^{-1}‖ (spectral norm)
  double inverseNorm(const GroupElement& h) const;

  /// Shear coordinate s = b / a^c and its inverse map.
  double shearCoordinate(const GroupElement& h) const { return h.b / std::pow(h.a, c_); }
  GroupElement fromShear(int eps, double a, double s) const { return {eps, a, s * std::pow(a, c_)}; }

  /// Well-spread sample h_{j,k,ε}: a = 2^j, b = δ·k·2^j.
  GroupElement sample(int j, int k, int eps, double delta) const;

 private:
  double c_;
};

}  // namespace harmcover
