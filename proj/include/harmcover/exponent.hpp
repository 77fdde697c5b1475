#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace harmcover {

/// Integrability exponent in [1, ∞]. Infinity is represented exactly.
class Exponent {
 public:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  Exponent() = default;
  explicit Exponent(double value);

  static Exponent infinity() { return Exponent(kInf); }
  /// Builds the exponent with the given reciprocal 1/p ∈ [0, 1].
  static Exponent fromReciprocal(double inv);

  double value() const noexcept { return value_; }
  double reciprocal() const noexcept { return std::isinf(value_) ? 0.0 : 1.0 / value_; }
  bool isInfinite() const noexcept { return std::isinf(value_); }

  Exponent conjugate() const;
  /// p^△ = max{p, p'}
  Exponent triangleUp() const;
  /// p^▽ = min{p, p'}
  Exponent triangleDown() const;

  std::string toString() const;

  friend bool operator==(const Exponent& a, const Exponent& b) { return a.value_ == b.value_; }
  friend bool operator<(const Exponent& a, const Exponent& b) { return a.value_ < b.value_; }
  friend bool operator<=(const Exponent& a, const Exponent& b) { return a.value_ <= b.value_; }

 private:
  double value_ = 1.0;
};

/// The compound exponent s·(t/s)' written in the embedding constants, i.e. the
/// r with 1/r = (1/s − 1/t)₊. Equals ∞ whenever t ≤ s.
Exponent holderExponent(Exponent s, Exponent t);

/// Parses "inf", "infinity", "∞" or a decimal number.
Exponent parseExponent(const std::string& text);

/// (x)₊
inline double positivePart(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace harmcover
