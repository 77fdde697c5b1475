#include "harmcover/exponent.hpp"

#include <algorithm>
#include <sstream>

#include "harmcover/errors.hpp"

namespace harmcover {

Exponent::Exponent(double value) : value_(value) {
  if (std::isnan(value) || value < 1.0) {
    throw ArgumentError("exponent must lie in [1, inf], got " + std::to_string(value));
  }
}

Exponent Exponent::fromReciprocal(double inv) {
  if (inv < -1e-15 || inv > 1.0 + 1e-15) {
    throw ArgumentError("reciprocal exponent outside [0, 1]");
  }
  inv = std::clamp(inv, 0.0, 1.0);
  return inv == 0.0 ? infinity() : Exponent(1.0 / inv);
}

Exponent Exponent::conjugate() const { return fromReciprocal(1.0 - reciprocal()); }

Exponent Exponent::triangleUp() const { return std::max(*this, conjugate()); }

Exponent Exponent::triangleDown() const { return std::min(*this, conjugate()); }

std::string Exponent::toString() const {
  if (isInfinite()) return "inf";
  std::ostringstream os;
  os << value_;
  return os.str();
}

Exponent holderExponent(Exponent s, Exponent t) {
  return Exponent::fromReciprocal(positivePart(s.reciprocal() - t.reciprocal()));
}

Exponent parseExponent(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "∞") {
    return Exponent::infinity();
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ArgumentError("cannot parse exponent '" + text + "'");
  }
  if (used != text.size()) throw ArgumentError("cannot parse exponent '" + text + "'");
  return Exponent(v);
}

}  // namespace harmcover
