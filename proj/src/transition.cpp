#include "harmcover/transition.hpp"

#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "harmcover/errors.hpp"

namespace harmcover {

namespace {

constexpr int kCells = 512;

struct BumpTable {
  std::array<double, kCells + 1> cumulative{};
  double total = 0.0;

  BumpTable() {
    using Gauss = boost::math::quadrature::gauss<double, 20>;
    for (int k = 0; k < kCells; ++k) {
      double a = -1.0 + 2.0 * k / kCells, b = -1.0 + 2.0 * (k + 1) / kCells;
      cumulative[k + 1] = cumulative[k] + Gauss::integrate(bump, a, b);
    }
    total = cumulative[kCells];
  }

  /// ∫_{−1}^{t} bump / ∫_{−1}^{1} bump
  double at(double t) const {
    if (t <= -1.0) return 0.0;
    if (t >= 1.0) return 1.0;
    int k = std::min(kCells - 1, static_cast<int>((t + 1.0) * kCells / 2.0));
    double a = -1.0 + 2.0 * k / kCells;
    double part = boost::math::quadrature::gauss<double, 20>::integrate(bump, a, t);
    return (cumulative[k] + part) / total;
  }
};

const BumpTable& table() {
  static const BumpTable t;
  return t;
}

double expF(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double bump(double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

double transition(Profile p, double x) {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  if (p == Profile::ExpStep) {
    double a = expF(1.0 - x), b = expF(x);
    return a / (a + b);
  }
  return table().at(1.0 - 2.0 * x);
}

std::string nameOf(Profile p) { return p == Profile::ExpStep ? "expStep" : "bumpIntegral"; }

Profile parseProfile(const std::string& s) {
  if (s == "expStep") return Profile::ExpStep;
  if (s == "bumpIntegral") return Profile::BumpIntegral;
  throw ArgumentError("unknown transition profile '" + s + "' (expected bumpIntegral or expStep)");
}

}  // namespace harmcover
