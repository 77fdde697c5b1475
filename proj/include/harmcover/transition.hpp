#pragma once

#include <string>

namespace harmcover {

/// Smooth non-increasing profiles with value 1 on (−∞, 0] and 0 on [1, ∞).
enum class Profile { BumpIntegral, ExpStep };

/// BumpIntegral: 1 − normalized ∫ exp(−1/(1−s²)) ds.  ExpStep: F(1−x)/(F(1−x)+F(x)), F(t) = e^{−1/t}.
double transition(Profile p, double x);

/// exp(−1/(1−t²)) for |t| < 1, else 0.
double bump(double t);

std::string nameOf(Profile p);
Profile parseProfile(const std::string& s);

}  // namespace harmcover
