#pragma once

#include <optional>
#include <string>
#include <vector>

#include "harmcover/covering.hpp"
#include "harmcover/group.hpp"

namespace harmcover {

Covering makeUniform(int d, int truncation);
Covering makeDyadic(int d, int nMax);

struct AlphaCoveringParams {
  double alpha = 0.5;
  int d = 1;
  double r = 0.0;  // <= 0 selects the automatic radius
  int truncationRadius = 20;
};

/// Least radius covering the verification lattice (including the origin),
/// found by bisection, before the 1.1 safety factor.
double minimalAlphaRadius(double alpha, int d);
Covering makeAlpha(const AlphaCoveringParams& params);

struct ShearletQParams {
  double u0 = 0.0;  // <= 0 selects defaults
  double u1 = 0.0;
  double w = 0.0;
  bool autoWiden = true;
};

struct ShearletParams {
  double c = 0.5;
  double delta = 1.0;
  int jMin = -3;
  int jMax = 5;
  int kMax = 24;
  ShearletQParams q;
};

/// Induced covering (h^{-T} Q) over the well-spread family h_{j,k,ε}.
Covering makeShearletInduced(const ShearletParams& params);
ShearletParams shearletParamsOf(const Covering& cov);
/// Group element behind a shearlet-covering label (j, k, ε).
GroupElement shearletElement(const Covering& cov, const Label& label);

/// Sampling spec over the claim region of a truncated covering, with an
/// optional extra blind-spot margin.
SamplingSpec claimSampling(const Covering& cov, int perAxis, double blindMargin = 0.0);

std::optional<bool> zooOracle(const Covering& cov, std::size_t i, std::size_t j);
double zooLabelRadius(const Covering& cov, const Label& label);

/// Positive weight per covering index (aligned with the covering's order).
struct WeightFamily {
  std::vector<Label> labels;
  std::vector<double> values;
  nlohmann::json generator;

  double at(const Covering& cov, std::size_t i) const;
};

/// Generators: constant{value}, alphaPower{gamma}, dyadicPower{s},
/// coorbit{q, alpha, beta}, determinant{power}. A "values" array of
/// {label, value} records overrides the generator on its labels; without a
/// generator the table must list every label.
WeightFamily makeWeight(const nlohmann::json& spec, const Covering& cov);
nlohmann::json toJson(const WeightFamily& w);

}  // namespace harmcover
