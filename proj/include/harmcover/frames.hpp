#pragma once

#include <optional>

#include "harmcover/grid.hpp"

namespace harmcover {

struct FrameParams {
  /// Half side of Q_a; 0 picks the smallest a with Q ⊆ [−a, a]^d plus 5%, rounded so 2aL is an integer.
  double a = 0.0;
  int nMax = 32;
  double shrink = 0.7;
  Profile profile = Profile::BumpIntegral;
};

/// θ_i = φ_i / √(Σ_j φ_j²) over a structured covering, with exponential atoms
/// e_{n,i}(ξ) = (2a)^{−d/2} |det T_i|^{−1/2} χ_{Q_a}(y) e^{iπ n·y/a}, y = T_i^{−1}(ξ − b_i).
struct TightFrame {
  const Covering* covering = nullptr;
  GridSpec grid;
  double a = 1.0;
  int nMax = 32;
  double shrink = 0.7;
  Profile profile = Profile::BumpIntegral;
  std::vector<std::vector<std::pair<std::size_t, double>>> theta;
  std::vector<char> covered;
  /// Sets whose neighbor count is maximal; their union is the trusted band.
  std::vector<char> interior;

  std::size_t atomsPerSet() const;
  std::vector<int> modulation(std::size_t flat) const;
  std::size_t modulationIndex(const std::vector<int>& n) const;
  Complex exponential(std::size_t i, const std::vector<int>& n, const Vec& xi) const;
  /// η_{n,i} in the space domain.
  GridFunction atom(std::size_t i, const std::vector<int>& n) const;
  /// θ_i at an arbitrary frequency (not only grid points).
  double thetaAt(std::size_t i, const Vec& xi) const;
};

TightFrame buildTightFrame(const Covering& cov, const GridSpec& grid, const FrameParams& params = {});

/// max |Σ_i θ_i² − 1| over covered grid points inside the claim region.
double quadraticPartitionDefect(const TightFrame& frame);

/// max |⟨e_{n,i}, e_{n',i}⟩ − δ_{n,n'}| by grid quadrature over T_i Q_a + b_i, for ‖n‖∞, ‖n'‖∞ ≤ range.
double exponentialGramDefect(const TightFrame& frame, std::size_t i, int range);

/// sup_i of |∂^α[θ_i(T_i· + b_i)]| for |α| ≤ order by central differences on a lattice in Q_a.
double thetaDerivativeBound(const TightFrame& frame, int order, int perAxis = 64);

struct FrameCoefficients {
  int d = 1;
  int nMax = 0;
  Exponent p{2.0};
  std::vector<std::size_t> sets;
  /// Per set, (2 nMax + 1)^d values, row-major in n ∈ [−nMax, nMax]^d.
  std::vector<std::vector<Complex>> values;
};

/// ⟨f, η^{(p)}_{n,i}⟩ = |det T_i|^{1/2 − 1/p} ⟨f, η_{n,i}⟩ over all sets or a subset.
FrameCoefficients frameAnalyze(const GridFunction& f, const TightFrame& frame,
                               std::optional<std::vector<std::size_t>> subset = std::nullopt,
                               Exponent p = Exponent(2.0));
/// Σ c_{n,i} η_{n,i} (the p-normalization is undone first).
GridFunction frameSynthesize(const FrameCoefficients& c, const TightFrame& frame);

struct FrameCheck {
  int nMax = 0;
  double parsevalDefect = 0.0;
  double reconstructionError = 0.0;
  /// Coefficient energy with ‖n‖∞ > nMax/2, relative to ‖f‖².
  double tailEstimate = 0.0;
  double energyRatio = 0.0;
  double inBandEnergy = 0.0;
};

FrameCheck parsevalAndReconstruct(const GridFunction& f, const TightFrame& frame);

nlohmann::json toJson(const FrameCoefficients& c, const Covering& cov);
nlohmann::json toJson(const FrameCheck& r);

}  // namespace harmcover
