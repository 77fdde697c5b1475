#pragma once

#include <complex>
#include <vector>

#include "harmcover/covering.hpp"
#include "harmcover/exponent.hpp"
#include "harmcover/transition.hpp"
#include "harmcover/zoo.hpp"

namespace harmcover {

using Complex = std::complex<double>;

/// Periodic box [−L/2, L/2)^d sampled at N points per axis. Indices are stored
/// in FFT order; coordinates use the signed index n ∈ [−N/2, N/2).
struct GridSpec {
  int d = 1;
  double L = 64.0;
  int N = 4096;

  void validate() const;
  std::size_t total() const;
  double spacing() const { return L / N; }
  double nyquist() const { return 0.5 * N / L; }
  int signedIndex(int n) const { return n < N / 2 ? n : n - N; }
  /// Frequency ξ_m = m / L at a flat index.
  Vec frequency(std::size_t flat) const;
  /// Position x_n = n L / N at a flat index.
  Vec position(std::size_t flat) const;
  /// Flat index of a signed multi-index.
  std::size_t flatIndex(const std::vector<int>& signedIdx) const;
};

nlohmann::json toJson(const GridSpec& g);
GridSpec gridFromJson(const nlohmann::json& j);

enum class Domain { Space, Frequency };

struct GridFunction {
  GridSpec grid;
  Domain domain = Domain::Space;
  std::vector<Complex> samples;

  static GridFunction zeros(const GridSpec& g, Domain dom);
};

/// f̂(ξ_m) = (L/N)^d Σ_n f(x_n) e^{−2πi x_n ξ_m}
GridFunction toFrequency(const GridFunction& f);
/// f(x_n) = L^{−d} Σ_m f̂(ξ_m) e^{2πi x_n ξ_m}
GridFunction toSpace(const GridFunction& f);

/// Riemann-sum L^p norm of a space-domain function.
double lpNorm(const GridFunction& f, Exponent p);
/// ‖f‖_{L²} computed from either domain.
double l2Norm(const GridFunction& f);

/// Analytic signals, sampled in the frequency domain:
///   gaussian {center, width, amplitude}: f(x) = A exp(−π|x−c|²/w²)
///   modulatedGaussian {center, width, frequency, amplitude}
///   coveringBump {label} needs a covering; see witnessFamily.
GridFunction makeSignal(const nlohmann::json& spec, const GridSpec& g, const Covering* cov = nullptr);

/// Fraction of L² energy of f̂ with |ξ|_∞ ≤ band.
double energyWithin(const GridFunction& f, double band);

struct BAPUFamily {
  const Covering* covering = nullptr;
  GridSpec grid;
  double shrink = 0.7;
  Profile profile = Profile::BumpIntegral;
  /// φ_i as sparse (flat index, value) lists, aligned with the covering order.
  std::vector<std::vector<std::pair<std::size_t, double>>> phi;
  /// Grid points in O where some φ_i is nonzero.
  std::vector<char> covered;

  /// Dense frequency-domain samples of φ_i.
  GridFunction dense(std::size_t i) const;
};

BAPUFamily buildBAPU(const Covering& cov, const GridSpec& grid, double shrink = 0.7,
                     Profile profile = Profile::BumpIntegral);

/// max |Σ_i φ_i − 1| over covered grid points inside the covering's claim region.
double partitionDeviation(const BAPUFamily& bapu);

/// ‖F⁻¹(φ_i f̂)‖_{L^p} per covering index (zero pieces report 0).
std::vector<double> pieceNorms(const GridFunction& f, const BAPUFamily& bapu, Exponent p);
double decompositionNorm(const GridFunction& f, const BAPUFamily& bapu, Exponent p, Exponent q,
                         const WeightFamily& u);

/// Largest ball inside the image set T_i Q' + b_i: center and radius.
std::pair<Vec, double> inscribedBallOf(const Covering& cov, std::size_t i);

/// Smooth L²-normalized bumps supported in the inscribed ball of each labelled set.
std::vector<GridFunction> witnessFamily(const Covering& cov, const std::vector<Label>& chain, const GridSpec& grid);

}  // namespace harmcover
