#pragma once

#include <optional>

#include "harmcover/grid.hpp"

namespace harmcover {

/// Q_{ν,k} = 2^{−ν}(k + [0,1)^d)
struct DyadicCube {
  int nu = 0;
  std::vector<int> k;

  double side() const { return std::ldexp(1.0, -nu); }
  Vec corner() const;
};

/// Radial windows in angular frequency ω = 2πξ:
/// θ ≡ 1 on |ω| ≤ 1, θ ≡ 0 on |ω| ≥ 2, φ̂⁰ = ψ̂⁰ = √θ, φ̂ = ψ̂ = √(θ(ω) − θ(2ω)).
struct WindowSystem {
  Profile profile = Profile::BumpIntegral;
  GridSpec grid;
  GridFunction phi0, phi, psi0, psi;
  /// Window samples on the grid for ν = 0..maxScale(grid).
  std::vector<std::vector<double>> onGrid;

  /// Window value at frequency ξ, dilated by 2^{−ν} (ν = 0 uses the low-pass window).
  double analysisWindow(int nu, const Vec& xi) const;
  double synthesisWindow(int nu, const Vec& xi) const { return analysisWindow(nu, xi); }
};

double thetaWindow(Profile p, double omega);
double lowWindow(Profile p, double omega);
double bandWindow(Profile p, double omega);

WindowSystem makeWindows(const GridSpec& grid, Profile profile = Profile::BumpIntegral);

/// sup over the grid of |conj(φ̂⁰)ψ̂⁰ + Σ_{ν≥1} conj(φ̂(2^{−ν}·))ψ̂(2^{−ν}·) − 1|, with enough
/// scales to cover the grid band.
double identityResidual(const WindowSystem& w);

/// Largest νMax admitted by the grid (2^{νMax+1} < Nyquist/2 in ω, lattice alignment).
int maxScale(const GridSpec& grid);

struct CubeCoefficients {
  GridSpec grid;
  int nuMax = 0;
  /// Dense lattice per scale: M_ν = L·2^ν points per axis, signed k ∈ [−M_ν/2, M_ν/2), row-major.
  std::vector<std::vector<Complex>> values;
  /// Spatial truncation box (cube corners outside are dropped).
  std::optional<AxisBox> box;

  static CubeCoefficients zeros(const GridSpec& grid, int nuMax);
  int perAxis(int nu) const;
  std::size_t flat(int nu, const std::vector<int>& k) const;
  std::vector<int> multiIndex(int nu, std::size_t flat) const;
  bool kept(int nu, std::size_t flat) const;
  Complex& at(const DyadicCube& q);
  Complex at(const DyadicCube& q) const;
};

/// (S_φ f)_Q = ⟨f, φ_Q⟩ (φ⁰ when ℓ(Q) = 1), all cubes of ν ≤ νMax on the periodic box.
CubeCoefficients analyze(const GridFunction& f, const WindowSystem& w, int nuMax,
                         std::optional<AxisBox> box = std::nullopt);
/// T_ψ s = Σ s_Q ψ_Q (ψ⁰ on ν = 0).
GridFunction synthesize(const CubeCoefficients& c, const WindowSystem& w);

enum class SequenceKind { F, B };

/// f^s_{p,q} / b^s_{p,q} norms of the retained coefficients.
double sequenceNorm(const CubeCoefficients& c, SequenceKind kind, double s, Exponent p, Exponent q);

nlohmann::json toJson(const CubeCoefficients& c);
CubeCoefficients coefficientsFromJson(const nlohmann::json& j, const GridSpec& grid);

}  // namespace harmcover
