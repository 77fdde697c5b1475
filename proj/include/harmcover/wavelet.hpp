#pragma once

#include <functional>
#include <optional>

#include "harmcover/grid.hpp"
#include "harmcover/group.hpp"

namespace harmcover {

/// Shear-scale coordinates (a, s), s = b / a^c, with (a₁,s₁)(a₂,s₂) = (a₁a₂, s₁ + a₁^{1−c}s₂).
struct ShearScale {
  double a = 1.0;
  double s = 0.0;
};
ShearScale composeShearScale(double c, ShearScale g, ShearScale h);
ShearScale invertShearScale(double c, ShearScale g);

/// h_{j,k,ε} for j ∈ [jMin, jMax], |k| ≤ kMax, ε = ±1.
std::vector<GroupElement> wellSpreadFamily(const ShearletGroup& group, double delta, int jMin, int jMax, int kMax);

struct WellSpreadReport {
  std::size_t familySize = 0;
  std::size_t samples = 0;
  double coveredFraction = 0.0;
  bool separated = true;
  std::optional<ShearScale> uncovered;
  std::optional<std::pair<std::size_t, std::size_t>> overlapping;
};

/// Checks that (a, s) ∈ [aLo, aHi] × [−sMax, sMax] lies in some h·K₁, K₁ = [1,2) × [−δ/2, δ/2),
/// and that the translates h·K₂, K₂ = [1, 2^{0.9}] × [−0.45δ, 0.45δ], are pairwise disjoint.
WellSpreadReport validateWellSpread(const ShearletGroup& group, const std::vector<GroupElement>& family, double delta,
                                    double aLo = 0.125, double aHi = 8.0, double sMax = 4.0, int perAxis = 200);
/// As validateWellSpread, throwing ConstructionError on failure.
void requireWellSpread(const ShearletGroup& group, const std::vector<GroupElement>& family, double delta,
                       double aLo = 0.125, double aHi = 8.0, double sMax = 4.0);

/// ∫ F dh with left Haar density da db / a² by the trapezoid rule in (log a, b) over a box.
double haarIntegral(const ShearletGroup& group, const std::function<double(const GroupElement&)>& F, double tLo,
                    double tHi, double bLo, double bHi, int perAxis = 600);
/// |∫F(g₀h)dh − ∫F(h)dh| / |∫F(h)dh| for a smooth compactly supported bump F.
double haarInvarianceDefect(const ShearletGroup& group, const GroupElement& g0, int perAxis = 600);

/// Separable window ψ̂(η) = β(η₁)γ(η₂): bump or gaussian profiles centered at (center1, 0).
struct WaveletWindow {
  enum class Kind { Bump, Gaussian };
  Kind kind = Kind::Bump;
  double center1 = 1.75;
  double halfWidth1 = 1.25;
  double halfWidth2 = 1.5;

  double hat(const Vec& eta) const;
  double hat(double eta1, double eta2) const;
  /// ψ(z) = ∫ ψ̂(η) e^{2πi z·η} dη (closed form for gaussian, trapezoid quadrature for bump).
  Complex space(const Vec& z) const;
  /// Box outside which ψ̂ vanishes (below 1e-27 for gaussian).
  AxisBox support() const;
  /// ‖ψ‖²_{L²} by one-dimensional quadrature.
  double normSquared() const;
};

WaveletWindow makeWindow(WaveletWindow::Kind kind, double center1, double halfWidth1, double halfWidth2,
                         double blindMargin = 0.1);
std::string nameOf(WaveletWindow::Kind k);
WaveletWindow::Kind parseWindowKind(const std::string& s);

enum class WaveletMode { Fourier, Direct };
std::string nameOf(WaveletMode m);
WaveletMode parseWaveletMode(const std::string& s);

/// W_ψ f(x, h) = ⟨f, T_x D_h ψ⟩, D_h ψ = |det h|^{−1/2} ψ(h^{−1}·), at one point.
Complex waveletAt(const GridFunction& f, const WaveletWindow& w, const ShearletGroup& group, const Vec& x,
                  const GroupElement& h, WaveletMode mode);

struct GroupPoint {
  GroupElement h;
  /// Left Haar mass of the quadrature cell.
  double weight = 1.0;
};

/// Subdivides each cell h_{j,k,ε}K₁ into perOctave × perShear cells with exact Haar masses.
std::vector<GroupPoint> groupQuadrature(const ShearletGroup& group, double delta, int jMin, int jMax, int kMax,
                                        int perOctave = 1, int perShear = 1);

struct WaveletField {
  GridSpec grid;
  double c = 1.0;
  std::vector<GroupPoint> points;
  /// W(x_n, h) on the full spatial grid for each point.
  std::vector<std::vector<Complex>> values;
};

/// Fourier-side transform: F[W f(·, h)] = |det h|^{1/2} f̂ · conj(ψ̂(hᵀ·)).
WaveletField waveletTransform(const GridFunction& f, const WaveletWindow& w, const ShearletGroup& group,
                              const std::vector<GroupPoint>& points);

/// m(h) = ‖h^{−1}‖^alpha · |det h|^beta, scaled.
struct GroupWeight {
  double alpha = 0.0;
  double beta = 0.0;
  double scale = 1.0;
  double operator()(const ShearletGroup& group, const GroupElement& h) const;
};

/// ‖h ↦ m(h)‖W(·,h)‖_{L^p}‖_{L^q(dh/|det h|)}.
double mixedNorm(const WaveletField& W, Exponent p, Exponent q, const GroupWeight& m = {});
/// ‖m·W‖_{L^p(G)} as one combined sum.
double groupLpNorm(const WaveletField& W, Exponent p, const GroupWeight& m = {});

struct CoorbitProbeOptions {
  WaveletWindow window;
  Exponent p{2.0};
  Exponent q{2.0};
  GroupWeight m;
  int perOctave = 2;
  int perShear = 2;
};

struct CoorbitProbeReport {
  std::vector<double> coorbitNorms;
  std::vector<double> decompositionNorms;
  std::vector<double> ratios;
  double minRatio = 0.0;
  double maxRatio = 0.0;
  double spread = 0.0;
};

/// Ratio of the coorbit mixed norm to the decomposition norm over the induced covering with
/// weight u_i = |det h_i|^{1/2 − 1/q} m(h_i).
CoorbitProbeReport coorbitDecompositionProbe(const std::vector<GridFunction>& signals, const Covering& shearletCovering,
                                             const CoorbitProbeOptions& options);

nlohmann::json toJson(const WellSpreadReport& r);
nlohmann::json toJson(const CoorbitProbeReport& r);
nlohmann::json toJson(const GroupElement& h);

}  // namespace harmcover
