#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace harmcover {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// |det T| must exceed this for an affine map to be accepted.
inline constexpr double kDetEpsilon = 1e-12;
/// Geometric tolerance (frequency units). Pairs closer than this count as touching.
inline constexpr double kGeoTolerance = 1e-9;

struct AxisBox {
  Vec lo;
  Vec hi;
  bool overlaps(const AxisBox& other, double slack = 0.0) const;
  bool contains(const Vec& x) const;
};

/// ξ ↦ T ξ + b with cached inverse and determinant.
class AffineMap {
 public:
  AffineMap(Mat T, Vec b);
  static AffineMap scaling(double s, Vec b);
  static AffineMap identity(int d);

  int dim() const { return static_cast<int>(b_.size()); }
  const Mat& matrix() const { return T_; }
  const Mat& inverse() const { return Tinv_; }
  const Vec& offset() const { return b_; }
  double absDet() const { return absDet_; }
  /// Scalar s when T = s·id, else nullopt.
  std::optional<double> scalar() const { return scalar_; }
  double operatorNorm() const;

  Vec apply(const Vec& y) const { return T_ * y + b_; }
  Vec pullback(const Vec& xi) const { return Tinv_ * (xi - b_); }

 private:
  Mat T_;
  Mat Tinv_;
  Vec b_;
  double absDet_ = 1.0;
  std::optional<double> scalar_;
};

/// Spectral norm of a small dense matrix.
double spectralNorm(const Mat& m);

struct Ball {
  Vec center;
  double radius = 1.0;
};
struct Box {
  Vec lo;
  Vec hi;
};
/// Open polytope {y : A y < c}; vertices are computed at construction.
struct Polytope {
  Mat A;
  Vec c;
  std::vector<Vec> vertices;
  Vec core;  // Chebyshev center
};
/// Open shell {y : r1 < |y| < r2} centered at the origin.
struct RadialShell {
  int dim = 1;
  double inner = 0.5;
  double outer = 2.0;
};

/// Open, bounded, nonempty reference set Q' of an almost structured covering.
class BaseSet {
 public:
  static BaseSet ball(Vec center, double radius);
  static BaseSet box(Vec lo, Vec hi);
  static BaseSet polytope(Mat A, Vec c);
  static BaseSet radialShell(int dim, double inner, double outer);
  static BaseSet unite(std::vector<BaseSet> parts);

  int dim() const;
  bool contains(const Vec& y) const;
  AxisBox boundingBox() const;

  /// Normalized "distance from the core": < 1 exactly on the open set, and the
  /// shrink-scaled copy of the set is {gauge ≤ shrink}. Used for smooth bumps.
  double gauge(const Vec& y) const;

  /// Largest ball (center, radius) inscribed in the set (for unions: in the
  /// largest part).
  std::pair<Vec, double> inscribedBall() const;

  /// Lattice of perAxis points per axis over the bounding box, kept when the
  /// point lies at least `margin` inside the set, plus polytope/box vertices
  /// pulled inward by `margin`.
  std::vector<Vec> samplePoints(int perAxis, double margin) const;

  bool isUnion() const { return std::holds_alternative<std::vector<BaseSet>>(shape_); }
  const std::vector<BaseSet>& parts() const { return std::get<std::vector<BaseSet>>(shape_); }

  using Shape = std::variant<Ball, Box, Polytope, RadialShell, std::vector<BaseSet>>;
  const Shape& shape() const { return shape_; }

 private:
  explicit BaseSet(Shape s) : shape_(std::move(s)) {}
  Shape shape_;
};

/// One convex (or radial) component of an affine image T·Q' + b, expressed in
/// frequency coordinates.
struct Piece {
  enum class Kind { Ellipsoid, Polytope, Shell };
  Kind kind = Kind::Polytope;
  // Ellipsoid: {M u + center : |u| < 1}. `sphereRadius` set when M = r·id.
  Mat M;
  Vec center;
  std::optional<double> sphereRadius;
  // Polytope: {x : A x < c} with vertices.
  Mat A;
  Vec c;
  std::vector<Vec> vertices;
  // Shell: {x : r1 < |x − center| < r2}, only for d ≥ 2.
  double r1 = 0.0;
  double r2 = 0.0;

  int dim() const { return static_cast<int>(center.size() ? center.size() : A.cols()); }
  Vec support(const Vec& dir) const;
  AxisBox boundingBox() const;
};

/// Decomposes the image of a base set under an affine map into pieces.
/// Boxes become polytopes; in d = 1 shells become two intervals.
std::vector<Piece> imagePieces(const BaseSet& base, const AffineMap& map);

struct DistanceResult {
  double lower = 0.0;  ///< certified lower bound on dist(closure A, closure B)
  double upper = 0.0;  ///< distance of the best witness pair found
  Vec direction;       ///< separating direction when lower > 0
};

/// GJK distance between the closures of two convex pieces, stopping as soon
/// as the decision "distance ≤ tolerance" is certified either way.
DistanceResult convexDistance(const Piece& a, const Piece& b, double tolerance = kGeoTolerance);

/// Conservative generic decision: true when the closures come within tolerance.
bool piecesMeetGeometric(const Piece& a, const Piece& b, double tolerance = kGeoTolerance);

/// Closed-form signed separation of two pieces: positive is a gap, negative an
/// overlap depth, zero tangency. nullopt when no closed form applies.
std::optional<double> closedFormSeparation(const Piece& a, const Piece& b);

/// Vertices of the bounded polytope {A y <= c} (enumeration of active sets).
std::vector<Vec> polytopeVertices(const Mat& A, const Vec& c);

/// Largest t such that a ball of radius t fits in {A1 x <= c1} ∩ {A2 x <= c2}
/// (rows normalized internally). Negative when the polytopes are disjoint.
double chebyshevDepth(const Mat& A1, const Vec& c1, const Mat& A2, const Vec& c2);

/// Chebyshev center and radius of {A y <= c}.
std::pair<Vec, double> chebyshevCenter(const Mat& A, const Vec& c);

/// Signed distance from x to the boundary of the closed polytope: negative
/// inside (minus the distance to the nearest facet), positive outside.
double signedPolytopeDistance(const Piece& poly, const Vec& x);

/// Tolerance scaled to the coordinate magnitude of the pieces involved.
double scaledTolerance(const Piece& a, const Piece& b);

}  // namespace harmcover
