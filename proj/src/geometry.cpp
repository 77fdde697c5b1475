#include "harmcover/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "harmcover/errors.hpp"

namespace harmcover {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void forEachSubset(int m, int k, const std::function<void(const std::vector<int>&)>& fn) {
  if (k > m || k <= 0) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double rowScale(const Vec& c) { return std::max(1.0, c.cwiseAbs().maxCoeff()); }

double polytopeDepth(const Mat& A, const Vec& c, const Vec& y) {
  double depth = kInf;
  for (int k = 0; k < A.rows(); ++k) {
    double n = A.row(k).norm();
    depth = std::min(depth, (c(k) - A.row(k).dot(y)) / n);
  }
  return depth;
}

double boxDepth(const Box& b, const Vec& y) {
  double depth = kInf;
  for (int i = 0; i < y.size(); ++i) depth = std::min({depth, y(i) - b.lo(i), b.hi(i) - y(i)});
  return depth;
}

// Signed depth: positive inside by that distance (exact for balls, shells,
// boxes and polytopes), negative outside.
double baseDepth(const BaseSet& s, const Vec& y) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return v.radius - (y - v.center).norm();
        } else if constexpr (std::is_same_v<T, Box>) {
          return boxDepth(v, y);
        } else if constexpr (std::is_same_v<T, Polytope>) {
          return polytopeDepth(v.A, v.c, y);
        } else if constexpr (std::is_same_v<T, RadialShell>) {
          double r = y.norm();
          return std::min(r - v.inner, v.outer - r);
        } else {
          double best = -kInf;
          for (const auto& p : v) best = std::max(best, baseDepth(p, y));
          return best;
        }
      },
      s.shape());
}

Vec pullToward(const Vec& v, const Vec& target, double margin) {
  Vec dir = target - v;
  double n = dir.norm();
  if (n <= margin) return target;
  return v + dir * (margin / n);
}

// Closest point of the affine hull of pts (weights summing to 1) to the
// origin. Returns false when the points are affinely dependent.
bool affineClosest(const std::vector<Vec>& pts, Vec& point, Eigen::VectorXd& lambda) {
  int k = static_cast<int>(pts.size());
  Mat sys = Mat::Zero(k + 1, k + 1);
  Vec rhs = Vec::Zero(k + 1);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) sys(i, j) = pts[i].dot(pts[j]);
    sys(i, k) = 1.0;
    sys(k, i) = 1.0;
  }
  rhs(k) = 1.0;
  Eigen::FullPivLU<Mat> lu(sys);
  double scale = std::max(1.0, sys.cwiseAbs().maxCoeff());
  lu.setThreshold(1e-13);
  if (lu.rank() < k + 1 || std::abs(lu.determinant()) < 1e-300 * scale) return false;
  Vec sol = lu.solve(rhs);
  lambda = sol.head(k);
  point = Vec::Zero(pts[0].size());
  for (int i = 0; i < k; ++i) point += lambda(i) * pts[i];
  return true;
}

// Closest point of conv(simplex) to the origin; simplex is reduced to the
// supporting face.
Vec closestOnSimplex(std::vector<Vec>& simplex) {
  int k = static_cast<int>(simplex.size());
  double best = kInf;
  Vec bestPoint;
  std::vector<Vec> bestFace;
  for (int mask = 1; mask < (1 << k); ++mask) {
    std::vector<Vec> face;
    for (int i = 0; i < k; ++i)
      if (mask & (1 << i)) face.push_back(simplex[i]);
    Vec p;
    Eigen::VectorXd lambda;
    if (face.size() == 1) {
      p = face[0];
    } else {
      if (!affineClosest(face, p, lambda)) continue;
      if ((lambda.array() <= 0.0).any()) continue;
    }
    double n = p.norm();
    if (n < best) {
      best = n;
      bestPoint = p;
      bestFace = face;
    }
  }
  simplex = bestFace;
  return bestPoint;
}

Piece pointPiece(const Vec& x) {
  Piece p;
  p.kind = Piece::Kind::Polytope;
  p.vertices = {x};
  p.A = Mat::Zero(0, x.size());
  p.c = Vec::Zero(0);
  return p;
}

double sphereRadiusOf(const Piece& p) { return *p.sphereRadius; }

bool isSphere(const Piece& p) { return p.kind == Piece::Kind::Ellipsoid && p.sphereRadius.has_value(); }

double maxVertexDistance(const Piece& p, const Vec& x) {
  double best = 0.0;
  for (const auto& v : p.vertices) best = std::max(best, (v - x).norm());
  return best;
}

// Radial separation between {a1 < |x − c1| < b1} and {a2 < |x − c2| < b2}, d ≥ 2.
double radialSeparation(const Vec& c1, double a1, double b1, const Vec& c2, double a2, double b2) {
  double D = (c1 - c2).norm();
  double lower = std::max({a1, D - b2, a2 - D});
  double upper = std::min(b1, D + b2);
  return lower - upper;
}

struct Radial {
  Vec center;
  double inner;
  double outer;
};

std::optional<Radial> asRadial(const Piece& p) {
  if (p.kind == Piece::Kind::Shell) return Radial{p.center, p.r1, p.r2};
  if (isSphere(p)) return Radial{p.center, 0.0, sphereRadiusOf(p)};
  return std::nullopt;
}

}  // namespace

bool AxisBox::overlaps(const AxisBox& other, double slack) const {
  for (int i = 0; i < lo.size(); ++i) {
    if (lo(i) > other.hi(i) + slack || other.lo(i) > hi(i) + slack) return false;
  }
  return true;
}

bool AxisBox::contains(const Vec& x) const {
  for (int i = 0; i < lo.size(); ++i)
    if (x(i) < lo(i) || x(i) > hi(i)) return false;
  return true;
}

AffineMap::AffineMap(Mat T, Vec b) : T_(std::move(T)), b_(std::move(b)) {
  if (T_.rows() != T_.cols() || T_.rows() != b_.size() || b_.size() == 0) {
    throw ConstructionError("affine map: matrix and offset dimensions disagree");
  }
  if (!T_.allFinite() || !b_.allFinite()) throw ConstructionError("affine map: non-finite entries");
  absDet_ = std::abs(T_.determinant());
  if (!(absDet_ > kDetEpsilon)) throw ConstructionError("affine map: |det T| <= 1e-12");
  Tinv_ = T_.inverse();
  double s = T_(0, 0);
  bool scalarMap = true;
  for (int i = 0; i < T_.rows() && scalarMap; ++i)
    for (int j = 0; j < T_.cols(); ++j)
      if (T_(i, j) != (i == j ? s : 0.0)) {
        scalarMap = false;
        break;
      }
  if (scalarMap) scalar_ = s;
}

AffineMap AffineMap::scaling(double s, Vec b) {
  int d = static_cast<int>(b.size());
  return AffineMap(s * Mat::Identity(d, d), std::move(b));
}

AffineMap AffineMap::identity(int d) { return AffineMap(Mat::Identity(d, d), Vec::Zero(d)); }

double AffineMap::operatorNorm() const {
  if (scalar_) return std::abs(*scalar_);
  return spectralNorm(T_);
}

double spectralNorm(const Mat& m) {
  if (m.size() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

std::vector<Vec> polytopeVertices(const Mat& A, const Vec& c) {
  int d = static_cast<int>(A.cols());
  int m = static_cast<int>(A.rows());
  std::vector<Vec> out;
  double tol = 1e-9 * rowScale(c);
  forEachSubset(m, d, [&](const std::vector<int>& rows) {
    Mat S(d, d);
    Vec r(d);
    for (int i = 0; i < d; ++i) {
      S.row(i) = A.row(rows[i]);
      r(i) = c(rows[i]);
    }
    Eigen::FullPivLU<Mat> lu(S);
    if (lu.rank() < d) return;
    Vec v = lu.solve(r);
    if (((A * v - c).array() > tol).any()) return;
    for (const auto& w : out)
      if ((w - v).norm() <= tol) return;
    out.push_back(v);
  });
  return out;
}

namespace {

std::pair<Vec, double> chebyshevStacked(const Mat& A, const Vec& c) {
  int d = static_cast<int>(A.cols());
  int m = static_cast<int>(A.rows());
  Mat An(m, d);
  Vec cn(m);
  for (int k = 0; k < m; ++k) {
    double n = A.row(k).norm();
    if (n == 0.0) throw ArgumentError("polytope: zero constraint row");
    An.row(k) = A.row(k) / n;
    cn(k) = c(k) / n;
  }
  double tol = 1e-10 * rowScale(cn);
  double bestT = -kInf;
  Vec bestX = Vec::Zero(d);
  forEachSubset(m, d + 1, [&](const std::vector<int>& rows) {
    Mat S(d + 1, d + 1);
    Vec r(d + 1);
    for (int i = 0; i <= d; ++i) {
      S.row(i).head(d) = An.row(rows[i]);
      S(i, d) = 1.0;
      r(i) = cn(rows[i]);
    }
    Eigen::FullPivLU<Mat> lu(S);
    if (lu.rank() < d + 1) return;
    Vec sol = lu.solve(r);
    Vec x = sol.head(d);
    double t = sol(d);
    if (t <= bestT) return;
    if (((An * x).array() + t - cn.array() > tol).any()) return;
    bestT = t;
    bestX = x;
  });
  return {bestX, bestT};
}

}  // namespace

std::pair<Vec, double> chebyshevCenter(const Mat& A, const Vec& c) { return chebyshevStacked(A, c); }

double chebyshevDepth(const Mat& A1, const Vec& c1, const Mat& A2, const Vec& c2) {
  Mat A(A1.rows() + A2.rows(), A1.cols());
  A << A1, A2;
  Vec c(c1.size() + c2.size());
  c << c1, c2;
  return chebyshevStacked(A, c).second;
}

BaseSet BaseSet::ball(Vec center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius) || center.size() == 0) {
    throw ArgumentError("ball base set needs a positive finite radius");
  }
  return BaseSet(Ball{std::move(center), radius});
}

BaseSet BaseSet::box(Vec lo, Vec hi) {
  if (lo.size() != hi.size() || lo.size() == 0) throw ArgumentError("box corners disagree in dimension");
  if (!((hi - lo).array() > 0.0).all()) throw ArgumentError("box must satisfy lo < hi");
  return BaseSet(Box{std::move(lo), std::move(hi)});
}

BaseSet BaseSet::polytope(Mat A, Vec c) {
  if (A.rows() != c.size() || A.cols() == 0) throw ArgumentError("polytope: shape mismatch");
  auto verts = polytopeVertices(A, c);
  if (verts.size() < static_cast<std::size_t>(A.cols() + 1)) {
    throw ArgumentError("polytope is empty or unbounded");
  }
  auto [core, radius] = chebyshevCenter(A, c);
  if (!(radius > 0.0)) throw ArgumentError("polytope has empty interior");
  // Unboundedness: some direction with A v <= 0 escapes; detect via a
  // recession check on the coordinate axes and vertex spread.
  int d = static_cast<int>(A.cols());
  for (int i = 0; i < d; ++i) {
    for (double sgn : {1.0, -1.0}) {
      Vec e = Vec::Zero(d);
      e(i) = sgn;
      if (((A * e).array() <= 0.0).all()) throw ArgumentError("polytope is unbounded");
    }
  }
  return BaseSet(Polytope{std::move(A), std::move(c), std::move(verts), std::move(core)});
}

BaseSet BaseSet::radialShell(int dim, double inner, double outer) {
  if (dim < 1) throw ArgumentError("shell dimension must be positive");
  if (!(inner > 0.0) || !(outer > inner) || !std::isfinite(outer)) {
    throw ArgumentError("radial shell requires 0 < r1 < r2");
  }
  return BaseSet(RadialShell{dim, inner, outer});
}

BaseSet BaseSet::unite(std::vector<BaseSet> parts) {
  if (parts.empty()) throw ArgumentError("union of no base sets");
  int d = parts.front().dim();
  for (const auto& p : parts)
    if (p.dim() != d) throw ArgumentError("union parts disagree in dimension");
  return BaseSet(std::move(parts));
}

int BaseSet::dim() const {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ball>) return static_cast<int>(v.center.size());
        else if constexpr (std::is_same_v<T, Box>) return static_cast<int>(v.lo.size());
        else if constexpr (std::is_same_v<T, Polytope>) return static_cast<int>(v.A.cols());
        else if constexpr (std::is_same_v<T, RadialShell>) return v.dim;
        else return v.front().dim();
      },
      shape_);
}

bool BaseSet::contains(const Vec& y) const {
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return (y - v.center).squaredNorm() < v.radius * v.radius;
        } else if constexpr (std::is_same_v<T, Box>) {
          return ((y - v.lo).array() > 0.0).all() && ((v.hi - y).array() > 0.0).all();
        } else if constexpr (std::is_same_v<T, Polytope>) {
          return ((v.A * y - v.c).array() < 0.0).all();
        } else if constexpr (std::is_same_v<T, RadialShell>) {
          double r2 = y.squaredNorm();
          return r2 > v.inner * v.inner && r2 < v.outer * v.outer;
        } else {
          for (const auto& p : v)
            if (p.contains(y)) return true;
          return false;
        }
      },
      shape_);
}

AxisBox BaseSet::boundingBox() const {
  return std::visit(
      [&](const auto& v) -> AxisBox {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ball>) {
          Vec r = Vec::Constant(v.center.size(), v.radius);
          return {v.center - r, v.center + r};
        } else if constexpr (std::is_same_v<T, Box>) {
          return {v.lo, v.hi};
        } else if constexpr (std::is_same_v<T, Polytope>) {
          Vec lo = v.vertices.front(), hi = v.vertices.front();
          for (const auto& p : v.vertices) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
          }
          return {lo, hi};
        } else if constexpr (std::is_same_v<T, RadialShell>) {
          return {Vec::Constant(v.dim, -v.outer), Vec::Constant(v.dim, v.outer)};
        } else {
          AxisBox box = v.front().boundingBox();
          for (const auto& p : v) {
            AxisBox b = p.boundingBox();
            box.lo = box.lo.cwiseMin(b.lo);
            box.hi = box.hi.cwiseMax(b.hi);
          }
          return box;
        }
      },
      shape_);
}

double BaseSet::gauge(const Vec& y) const {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return (y - v.center).norm() / v.radius;
        } else if constexpr (std::is_same_v<T, Box>) {
          double g = 0.0;
          for (int i = 0; i < y.size(); ++i)
            g = std::max(g, std::abs(2.0 * y(i) - v.lo(i) - v.hi(i)) / (v.hi(i) - v.lo(i)));
          return g;
        } else if constexpr (std::is_same_v<T, Polytope>) {
          double g = 0.0;
          for (int k = 0; k < v.A.rows(); ++k) {
            double room = v.c(k) - v.A.row(k).dot(v.core);
            g = std::max(g, v.A.row(k).dot(y - v.core) / room);
          }
          return g;
        } else if constexpr (std::is_same_v<T, RadialShell>) {
          double mid = 0.5 * (v.inner + v.outer);
          double half = 0.5 * (v.outer - v.inner);
          return std::abs(y.norm() - mid) / half;
        } else {
          double g = kInf;
          for (const auto& p : v) g = std::min(g, p.gauge(y));
          return g;
        }
      },
      shape_);
}

std::pair<Vec, double> BaseSet::inscribedBall() const {
  return std::visit(
      [&](const auto& v) -> std::pair<Vec, double> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return {v.center, v.radius};
        } else if constexpr (std::is_same_v<T, Box>) {
          return {0.5 * (v.lo + v.hi), 0.5 * (v.hi - v.lo).minCoeff()};
        } else if constexpr (std::is_same_v<T, Polytope>) {
          return chebyshevCenter(v.A, v.c);
        } else if constexpr (std::is_same_v<T, RadialShell>) {
          Vec c = Vec::Zero(v.dim);
          c(0) = 0.5 * (v.inner + v.outer);
          return {c, 0.5 * (v.outer - v.inner)};
        } else {
          std::pair<Vec, double> best = v.front().inscribedBall();
          for (const auto& p : v) {
            auto b = p.inscribedBall();
            if (b.second > best.second) best = b;
          }
          return best;
        }
      },
      shape_);
}

std::vector<Vec> BaseSet::samplePoints(int perAxis, double margin) const {
  std::vector<Vec> out;
  AxisBox box = boundingBox();
  int d = dim();
  perAxis = std::max(perAxis, 2);
  std::vector<int> idx(d, 0);
  for (;;) {
    Vec y(d);
    for (int i = 0; i < d; ++i) {
      double t = (idx[i] + 0.5) / perAxis;
      y(i) = box.lo(i) + t * (box.hi(i) - box.lo(i));
    }
    if (baseDepth(*this, y) >= margin) out.push_back(y);
    int i = 0;
    while (i < d && ++idx[i] == perAxis) idx[i++] = 0;
    if (i == d) break;
  }
  auto addBoundary = [&](const BaseSet& s) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Ball>) {
            if (d == 1) {
              out.push_back(v.center + Vec::Constant(1, v.radius - margin));
              out.push_back(v.center - Vec::Constant(1, v.radius - margin));
            } else {
              for (int i = 0; i < d; ++i)
                for (double sg : {1.0, -1.0}) {
                  Vec y = v.center;
                  y(i) += sg * (v.radius - margin);
                  out.push_back(y);
                }
              if (d == 2)
                for (int a = 0; a < 64; ++a) {
                  double t = 2.0 * M_PI * (a + 0.5) / 64.0;
                  Vec y = v.center;
                  y(0) += (v.radius - margin) * std::cos(t);
                  y(1) += (v.radius - margin) * std::sin(t);
                  out.push_back(y);
                }
            }
          } else if constexpr (std::is_same_v<T, Box>) {
            Vec mid = 0.5 * (v.lo + v.hi);
            for (int mask = 0; mask < (1 << d); ++mask) {
              Vec y(d);
              for (int i = 0; i < d; ++i) y(i) = (mask & (1 << i)) ? v.hi(i) - margin : v.lo(i) + margin;
              out.push_back(y);
            }
            (void)mid;
          } else if constexpr (std::is_same_v<T, Polytope>) {
            for (const auto& p : v.vertices) out.push_back(pullToward(p, v.core, margin));
          } else if constexpr (std::is_same_v<T, RadialShell>) {
            if (d == 1) {
              for (double r : {v.inner + margin, v.outer - margin}) {
                out.push_back(Vec::Constant(1, r));
                out.push_back(Vec::Constant(1, -r));
              }
            } else {
              for (double r : {v.inner + margin, v.outer - margin}) {
                int count = d == 2 ? 64 : 2 * d;
                for (int a = 0; a < count; ++a) {
                  Vec y = Vec::Zero(d);
                  if (d == 2) {
                    double t = 2.0 * M_PI * (a + 0.5) / 64.0;
                    y(0) = r * std::cos(t);
                    y(1) = r * std::sin(t);
                  } else {
                    y(a / 2) = (a % 2 ? -r : r);
                  }
                  out.push_back(y);
                }
              }
            }
          }
        },
        s.shape());
  };
  if (isUnion()) {
    for (const auto& p : parts()) addBoundary(p);
  } else {
    addBoundary(*this);
  }
  return out;
}

Vec Piece::support(const Vec& dir) const {
  switch (kind) {
    case Kind::Ellipsoid: {
      Vec w = M.transpose() * dir;
      double n = w.norm();
      if (n == 0.0) return center;
      return center + M * (w / n);
    }
    case Kind::Polytope: {
      std::size_t best = 0;
      double bestVal = -kInf;
      for (std::size_t i = 0; i < vertices.size(); ++i) {
        double v = vertices[i].dot(dir);
        if (v > bestVal) {
          bestVal = v;
          best = i;
        }
      }
      return vertices[best];
    }
    case Kind::Shell: {
      double n = dir.norm();
      if (n == 0.0) return center;
      return center + dir * (r2 / n);
    }
  }
  return center;
}

AxisBox Piece::boundingBox() const {
  switch (kind) {
    case Kind::Ellipsoid: {
      Vec ext = M.rowwise().norm();
      return {center - ext, center + ext};
    }
    case Kind::Polytope: {
      Vec lo = vertices.front(), hi = vertices.front();
      for (const auto& v : vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
      }
      return {lo, hi};
    }
    case Kind::Shell: {
      Vec r = Vec::Constant(center.size(), r2);
      return {center - r, center + r};
    }
  }
  return {};
}

std::vector<Piece> imagePieces(const BaseSet& base, const AffineMap& map) {
  std::vector<Piece> out;
  const Mat& T = map.matrix();
  const Mat& Ti = map.inverse();
  const Vec& b = map.offset();
  int d = map.dim();
  if (base.dim() != d) throw ArgumentError("base set and map disagree in dimension");
  auto polyPiece = [&](const Mat& A, const Vec& c, const std::vector<Vec>& verts) {
    Piece p;
    p.kind = Piece::Kind::Polytope;
    p.A = A * Ti;
    p.c = c + A * (Ti * b);
    for (const auto& v : verts) p.vertices.push_back(map.apply(v));
    out.push_back(std::move(p));
  };
  auto interval = [&](double lo, double hi) {
    Mat A(2, 1);
    A << 1.0, -1.0;
    Vec c(2);
    c << hi, -lo;
    Piece p;
    p.kind = Piece::Kind::Polytope;
    p.A = A;
    p.c = c;
    p.vertices = {Vec::Constant(1, lo), Vec::Constant(1, hi)};
    out.push_back(std::move(p));
  };
  std::visit(
      [&](const auto& v) {
        using S = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<S, Ball>) {
          Piece p;
          p.kind = Piece::Kind::Ellipsoid;
          p.M = T * v.radius;
          p.center = map.apply(v.center);
          if (map.scalar()) p.sphereRadius = std::abs(*map.scalar()) * v.radius;
          out.push_back(std::move(p));
        } else if constexpr (std::is_same_v<S, Box>) {
          Mat A(2 * d, d);
          Vec c(2 * d);
          A << Mat::Identity(d, d), -Mat::Identity(d, d);
          c << v.hi, -v.lo;
          std::vector<Vec> verts;
          for (int mask = 0; mask < (1 << d); ++mask) {
            Vec y(d);
            for (int i = 0; i < d; ++i) y(i) = (mask & (1 << i)) ? v.hi(i) : v.lo(i);
            verts.push_back(y);
          }
          polyPiece(A, c, verts);
        } else if constexpr (std::is_same_v<S, Polytope>) {
          polyPiece(v.A, v.c, v.vertices);
        } else if constexpr (std::is_same_v<S, RadialShell>) {
          if (d == 1) {
            double s = T(0, 0);
            double a1 = s * v.inner + b(0), a2 = s * v.outer + b(0);
            double m1 = -s * v.inner + b(0), m2 = -s * v.outer + b(0);
            interval(std::min(a1, a2), std::max(a1, a2));
            interval(std::min(m1, m2), std::max(m1, m2));
          } else {
            if (!map.scalar()) throw ArgumentError("radial shell base sets need scalar maps");
            Piece p;
            p.kind = Piece::Kind::Shell;
            p.center = b;
            double s = std::abs(*map.scalar());
            p.r1 = s * v.inner;
            p.r2 = s * v.outer;
            out.push_back(std::move(p));
          }
        } else {
          for (const auto& part : v) {
            auto sub = imagePieces(part, map);
            out.insert(out.end(), sub.begin(), sub.end());
          }
        }
      },
      base.shape());
  return out;
}

DistanceResult convexDistance(const Piece& a, const Piece& b, double tolerance) {
  if (a.kind == Piece::Kind::Shell || b.kind == Piece::Kind::Shell) {
    throw ArgumentError("convexDistance: shell pieces are not convex");
  }
  DistanceResult res;
  int d = a.kind == Piece::Kind::Polytope ? static_cast<int>(a.vertices.front().size())
                                          : static_cast<int>(a.center.size());
  Vec v = a.support(Vec::Unit(d, 0)) - b.support(-Vec::Unit(d, 0));
  std::vector<Vec> simplex{v};
  double lower = 0.0;
  double scale = 1.0;
  for (const auto& p : {a, b}) {
    AxisBox bb = p.boundingBox();
    scale = std::max({scale, bb.lo.cwiseAbs().maxCoeff(), bb.hi.cwiseAbs().maxCoeff()});
  }
  double eps = 1e-14 * scale;
  for (int iter = 0; iter < 512; ++iter) {
    double vn = v.norm();
    res.upper = vn;
    if (vn <= eps) {
      res.lower = 0.0;
      res.upper = 0.0;
      return res;
    }
    if (tolerance >= 0.0 && vn <= tolerance) {
      res.lower = lower;
      return res;
    }
    Vec w = a.support(-v) - b.support(v);
    double bound = v.dot(w) / vn;
    if (bound > lower) {
      lower = bound;
      res.direction = v / vn;
    }
    if (tolerance >= 0.0 && lower > tolerance) {
      res.lower = lower;
      return res;
    }
    if (vn - lower <= 1e-13 * scale) break;
    bool dup = false;
    for (const auto& s : simplex)
      if ((s - w).norm() <= eps) dup = true;
    if (dup) break;
    simplex.push_back(w);
    Vec nv = closestOnSimplex(simplex);
    if (nv.norm() >= vn - 1e-16 * scale) {
      if (static_cast<int>(simplex.size()) > d) break;
    }
    v = nv;
  }
  res.lower = std::max(0.0, lower);
  res.upper = v.norm();
  return res;
}

double scaledTolerance(const Piece& a, const Piece& b) {
  double scale = 1.0;
  for (const Piece* p : {&a, &b}) {
    AxisBox bb = p->boundingBox();
    scale = std::max({scale, bb.lo.cwiseAbs().maxCoeff(), bb.hi.cwiseAbs().maxCoeff()});
  }
  return kGeoTolerance * scale;
}

bool piecesMeetGeometric(const Piece& a, const Piece& b, double tolerance) {
  if (!a.boundingBox().overlaps(b.boundingBox(), tolerance)) return false;
  auto ra = asRadial(a);
  auto rb = asRadial(b);
  if (a.kind == Piece::Kind::Shell || b.kind == Piece::Kind::Shell) {
    if (ra && rb) {
      return radialSeparation(ra->center, ra->inner, ra->outer, rb->center, rb->inner, rb->outer) <= tolerance;
    }
    const Piece& shell = a.kind == Piece::Kind::Shell ? a : b;
    const Piece& other = a.kind == Piece::Kind::Shell ? b : a;
    DistanceResult inf = convexDistance(pointPiece(shell.center), other, -1.0);
    double sup = other.kind == Piece::Kind::Polytope
                     ? maxVertexDistance(other, shell.center)
                     : (other.center - shell.center).norm() + spectralNorm(other.M);
    return inf.lower <= shell.r2 + tolerance && sup >= shell.r1 - tolerance;
  }
  DistanceResult r = convexDistance(a, b, tolerance);
  if (r.lower > tolerance) return false;
  return true;
}

double signedPolytopeDistance(const Piece& poly, const Vec& x) {
  double inside = -kInf;
  bool isInside = true;
  for (int k = 0; k < poly.A.rows(); ++k) {
    double n = poly.A.row(k).norm();
    double viol = (poly.A.row(k).dot(x) - poly.c(k)) / n;
    inside = std::max(inside, viol);
    if (viol > 0.0) isInside = false;
  }
  if (isInside) return inside;
  int d = static_cast<int>(x.size());
  if (d == 1) {
    double lo = kInf, hi = -kInf;
    for (const auto& v : poly.vertices) {
      lo = std::min(lo, v(0));
      hi = std::max(hi, v(0));
    }
    return std::max(lo - x(0), x(0) - hi);
  }
  if (d == 2) {
    double best = kInf;
    double tol = 1e-9 * rowScale(poly.c);
    for (int k = 0; k < poly.A.rows(); ++k) {
      std::vector<Vec> on;
      double n = poly.A.row(k).norm();
      for (const auto& v : poly.vertices)
        if (std::abs(poly.A.row(k).dot(v) - poly.c(k)) <= tol * n) on.push_back(v);
      for (std::size_t i = 0; i < on.size(); ++i)
        for (std::size_t j = i; j < on.size(); ++j) {
          Vec e = on[j] - on[i];
          double len2 = e.squaredNorm();
          double t = len2 > 0.0 ? std::clamp((x - on[i]).dot(e) / len2, 0.0, 1.0) : 0.0;
          best = std::min(best, (on[i] + t * e - x).norm());
        }
    }
    return best;
  }
  return convexDistance(pointPiece(x), poly, -1.0).upper;
}

std::optional<double> closedFormSeparation(const Piece& a, const Piece& b) {
  int d = a.dim();
  if (d == 1 && a.kind == Piece::Kind::Polytope && b.kind == Piece::Kind::Polytope) {
    auto range = [](const Piece& p) {
      double lo = kInf, hi = -kInf;
      for (const auto& v : p.vertices) {
        lo = std::min(lo, v(0));
        hi = std::max(hi, v(0));
      }
      return std::pair{lo, hi};
    };
    auto [l1, h1] = range(a);
    auto [l2, h2] = range(b);
    return std::max(l1 - h2, l2 - h1);
  }
  if (isSphere(a) && isSphere(b)) {
    return (a.center - b.center).norm() - sphereRadiusOf(a) - sphereRadiusOf(b);
  }
  if (d >= 2) {
    auto ra = asRadial(a);
    auto rb = asRadial(b);
    if (ra && rb) return radialSeparation(ra->center, ra->inner, ra->outer, rb->center, rb->inner, rb->outer);
  }
  if (isSphere(a) && b.kind == Piece::Kind::Polytope) {
    return signedPolytopeDistance(b, a.center) - sphereRadiusOf(a);
  }
  if (isSphere(b) && a.kind == Piece::Kind::Polytope) {
    return signedPolytopeDistance(a, b.center) - sphereRadiusOf(b);
  }
  if (a.kind == Piece::Kind::Shell || b.kind == Piece::Kind::Shell) {
    const Piece& shell = a.kind == Piece::Kind::Shell ? a : b;
    const Piece& other = a.kind == Piece::Kind::Shell ? b : a;
    if (other.kind != Piece::Kind::Polytope) return std::nullopt;
    double inf = std::max(0.0, signedPolytopeDistance(other, shell.center));
    double sup = maxVertexDistance(other, shell.center);
    return std::max(inf - shell.r2, shell.r1 - sup);
  }
  if (a.kind == Piece::Kind::Polytope && b.kind == Piece::Kind::Polytope) {
    return -chebyshevDepth(a.A, a.c, b.A, b.c);
  }
  return std::nullopt;
}

}  // namespace harmcover
