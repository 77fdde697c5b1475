#include "harmcover/covering.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "harmcover/errors.hpp"
#include "harmcover/parallel.hpp"
#include "harmcover/zoo.hpp"

namespace harmcover {

std::string labelToString(const Label& label) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < label.size(); ++i) os << (i ? "," : "") << label[i];
  os << ')';
  return os.str();
}

bool Region::contains(const Vec& xi) const {
  switch (kind) {
    case Kind::Whole:
      return true;
    case Kind::Box:
      return ((xi - lo).array() > 0.0).all() && ((hi - xi).array() > 0.0).all();
    case Kind::ShearletOrbit:
      return xi(0) != 0.0;
  }
  return false;
}

bool ClaimRegion::contains(const Vec& xi) const {
  if (lo.size() && (((xi - lo).array() < 0.0).any() || ((hi - xi).array() < 0.0).any())) return false;
  if (xi.norm() > maxRadius) return false;
  if (std::abs(xi(0)) < blindMargin) return false;
  return true;
}

std::string oracleName(OracleId id) {
  switch (id) {
    case OracleId::Uniform: return "uniform";
    case OracleId::Dyadic: return "dyadic";
    case OracleId::Alpha: return "alpha";
    case OracleId::Shearlet: return "shearlet";
    case OracleId::None: break;
  }
  return "";
}

OracleId parseOracle(const std::string& name) {
  if (name == "uniform") return OracleId::Uniform;
  if (name == "dyadic") return OracleId::Dyadic;
  if (name == "alpha") return OracleId::Alpha;
  if (name == "shearlet") return OracleId::Shearlet;
  if (name.empty()) return OracleId::None;
  throw ArgumentError("unknown oracle id '" + name + "'");
}

// Items sorted by lo[0]; a max-tree over hi[0] prunes the scan.
struct Covering::BoxIndex {
  std::vector<std::size_t> order;
  std::vector<double> lo0;
  std::vector<double> tree;
  std::size_t leaves = 1;

  explicit BoxIndex(const std::vector<AxisBox>& boxes) {
    order.resize(boxes.size());
    for (std::size_t i = 0; i < boxes.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return boxes[a].lo(0) < boxes[b].lo(0) || (boxes[a].lo(0) == boxes[b].lo(0) && a < b);
    });
    while (leaves < boxes.size()) leaves *= 2;
    tree.assign(2 * leaves, -std::numeric_limits<double>::infinity());
    for (std::size_t p = 0; p < order.size(); ++p) {
      lo0.push_back(boxes[order[p]].lo(0));
      tree[leaves + p] = boxes[order[p]].hi(0);
    }
    for (std::size_t n = leaves - 1; n >= 1; --n) tree[n] = std::max(tree[2 * n], tree[2 * n + 1]);
  }

  template <class F>
  void query(double qlo, double qhi, F&& visit) const {
    std::size_t end = std::upper_bound(lo0.begin(), lo0.end(), qhi) - lo0.begin();
    if (end == 0) return;
    descend(1, 0, leaves, end, qlo, visit);
  }

  template <class F>
  void descend(std::size_t node, std::size_t l, std::size_t r, std::size_t end, double qlo, F& visit) const {
    if (l >= end || tree[node] < qlo) return;
    if (r - l == 1) {
      visit(order[l]);
      return;
    }
    std::size_t m = (l + r) / 2;
    descend(2 * node, l, m, end, qlo, visit);
    descend(2 * node + 1, m, r, end, qlo, visit);
  }
};

Covering::Covering(int dim, std::vector<BaseSet> bases, std::vector<CoveringSet> sets, Region region,
                   OracleId oracle, Truncation truncation)
    : dim_(dim),
      bases_(std::move(bases)),
      sets_(std::move(sets)),
      region_(std::move(region)),
      oracle_(oracle),
      truncation_(std::move(truncation)) {
  if (dim_ < 1) throw ArgumentError("covering dimension must be positive");
  for (const auto& b : bases_)
    if (b.dim() != dim_) throw ConstructionError("base set dimension differs from covering dimension");
  std::sort(sets_.begin(), sets_.end(), [](const CoveringSet& a, const CoveringSet& b) { return a.label < b.label; });
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    const auto& s = sets_[i];
    if (s.map.dim() != dim_) throw ConstructionError("set " + labelToString(s.label) + " has wrong dimension");
    if (s.base >= bases_.size()) throw ConstructionError("set " + labelToString(s.label) + " references a missing base set");
    if (!lookup_.emplace(s.label, i).second) throw ConstructionError("duplicate label " + labelToString(s.label));
    pieces_.push_back(imagePieces(bases_[s.base], s.map));
    AxisBox box = pieces_.back().front().boundingBox();
    for (const auto& p : pieces_.back()) {
      AxisBox b = p.boundingBox();
      box.lo = box.lo.cwiseMin(b.lo);
      box.hi = box.hi.cwiseMax(b.hi);
    }
    boxes_.push_back(box);
  }
  index_ = std::make_shared<BoxIndex>(boxes_);
  neighborsOnce_ = std::make_shared<std::once_flag>();
  neighbors_ = std::make_shared<std::vector<std::vector<std::size_t>>>();
}

const CoveringSet& Covering::set(std::size_t i) const {
  if (i >= sets_.size()) throw IndexError("covering index " + std::to_string(i) + " out of range");
  return sets_[i];
}

std::optional<std::size_t> Covering::find(const Label& label) const {
  auto it = lookup_.find(label);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t Covering::indexOf(const Label& label) const {
  auto i = find(label);
  if (!i) throw IndexError("no covering set with label " + labelToString(label));
  return *i;
}

bool Covering::contains(std::size_t i, const Vec& xi) const {
  const auto& s = set(i);
  if (xi.size() != dim_) throw ArgumentError("point dimension differs from covering dimension");
  return bases_[s.base].contains(s.map.pullback(xi));
}

const std::vector<Piece>& Covering::pieces(std::size_t i) const {
  set(i);
  return pieces_[i];
}

const AxisBox& Covering::bbox(std::size_t i) const {
  set(i);
  return boxes_[i];
}

std::vector<std::size_t> Covering::overlapping(const AxisBox& box) const {
  std::vector<std::size_t> out;
  index_->query(box.lo(0), box.hi(0), [&](std::size_t i) {
    if (boxes_[i].overlaps(box)) out.push_back(i);
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> Covering::containing(const Vec& xi) const {
  std::vector<std::size_t> out;
  index_->query(xi(0), xi(0), [&](std::size_t i) {
    if (boxes_[i].contains(xi) && contains(i, xi)) out.push_back(i);
  });
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<std::vector<std::size_t>>& Covering::neighbors() const {
  std::call_once(*neighborsOnce_, [this] {
    std::size_t n = sets_.size();
    std::vector<std::vector<std::size_t>> upper(n);
    parallelFor(n, [&](std::size_t i) {
      AxisBox box = boxes_[i];
      double tol = kGeoTolerance * std::max({1.0, box.lo.cwiseAbs().maxCoeff(), box.hi.cwiseAbs().maxCoeff()});
      box.lo.array() -= tol;
      box.hi.array() += tol;
      for (std::size_t j : overlapping(box))
        if (j > i && setsIntersect(*this, i, j)) upper[i].push_back(j);
    });
    auto& adj = *neighbors_;
    adj.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      adj[i].push_back(i);
      for (std::size_t j : upper[i]) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
  });
  return *neighbors_;
}

double Covering::labelRadius(std::size_t i) const { return zooLabelRadius(*this, label(i)); }

std::optional<bool> oracleIntersect(const Covering& cov, std::size_t i, std::size_t j) {
  cov.set(i);
  cov.set(j);
  if (cov.oracle() == OracleId::None) return std::nullopt;
  return zooOracle(cov, i, j);
}

bool setsMeetGeometric(const Covering& a, std::size_t i, const Covering& b, std::size_t j) {
  for (const auto& p : a.pieces(i))
    for (const auto& q : b.pieces(j))
      if (piecesMeetGeometric(p, q, scaledTolerance(p, q))) return true;
  return false;
}

bool setsIntersectGeometric(const Covering& cov, std::size_t i, std::size_t j) {
  if (i == j) {
    cov.set(i);
    return true;
  }
  return setsMeetGeometric(cov, i, cov, j);
}

bool setsIntersect(const Covering& cov, std::size_t i, std::size_t j) {
  if (auto o = oracleIntersect(cov, i, j)) return *o;
  return setsIntersectGeometric(cov, i, j);
}

std::optional<double> setSeparation(const Covering& a, std::size_t i, const Covering& b, std::size_t j) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : a.pieces(i))
    for (const auto& q : b.pieces(j)) {
      auto s = closedFormSeparation(p, q);
      if (!s) return std::nullopt;
      best = std::min(best, *s);
    }
  return best;
}

IndexSet neighborSets(const Covering& cov, const IndexSet& J, int k) {
  if (k < 0) throw ArgumentError("neighbor order must be nonnegative");
  for (std::size_t j : J) cov.set(j);
  IndexSet cur = J;
  if (k == 0) return cur;
  const auto& adj = cov.neighbors();
  for (int step = 0; step < k; ++step) {
    IndexSet next = cur;
    for (std::size_t i : cur) next.insert(adj[i].begin(), adj[i].end());
    if (next.size() == cur.size()) return next;
    cur = std::move(next);
  }
  return cur;
}

CoveringReport coveringConstants(const Covering& cov) {
  if (cov.size() == 0) throw ArgumentError("covering is empty");
  const auto& adj = cov.neighbors();
  std::size_t n = cov.size();
  std::vector<double> radius(n);
  double rMax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    radius[i] = cov.labelRadius(i);
    rMax = std::max(rMax, radius[i]);
  }
  std::vector<double> cq(n, 1.0);
  parallelFor(n, [&](std::size_t i) {
    const AffineMap& mi = cov.set(i).map;
    for (std::size_t j : adj[i]) {
      const AffineMap& mj = cov.set(j).map;
      double v = (mi.scalar() && mj.scalar()) ? std::abs(*mj.scalar() / *mi.scalar())
                                               : spectralNorm(mi.inverse() * mj.matrix());
      cq[i] = std::max(cq[i], v);
    }
  });
  CoveringReport r;
  std::size_t nqInner = 0;
  double cqInner = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    r.N_Q = std::max(r.N_Q, adj[i].size());
    r.C_Q = std::max(r.C_Q, cq[i]);
    if (radius[i] <= 0.5 * rMax) {
      nqInner = std::max(nqInner, adj[i].size());
      cqInner = std::max(cqInner, cq[i]);
    }
  }
  r.maxNeighborCount = r.N_Q - 1;
  if (cov.truncation().truncated) {
    r.nqStable = nqInner == r.N_Q;
    r.cqStable = std::abs(cqInner - r.C_Q) <= 1e-12 * r.C_Q;
  }
  return r;
}

std::vector<Vec> samplePoints(const SamplingSpec& spec, const Region& region) {
  if (spec.lo.size() == 0 || spec.lo.size() != spec.hi.size()) throw ArgumentError("sampling box malformed");
  int d = static_cast<int>(spec.lo.size());
  std::vector<Vec> raw;
  if (spec.perAxis > 0) {
    std::vector<int> idx(d, 0);
    for (;;) {
      Vec y(d);
      for (int i = 0; i < d; ++i) {
        double t = spec.perAxis == 1 ? 0.5 : static_cast<double>(idx[i]) / (spec.perAxis - 1);
        y(i) = spec.lo(i) + t * (spec.hi(i) - spec.lo(i));
      }
      raw.push_back(y);
      int i = 0;
      while (i < d && ++idx[i] == spec.perAxis) idx[i++] = 0;
      if (i == d) break;
    }
  } else {
    std::mt19937_64 rng(spec.seed);
    for (std::size_t k = 0; k < spec.randomCount; ++k) {
      Vec y(d);
      for (int i = 0; i < d; ++i) y(i) = std::uniform_real_distribution<double>(spec.lo(i), spec.hi(i))(rng);
      raw.push_back(y);
    }
  }
  std::vector<Vec> out;
  for (auto& y : raw) {
    double r = y.norm();
    if (r < spec.minRadius || r > spec.maxRadius) continue;
    if (std::abs(y(0)) < spec.blindMargin) continue;
    if (!region.contains(y)) continue;
    out.push_back(std::move(y));
  }
  return out;
}

CoveringReport verifyCovering(const Covering& cov, const SamplingSpec& spec) {
  if (spec.lo.size() != cov.dim()) throw ArgumentError("sampling dimension differs from covering dimension");
  auto pts = samplePoints(spec, cov.region());
  if (pts.empty()) throw ArgumentError("sampling spec yields no points");
  std::vector<std::size_t> hits(pts.size());
  parallelFor(pts.size(), [&](std::size_t k) { hits[k] = cov.containing(pts[k]).size(); });
  CoveringReport r;
  r.sampleCount = pts.size();
  std::size_t covered = 0;
  r.minMultiplicity = std::numeric_limits<std::size_t>::max();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (hits[k] > 0) {
      ++covered;
      r.minMultiplicity = std::min(r.minMultiplicity, hits[k]);
    } else if (!r.uncoveredExample) {
      r.uncoveredExample = pts[k];
    }
  }
  if (covered == 0) r.minMultiplicity = 0;
  r.coverageFraction = static_cast<double>(covered) / static_cast<double>(pts.size());
  return r;
}

namespace {

nlohmann::json vecJson(const Vec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vec jsonVec(const nlohmann::json& j) {
  if (!j.is_array()) throw ArgumentError("expected a numeric array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

nlohmann::json matJson(const Mat& m) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    a.push_back(row);
  }
  return a;
}

Mat jsonMat(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ArgumentError("expected a matrix");
  Mat m(j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != j[0].size()) throw ArgumentError("ragged matrix");
    for (std::size_t k = 0; k < j[i].size(); ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

nlohmann::json regionJson(const Region& r) {
  switch (r.kind) {
    case Region::Kind::Whole: return {{"kind", "whole"}};
    case Region::Kind::Box: return {{"kind", "box"}, {"lo", vecJson(r.lo)}, {"hi", vecJson(r.hi)}};
    case Region::Kind::ShearletOrbit: return {{"kind", "shearletOrbit"}};
  }
  return {};
}

Region jsonRegion(const nlohmann::json& j) {
  std::string k = j.at("kind").get<std::string>();
  if (k == "whole") return Region::whole();
  if (k == "box") return Region::box(jsonVec(j.at("lo")), jsonVec(j.at("hi")));
  if (k == "shearletOrbit") return Region::shearletOrbit();
  throw ArgumentError("unknown region kind '" + k + "'");
}

nlohmann::json claimJson(const ClaimRegion& c) {
  nlohmann::json j{{"blindMargin", c.blindMargin}};
  if (c.lo.size()) {
    j["lo"] = vecJson(c.lo);
    j["hi"] = vecJson(c.hi);
  }
  if (std::isfinite(c.maxRadius)) j["maxRadius"] = c.maxRadius;
  return j;
}

ClaimRegion jsonClaim(const nlohmann::json& j) {
  ClaimRegion c;
  if (j.contains("lo")) {
    c.lo = jsonVec(j["lo"]);
    c.hi = jsonVec(j["hi"]);
  }
  if (j.contains("maxRadius")) c.maxRadius = j["maxRadius"].get<double>();
  c.blindMargin = j.value("blindMargin", 0.0);
  return c;
}

}  // namespace

nlohmann::json toJson(const BaseSet& base) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return {{"type", "ball"}, {"center", vecJson(v.center)}, {"radius", v.radius}};
        } else if constexpr (std::is_same_v<T, Box>) {
          return {{"type", "box"}, {"lo", vecJson(v.lo)}, {"hi", vecJson(v.hi)}};
        } else if constexpr (std::is_same_v<T, Polytope>) {
          return {{"type", "polytope"}, {"A", matJson(v.A)}, {"c", vecJson(v.c)}};
        } else if constexpr (std::is_same_v<T, RadialShell>) {
          return {{"type", "radialShell"}, {"dim", v.dim}, {"r1", v.inner}, {"r2", v.outer}};
        } else {
          nlohmann::json parts = nlohmann::json::array();
          for (const auto& p : v) parts.push_back(toJson(p));
          return {{"type", "union"}, {"parts", parts}};
        }
      },
      base.shape());
}

BaseSet baseSetFromJson(const nlohmann::json& j) {
  std::string t = j.at("type").get<std::string>();
  if (t == "ball") return BaseSet::ball(jsonVec(j.at("center")), j.at("radius").get<double>());
  if (t == "box") return BaseSet::box(jsonVec(j.at("lo")), jsonVec(j.at("hi")));
  if (t == "polytope") return BaseSet::polytope(jsonMat(j.at("A")), jsonVec(j.at("c")));
  if (t == "radialShell") return BaseSet::radialShell(j.at("dim").get<int>(), j.at("r1").get<double>(), j.at("r2").get<double>());
  if (t == "union") {
    std::vector<BaseSet> parts;
    for (const auto& p : j.at("parts")) parts.push_back(baseSetFromJson(p));
    return BaseSet::unite(std::move(parts));
  }
  throw ArgumentError("unknown base set type '" + t + "'");
}

nlohmann::json toJson(const Covering& cov) {
  nlohmann::json bases = nlohmann::json::array();
  for (const auto& b : cov.bases()) bases.push_back(toJson(b));
  nlohmann::json sets = nlohmann::json::array();
  for (std::size_t i = 0; i < cov.size(); ++i) {
    const auto& s = cov.set(i);
    sets.push_back({{"label", s.label}, {"T", matJson(s.map.matrix())}, {"b", vecJson(s.map.offset())}, {"base", s.base}});
  }
  nlohmann::json trunc{{"family", cov.truncation().family},
                       {"params", cov.truncation().params},
                       {"truncated", cov.truncation().truncated}};
  if (cov.truncation().claim) trunc["claim"] = claimJson(*cov.truncation().claim);
  nlohmann::json out{{"dim", cov.dim()},
                     {"region", regionJson(cov.region())},
                     {"baseSets", bases},
                     {"sets", sets},
                     {"truncation", trunc}};
  out["oracle"] = cov.oracle() == OracleId::None ? nlohmann::json(nullptr) : nlohmann::json(oracleName(cov.oracle()));
  return out;
}

Covering coveringFromJson(const nlohmann::json& j) {
  try {
    int dim = j.at("dim").get<int>();
    std::vector<BaseSet> bases;
    for (const auto& b : j.at("baseSets")) bases.push_back(baseSetFromJson(b));
    std::vector<CoveringSet> sets;
    for (const auto& s : j.at("sets")) {
      sets.push_back({s.at("label").get<Label>(), AffineMap(jsonMat(s.at("T")), jsonVec(s.at("b"))),
                      s.at("base").get<std::size_t>()});
    }
    Region region = j.contains("region") ? jsonRegion(j["region"]) : Region::whole();
    OracleId oracle = OracleId::None;
    if (j.contains("oracle") && !j["oracle"].is_null()) oracle = parseOracle(j["oracle"].get<std::string>());
    Truncation trunc;
    if (j.contains("truncation")) {
      const auto& t = j["truncation"];
      trunc.family = t.value("family", std::string("custom"));
      trunc.params = t.value("params", nlohmann::json::object());
      trunc.truncated = t.value("truncated", false);
      if (t.contains("claim")) trunc.claim = jsonClaim(t["claim"]);
    }
    return Covering(dim, std::move(bases), std::move(sets), std::move(region), oracle, std::move(trunc));
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed covering JSON: ") + e.what());
  }
}

nlohmann::json toJson(const CoveringReport& r) {
  nlohmann::json j{{"N_Q", r.N_Q},
                   {"C_Q", r.C_Q},
                   {"maxNeighborCount", r.maxNeighborCount},
                   {"nqStable", r.nqStable},
                   {"cqStable", r.cqStable}};
  if (r.sampleCount) {
    j["coverageFraction"] = r.coverageFraction;
    j["minMultiplicity"] = r.minMultiplicity;
    j["sampleCount"] = r.sampleCount;
    if (r.uncoveredExample) j["uncoveredExample"] = vecJson(*r.uncoveredExample);
  }
  return j;
}

}  // namespace harmcover
