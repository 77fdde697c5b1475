#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "harmcover/geometry.hpp"
#include "json.hpp"

namespace harmcover {

using Label = std::vector<int>;
using IndexSet = std::set<std::size_t>;

std::string labelToString(const Label& label);

/// The open frequency region O.
struct Region {
  enum class Kind { Whole, Box, ShearletOrbit };
  Kind kind = Kind::Whole;
  Vec lo;
  Vec hi;

  static Region whole() { return {}; }
  static Region box(Vec lo, Vec hi) { return {Kind::Box, std::move(lo), std::move(hi)}; }
  static Region shearletOrbit() { return {Kind::ShearletOrbit, {}, {}}; }
  bool contains(const Vec& xi) const;
};

/// Closed subset of O on which a truncated covering is claimed to cover.
struct ClaimRegion {
  Vec lo;
  Vec hi;
  double maxRadius = std::numeric_limits<double>::infinity();
  double blindMargin = 0.0;  // exclude |ξ₁| < blindMargin
  bool contains(const Vec& xi) const;
};

enum class OracleId { None, Uniform, Dyadic, Alpha, Shearlet };
std::string oracleName(OracleId id);
OracleId parseOracle(const std::string& name);

struct Truncation {
  std::string family = "custom";
  nlohmann::json params = nlohmann::json::object();
  bool truncated = false;
  std::optional<ClaimRegion> claim;
};

struct CoveringSet {
  Label label;
  AffineMap map;
  std::size_t base = 0;
};

/// Finite (possibly truncated) almost structured covering. Sets are kept in
/// lexicographic label order; index i refers to that order.
class Covering {
 public:
  Covering(int dim, std::vector<BaseSet> bases, std::vector<CoveringSet> sets, Region region,
           OracleId oracle, Truncation truncation);

  int dim() const { return dim_; }
  std::size_t size() const { return sets_.size(); }
  const CoveringSet& set(std::size_t i) const;
  const Label& label(std::size_t i) const { return set(i).label; }
  const BaseSet& baseOf(std::size_t i) const { return bases_[set(i).base]; }
  const std::vector<BaseSet>& bases() const { return bases_; }
  const Region& region() const { return region_; }
  OracleId oracle() const { return oracle_; }
  const Truncation& truncation() const { return truncation_; }

  std::optional<std::size_t> find(const Label& label) const;
  std::size_t indexOf(const Label& label) const;

  bool contains(std::size_t i, const Vec& xi) const;
  const std::vector<Piece>& pieces(std::size_t i) const;
  const AxisBox& bbox(std::size_t i) const;

  /// Indices whose bounding box meets `box` (candidate filter).
  std::vector<std::size_t> overlapping(const AxisBox& box) const;
  /// Indices i with ξ ∈ Q_i.
  std::vector<std::size_t> containing(const Vec& xi) const;

  /// Adjacency lists i* (sorted, including i); computed once.
  const std::vector<std::vector<std::size_t>>& neighbors() const;

  /// Family-specific size of a label, used for truncation-stability checks.
  double labelRadius(std::size_t i) const;

 private:
  struct BoxIndex;
  int dim_;
  std::vector<BaseSet> bases_;
  std::vector<CoveringSet> sets_;
  Region region_;
  OracleId oracle_;
  Truncation truncation_;
  std::map<Label, std::size_t> lookup_;
  std::vector<std::vector<Piece>> pieces_;
  std::vector<AxisBox> boxes_;
  std::shared_ptr<BoxIndex> index_;
  mutable std::shared_ptr<std::once_flag> neighborsOnce_;
  mutable std::shared_ptr<std::vector<std::vector<std::size_t>>> neighbors_;
};

/// Decision via the covering's oracle when present, else geometric.
bool setsIntersect(const Covering& cov, std::size_t i, std::size_t j);
/// Conservative geometric decision (GJK / radial predicate), ignoring oracles.
bool setsIntersectGeometric(const Covering& cov, std::size_t i, std::size_t j);
/// Label-based closed-form decision; nullopt if the covering has no oracle.
std::optional<bool> oracleIntersect(const Covering& cov, std::size_t i, std::size_t j);

/// Pair separation across two coverings (min over piece pairs); nullopt when
/// some piece pair has no closed form.
std::optional<double> setSeparation(const Covering& a, std::size_t i, const Covering& b, std::size_t j);
bool setsMeetGeometric(const Covering& a, std::size_t i, const Covering& b, std::size_t j);

IndexSet neighborSets(const Covering& cov, const IndexSet& J, int k);

struct CoveringReport {
  std::size_t N_Q = 0;
  double C_Q = 0.0;
  double coverageFraction = 0.0;
  std::size_t minMultiplicity = 0;
  std::size_t maxNeighborCount = 0;
  bool nqStable = true;
  bool cqStable = true;
  std::size_t sampleCount = 0;
  std::optional<Vec> uncoveredExample;
};

CoveringReport coveringConstants(const Covering& cov);

struct SamplingSpec {
  Vec lo;
  Vec hi;
  int perAxis = 0;               // lattice points per axis (endpoints included)
  std::size_t randomCount = 0;   // used when perAxis == 0
  std::uint64_t seed = 0;
  double minRadius = 0.0;
  double maxRadius = std::numeric_limits<double>::infinity();
  double blindMargin = 0.0;      // drop points with |ξ₁| < blindMargin
};

std::vector<Vec> samplePoints(const SamplingSpec& spec, const Region& region);
CoveringReport verifyCovering(const Covering& cov, const SamplingSpec& spec);

nlohmann::json toJson(const BaseSet& base);
BaseSet baseSetFromJson(const nlohmann::json& j);
nlohmann::json toJson(const Covering& cov);
Covering coveringFromJson(const nlohmann::json& j);
nlohmann::json toJson(const CoveringReport& r);

}  // namespace harmcover
