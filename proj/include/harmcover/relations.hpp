#pragma once

#include <optional>
#include <vector>

#include "harmcover/covering.hpp"
#include "harmcover/zoo.hpp"

namespace harmcover {

struct RelationReport {
  /// I_j per coarse index (fine indices, sorted).
  std::vector<std::vector<std::size_t>> I;
  /// j ∈ J_O per coarse index.
  std::vector<bool> inJO;
  /// Coarse sets lying inside the fine truncation's claim region, so that I_j
  /// is the full intersection set of the untruncated family.
  std::vector<bool> complete;
  std::optional<int> subordinationOrder;
  std::size_t subordinationSkipped = 0;
  bool subordinationSampled = true;
  std::optional<double> C_uQ;
  bool cuqStable = true;
  std::optional<double> relModConstant;
};

/// Intersection sets I_j and J_O. Pairs use the closed-form separation when
/// available, else the geometric decision.
RelationReport intersectionSets(const Covering& fine, const Covering& coarse);
/// Same, forcing the geometric decision for every pair.
RelationReport intersectionSetsGeometric(const Covering& fine, const Covering& coarse);

/// Least n <= nMax with Q_i ⊆ P_j^{n*} for every checked fine set i.
std::optional<int> almostSubordinate(const Covering& fine, const Covering& coarse, int nMax = 8,
                                     std::size_t* skipped = nullptr, int density = 16);

/// C_{u,Q} with truncation-stability flag.
std::pair<double, bool> moderateConstant(const Covering& cov, const WeightFamily& u);
/// sup_j sup_{i,ℓ ∈ I_j} u_i / u_ℓ over complete coarse sets.
double relativeModerateConstant(const Covering& fine, const WeightFamily& u, const RelationReport& rel);

RelationReport moderateConstants(const Covering& cov, const WeightFamily& u, const Covering* coarse = nullptr);

nlohmann::json toJson(const RelationReport& r, const Covering& fine, const Covering& coarse);

}  // namespace harmcover
