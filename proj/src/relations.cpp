#include "harmcover/relations.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "harmcover/errors.hpp"
#include "harmcover/parallel.hpp"

namespace harmcover {

namespace {

std::vector<Vec> frequencySamples(const Covering& cov, std::size_t i, int density) {
  std::vector<Vec> out;
  const auto& s = cov.set(i);
  for (const auto& y : cov.bases()[s.base].samplePoints(density, kGeoTolerance)) out.push_back(s.map.apply(y));
  return out;
}

RelationReport buildIntersections(const Covering& fine, const Covering& coarse, bool geometricOnly) {
  if (fine.dim() != coarse.dim()) throw ArgumentError("coverings differ in dimension");
  RelationReport r;
  std::size_t m = coarse.size();
  r.I.assign(m, {});
  std::vector<char> jo(m, 0), complete(m, 1);
  const auto& claim = fine.truncation().claim;
  parallelFor(m, [&](std::size_t j) {
    auto pts = frequencySamples(coarse, j, 8);
    bool any = false;
    for (const auto& x : pts) {
      if (fine.region().contains(x)) any = true;
      if (claim && !claim->contains(x)) complete[j] = 0;
    }
    jo[j] = any;
    if (!any) {
      complete[j] = 1;
      return;
    }
    AxisBox box = coarse.bbox(j);
    double tol = kGeoTolerance * std::max({1.0, box.lo.cwiseAbs().maxCoeff(), box.hi.cwiseAbs().maxCoeff()});
    box.lo.array() -= tol;
    box.hi.array() += tol;
    for (std::size_t i : fine.overlapping(box)) {
      bool meet;
      std::optional<double> sep;
      if (!geometricOnly) sep = setSeparation(fine, i, coarse, j);
      meet = sep ? *sep < 0.0 : setsMeetGeometric(fine, i, coarse, j);
      if (meet) r.I[j].push_back(i);
    }
  });
  r.inJO.assign(jo.begin(), jo.end());
  r.complete.assign(complete.begin(), complete.end());
  return r;
}

bool regionInside(const Region& inner, const Region& outer) {
  using K = Region::Kind;
  switch (outer.kind) {
    case K::Whole:
      return true;
    case K::Box:
      return inner.kind == K::Box && ((inner.lo - outer.lo).array() >= 0.0).all() &&
             ((outer.hi - inner.hi).array() >= 0.0).all();
    case K::ShearletOrbit:
      return inner.kind == K::ShearletOrbit || (inner.kind == K::Box && (inner.lo(0) >= 0.0 || inner.hi(0) <= 0.0));
  }
  return false;
}

}  // namespace

RelationReport intersectionSets(const Covering& fine, const Covering& coarse) {
  return buildIntersections(fine, coarse, false);
}

RelationReport intersectionSetsGeometric(const Covering& fine, const Covering& coarse) {
  return buildIntersections(fine, coarse, true);
}

std::optional<int> almostSubordinate(const Covering& fine, const Covering& coarse, int nMax, std::size_t* skipped,
                                     int density) {
  if (fine.dim() != coarse.dim()) throw ArgumentError("coverings differ in dimension");
  if (nMax < 0) throw ArgumentError("nMax must be nonnegative");
  if (!regionInside(fine.region(), coarse.region())) {
    throw PreconditionError("almost subordinate: fine region O is not contained in the coarse region O'");
  }
  std::size_t n = fine.size();
  std::vector<std::vector<std::vector<std::size_t>>> hits(n);
  std::vector<char> skip(n, 0);
  parallelFor(n, [&](std::size_t i) {
    for (const auto& x : frequencySamples(fine, i, density)) {
      auto c = coarse.containing(x);
      if (c.empty()) {
        skip[i] = 1;
        hits[i].clear();
        return;
      }
      hits[i].push_back(std::move(c));
    }
  });
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& c : hits[i]) candidates.insert(candidates.end(), c.begin(), c.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  const auto& adj = coarse.neighbors();
  std::unordered_map<std::size_t, std::size_t> slot;
  for (std::size_t s = 0; s < candidates.size(); ++s) slot[candidates[s]] = s;
  std::vector<std::unordered_map<std::size_t, int>> dist(candidates.size());
  parallelFor(candidates.size(), [&](std::size_t s) {
    auto& d = dist[s];
    std::deque<std::size_t> queue{candidates[s]};
    d[candidates[s]] = 0;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      int dv = d[v];
      if (dv == nMax) continue;
      for (std::size_t w : adj[v])
        if (d.emplace(w, dv + 1).second) queue.push_back(w);
    }
  });
  constexpr int kFar = std::numeric_limits<int>::max() / 2;
  std::vector<int> need(n, 0);
  parallelFor(n, [&](std::size_t i) {
    if (skip[i]) return;
    std::vector<std::size_t> local;
    for (const auto& c : hits[i]) local.insert(local.end(), c.begin(), c.end());
    std::sort(local.begin(), local.end());
    local.erase(std::unique(local.begin(), local.end()), local.end());
    int best = kFar;
    for (std::size_t j : local) {
      const auto& d = dist[slot.at(j)];
      int worst = 0;
      for (const auto& c : hits[i]) {
        int m = kFar;
        for (std::size_t t : c) {
          auto it = d.find(t);
          if (it != d.end()) m = std::min(m, it->second);
        }
        worst = std::max(worst, m);
        if (worst >= best) break;
      }
      best = std::min(best, worst);
    }
    need[i] = best;
  });
  std::size_t skippedCount = 0;
  int order = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (skip[i]) {
      ++skippedCount;
      continue;
    }
    order = std::max(order, need[i]);
  }
  if (skipped) *skipped = skippedCount;
  if (skippedCount == n) {
    throw PreconditionError("almost subordinate: no fine set lies inside the coarse truncation");
  }
  if (order > nMax) return std::nullopt;
  return order;
}

std::pair<double, bool> moderateConstant(const Covering& cov, const WeightFamily& u) {
  const auto& adj = cov.neighbors();
  double all = 1.0, inner = 1.0, rMax = 0.0;
  std::vector<double> radius(cov.size());
  for (std::size_t i = 0; i < cov.size(); ++i) {
    radius[i] = cov.labelRadius(i);
    rMax = std::max(rMax, radius[i]);
  }
  for (std::size_t i = 0; i < cov.size(); ++i) {
    double ui = u.at(cov, i);
    double m = 1.0;
    for (std::size_t l : adj[i]) m = std::max(m, ui / u.at(cov, l));
    all = std::max(all, m);
    if (radius[i] <= 0.5 * rMax) inner = std::max(inner, m);
  }
  bool stable = !cov.truncation().truncated || std::abs(all - inner) <= 1e-9 * all;
  return {all, stable};
}

double relativeModerateConstant(const Covering& fine, const WeightFamily& u, const RelationReport& rel) {
  double best = 1.0;
  for (std::size_t j = 0; j < rel.I.size(); ++j) {
    if (!rel.complete[j] || rel.I[j].empty()) continue;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i : rel.I[j]) {
      double v = u.at(fine, i);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    best = std::max(best, hi / lo);
  }
  return best;
}

RelationReport moderateConstants(const Covering& cov, const WeightFamily& u, const Covering* coarse) {
  RelationReport r;
  if (coarse) r = intersectionSets(cov, *coarse);
  auto [c, stable] = moderateConstant(cov, u);
  r.C_uQ = c;
  r.cuqStable = stable;
  if (coarse) r.relModConstant = relativeModerateConstant(cov, u, r);
  return r;
}

nlohmann::json toJson(const RelationReport& r, const Covering& fine, const Covering& coarse) {
  nlohmann::json I = nlohmann::json::array();
  nlohmann::json jo = nlohmann::json::array();
  for (std::size_t j = 0; j < r.I.size(); ++j) {
    nlohmann::json labels = nlohmann::json::array();
    for (std::size_t i : r.I[j]) labels.push_back(fine.label(i));
    I.push_back({{"coarse", coarse.label(j)}, {"fine", labels}, {"complete", static_cast<bool>(r.complete[j])}});
    if (r.inJO[j]) jo.push_back(coarse.label(j));
  }
  nlohmann::json out{{"I", I}, {"J_O", jo}};
  out["subordinationOrder"] = r.subordinationOrder ? nlohmann::json(*r.subordinationOrder) : nlohmann::json(nullptr);
  out["subordinationSkipped"] = r.subordinationSkipped;
  out["subordinationSampled"] = r.subordinationSampled;
  if (r.C_uQ) {
    out["C_uQ"] = *r.C_uQ;
    out["C_uQStable"] = r.cuqStable;
  }
  if (r.relModConstant) out["relModConstant"] = *r.relModConstant;
  return out;
}

}  // namespace harmcover
