#include "harmcover/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "harmcover/errors.hpp"
#include "harmcover/parallel.hpp"

namespace harmcover {

namespace {

constexpr double kClosedFormTol = 1e-12;
constexpr double kStableTol = 1e-6;

double frequencyRadius(const Covering& cov, std::size_t j) {
  const AxisBox& b = cov.bbox(j);
  return std::max(b.lo.cwiseAbs().maxCoeff(), b.hi.cwiseAbs().maxCoeff());
}

double slopeOf(double b0, double b1, double r0, double r1) {
  if (b0 <= 0.0 && b1 <= 0.0) return -std::numeric_limits<double>::infinity();
  if (b0 <= 0.0) return std::numeric_limits<double>::infinity();
  if (b1 <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(b1 / b0) / std::log(r1 / r0);
}

struct Terms {
  std::vector<std::size_t> js;
  std::vector<double> x;
};

PartialValues partials(const Terms& t, const std::vector<double>& radius, const std::vector<double>& schedule,
                       Exponent rho, const FinitenessThresholds& th) {
  PartialValues pv;
  pv.radius = schedule;
  pv.outer = rho;
  std::vector<double> blocks(schedule.size(), 0.0);
  for (std::size_t n = 0; n < t.js.size(); ++n) {
    double r = radius[t.js[n]];
    auto it = std::lower_bound(schedule.begin(), schedule.end(), r);
    if (it == schedule.end()) continue;
    std::size_t k = static_cast<std::size_t>(it - schedule.begin());
    if (rho.isInfinite())
      blocks[k] = std::max(blocks[k], t.x[n]);
    else
      blocks[k] += std::pow(t.x[n], rho.value());
  }
  double acc = 0.0;
  for (double b : blocks) {
    if (rho.isInfinite()) {
      acc = std::max(acc, b);
      pv.values.push_back(acc);
    } else {
      acc += b;
      pv.values.push_back(std::pow(acc, 1.0 / rho.value()));
    }
  }
  classifyPartials(pv, blocks, th);
  return pv;
}

bool regionHoldsCoarse(const Covering& fine, const Covering& coarse, const RelationReport& rel) {
  if (fine.region().kind == Region::Kind::Whole) return true;
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    if (!rel.inJO[j] || !rel.complete[j]) continue;
    const auto& s = coarse.set(j);
    for (const auto& y : coarse.bases()[s.base].samplePoints(6, kGeoTolerance))
      if (!fine.region().contains(s.map.apply(y))) return false;
  }
  return true;
}

/// sup_j sup_{i,l ∈ I_j} w_i / w_l over complete j, with a flag telling whether
/// the value is already attained on the inner half of the truncation.
std::pair<double, bool> relMod(const std::vector<double>& w, const RelationReport& rel,
                               const std::vector<double>& radius, double rMax) {
  double all = 1.0, inner = 1.0;
  for (std::size_t j = 0; j < rel.I.size(); ++j) {
    if (!rel.complete[j] || rel.I[j].empty()) continue;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i : rel.I[j]) {
      lo = std::min(lo, w[i]);
      hi = std::max(hi, w[i]);
    }
    all = std::max(all, hi / lo);
    if (radius[j] <= 0.5 * rMax) inner = std::max(inner, hi / lo);
  }
  return {all, all <= inner * (1.0 + kStableTol)};
}

std::string rTag(Exponent r) { return "C₁^(" + r.toString() + ") < ∞"; }

EmbeddingVerdict closedVerdict(bool holds, std::string binding) {
  EmbeddingVerdict v;
  v.holds = holds ? Holds::Yes : Holds::No;
  v.mode = Mode::ClosedForm;
  v.bindingCondition = std::move(binding);
  return v;
}

}  // namespace

std::string nameOf(Direction d) { return d == Direction::PIntoQ ? "PIntoQ" : "QIntoP"; }

std::string nameOf(Holds h) {
  switch (h) {
    case Holds::Yes:
      return "yes";
    case Holds::No:
      return "no";
    default:
      return "boundaryUndecided";
  }
}

std::string nameOf(Finiteness f) {
  switch (f) {
    case Finiteness::Finite:
      return "FINITE";
    case Finiteness::Infinite:
      return "INFINITE";
    default:
      return "boundaryUndecided";
  }
}

std::string nameOf(Mode m) { return m == Mode::ClosedForm ? "closedForm" : "numerical"; }

Direction parseDirection(const std::string& s) {
  if (s == "PIntoQ" || s == "pintoq" || s == "backward") return Direction::PIntoQ;
  if (s == "QIntoP" || s == "qintop" || s == "forward") return Direction::QIntoP;
  throw ArgumentError("unknown direction '" + s + "' (expected QIntoP or PIntoQ)");
}

double sequenceNorm(const std::vector<double>& x, Exponent rho) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (rho.isInfinite() || m == 0.0 || std::isinf(m)) return m;
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v) / m, rho.value());
  return m * std::pow(s, 1.0 / rho.value());
}

Finiteness classifyPartials(PartialValues& pv, const std::vector<double>& blocks, const FinitenessThresholds& th) {
  std::size_t n = blocks.size();
  pv.blockSlopes.clear();
  pv.verdict = Finiteness::BoundaryUndecided;
  if (n < 3) return pv.verdict;
  for (std::size_t k = n - 2; k < n; ++k)
    pv.blockSlopes.push_back(slopeOf(blocks[k - 1], blocks[k], pv.radius[k - 1], pv.radius[k]));
  double s1 = pv.blockSlopes[0], s2 = pv.blockSlopes[1];
  double prev = pv.values[n - 2], last = pv.values[n - 1];
  double growth = prev > 0.0 ? last / prev - 1.0 : (last > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  bool up = s1 >= th.slopeMin && s2 >= th.slopeMin;
  if (pv.outer.isInfinite()) {
    if (growth < th.tolGrowth)
      pv.verdict = Finiteness::Finite;
    else if (up)
      pv.verdict = Finiteness::Infinite;
  } else {
    if ((s1 <= -th.slopeMin && s2 <= -th.slopeMin) || (growth < th.tolGrowth && s2 < 0.0))
      pv.verdict = Finiteness::Finite;
    else if (up)
      pv.verdict = Finiteness::Infinite;
  }
  return pv.verdict;
}

EmbeddingConstants embeddingConstants(const EmbeddingQuery& q, Exponent r, const FinitenessThresholds& th) {
  if (!q.fine || !q.coarse || !q.u || !q.v) throw ArgumentError("embedding query needs both coverings and weights");
  const Covering& fine = *q.fine;
  const Covering& coarse = *q.coarse;
  RelationReport local;
  if (!q.relations) local = intersectionSets(fine, coarse);
  const RelationReport& rel = q.relations ? *q.relations : local;

  std::vector<double> radius(coarse.size());
  double rMax = 0.0;
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    radius[j] = frequencyRadius(coarse, j);
    if (rel.complete[j] && rel.inJO[j]) rMax = std::max(rMax, radius[j]);
  }
  std::vector<double> schedule = q.truncationSchedule;
  if (schedule.empty()) {
    if (rMax <= 0.0) throw PreconditionError("no coarse set lies inside the fine truncation");
    schedule = {rMax / 8, rMax / 4, rMax / 2, rMax};
  }
  for (std::size_t k = 1; k < schedule.size(); ++k)
    if (!(schedule[k] > schedule[k - 1])) throw ArgumentError("truncation schedule must be increasing");

  bool pq = q.direction == Direction::PIntoQ;
  double ip1 = q.p1.reciprocal(), ip2 = q.p2.reciprocal(), iq1 = q.q1.reciprocal();
  Exponent inner = pq ? holderExponent(q.q1, r) : holderExponent(r, q.q1);
  Exponent outer = pq ? holderExponent(q.q1, q.q2) : holderExponent(q.q2, q.q1);
  double e = pq ? positivePart(iq1 - q.p2.triangleUp().reciprocal())
                : positivePart(q.p2.triangleDown().reciprocal() - iq1);

  std::vector<double> det(fine.size()), u(fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) {
    det[i] = fine.set(i).map.absDet();
    u[i] = q.u->at(fine, i);
  }

  Terms c1, c2;
  std::vector<double> x1(coarse.size(), 0.0), x2(coarse.size(), 0.0);
  std::vector<char> use1(coarse.size(), 0), use2(coarse.size(), 0);
  parallelFor(coarse.size(), [&](std::size_t j) {
    if (!rel.complete[j]) return;
    const auto& I = rel.I[j];
    double vj = q.v->at(coarse, j);
    std::vector<double> t;
    t.reserve(I.size());
    for (std::size_t i : I) t.push_back(pq ? std::pow(det[i], ip2 - ip1) * u[i] : std::pow(det[i], ip1 - ip2) / u[i]);
    x1[j] = pq ? sequenceNorm(t, inner) / vj : vj * sequenceNorm(t, inner);
    use1[j] = 1;
    if (!rel.inJO[j]) return;
    if (I.empty()) {
      throw InternalError("empty intersection set I_j for coarse set " + labelToString(coarse.label(j)) + " in J_O");
    }
    std::size_t ij = q.representative == Representative::First ? I.front() : I.back();
    double detS = coarse.set(j).map.absDet();
    x2[j] = pq ? u[ij] / vj * std::pow(det[ij], ip2 - e - ip1) * std::pow(detS, e)
               : vj / u[ij] * std::pow(det[ij], ip1 - e - ip2) * std::pow(detS, e);
    use2[j] = 1;
  });
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    if (use1[j]) {
      c1.js.push_back(j);
      c1.x.push_back(x1[j]);
    }
    if (use2[j]) {
      c2.js.push_back(j);
      c2.x.push_back(x2[j]);
    }
  }
  EmbeddingConstants out;
  out.r = r;
  out.C1 = partials(c1, radius, schedule, outer, th);
  out.C2 = partials(c2, radius, schedule, outer, th);
  return out;
}

EmbeddingVerdict decideGeneral(const EmbeddingQuery& query, const FinitenessThresholds& th) {
  if (!query.fine || !query.coarse || !query.u || !query.v) {
    throw ArgumentError("embedding query needs both coverings and weights");
  }
  const Covering& fine = *query.fine;
  const Covering& coarse = *query.coarse;
  std::size_t skipped = 0;
  auto order = almostSubordinate(fine, coarse, 8, &skipped);
  if (!order) {
    throw PreconditionError("decideGeneral: the fine covering Q is not almost subordinate to the coarse covering P");
  }
  RelationReport local;
  if (!query.relations) local = intersectionSets(fine, coarse);
  EmbeddingQuery q = query;
  q.relations = query.relations ? query.relations : &local;
  const RelationReport& rel = *q.relations;

  bool pq = q.direction == Direction::PIntoQ;
  bool pOk = pq ? q.p2 <= q.p1 : q.p1 <= q.p2;
  std::string pTag = pq ? "p₂ ≤ p₁" : "p₁ ≤ p₂";
  Exponent rSuff = pq ? q.p2.triangleUp() : q.p2.triangleDown();
  Exponent rNec = q.p2;

  auto suff = embeddingConstants(q, rSuff, th);
  auto nec = rNec == rSuff ? suff : embeddingConstants(q, rNec, th);

  std::vector<double> det(fine.size()), u(fine.size()), radius(coarse.size());
  for (std::size_t i = 0; i < fine.size(); ++i) {
    det[i] = fine.set(i).map.absDet();
    u[i] = q.u->at(fine, i);
  }
  double rMax = 0.0;
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    radius[j] = frequencyRadius(coarse, j);
    if (rel.complete[j]) rMax = std::max(rMax, radius[j]);
  }
  auto [detMod, detStable] = relMod(det, rel, radius, rMax);
  auto [uMod, uStable] = relMod(u, rel, radius, rMax);
  bool inside = regionHoldsCoarse(fine, coarse, rel);
  bool relModerate = detStable && uStable && inside;

  EmbeddingVerdict v;
  v.mode = Mode::Numerical;
  if (!pOk) {
    v = closedVerdict(false, pTag);
  } else if (relModerate && suff.C2.verdict != Finiteness::BoundaryUndecided) {
    v = closedVerdict(suff.C2.verdict == Finiteness::Finite, "C₂ < ∞");
  } else if (suff.C1.verdict == Finiteness::Finite) {
    v.holds = Holds::Yes;
    v.bindingCondition = rTag(rSuff);
  } else if (nec.C1.verdict == Finiteness::Infinite) {
    v.holds = Holds::No;
    v.bindingCondition = rTag(rNec);
  } else {
    v.holds = Holds::BoundaryUndecided;
    v.bindingCondition = "gap between " + rTag(rSuff) + " and " + rTag(rNec);
  }

  nlohmann::json c;
  c["direction"] = nameOf(q.direction);
  c["subordinationOrder"] = *order;
  c["subordinationSkipped"] = skipped;
  c["pCondition"] = {{"tag", pTag}, {"holds", pOk}};
  c["relativeModerate"] = relModerate;
  c["relModConstantDet"] = detMod;
  c["relModConstantWeight"] = uMod;
  c["coarseInsideO"] = inside;
  c["rSufficient"] = rSuff.toString();
  c["rNecessary"] = rNec.toString();
  c["C1Sufficient"] = toJson(suff.C1);
  c["C1Necessary"] = toJson(nec.C1);
  c["C2"] = toJson(suff.C2);
  v.constants = c;
  v.traceColumns = {"truncation", "C1_partial", "C2_partial", "C1_necessary_partial"};
  for (std::size_t k = 0; k < suff.C1.radius.size(); ++k)
    v.trace.push_back({suff.C1.radius[k], suff.C1.values[k], suff.C2.values[k], nec.C1.values[k]});
  return v;
}

EmbeddingVerdict decideAlphaModulation(const AlphaModulationQuery& q) {
  if (q.alpha < 0.0 || q.alpha > 1.0 || q.beta < 0.0 || q.beta > 1.0) {
    throw ArgumentError("alpha and beta must lie in [0, 1]");
  }
  if (q.alpha > q.beta) {
    throw ArgumentError("alpha > beta: swap alpha and beta and flip the direction");
  }
  if (q.d < 1) throw ArgumentError("dimension must be positive");
  bool fwd = q.direction == Direction::QIntoP;
  double ip1 = q.p1.reciprocal(), ip2 = q.p2.reciprocal(), iq1 = q.q1.reciprocal(), iq2 = q.q2.reciprocal();
  double sx = fwd ? q.alpha * (ip2 - ip1) + (q.alpha - q.beta) * positivePart(q.p2.triangleDown().reciprocal() - iq1)
                  : q.alpha * (ip2 - ip1) + (q.alpha - q.beta) * positivePart(iq2 - q.p1.triangleUp().reciprocal());
  std::string sName = fwd ? "s^{(0)}" : "s^{(1)}";
  bool strict = q.q2 < q.q1;
  double rhs = strict ? q.s1 + q.d * (sx + (1.0 - q.beta) * (iq1 - iq2)) : q.s1 + q.d * sx;
  std::string sTag = strict ? "s₂ < s₁ + d·(" + sName + " + (1−β)(1/q₁ − 1/q₂))" : "s₂ ≤ s₁ + d·" + sName;
  bool pOk = q.p1 <= q.p2;
  bool sOk = strict ? q.s2 < rhs - kClosedFormTol : q.s2 <= rhs + kClosedFormTol;
  EmbeddingVerdict v = closedVerdict(pOk && sOk, pOk ? sTag : "p₁ ≤ p₂");
  v.constants = {{"direction", fwd ? "M^{s1,alpha} -> M^{s2,beta}" : "M^{s1,beta} -> M^{s2,alpha}"},
                 {fwd ? "s0" : "s1", sx},
                 {"strict", strict},
                 {"rhs", rhs},
                 {"margin", rhs - q.s2},
                 {"pCondition", pOk},
                 {"sCondition", sOk}};
  return v;
}

ShearletBesovVerdict decideShearletBesov(const ShearletBesovQuery& q) {
  if (!(q.c > 0.0 && q.c <= 1.0)) throw ArgumentError("c must lie in (0, 1]");
  double ip1 = q.p1.reciprocal(), ip2 = q.p2.reciprocal(), iq1 = q.q1.reciprocal();
  double bracket = ip1 - ip2 - iq1 + 0.5 + q.beta;
  ShearletBesovVerdict out;
  out.alpha1 = (1.0 + q.c) / q.c * bracket;
  auto evaluate = [&](Exponent pp, double& gamma1) {
    gamma1 = -(1.0 + q.c) * bracket + (q.c - 1.0) * positivePart(pp.reciprocal() - iq1);
    bool pOk = q.p1 <= q.p2;
    bool gStrict = q.q2 < q.q1;
    bool gOk = gStrict ? q.gamma < q.alpha + gamma1 - kClosedFormTol : q.gamma <= q.alpha + gamma1 + kClosedFormTol;
    bool aStrict = pp < q.q1;
    double lhs = aStrict ? std::max(pp.reciprocal() - iq1, q.alpha) : std::max(0.0, q.alpha);
    bool aOk = aStrict ? lhs < out.alpha1 - kClosedFormTol : lhs <= out.alpha1 + kClosedFormTol;
    std::string tag;
    if (!pOk)
      tag = "p₁ ≤ p₂";
    else if (!gOk)
      tag = gStrict ? "γ < α + γ⁽¹⁾" : "γ ≤ α + γ⁽¹⁾";
    else
      tag = aStrict ? "max{1/p − 1/q₁, α} < α⁽¹⁾" : "max{0, α} ≤ α⁽¹⁾";
    EmbeddingVerdict v = closedVerdict(pOk && gOk && aOk, tag);
    v.constants = {{"alpha1", out.alpha1}, {"gamma1", gamma1}, {"p", pp.toString()},
                   {"pCondition", pOk},    {"gammaCondition", gOk}, {"alphaCondition", aOk}};
    return v;
  };
  out.sufficient = evaluate(q.p2.triangleDown(), out.gamma1Sufficient);
  out.necessary = evaluate(q.p2, out.gamma1Necessary);
  return out;
}

nlohmann::json toJson(const PartialValues& pv) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(x > 0 ? "inf" : "-inf"); };
  nlohmann::json slopes = nlohmann::json::array();
  for (double s : pv.blockSlopes) slopes.push_back(num(s));
  return {{"radius", pv.radius}, {"values", pv.values}, {"outerExponent", pv.outer.toString()},
          {"blockSlopes", slopes}, {"verdict", nameOf(pv.verdict)}};
}

nlohmann::json toJson(const EmbeddingVerdict& v) {
  return {{"holds", nameOf(v.holds)},
          {"bindingCondition", v.bindingCondition},
          {"mode", nameOf(v.mode)},
          {"constants", v.constants}};
}

nlohmann::json toJson(const ShearletBesovVerdict& v) {
  std::string conclusion = v.sufficient.holds == Holds::Yes  ? "embeds"
                           : v.necessary.holds == Holds::No ? "does not embed"
                                                             : "gap";
  return {{"alpha1", v.alpha1},
          {"gamma1Sufficient", v.gamma1Sufficient},
          {"gamma1Necessary", v.gamma1Necessary},
          {"sufficientVerdict", toJson(v.sufficient)},
          {"necessaryVerdict", toJson(v.necessary)},
          {"conclusion", conclusion}};
}

std::string traceCsv(const EmbeddingVerdict& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t k = 0; k < v.traceColumns.size(); ++k) os << (k ? "," : "") << v.traceColumns[k];
  os << "\n";
  for (const auto& row : v.trace) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << row[k];
    os << "\n";
  }
  return os.str();
}

}  // namespace harmcover
