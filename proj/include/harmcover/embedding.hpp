#pragma once

#include <optional>
#include <string>
#include <vector>

#include "harmcover/exponent.hpp"
#include "harmcover/relations.hpp"

namespace harmcover {

/// QIntoP: D(Q, p1, q1, u) -> D(P, p2, q2, v).  PIntoQ: D(P, p2, q2, v) -> D(Q, p1, q1, u).
/// Q is always the fine covering.
enum class Direction { PIntoQ, QIntoP };
enum class Holds { Yes, No, BoundaryUndecided };
enum class Finiteness { Finite, Infinite, BoundaryUndecided };
enum class Mode { ClosedForm, Numerical };
enum class Representative { First, Last };

std::string nameOf(Direction d);
std::string nameOf(Holds h);
std::string nameOf(Finiteness f);
std::string nameOf(Mode m);
Direction parseDirection(const std::string& s);

struct EmbeddingQuery {
  const Covering* fine = nullptr;
  const Covering* coarse = nullptr;
  const WeightFamily* u = nullptr;
  const WeightFamily* v = nullptr;
  Exponent p1, q1, p2, q2;
  Direction direction = Direction::QIntoP;
  /// Increasing frequency radii; empty selects four doublings ending at the
  /// largest complete coarse set.
  std::vector<double> truncationSchedule;
  Representative representative = Representative::First;
  /// Optional precomputed relations between fine and coarse.
  const RelationReport* relations = nullptr;
};

struct FinitenessThresholds {
  double tolGrowth = 0.01;
  double slopeMin = 0.05;
};

struct PartialValues {
  std::vector<double> radius;
  std::vector<double> values;
  Exponent outer;
  std::vector<double> blockSlopes;
  Finiteness verdict = Finiteness::BoundaryUndecided;
};

struct EmbeddingConstants {
  Exponent r;
  PartialValues C1;
  PartialValues C2;
};

/// Classifies a truncation sequence. Blocks are the increments of the ρ-th
/// power sums (or the block maxima for ρ = ∞) between successive radii.
Finiteness classifyPartials(PartialValues& pv, const std::vector<double>& blocks,
                            const FinitenessThresholds& th = {});

/// ‖x‖_{ℓ^ρ}
double sequenceNorm(const std::vector<double>& x, Exponent rho);

EmbeddingConstants embeddingConstants(const EmbeddingQuery& q, Exponent r, const FinitenessThresholds& th = {});

struct EmbeddingVerdict {
  Holds holds = Holds::BoundaryUndecided;
  std::string bindingCondition;
  Mode mode = Mode::Numerical;
  nlohmann::json constants = nlohmann::json::object();
  /// Per-truncation rows for CSV export.
  std::vector<std::vector<double>> trace;
  std::vector<std::string> traceColumns;
};

EmbeddingVerdict decideGeneral(const EmbeddingQuery& q, const FinitenessThresholds& th = {});

struct AlphaModulationQuery {
  double alpha = 0.0, beta = 0.0;
  Exponent p1, q1, p2, q2;
  double s1 = 0.0, s2 = 0.0;
  int d = 1;
  /// QIntoP: M^{s1,α} -> M^{s2,β}.  PIntoQ: M^{s1,β} -> M^{s2,α}.
  Direction direction = Direction::QIntoP;
};

EmbeddingVerdict decideAlphaModulation(const AlphaModulationQuery& q);

struct ShearletBesovQuery {
  double c = 0.5;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  Exponent p1, q1, p2, q2;
};

struct ShearletBesovVerdict {
  EmbeddingVerdict sufficient;
  EmbeddingVerdict necessary;
  double alpha1 = 0.0;
  double gamma1Sufficient = 0.0;
  double gamma1Necessary = 0.0;
};

ShearletBesovVerdict decideShearletBesov(const ShearletBesovQuery& q);

nlohmann::json toJson(const EmbeddingVerdict& v);
nlohmann::json toJson(const ShearletBesovVerdict& v);
nlohmann::json toJson(const PartialValues& pv);
std::string traceCsv(const EmbeddingVerdict& v);

}  // namespace harmcover
