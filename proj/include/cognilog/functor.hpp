#pragma once

// Functors between logs: search, scoring, a brute-force oracle, fullness
// and natural transformations.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cognilog/belog.hpp"
#include "cognilog/matrix_engine.hpp"
#include "cognilog/model.hpp"
#include "cognilog/temporal.hpp"

namespace cognilog {

enum class FunctorDirection { e_to_s, s_to_e };

std::string_view to_string(FunctorDirection d);

/// Partial object maps; sentinels are implicit (mapped onto themselves).
struct Functor {
  ObjectId src;
  ObjectId dst;
  std::map<ObjectId, ObjectId> action_map;
  std::map<ObjectId, ObjectId> participant_map;
  FunctorDirection direction = FunctorDirection::e_to_s;

  bool empty() const noexcept { return action_map.empty() && participant_map.empty(); }
  bool operator==(const Functor&) const = default;
};

/// Lexicographic order on the (source, target) pairs of the action map,
/// then of the participant map.
bool functor_less(const Functor& a, const Functor& b);

Functor identity_functor(const ELog& log);

struct ScoreWeights {
  double structural = 0.5;
  double temporal = 0.25;
  double similarity = 0.25;
};

struct SearchConfig {
  ScoreWeights weights;
  double min_compatibility = 0.0;
  /// 0 keeps every candidate.
  std::size_t max_candidates = 10;
  bool require_surjective = true;
  bool require_injective = true;
  /// 0 = exhaustive backtracking.
  std::size_t beam_width = 0;
  CompatibilityConfig compatibility;

  /// Throws invalid_config: weights must be non-negative and sum to 1,
  /// min_compatibility must lie in [0, 1].
  void validate() const;
};

struct Score {
  double structural = 0.0;
  double temporal = 1.0;
  double similarity = 0.0;
  double total = 0.0;
  CompletenessReport report;
  TemporalReport temporal_report;
};

struct Candidate {
  Functor functor;
  Score score;
};

CompletenessReport completeness(const Functor& f, const ELog& source, const ELog& target);

/// structural: fraction of the hard checks (both causal equations, the who
/// equation, surjectivity) that pass, times the fraction of source objects
/// mapped. temporal: TemporalReport::consistency. similarity: mean
/// mapping_compatibility over mapped pairs.
Score score_functor(const Functor& f, const ELog& source, const ELog& target, const BeLog& belog,
                    const SearchConfig& cfg);

/// Backtracks over source actions in canonical causal order; each mapped
/// action forces the image of its performer. Candidates whose mapped pairs
/// fall below min_compatibility are pruned. Every result satisfies the
/// function and zero-column rules and both causal equations and the who
/// equation on its image, plus surjectivity / totality when required.
/// Sorted by total score (descending) then functor_less.
std::vector<Candidate> search_functors(const ELog& source, const ELog& target, const BeLog& belog,
                                       const SearchConfig& cfg);

/// Enumerates every total map (actions and participants) and keeps the
/// complete ones. Throws too_large above 8 content actions on either side.
std::vector<Functor> brute_force_functors(const ELog& source, const ELog& target, const SearchConfig& cfg);

/// Thin-category hom relation: y reachable from x through who / cause
/// arrows, identities included. Sentinels are left out.
std::map<ObjectId, std::set<ObjectId>> hom_reachability(const ELog& log);

/// Full on mapped objects: whenever F x != F y and the target has an arrow
/// F x -> F y, the source has an arrow x -> y. Collapsed objects only need
/// the identity of their image.
bool is_full(const Functor& f, const ELog& source, const ELog& target);

struct NaturalTransformation {
  /// Component at each source object: an arrow F(x) -> G(x) of the target,
  /// identified by its endpoints.
  std::map<ObjectId, std::pair<ObjectId, ObjectId>> components;
};

/// Throws source_target_mismatch unless both functors run between the same
/// two logs. Returns nullopt when some component or naturality square has no
/// arrow.
std::optional<NaturalTransformation> natural_transformation(const Functor& f, const Functor& g,
                                                            const ELog& source, const ELog& target);

}  // namespace cognilog
