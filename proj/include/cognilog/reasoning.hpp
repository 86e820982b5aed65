#pragma once

// Inference built on functor search: abstraction, completion of an episode
// from a scenario, scenario learning, story comprehension and planning.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cognilog/belog.hpp"
#include "cognilog/functor.hpp"
#include "cognilog/model.hpp"

namespace cognilog {

// ---------------------------------------------------------------------------
// Abstraction

struct AbstractionResult {
  Functor functor;
  Score score;
  /// Source objects left unmapped; always empty for returned results.
  std::vector<ObjectId> residue;
};

/// Surjective search, keeping only full functors with an empty residue.
/// Every admissible abstraction is returned, best first.
std::vector<AbstractionResult> abstract_episode(const ELog& e, const ELog& s, const BeLog& b,
                                                const SearchConfig& cfg);

// ---------------------------------------------------------------------------
// Completion

enum class Tense { future, past_hidden, undetermined };

std::string_view to_string(Tense t);

struct AddedAction {
  ObjectId id;        // id in the extended e-log
  ObjectId slog;      // s-log it was copied from
  ObjectId s_action;  // s-action it copies
  Tense tense = Tense::undetermined;
};

struct InferenceResult {
  ELog extended;
  Functor functor;  // best partial functor found before completion
  std::vector<AddedAction> added;
};

/// Finds the best partial functor e -> s (neither surjective nor total),
/// then copies every unhit s-action into e. The performer is the unique
/// preimage of the s-performer (`nobody` if there is none); cause arrows
/// follow the s-log. e-actions whose cause arrow points at a sentinel are
/// wired to the copies where the s-log has an arrow.
/// Throws no_admissible_functor, ambiguous_inverse_image.
InferenceResult infer_missing(const ELog& e, const ELog& s, const BeLog& b, const SearchConfig& cfg);

// ---------------------------------------------------------------------------
// Scenario learning

/// Be3 target of `participant` with the fewest members (ties by id), or
/// nullopt when the participant belongs to no class.
std::optional<ObjectId> narrowest_class(const BeLog& b, const ObjectId& participant);

/// Extracts the sub-episode on `subset`, replaces participants by their
/// narrowest class (a participant without one becomes its own singleton
/// class) and timestamps by dense ranks.
/// Throws not_causally_closed when a causal path leaves the subset and
/// re-enters it, unknown_object for ids outside e.
ELog generate_slog(const ELog& e, const std::set<ObjectId>& subset, const BeLog& b,
                   std::optional<ObjectId> new_id = std::nullopt);

struct InductionResult {
  ELog slog;
  /// Characteristics shared by every exemplar participant of each class.
  std::map<ObjectId, std::set<ObjectId>> characteristics;
};

/// Scenario from the first exemplar (whole log); each class keeps the
/// characteristics common to all participants of all exemplars that fall in
/// it. Throws invalid_config on an empty exemplar list.
InductionResult induce_slog(const std::vector<ELog>& exemplars, const BeLog& b, ObjectId id);

// ---------------------------------------------------------------------------
// Comprehension

struct TreeNode {
  std::string id;  // "L<level>.N<index>"
  std::size_t level = 0;
  std::optional<std::string> parent;
  std::vector<std::string> children;
  std::set<ObjectId> actions;
  ELog episode;  // full subcategory of the story on `actions` and their performers
  std::optional<ObjectId> slog;
  std::optional<Candidate> match;
};

struct ComprehensionTree {
  std::vector<std::vector<TreeNode>> levels;

  const TreeNode* find(std::string_view id) const;
};

/// Level 0: weakly connected components of the story's cause arrows. Each
/// higher level merges nodes linked by a cause arrow or a shared performer,
/// until one node remains, nothing merges, or `max_depth` levels exist.
/// Each node keeps its best match over the library.
/// Throws invalid_config on an empty library.
ComprehensionTree comprehend(const ELog& story, const std::vector<ELog>& library, const BeLog& b,
                             const SearchConfig& cfg, std::size_t max_depth);

struct ClassScores {
  std::map<ObjectId, Ratio> scores;
  std::set<ObjectId> scenes;  // matched s-logs at level 0
  bool no_matched_scenes = false;
};

/// Scores every be-log object with characteristics against the set of
/// scenes matched at level 0.
ClassScores classify_story(const ComprehensionTree& tree, const BeLog& b);

// ---------------------------------------------------------------------------
// Planning

struct Plan {
  std::vector<ObjectId> chain;  // s-log ids, earliest first
  ELog scenario;                // the assembled s-log
  ELog grounded;                // e-log over world participants
  std::map<ObjectId, ObjectId> assignment;  // class -> world participant
};

/// Assembles s-log chains ending in an action matching `goal` (by id or
/// Be3) and grounds each class on a compatible world participant, one
/// participant per class. At most `depth` s-logs per chain and
/// cfg.max_candidates plans (0 = all). Throws no_plan_found.
std::vector<Plan> plan(const ObjectId& goal, const std::vector<ELog>& library, const ELog& world,
                       const BeLog& b, const SearchConfig& cfg, std::size_t depth = 3);

}  // namespace cognilog
