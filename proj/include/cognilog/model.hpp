#pragma once

// Episode logs (e-logs) and scenario logs (s-logs) as finite categories.
//
// Objects are actions and participants. Every action emits exactly one
// `who` arrow (to a participant), one `cause_s` arrow (to its sufficient
// cause, pastward) and one `cause_n` arrow (to the effect it is a
// necessary condition for, futureward). Totality is kept with three
// reserved objects: the actions `nothing` and `unknown` and the
// participant `nobody`. Identity morphisms are implied, never stored.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cognilog {

using ObjectId = std::string;

inline constexpr std::string_view kNothing = "nothing";
inline constexpr std::string_view kUnknown = "unknown";
inline constexpr std::string_view kNobody = "nobody";

bool is_sentinel_action(std::string_view id);
bool is_sentinel(std::string_view id);
/// Non-empty, no whitespace, no quotes or '='.
bool is_valid_id(std::string_view id);

enum class LogKind { episode, scenario };
enum class ParticipantKind { plain, action_noun, class_, sentinel };

std::string_view to_string(LogKind kind);
std::string_view to_string(ParticipantKind kind);
std::optional<ParticipantKind> parse_participant_kind(std::string_view text);

struct RawData {
  std::optional<std::int64_t> t_start;
  std::optional<std::int64_t> t_end;
  std::map<std::string, std::string> attrs;

  bool operator==(const RawData&) const = default;
};

struct Participant {
  ObjectId id;
  std::string label;
  ParticipantKind kind = ParticipantKind::plain;

  bool operator==(const Participant&) const = default;
};

struct Action {
  ObjectId id;
  std::string label;
  ObjectId who;
  ObjectId cause_s;
  ObjectId cause_n;
  std::optional<ObjectId> trivial_partner;
  bool volition = false;
  RawData raw;

  bool operator==(const Action&) const = default;
};

class ELog {
 public:
  /// Creates a log holding only the sentinel objects.
  explicit ELog(ObjectId id, LogKind kind = LogKind::episode);

  const ObjectId& id() const noexcept { return id_; }
  LogKind kind() const noexcept { return kind_; }
  bool is_scenario() const noexcept { return kind_ == LogKind::scenario; }

  const std::map<ObjectId, Action>& actions() const noexcept { return actions_; }
  const std::map<ObjectId, Participant>& participants() const noexcept { return participants_; }

  const Action* find_action(std::string_view id) const;
  const Participant* find_participant(std::string_view id) const;
  bool is_action(std::string_view id) const { return find_action(id) != nullptr; }
  /// Participants in the wide sense: declared participants and every action.
  bool is_participant(std::string_view id) const;
  bool has_object(std::string_view id) const;

  /// Non-sentinel actions and participants, sorted by id.
  std::vector<ObjectId> content_actions() const;
  std::vector<ObjectId> content_participants() const;

  /// Provenance back-reference set by extract_subepisode.
  const std::optional<ObjectId>& parent() const noexcept { return parent_; }
  void set_parent(std::optional<ObjectId> parent) { parent_ = std::move(parent); }
  void set_id(ObjectId id) { id_ = std::move(id); }

  // Raw editors. They do not validate; the free functions below do.
  void put_action(Action action);
  void put_participant(Participant participant);
  void erase_action(std::string_view id);
  void erase_participant(std::string_view id);
  Action& action_ref(std::string_view id);

  bool operator==(const ELog&) const = default;

 private:
  ObjectId id_;
  LogKind kind_;
  std::map<ObjectId, Action> actions_;
  std::map<ObjectId, Participant> participants_;
  std::optional<ObjectId> parent_;
};

/// Equality ignoring provenance marks.
bool same_content(const ELog& a, const ELog& b);

/// One row of the relational form: action, who, cause_s, cause_n.
struct ActionRecord {
  ObjectId id;
  ObjectId who;
  std::optional<ObjectId> cause_s;
  std::optional<ObjectId> cause_n;
  std::optional<ObjectId> trivial_partner;
  bool volition = false;
  std::string label;
  RawData raw;
};

/// Builds and validates a log. Missing causes default to `unknown`;
/// rows for sentinel ids are accepted and ignored.
/// Throws Error: duplicate_id, dangling_reference, causal_cycle, invalid_log.
ELog build_elog(ObjectId id, LogKind kind, const std::vector<ActionRecord>& records,
                const std::vector<Participant>& participants);

struct RelationalTable {
  std::vector<ActionRecord> records;
  std::vector<Participant> participants;
};

/// Inverse of build_elog: non-sentinel rows sorted by id.
RelationalTable to_relational_table(const ELog& log);

enum class ViolationKind {
  invalid_id,
  totality,
  uniqueness,
  dangling,
  acyclicity,
  trivial_pair,
  timestamp_order,
  interval,
  participant_kind,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  ObjectId object;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

ValidationReport validate_category(const ELog& log);

/// Throws the Error matching the first violation, if any.
void require_valid(const ELog& log);

/// Non-sentinel actions in causal-topological order. Trivial partners are
/// adjacent ("do" first); ties break on (t_start, id). Requires an acyclic log.
std::vector<ObjectId> canonical_action_order(const ELog& log);

/// Direct cause -> effect pairs between distinct non-sentinel actions,
/// read from both cause_s and cause_n arrows, deduplicated and sorted.
std::vector<std::pair<ObjectId, ObjectId>> causal_edges(const ELog& log);

/// The "do" side of a trivial pair: the partner its cause_n points to.
bool is_do_side(const ELog& log, const Action& action);

struct DecomposeRequest {
  ObjectId subject;
  std::string verb_label;
  ObjectId object;
  ObjectId do_id;
  ObjectId be_done_id;
  std::string be_done_label;
  RawData do_time;
  /// Defaults to do_time.
  std::optional<RawData> be_done_time;
  bool trivial = true;
};

/// Splits a transitive action into "do" (who = subject) and "be done"
/// (who = object) with be_done.cause_s = do and do.cause_n = be_done.
/// Throws unknown_participant, trivial_time_mismatch.
std::pair<Action, Action> decompose_transitive(const ELog& log, const DecomposeRequest& request);

/// Returns a new validated log with the given actions inserted.
ELog with_actions(const ELog& log, const std::vector<Action>& actions);

enum class CauseDirection { s, n };

/// Inserts a replica A' of `action` (same who and timestamps) linked to A by a
/// cause arrow of the given direction: for N, A'.cause_s = A and A'.cause_n =
/// branch; for S, A'.cause_n = A and A'.cause_s = branch. A keeps its own arrow,
/// so the cause relation fans out while every action still emits one arrow
/// per kind. Throws sentinel_not_branchable, unknown_object.
ELog add_intermediate_replica(const ELog& log, std::string_view action, CauseDirection direction,
                              const ObjectId& replica_id,
                              const std::optional<ObjectId>& branch = std::nullopt);

/// Full subcategory on `objects` plus sentinels. Arrows leaving the set are
/// rerouted to `unknown` (causes) or `nobody` (who). Throws unknown_object.
ELog extract_subepisode(const ELog& log, const std::set<ObjectId>& objects,
                        std::optional<ObjectId> new_id = std::nullopt);

/// Deletes an action; arrows into it are rerouted to `unknown`.
ELog remove_action(const ELog& log, std::string_view action);

}  // namespace cognilog
