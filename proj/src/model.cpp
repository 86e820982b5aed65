#include "cognilog/model.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "cognilog/error.hpp"

namespace cognilog {

bool is_sentinel_action(std::string_view id) { return id == kNothing || id == kUnknown; }

bool is_sentinel(std::string_view id) { return is_sentinel_action(id) || id == kNobody; }

bool is_valid_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    auto uc = static_cast<unsigned char>(c);
    if (uc <= 0x20 || c == '"' || c == '=' || uc == 0x7f) return false;
  }
  return true;
}

std::string_view to_string(LogKind kind) {
  return kind == LogKind::episode ? "ELOG" : "SLOG";
}

std::string_view to_string(ParticipantKind kind) {
  switch (kind) {
    case ParticipantKind::plain: return "plain";
    case ParticipantKind::action_noun: return "action-as-noun";
    case ParticipantKind::class_: return "class";
    case ParticipantKind::sentinel: return "sentinel";
  }
  return "plain";
}

std::optional<ParticipantKind> parse_participant_kind(std::string_view text) {
  if (text == "plain") return ParticipantKind::plain;
  if (text == "action-as-noun") return ParticipantKind::action_noun;
  if (text == "class") return ParticipantKind::class_;
  if (text == "sentinel") return ParticipantKind::sentinel;
  return std::nullopt;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::invalid_id: return "invalid-id";
    case ViolationKind::totality: return "totality";
    case ViolationKind::uniqueness: return "uniqueness";
    case ViolationKind::dangling: return "dangling";
    case ViolationKind::acyclicity: return "acyclicity";
    case ViolationKind::trivial_pair: return "trivial-pair";
    case ViolationKind::timestamp_order: return "timestamp-order";
    case ViolationKind::interval: return "interval";
    case ViolationKind::participant_kind: return "participant-kind";
  }
  return "violation";
}

// ---------------------------------------------------------------------------
// ELog

ELog::ELog(ObjectId id, LogKind kind) : id_(std::move(id)), kind_(kind) {
  for (std::string_view s : {kNothing, kUnknown}) {
    Action a;
    a.id = std::string(s);
    a.who = std::string(kNobody);
    a.cause_s = a.id;
    a.cause_n = a.id;
    actions_.emplace(a.id, a);
  }
  participants_.emplace(std::string(kNobody),
                        Participant{std::string(kNobody), "", ParticipantKind::sentinel});
}

const Action* ELog::find_action(std::string_view id) const {
  auto it = actions_.find(std::string(id));
  return it == actions_.end() ? nullptr : &it->second;
}

const Participant* ELog::find_participant(std::string_view id) const {
  auto it = participants_.find(std::string(id));
  return it == participants_.end() ? nullptr : &it->second;
}

bool ELog::is_participant(std::string_view id) const {
  return find_participant(id) != nullptr || find_action(id) != nullptr;
}

bool ELog::has_object(std::string_view id) const { return is_participant(id); }

std::vector<ObjectId> ELog::content_actions() const {
  std::vector<ObjectId> out;
  for (const auto& [id, _] : actions_)
    if (!is_sentinel(id)) out.push_back(id);
  return out;
}

std::vector<ObjectId> ELog::content_participants() const {
  std::vector<ObjectId> out;
  for (const auto& [id, _] : participants_)
    if (!is_sentinel(id)) out.push_back(id);
  return out;
}

void ELog::put_action(Action action) {
  auto key = action.id;
  actions_.insert_or_assign(std::move(key), std::move(action));
}

void ELog::put_participant(Participant participant) {
  auto key = participant.id;
  participants_.insert_or_assign(std::move(key), std::move(participant));
}

void ELog::erase_action(std::string_view id) { actions_.erase(std::string(id)); }

void ELog::erase_participant(std::string_view id) { participants_.erase(std::string(id)); }

Action& ELog::action_ref(std::string_view id) {
  auto it = actions_.find(std::string(id));
  if (it == actions_.end()) throw Error(ErrorCode::unknown_object, "no action '" + std::string(id) + "'");
  return it->second;
}

bool same_content(const ELog& a, const ELog& b) {
  return a.id() == b.id() && a.kind() == b.kind() && a.actions() == b.actions() &&
         a.participants() == b.participants();
}

// ---------------------------------------------------------------------------
// Causal structure helpers

namespace {

bool links_as_pair(const Action& a, const Action& b) {
  return (a.cause_n == b.id && b.cause_s == a.id) || (b.cause_n == a.id && a.cause_s == b.id);
}

/// Mutual, linked trivial partnership between two existing non-sentinel actions.
bool is_wellformed_trivial(const ELog& log, const Action& a) {
  if (!a.trivial_partner || is_sentinel(a.id)) return false;
  const Action* p = log.find_action(*a.trivial_partner);
  return p != nullptr && p->id != a.id && !is_sentinel(p->id) && p->trivial_partner == a.id &&
         links_as_pair(a, *p);
}

struct Collapsed {
  std::vector<ObjectId> ids;                       // non-sentinel actions
  std::unordered_map<ObjectId, std::size_t> index;  // id -> position in ids
  std::vector<std::size_t> group;                  // position -> group representative
};

Collapsed collapse_trivial_pairs(const ELog& log) {
  Collapsed c;
  c.ids = log.content_actions();
  for (std::size_t i = 0; i < c.ids.size(); ++i) c.index.emplace(c.ids[i], i);
  c.group.resize(c.ids.size());
  std::iota(c.group.begin(), c.group.end(), std::size_t{0});
  for (std::size_t i = 0; i < c.ids.size(); ++i) {
    const Action& a = *log.find_action(c.ids[i]);
    if (is_wellformed_trivial(log, a)) {
      std::size_t j = c.index.at(*a.trivial_partner);
      std::size_t lo = std::min(c.group[i], c.group[j]);
      c.group[i] = c.group[j] = lo;
    }
  }
  return c;
}

}  // namespace

std::vector<std::pair<ObjectId, ObjectId>> causal_edges(const ELog& log) {
  std::set<std::pair<ObjectId, ObjectId>> edges;
  for (const auto& [id, a] : log.actions()) {
    if (is_sentinel(id)) continue;
    if (!a.cause_s.empty() && a.cause_s != id && !is_sentinel(a.cause_s) && log.is_action(a.cause_s))
      edges.emplace(a.cause_s, id);
    if (!a.cause_n.empty() && a.cause_n != id && !is_sentinel(a.cause_n) && log.is_action(a.cause_n))
      edges.emplace(id, a.cause_n);
  }
  return {edges.begin(), edges.end()};
}

bool is_do_side(const ELog& log, const Action& action) {
  return is_wellformed_trivial(log, action) && action.cause_n == *action.trivial_partner;
}

namespace {

/// Kahn's algorithm over collapsed groups. Returns the order of group
/// representatives; groups caught in a cycle are returned in `cyclic`.
std::vector<std::size_t> topo_groups(const ELog& log, const Collapsed& c,
                                     std::vector<std::size_t>* cyclic) {
  const std::size_t n = c.ids.size();
  std::vector<std::set<std::size_t>> succ(n);
  std::vector<std::size_t> indeg(n, 0);
  for (const auto& [from, to] : causal_edges(log)) {
    std::size_t g1 = c.group[c.index.at(from)], g2 = c.group[c.index.at(to)];
    if (g1 == g2) continue;
    if (succ[g1].insert(g2).second) ++indeg[g2];
  }
  // Group key: (t_start, smallest member id).
  auto key = [&](std::size_t g) {
    const Action& a = *log.find_action(c.ids[g]);
    return std::make_tuple(a.raw.t_start.value_or(std::numeric_limits<std::int64_t>::min()),
                           c.ids[g]);
  };
  auto cmp = [&](std::size_t x, std::size_t y) { return key(x) > key(y); };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> ready(cmp);
  std::vector<bool> is_group(n, false);
  for (std::size_t i = 0; i < n; ++i) is_group[c.group[i]] = true;
  for (std::size_t g = 0; g < n; ++g)
    if (is_group[g] && indeg[g] == 0) ready.push(g);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    std::size_t g = ready.top();
    ready.pop();
    order.push_back(g);
    for (std::size_t h : succ[g])
      if (--indeg[h] == 0) ready.push(h);
  }
  if (cyclic) {
    for (std::size_t g = 0; g < n; ++g)
      if (is_group[g] && indeg[g] > 0) cyclic->push_back(g);
  }
  return order;
}

}  // namespace

std::vector<ObjectId> canonical_action_order(const ELog& log) {
  Collapsed c = collapse_trivial_pairs(log);
  std::vector<std::size_t> cyclic;
  auto groups = topo_groups(log, c, &cyclic);
  if (!cyclic.empty()) throw Error(ErrorCode::causal_cycle, "log '" + log.id() + "' has a causal cycle");
  std::vector<ObjectId> out;
  for (std::size_t g : groups) {
    std::vector<ObjectId> members;
    for (std::size_t i = 0; i < c.ids.size(); ++i)
      if (c.group[i] == g) members.push_back(c.ids[i]);
    std::sort(members.begin(), members.end(), [&](const ObjectId& x, const ObjectId& y) {
      bool dx = is_do_side(log, *log.find_action(x)), dy = is_do_side(log, *log.find_action(y));
      if (dx != dy) return dx;
      return x < y;
    });
    out.insert(out.end(), members.begin(), members.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

ValidationReport validate_category(const ELog& log) {
  ValidationReport report;
  auto add = [&](ViolationKind k, const ObjectId& obj, std::string msg) {
    report.violations.push_back({k, obj, std::move(msg)});
  };

  for (const auto& [id, p] : log.participants()) {
    if (!is_valid_id(id)) add(ViolationKind::invalid_id, id, "participant id is not a valid token");
    if (log.is_action(id)) add(ViolationKind::uniqueness, id, "id used by both an action and a participant");
    if (is_sentinel_action(id)) add(ViolationKind::uniqueness, id, "reserved action id used as participant");
    if (id == kNobody && p.kind != ParticipantKind::sentinel)
      add(ViolationKind::participant_kind, id, "nobody must be a sentinel participant");
    if (id != kNobody && p.kind == ParticipantKind::sentinel)
      add(ViolationKind::participant_kind, id, "only nobody may be a sentinel participant");
    if (log.is_scenario() && !is_sentinel(id) && p.kind != ParticipantKind::class_ &&
        p.kind != ParticipantKind::action_noun)
      add(ViolationKind::participant_kind, id, "s-log participants must be classes");
  }
  if (!log.find_participant(kNobody))
    add(ViolationKind::totality, std::string(kNobody), "sentinel participant missing");
  for (std::string_view s : {kNothing, kUnknown})
    if (!log.find_action(s)) add(ViolationKind::totality, std::string(s), "sentinel action missing");

  for (const auto& [id, a] : log.actions()) {
    if (!is_valid_id(id)) add(ViolationKind::invalid_id, id, "action id is not a valid token");
    if (id == kNobody) add(ViolationKind::uniqueness, id, "reserved participant id used as action");
    if (a.who.empty()) add(ViolationKind::totality, id, "action has no who arrow");
    if (a.cause_s.empty()) add(ViolationKind::totality, id, "action has no cause-S arrow");
    if (a.cause_n.empty()) add(ViolationKind::totality, id, "action has no cause-N arrow");
    if (!a.who.empty() && !log.is_participant(a.who))
      add(ViolationKind::dangling, id, "who target '" + a.who + "' does not exist");
    if (!a.cause_s.empty() && !log.is_action(a.cause_s))
      add(ViolationKind::dangling, id, "cause-S target '" + a.cause_s + "' is not an action");
    if (!a.cause_n.empty() && !log.is_action(a.cause_n))
      add(ViolationKind::dangling, id, "cause-N target '" + a.cause_n + "' is not an action");
    if (a.raw.t_start && a.raw.t_end && *a.raw.t_start > *a.raw.t_end)
      add(ViolationKind::interval, id, "t_start is after t_end");

    if (is_sentinel_action(id)) {
      if (a.who != kNobody || !is_sentinel_action(a.cause_s) || !is_sentinel_action(a.cause_n) ||
          a.trivial_partner)
        add(ViolationKind::uniqueness, id, "sentinel action has been redefined");
      continue;
    }

    if (a.trivial_partner) {
      const Action* p = log.find_action(*a.trivial_partner);
      if (p == nullptr || is_sentinel(p->id) || p->id == id) {
        add(ViolationKind::trivial_pair, id, "trivial partner '" + *a.trivial_partner + "' is not a content action");
      } else {
        if (p->trivial_partner != id)
          add(ViolationKind::trivial_pair, id, "trivial partnership with '" + p->id + "' is not mutual");
        if (!links_as_pair(a, *p))
          add(ViolationKind::trivial_pair, id, "trivial partners not linked by a cause-S/cause-N pair");
        if (a.raw.t_start != p->raw.t_start)
          add(ViolationKind::trivial_pair, id, "trivial partners carry different timestamps");
      }
    }

    // Causes precede effects.
    if (const Action* c = log.find_action(a.cause_s);
        c && c->id != id && !is_sentinel(c->id) && c->raw.t_start && a.raw.t_start &&
        *a.raw.t_start < *c->raw.t_start)
      add(ViolationKind::timestamp_order, id, "starts before its cause-S target '" + c->id + "'");
    if (const Action* x = log.find_action(a.cause_n);
        x && x->id != id && !is_sentinel(x->id) && x->raw.t_start && a.raw.t_start &&
        *x->raw.t_start < *a.raw.t_start)
      add(ViolationKind::timestamp_order, id, "its cause-N target '" + x->id + "' starts earlier");
  }

  if (!report.has(ViolationKind::dangling)) {
    Collapsed c = collapse_trivial_pairs(log);
    std::vector<std::size_t> cyclic;
    topo_groups(log, c, &cyclic);
    for (std::size_t g : cyclic)
      for (std::size_t i = 0; i < c.ids.size(); ++i)
        if (c.group[i] == g) add(ViolationKind::acyclicity, c.ids[i], "action lies on a causal cycle");
  }
  return report;
}

void require_valid(const ELog& log) {
  ValidationReport r = validate_category(log);
  if (r.ok()) return;
  const Violation& v = r.violations.front();
  ErrorCode code = ErrorCode::invalid_log;
  switch (v.kind) {
    case ViolationKind::uniqueness: code = ErrorCode::duplicate_id; break;
    case ViolationKind::dangling: code = ErrorCode::dangling_reference; break;
    case ViolationKind::acyclicity: code = ErrorCode::causal_cycle; break;
    default: break;
  }
  // Prefer the more specific codes when several violations are present.
  if (r.has(ViolationKind::acyclicity)) code = ErrorCode::causal_cycle;
  if (r.has(ViolationKind::dangling)) code = ErrorCode::dangling_reference;
  throw Error(code, "log '" + log.id() + "': " + std::string(to_string(v.kind)) + " at '" + v.object +
                        "': " + v.message);
}

// ---------------------------------------------------------------------------
// Construction

ELog build_elog(ObjectId id, LogKind kind, const std::vector<ActionRecord>& records,
                const std::vector<Participant>& participants) {
  ELog log(std::move(id), kind);
  std::set<ObjectId> seen;
  for (const Participant& p : participants) {
    if (p.id == kNobody) continue;
    if (!seen.insert(p.id).second) throw Error(ErrorCode::duplicate_id, "participant '" + p.id + "' repeated");
    log.put_participant(p);
  }
  for (const ActionRecord& r : records) {
    if (is_sentinel_action(r.id)) continue;
    if (!seen.insert(r.id).second) throw Error(ErrorCode::duplicate_id, "id '" + r.id + "' repeated");
    Action a;
    a.id = r.id;
    a.label = r.label;
    a.who = r.who;
    a.cause_s = r.cause_s.value_or(std::string(kUnknown));
    a.cause_n = r.cause_n.value_or(std::string(kUnknown));
    a.trivial_partner = r.trivial_partner;
    a.volition = r.volition;
    a.raw = r.raw;
    log.put_action(std::move(a));
  }
  require_valid(log);
  return log;
}

RelationalTable to_relational_table(const ELog& log) {
  RelationalTable t;
  for (const auto& [id, p] : log.participants())
    if (!is_sentinel(id)) t.participants.push_back(p);
  for (const auto& [id, a] : log.actions()) {
    if (is_sentinel(id)) continue;
    t.records.push_back({a.id, a.who, a.cause_s, a.cause_n, a.trivial_partner, a.volition, a.label, a.raw});
  }
  return t;
}

std::pair<Action, Action> decompose_transitive(const ELog& log, const DecomposeRequest& req) {
  for (const ObjectId* p : {&req.subject, &req.object})
    if (!log.is_participant(*p) || is_sentinel(*p))
      throw Error(ErrorCode::unknown_participant, "'" + *p + "' is not a participant of '" + log.id() + "'");
  RawData be_time = req.be_done_time.value_or(req.do_time);
  if (req.trivial && be_time.t_start != req.do_time.t_start)
    throw Error(ErrorCode::trivial_time_mismatch,
                "a trivial do/be-done pair needs equal timestamps; mark the pair non-trivial");
  Action act;
  act.id = req.do_id;
  act.label = req.verb_label;
  act.who = req.subject;
  act.cause_s = std::string(kUnknown);
  act.cause_n = req.be_done_id;
  act.raw = req.do_time;
  Action done;
  done.id = req.be_done_id;
  done.label = req.be_done_label;
  done.who = req.object;
  done.cause_s = req.do_id;
  done.cause_n = std::string(kUnknown);
  done.raw = be_time;
  if (req.trivial) {
    act.trivial_partner = done.id;
    done.trivial_partner = act.id;
  }
  return {std::move(act), std::move(done)};
}

ELog with_actions(const ELog& log, const std::vector<Action>& actions) {
  ELog out = log;
  for (const Action& a : actions) {
    if (out.has_object(a.id)) throw Error(ErrorCode::duplicate_id, "id '" + a.id + "' already exists");
    out.put_action(a);
  }
  require_valid(out);
  return out;
}

ELog add_intermediate_replica(const ELog& log, std::string_view action, CauseDirection direction,
                              const ObjectId& replica_id, const std::optional<ObjectId>& branch) {
  if (is_sentinel(action))
    throw Error(ErrorCode::sentinel_not_branchable, "cannot branch the reserved object '" + std::string(action) + "'");
  const Action* base = log.find_action(action);
  if (!base) throw Error(ErrorCode::unknown_object, "no action '" + std::string(action) + "'");
  if (log.has_object(replica_id)) throw Error(ErrorCode::duplicate_id, "id '" + replica_id + "' already exists");
  Action rep;
  rep.id = replica_id;
  rep.label = base->label;
  rep.who = base->who;
  rep.volition = base->volition;
  rep.raw = base->raw;
  const ObjectId target = branch.value_or(std::string(kUnknown));
  if (direction == CauseDirection::n) {
    rep.cause_s = base->id;
    rep.cause_n = target;
  } else {
    rep.cause_n = base->id;
    rep.cause_s = target;
  }
  ELog out = log;
  out.put_action(std::move(rep));
  require_valid(out);
  return out;
}

ELog extract_subepisode(const ELog& log, const std::set<ObjectId>& objects, std::optional<ObjectId> new_id) {
  for (const ObjectId& o : objects)
    if (!log.has_object(o)) throw Error(ErrorCode::unknown_object, "'" + o + "' is not in '" + log.id() + "'");
  ELog out(new_id.value_or(log.id()), log.kind());
  out.set_parent(log.id());
  auto keep = [&](const ObjectId& id) { return objects.count(id) > 0 || is_sentinel(id); };
  for (const auto& [id, p] : log.participants())
    if (!is_sentinel(id) && objects.count(id)) out.put_participant(p);
  for (const auto& [id, a] : log.actions()) {
    if (is_sentinel(id) || !objects.count(id)) continue;
    Action b = a;
    if (!keep(b.who)) b.who = std::string(kNobody);
    if (!keep(b.cause_s)) b.cause_s = std::string(kUnknown);
    if (!keep(b.cause_n)) b.cause_n = std::string(kUnknown);
    if (b.trivial_partner && !objects.count(*b.trivial_partner)) b.trivial_partner.reset();
    out.put_action(std::move(b));
  }
  return out;
}

ELog remove_action(const ELog& log, std::string_view action) {
  if (is_sentinel(action))
    throw Error(ErrorCode::sentinel_not_branchable, "cannot remove the reserved object '" + std::string(action) + "'");
  if (!log.is_action(action)) throw Error(ErrorCode::unknown_object, "no action '" + std::string(action) + "'");
  ELog out = log;
  out.erase_action(action);
  std::vector<ObjectId> ids;
  for (const auto& [id, _] : out.actions()) ids.push_back(id);
  for (const ObjectId& id : ids) {
    Action& a = out.action_ref(id);
    if (a.who == action) a.who = std::string(kNobody);
    if (a.cause_s == action) a.cause_s = std::string(kUnknown);
    if (a.cause_n == action) a.cause_n = std::string(kUnknown);
    if (a.trivial_partner == action) a.trivial_partner.reset();
  }
  return out;
}

}  // namespace cognilog
