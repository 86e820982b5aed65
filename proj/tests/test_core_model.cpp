#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <map>
#include <random>
#include <set>

#include "cognilog/error.hpp"
#include "cognilog/model.hpp"
#include "cognilog/store.hpp"

using namespace cognilog;

namespace {

const std::string kFixtures = COGNILOG_FIXTURE_DIR;

ActionRecord rec(ObjectId id, ObjectId who, std::optional<ObjectId> cs = std::nullopt,
                 std::optional<ObjectId> cn = std::nullopt) {
  ActionRecord r;
  r.id = std::move(id);
  r.who = std::move(who);
  r.cause_s = std::move(cs);
  r.cause_n = std::move(cn);
  return r;
}

Participant part(ObjectId id, ParticipantKind kind = ParticipantKind::plain) { return {std::move(id), "", kind}; }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::invalid_log;
}

ELog bob_alice_rows() {
  ActionRecord loves = rec("loves", "Bob", "unknown", "is_loved");
  ActionRecord is_loved = rec("is_loved", "Alice", "loves", "is_loved");
  loves.trivial_partner = "is_loved";
  is_loved.trivial_partner = "loves";
  loves.label = "loves";
  is_loved.label = "is loved";
  ActionRecord unknown = rec("unknown", "nobody", "unknown", "unknown");
  return build_elog("bob_alice", LogKind::episode, {loves, is_loved, unknown}, {part("Bob"), part("Alice")});
}

/// Reference reachability on the raw cause edges, used to cross-check the
/// validator's acyclicity verdict.
bool has_cycle_dfs(const ELog& log) {
  std::map<ObjectId, std::vector<ObjectId>> succ;
  for (const auto& [c, x] : causal_edges(log)) succ[c].push_back(x);
  std::map<ObjectId, int> state;
  std::function<bool(const ObjectId&)> visit = [&](const ObjectId& v) {
    state[v] = 1;
    for (const auto& w : succ[v]) {
      if (state[w] == 1) return true;
      if (state[w] == 0 && visit(w)) return true;
    }
    state[v] = 2;
    return false;
  };
  for (const auto& a : log.content_actions())
    if (state[a] == 0 && visit(a)) return true;
  return false;
}

}  // namespace

TEST_CASE("sentinels exist in every log") {
  ELog log("empty");
  CHECK(log.is_action("nothing"));
  CHECK(log.is_action("unknown"));
  CHECK(log.find_participant("nobody"));
  CHECK(log.content_actions().empty());
  CHECK(validate_category(log).ok());
}

TEST_CASE("Bob loves Alice builds from its relational rows") {
  ELog log = bob_alice_rows();
  CHECK(validate_category(log).ok());
  // Two content actions plus the two sentinel actions; the `unknown` row is
  // absorbed by the sentinel already present.
  CHECK(log.content_actions() == std::vector<ObjectId>{"is_loved", "loves"});
  CHECK(log.actions().size() == 4);
  CHECK(log.content_participants() == std::vector<ObjectId>{"Alice", "Bob"});
  CHECK(log.find_action("is_loved")->cause_s == "loves");
  CHECK(log.find_action("loves")->cause_n == "is_loved");

  ELog from_file = load_log(kFixtures + "/bob_alice.elog");
  CHECK(validate_category(from_file).ok());
  CHECK(same_content(from_file, log));
}

TEST_CASE("build_elog defaults missing causes to unknown") {
  ELog log = build_elog("x", LogKind::episode, {rec("a", "P")}, {part("P")});
  CHECK(log.find_action("a")->cause_s == "unknown");
  CHECK(log.find_action("a")->cause_n == "unknown");
}

TEST_CASE("build_elog errors") {
  CHECK(code_of([] { build_elog("x", LogKind::episode, {rec("a", "P"), rec("a", "P")}, {part("P")}); }) ==
        ErrorCode::duplicate_id);
  CHECK(code_of([] { build_elog("x", LogKind::episode, {rec("a", "Q")}, {part("P")}); }) ==
        ErrorCode::dangling_reference);
  CHECK(code_of([] { build_elog("x", LogKind::episode, {rec("a", "P", "zz")}, {part("P")}); }) ==
        ErrorCode::dangling_reference);
  CHECK(code_of([] {
          build_elog("x", LogKind::episode, {rec("a", "P", "b"), rec("b", "P", "a")}, {part("P")});
        }) == ErrorCode::causal_cycle);
}

TEST_CASE("empty record list gives a sentinel-only log") {
  ELog log = build_elog("x", LogKind::episode, {}, {});
  CHECK(log.actions().size() == 2);
  CHECK(log.participants().size() == 1);
}

TEST_CASE("validation names the offending object") {
  ELog log("v");
  log.put_participant(part("P"));
  Action a{"a", "", "", "unknown", "unknown", std::nullopt, false, {}};
  log.put_action(a);
  auto r = validate_category(log);
  REQUIRE(r.has(ViolationKind::totality));
  CHECK(r.violations.front().object == "a");

  ELog t = bob_alice_rows();
  t.action_ref("loves").raw.t_start = 1;
  t.action_ref("is_loved").raw.t_start = 2;
  CHECK(validate_category(t).has(ViolationKind::trivial_pair));

  ELog order = build_elog("o", LogKind::episode, {rec("a", "P", std::nullopt, "b"), rec("b", "P")}, {part("P")});
  order.action_ref("a").raw.t_start = 5;
  order.action_ref("b").raw.t_start = 3;
  CHECK(validate_category(order).has(ViolationKind::timestamp_order));

  ELog interval = order;
  interval.action_ref("a").raw = {4, 2, {}};
  interval.action_ref("b").raw = {};
  CHECK(validate_category(interval).has(ViolationKind::interval));
}

TEST_CASE("s-log participants must be classes") {
  ELog s = build_elog("s", LogKind::scenario, {rec("a", "C")}, {part("C", ParticipantKind::class_)});
  CHECK(validate_category(s).ok());
  ELog bad = s;
  bad.put_participant(part("D"));
  CHECK(validate_category(bad).has(ViolationKind::participant_kind));
}

TEST_CASE("actions double as participants") {
  // "the drinking" performs something: an action id used as a who.
  ELog log = build_elog("n", LogKind::episode, {rec("drinks", "P"), rec("harms", "drinks", "drinks")}, {part("P")});
  CHECK(log.is_participant("drinks"));
  CHECK(validate_category(log).ok());
}

TEST_CASE("relational round trip") {
  ELog log = bob_alice_rows();
  RelationalTable t = to_relational_table(log);
  CHECK(t.records.size() == 2);
  ELog back = build_elog(log.id(), log.kind(), t.records, t.participants);
  CHECK(back == log);
}

TEST_CASE("decompose_transitive") {
  ELog log = build_elog("d", LogKind::episode, {}, {part("Bob"), part("Alice"), part("A")});
  DecomposeRequest req{"Bob", "loves", "Alice", "loves1", "is_loved1", "is loved", {}, std::nullopt, true};
  auto [d, b] = decompose_transitive(log, req);
  CHECK(d.who == "Bob");
  CHECK(b.who == "Alice");
  CHECK(b.cause_s == "loves1");
  CHECK(d.cause_n == "is_loved1");
  CHECK(d.trivial_partner == "is_loved1");
  ELog with = with_actions(log, {d, b});
  CHECK(validate_category(with).ok());

  DecomposeRequest self{"A", "pushes", "A", "pushes", "is_pushed", "", {}, std::nullopt, true};
  auto [sd, sb] = decompose_transitive(log, self);
  CHECK(sd.who == "A");
  CHECK(sb.who == "A");
  CHECK(validate_category(with_actions(log, {sd, sb})).ok());

  DecomposeRequest lag{"Bob", "shoots", "Alice", "shoots", "is_shot", "", {1, std::nullopt, {}},
                       RawData{3, std::nullopt, {}}, true};
  CHECK(code_of([&] { decompose_transitive(log, lag); }) == ErrorCode::trivial_time_mismatch);
  lag.trivial = false;
  auto [ld, lb] = decompose_transitive(log, lag);
  CHECK_FALSE(ld.trivial_partner);
  CHECK(validate_category(with_actions(log, {ld, lb})).ok());

  DecomposeRequest ghost{"Zed", "x", "Alice", "x", "y", "", {}, std::nullopt, true};
  CHECK(code_of([&] { decompose_transitive(log, ghost); }) == ErrorCode::unknown_participant);
}

TEST_CASE("intermediate replicas fan out a cause arrow") {
  ELog log = build_elog("r", LogKind::episode,
                        {rec("A", "P", std::nullopt, "B"), rec("B", "P", "A"), rec("C", "P")}, {part("P")});
  ELog fan = add_intermediate_replica(log, "A", CauseDirection::n, "A2", "C");
  CHECK(validate_category(fan).ok());
  CHECK(fan.find_action("A")->cause_n == "B");
  CHECK(fan.find_action("A2")->cause_s == "A");
  CHECK(fan.find_action("A2")->cause_n == "C");
  CHECK(fan.find_action("A2")->who == "P");

  ELog twice = add_intermediate_replica(fan, "A2", CauseDirection::n, "A3");
  CHECK(twice.find_action("A3")->cause_s == "A2");
  CHECK(validate_category(twice).ok());

  CHECK(code_of([&] { add_intermediate_replica(log, "nothing", CauseDirection::s, "x"); }) ==
        ErrorCode::sentinel_not_branchable);
}

TEST_CASE("extract_subepisode") {
  ELog robot = load_log(kFixtures + "/robot.elog");
  ELog all = extract_subepisode(robot, {"robot", "dolly", "bottle", "carried0", "was_carried0", "carried_load",
                                        "was_carried1"});
  CHECK(same_content(all, robot));
  CHECK(all.parent() == "robot");

  ELog none = extract_subepisode(robot, {});
  CHECK(none.content_actions().empty());
  CHECK(none.content_participants().empty());

  // The dolly and what it does or undergoes.
  ELog dolly = extract_subepisode(robot, {"dolly", "was_carried0", "carried_load"});
  CHECK(validate_category(dolly).ok());
  CHECK(dolly.find_action("was_carried0")->cause_s == "unknown");
  CHECK(dolly.find_action("carried_load")->cause_n == "unknown");
  CHECK_FALSE(dolly.find_action("carried_load")->trivial_partner);
  CHECK(dolly.find_action("carried_load")->cause_s == "was_carried0");

  CHECK(code_of([&] { extract_subepisode(robot, {"ghost"}); }) == ErrorCode::unknown_object);
}

TEST_CASE("remove_action reroutes to unknown") {
  ELog robot = load_log(kFixtures + "/robot.elog");
  ELog r = remove_action(robot, "carried_load");
  CHECK(r.find_action("was_carried0")->cause_n == "unknown");
  CHECK(r.find_action("was_carried1")->cause_s == "unknown");
  CHECK_FALSE(r.find_action("was_carried1")->trivial_partner);
  CHECK(validate_category(r).ok());
}

TEST_CASE("canonical order puts do before be-done and respects causes") {
  ELog robot = load_log(kFixtures + "/robot.elog");
  CHECK(canonical_action_order(robot) ==
        std::vector<ObjectId>{"carried0", "was_carried0", "carried_load", "was_carried1"});
  ELog t = bob_alice_rows();
  CHECK(canonical_action_order(t) == std::vector<ObjectId>{"loves", "is_loved"});
}

TEST_CASE("acyclicity agrees with a DFS oracle on random logs") {
  std::mt19937 rng(7);
  int disagreements = 0;
  for (int round = 0; round < 300; ++round) {
    const int n = 1 + static_cast<int>(rng() % 6);
    ELog log("rand");
    log.put_participant(part("P"));
    for (int i = 0; i < n; ++i) {
      auto pick = [&] {
        int k = static_cast<int>(rng() % (n + 1));
        return k == n ? std::string("unknown") : "a" + std::to_string(k);
      };
      log.put_action({"a" + std::to_string(i), "", "P", pick(), pick(), std::nullopt, false, {}});
    }
    const bool cyclic = validate_category(log).has(ViolationKind::acyclicity);
    // Self arrows are allowed, so the oracle only sees non-self edges.
    if (cyclic != has_cycle_dfs(log)) ++disagreements;
  }
  CHECK(disagreements == 0);
}
