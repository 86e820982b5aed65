#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "cognilog/error.hpp"
#include "cognilog/reasoning.hpp"
#include "cognilog/store.hpp"
#include "cognilog/text_format.hpp"
#include "random_logs.hpp"

using namespace cognilog;

namespace {

const std::string kDir = COGNILOG_FIXTURE_DIR;

ELog fixture(const std::string& name) { return load_log(kDir + "/" + name); }

SearchConfig partial_cfg() {
  SearchConfig cfg;
  cfg.max_candidates = 0;
  cfg.require_injective = false;
  return cfg;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::io;
}

/// Complete functor from `e` into `s` sending every action to the same id
/// and participants through `parts`.
Functor by_id(const ELog& e, const ELog& s, const std::map<ObjectId, ObjectId>& parts) {
  Functor f{e.id(), s.id(), {}, parts, FunctorDirection::e_to_s};
  for (const auto& a : e.content_actions()) f.action_map[a] = a;
  return f;
}

}  // namespace

TEST_CASE("abstraction of the robot episode") {
  ELog e = fixture("robot.elog");
  ELog s = fixture("worker.slog");
  BeLog b = load_belog(kDir + "/store.belog");
  auto rs = abstract_episode(e, s, b, partial_cfg());
  auto has = [&](const std::string& name) {
    Functor f = parse_functor(read_text_file(kDir + "/natural/" + name + ".functor"));
    return std::any_of(rs.begin(), rs.end(), [&](const AbstractionResult& r) { return r.functor == f; });
  };
  CHECK(has("dolly_worker"));
  CHECK(has("dolly_cargo"));
  for (const auto& r : rs) {
    CHECK(r.residue.empty());
    CHECK(completeness(r.functor, e, s).complete());
    CHECK(is_full(r.functor, e, s));
  }

  auto self = abstract_episode(s, s, BeLog{}, partial_cfg());
  REQUIRE_FALSE(self.empty());
  CHECK(self.front().functor == identity_functor(s));
}

TEST_CASE("inference completes the explosion") {
  ELog e = fixture("explosion/bond.elog");
  ELog s = fixture("explosion/blast.slog");
  BeLog b = load_belog(kDir + "/explosion/store.belog");
  auto r = infer_missing(e, s, b, partial_cfg());
  CHECK(validate_category(r.extended).ok());
  REQUIRE(r.added.size() == 2);

  std::map<ObjectId, const AddedAction*> by_source;
  for (const auto& a : r.added) by_source[a.s_action] = &a;
  REQUIRE(by_source.count("destroy"));
  REQUIRE(by_source.count("is_destroyed"));
  const Action& destroy = *r.extended.find_action(by_source["destroy"]->id);
  const Action& victim = *r.extended.find_action(by_source["is_destroyed"]->id);
  CHECK(destroy.who == "bomb");
  CHECK(victim.who == "bond");
  CHECK(destroy.cause_s == "explodes");
  CHECK(destroy.cause_n == victim.id);
  CHECK(victim.cause_s == destroy.id);
  CHECK(destroy.trivial_partner == victim.id);
  CHECK(r.extended.find_action("explodes")->cause_n == destroy.id);
  CHECK(r.extended.find_action("is_near")->cause_n == victim.id);
  for (const auto& a : r.added) {
    CHECK(a.slog == "blast");
    CHECK(a.tense == Tense::future);
  }

  // Untouched actions survive unchanged.
  CHECK(r.extended.find_action("looks")->who == "bond");

  // A second pass has nothing left to add.
  auto again = infer_missing(r.extended, s, b, partial_cfg());
  CHECK(again.added.empty());
  CHECK(same_content(again.extended, r.extended));
}

TEST_CASE("inference refuses an ambiguous performer") {
  ELog e = parse_log("#ELOG twins\nP a\nP b\nA go who=a\nA start who=b\n");
  ELog s = parse_log("#SLOG start\nP C kind=class\nA go who=C cn=done\nA done who=C cs=go\n");
  BeLog b = parse_belog("B Be3 a C\nB Be3 b C\nB Be3 go step\nB Be3 start step\n");
  CHECK(code_of([&] { infer_missing(e, s, b, partial_cfg()); }) == ErrorCode::ambiguous_inverse_image);
}

TEST_CASE("inference needs an admissible functor") {
  ELog e = parse_log("#ELOG e\nP p\nA a who=p\n");
  ELog s = parse_log("#SLOG s\nP C kind=class\nA x who=C\n");
  SearchConfig cfg = partial_cfg();
  cfg.min_compatibility = 0.5;
  CHECK(code_of([&] { infer_missing(e, s, BeLog{}, cfg); }) == ErrorCode::no_admissible_functor);
}

TEST_CASE("narrowest class") {
  BeLog b = load_belog(kDir + "/store.belog");
  CHECK(narrowest_class(b, "bottle") == "load");
  // dolly sits in two three-member classes; the smaller id wins.
  CHECK(narrowest_class(b, "dolly") == "carrier_of_loads");
  CHECK_FALSE(narrowest_class(b, "nobody_known").has_value());
}

TEST_CASE("scenario generation") {
  ELog e = fixture("robot.elog");
  BeLog b = load_belog(kDir + "/store.belog");
  const auto acts = e.content_actions();
  std::set<ObjectId> all(acts.begin(), acts.end());
  ELog s = generate_slog(e, all, b);
  CHECK(s.id() == "robot_scenario");
  CHECK(s.is_scenario());
  CHECK(validate_category(s).ok());
  CHECK(s.content_participants() == std::vector<ObjectId>{"carrier_of_loads", "load"});
  CHECK(s.find_action("carried0")->raw.t_start == 0);
  CHECK(s.find_action("was_carried1")->raw.t_start == 1);

  // The source admits a complete functor into its own scenario.
  Functor f = by_id(e, s, {{"bottle", "load"}, {"dolly", "carrier_of_loads"}, {"robot", "carrier_of_loads"}});
  CHECK(completeness(f, e, s).complete());

  // Empty be-log: singleton classes, same shape.
  ELog iso = generate_slog(e, all, BeLog{}, "iso");
  CHECK(iso.content_participants() == std::vector<ObjectId>{"bottle", "dolly", "robot"});
  CHECK(completeness(by_id(e, iso, {{"bottle", "bottle"}, {"dolly", "dolly"}, {"robot", "robot"}}), e, iso).complete());

  // The prefix of the carrying chain is closed.
  ELog head = generate_slog(e, {"carried0", "was_carried0"}, b, "head");
  CHECK(head.content_actions().size() == 2);
  CHECK(head.find_action("carried0")->raw.t_start == head.find_action("was_carried0")->raw.t_start);

  CHECK(code_of([&] { generate_slog(e, {"carried0", "carried_load"}, b); }) == ErrorCode::not_causally_closed);
  CHECK(code_of([&] { generate_slog(e, {"ghost"}, b); }) == ErrorCode::unknown_object);
}

TEST_CASE("generated scenarios are sound on random logs") {
  std::mt19937 rng(17);
  for (int round = 0; round < 50; ++round) {
    ELog e = testing::random_log(rng, {6, 3, false, true, 25, "a"}, "r");
    std::set<ObjectId> all;
    for (const auto& a : e.content_actions()) all.insert(a);
    for (const auto& p : e.content_participants()) all.insert(p);
    ELog s = generate_slog(e, all, BeLog{});
    std::map<ObjectId, ObjectId> parts;
    for (const auto& p : e.content_participants()) parts[p] = p;
    CHECK(completeness(by_id(e, s, parts), e, s).complete());
  }
}

TEST_CASE("induction keeps shared characteristics") {
  ELog e = fixture("robot.elog");
  BeLog b = load_belog(kDir + "/store.belog");
  for (const char* line : {"robot metal", "robot arms", "dolly metal", "dolly wheels", "bottle glass"}) {
    std::string s(line);
    BeRelation r;
    r.type = BeVerbType::be4;
    r.source = s.substr(0, s.find(' '));
    r.target = s.substr(s.find(' ') + 1);
    b.add(r);
  }
  auto ind = induce_slog({e}, b, "carrying");
  CHECK(ind.slog.id() == "carrying");
  CHECK(ind.characteristics.at("carrier_of_loads") == std::set<ObjectId>{"metal"});
  CHECK(ind.characteristics.at("load") == std::set<ObjectId>{"glass"});
  CHECK(code_of([&] { induce_slog({}, b, "x"); }) == ErrorCode::invalid_config);
}

TEST_CASE("comprehension of a two-part story") {
  ELog story = fixture("story/story.elog");
  BeLog b = load_belog(kDir + "/story/store.belog");
  std::vector<ELog> library{fixture("worker.slog"), fixture("explosion/blast.slog")};
  auto tree = comprehend(story, library, b, partial_cfg(), 3);
  REQUIRE(tree.levels.size() == 1);
  REQUIRE(tree.levels[0].size() == 2);

  // Level 0 partitions the story's actions.
  std::set<ObjectId> covered;
  std::size_t total = 0;
  std::map<ObjectId, ObjectId> slog_of;
  for (const auto& n : tree.levels[0]) {
    covered.insert(n.actions.begin(), n.actions.end());
    total += n.actions.size();
    REQUIRE(n.slog.has_value());
    for (const auto& a : n.actions) slog_of[a] = *n.slog;
  }
  CHECK(total == covered.size());
  CHECK(covered.size() == story.content_actions().size());
  CHECK(slog_of["carried0"] == "worker");
  CHECK(slog_of["explodes"] == "blast");
  CHECK(tree.find("L0.N0") != nullptr);
  CHECK(tree.find("L9.N9") == nullptr);

  auto scores = classify_story(tree, b);
  CHECK(scores.scenes == std::set<ObjectId>{"blast", "worker"});
  CHECK_FALSE(scores.no_matched_scenes);
  CHECK(scores.scores.at("adventure").is_one());
  CHECK(scores.scores.at("romance") == Ratio{0, 1});

  CHECK(code_of([&] { comprehend(story, {}, b, partial_cfg(), 3); }) == ErrorCode::invalid_config);
}

TEST_CASE("comprehension merges through shared performers") {
  // Two causally separate fragments performed by the same participant.
  ELog story = parse_log(
      "#ELOG day\nP p\nP q\n"
      "A wakes who=p cn=rises ts=0\nA rises who=p cs=wakes ts=1\n"
      "A eats who=p cn=fed ts=2\nA fed who=q cs=eats ts=3\n");
  ELog s = parse_log("#SLOG step\nP C kind=class\nA go who=C cn=done ts=0\nA done who=C cs=go ts=1\n");
  auto tree = comprehend(story, {s}, BeLog{}, partial_cfg(), 3);
  REQUIRE(tree.levels.size() == 2);
  CHECK(tree.levels[0].size() == 2);
  REQUIRE(tree.levels[1].size() == 1);
  const auto& top = tree.levels[1][0];
  CHECK(top.children.size() == 2);
  for (const auto& c : top.children) CHECK(tree.find(c)->parent == top.id);

  // An unmatched library still yields a valid tree.
  ELog alien = parse_log("#SLOG alien\nP A kind=class\nP B kind=class\nA x who=A cn=y\nA y who=B cs=x cn=z\nA z who=A cs=y\n");
  SearchConfig strict;
  auto bare = comprehend(story, {alien}, BeLog{}, strict, 1);
  REQUIRE(bare.levels.size() == 1);
  for (const auto& n : bare.levels[0]) CHECK_FALSE(n.match.has_value());
  CHECK(classify_story(bare, BeLog{}).no_matched_scenes);
}

TEST_CASE("planning a delivery") {
  ELog world = parse_log("#ELOG world\nP bottle\nP dolly\nP robot\n");
  BeLog b = load_belog(kDir + "/store.belog");
  ELog carry = fixture("worker.slog");
  SearchConfig cfg = partial_cfg();
  auto plans = plan("is_carried", {carry}, world, b, cfg);
  REQUIRE(plans.size() == 3);
  std::vector<std::map<ObjectId, ObjectId>> got;
  for (const auto& p : plans) {
    CHECK(p.chain == std::vector<ObjectId>{"worker"});
    CHECK(validate_category(p.grounded).ok());
    got.push_back(p.assignment);
    std::map<ObjectId, ObjectId> back;
    for (const auto& [cls, who] : p.assignment) back[who] = cls;
    CHECK(completeness(by_id(p.grounded, p.scenario, back), p.grounded, p.scenario).complete());
  }
  using A = std::map<ObjectId, ObjectId>;
  CHECK(got == std::vector<A>{A{{"cargo", "bottle"}, {"worker", "dolly"}},
                              A{{"cargo", "bottle"}, {"worker", "robot"}},
                              A{{"cargo", "dolly"}, {"worker", "robot"}}});

  // Deterministic.
  auto again = plan("is_carried", {carry}, world, b, cfg);
  REQUIRE(again.size() == plans.size());
  for (std::size_t i = 0; i < plans.size(); ++i) CHECK(again[i].assignment == plans[i].assignment);

  // Goal through its class.
  CHECK_FALSE(plan("transport", {carry}, world, b, cfg).empty());

  CHECK(code_of([&] { plan("flies", {carry}, world, b, cfg); }) == ErrorCode::no_plan_found);
}

TEST_CASE("planning chains scenarios") {
  ELog world = parse_log("#ELOG world\nP bottle\nP robot\n");
  BeLog b = load_belog(kDir + "/store.belog");
  BeRelation r;
  r.type = BeVerbType::be3;
  r.source = "is_loaded";
  r.target = "transport";
  b.add(r);
  ELog load = parse_log(
      "#SLOG loading\nP cargo kind=class\nP worker kind=class\n"
      "A loads who=worker cn=is_loaded triv=is_loaded ts=0\n"
      "A is_loaded who=cargo cs=loads triv=loads ts=0\n");
  ELog carry = fixture("worker.slog");
  auto plans = plan("is_carried", {load, carry}, world, b, partial_cfg(), 2);
  auto chained = std::find_if(plans.begin(), plans.end(),
                              [](const Plan& p) { return p.chain == std::vector<ObjectId>{"loading", "worker"}; });
  REQUIRE(chained != plans.end());
  CHECK(chained->scenario.id() == "loading+worker");
  CHECK(validate_category(chained->scenario).ok());
  CHECK(chained->scenario.content_actions().size() == 3);
  CHECK(chained->grounded.id() == "loading+worker_plan");

  // Depth one never chains.
  for (const auto& p : plan("is_carried", {load, carry}, world, b, partial_cfg(), 1)) CHECK(p.chain.size() == 1);
}
