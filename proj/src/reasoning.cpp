#include "cognilog/reasoning.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

#include "cognilog/error.hpp"

namespace cognilog {

namespace {

std::vector<ObjectId> residue_of(const Functor& f, const ELog& e) {
  std::vector<ObjectId> out;
  for (const auto& a : e.content_actions())
    if (!f.action_map.count(a)) out.push_back(a);
  for (const auto& p : adjacency(e).participants)
    if (!is_sentinel(p) && !f.participant_map.count(p)) out.push_back(p);
  return out;
}

}  // namespace

std::vector<AbstractionResult> abstract_episode(const ELog& e, const ELog& s, const BeLog& b,
                                                const SearchConfig& cfg) {
  SearchConfig c = cfg;
  c.require_surjective = true;
  std::vector<AbstractionResult> out;
  for (auto& cand : search_functors(e, s, b, c)) {
    auto residue = residue_of(cand.functor, e);
    if (!residue.empty() || !is_full(cand.functor, e, s)) continue;
    out.push_back({std::move(cand.functor), std::move(cand.score), {}});
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Tense t) {
  switch (t) {
    case Tense::future: return "future";
    case Tense::past_hidden: return "past_hidden";
    case Tense::undetermined: return "undetermined";
  }
  return "undetermined";
}

namespace {

ObjectId fresh_id(const ELog& log, const std::set<ObjectId>& taken, const ObjectId& base) {
  if (!log.has_object(base) && !taken.count(base)) return base;
  for (int i = 1;; ++i) {
    ObjectId id = base + "_" + std::to_string(i);
    if (!log.has_object(id) && !taken.count(id)) return id;
  }
}

}  // namespace

constexpr double kMinEvidence = 1e-9;

InferenceResult infer_missing(const ELog& e, const ELog& s, const BeLog& b, const SearchConfig& cfg) {
  SearchConfig c = cfg;
  c.require_surjective = false;
  c.require_injective = false;
  c.max_candidates = 1;
  // Items the be-log says nothing about are left out of the partial map
  // rather than forced onto a pattern they merely fit.
  c.min_compatibility = std::max(c.min_compatibility, kMinEvidence);
  auto cands = search_functors(e, s, b, c);
  if (cands.empty())
    throw Error(ErrorCode::no_admissible_functor, "no admissible functor from '" + e.id() + "' to '" + s.id() + "'");
  const Functor f = cands.front().functor;

  // Inverse images.
  std::map<ObjectId, std::vector<ObjectId>> act_pre, part_pre;
  for (const auto& [x, y] : f.action_map) act_pre[y].push_back(x);
  for (const auto& [x, y] : f.participant_map) part_pre[y].push_back(x);

  std::vector<ObjectId> unhit;
  for (const auto& a : canonical_action_order(s))
    if (!act_pre.count(a)) unhit.push_back(a);

  // Ids for the copies.
  std::map<ObjectId, ObjectId> copy_id;
  std::set<ObjectId> taken;
  for (const auto& a : unhit) {
    copy_id[a] = fresh_id(e, taken, a);
    taken.insert(copy_id[a]);
  }

  auto by_time = [&](const ObjectId& x, const ObjectId& y) {
    auto tx = e.find_action(x)->raw.t_start.value_or(std::numeric_limits<std::int64_t>::min());
    auto ty = e.find_action(y)->raw.t_start.value_or(std::numeric_limits<std::int64_t>::min());
    return std::tie(tx, x) < std::tie(ty, y);
  };
  // Where an s-arrow lands in the extended e-log.
  auto image_in_e = [&](const ObjectId& s_target, bool pastward) -> ObjectId {
    if (is_sentinel(s_target)) return s_target;
    if (auto it = copy_id.find(s_target); it != copy_id.end()) return it->second;
    auto it = act_pre.find(s_target);
    if (it == act_pre.end()) return std::string(kUnknown);
    auto pre = it->second;
    std::sort(pre.begin(), pre.end(), by_time);
    return pastward ? pre.back() : pre.front();
  };

  ELog out = e;
  InferenceResult result{e, f, {}};
  for (const auto& sa : unhit) {
    const Action& src = *s.find_action(sa);
    Action a;
    a.id = copy_id.at(sa);
    a.label = src.label;
    a.volition = src.volition;
    if (is_sentinel(src.who)) {
      a.who = src.who;
    } else if (auto it = copy_id.find(src.who); it != copy_id.end()) {
      a.who = it->second;
    } else {
      auto pre = part_pre.find(src.who);
      if (pre == part_pre.end()) {
        a.who = std::string(kNobody);
      } else if (pre->second.size() > 1) {
        throw Error(ErrorCode::ambiguous_inverse_image,
                    "s-participant '" + src.who + "' has several preimages in '" + e.id() + "'");
      } else {
        a.who = pre->second.front();
      }
    }
    a.cause_s = image_in_e(src.cause_s, true);
    a.cause_n = image_in_e(src.cause_n, false);
    if (src.trivial_partner && copy_id.count(*src.trivial_partner)) a.trivial_partner = copy_id.at(*src.trivial_partner);
    out.put_action(std::move(a));
  }

  // Existing actions left dangling on a sentinel pick up the s-log's arrow
  // when it leads to a copy.
  for (const auto& [x, y] : f.action_map) {
    const Action& sa = *s.find_action(y);
    Action& ea = out.action_ref(x);
    if (is_sentinel(ea.cause_s) && copy_id.count(sa.cause_s)) ea.cause_s = copy_id.at(sa.cause_s);
    if (is_sentinel(ea.cause_n) && copy_id.count(sa.cause_n)) ea.cause_n = copy_id.at(sa.cause_n);
  }
  require_valid(out);

  // Tense: an action is in the future when everything that causes it in the
  // scenario is either a timestamped e-action or another future copy.
  std::map<ObjectId, std::set<ObjectId>> s_causes;
  for (const auto& [cause, effect] : causal_edges(s)) s_causes[effect].insert(cause);
  std::map<ObjectId, Tense> tense;
  auto timestamped_image = [&](const ObjectId& s_action) {
    auto it = act_pre.find(s_action);
    if (it == act_pre.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](const ObjectId& x) { return e.find_action(x)->raw.t_start.has_value(); });
  };
  for (const auto& sa : unhit) {  // canonical order: causes come first
    const auto& causes = s_causes[sa];
    bool future = !causes.empty();
    for (const auto& c : causes) {
      if (timestamped_image(c)) continue;
      auto t = tense.find(c);
      if (t != tense.end() && t->second == Tense::future) continue;
      future = false;
    }
    Tense t = Tense::undetermined;
    if (future) {
      t = Tense::future;
    } else {
      bool effects_known = false;
      for (const auto& [cause, effect] : causal_edges(s))
        if (cause == sa && timestamped_image(effect)) effects_known = true;
      if (effects_known) t = Tense::past_hidden;
    }
    tense[sa] = t;
    result.added.push_back({copy_id.at(sa), s.id(), sa, t});
  }
  result.extended = std::move(out);
  return result;
}

// ---------------------------------------------------------------------------

std::optional<ObjectId> narrowest_class(const BeLog& b, const ObjectId& participant) {
  std::optional<ObjectId> best;
  std::size_t best_size = 0;
  for (const BeRelation* r : b.from(BeVerbType::be3, participant)) {  // sorted by target
    const std::size_t size = b.to(BeVerbType::be3, r->target).size();
    if (!best || size < best_size) {
      best = r->target;
      best_size = size;
    }
  }
  return best;
}

namespace {

/// Rejects subsets that a causal path leaves and re-enters.
void require_causally_closed(const ELog& e, const std::set<ObjectId>& subset) {
  std::map<ObjectId, std::vector<ObjectId>> succ;
  for (const auto& [c, x] : causal_edges(e)) succ[c].push_back(x);
  // From each member, walk outside the subset; landing back inside is a gap.
  for (const auto& start : subset) {
    if (!e.is_action(start)) continue;
    std::set<ObjectId> seen;
    std::vector<ObjectId> stack;
    for (const auto& x : succ[start])
      if (!subset.count(x)) stack.push_back(x);
    while (!stack.empty()) {
      ObjectId cur = stack.back();
      stack.pop_back();
      if (!seen.insert(cur).second) continue;
      for (const auto& x : succ[cur]) {
        if (subset.count(x))
          throw Error(ErrorCode::not_causally_closed,
                      "causal path " + start + " -> " + cur + " -> " + x + " leaves the subset");
        stack.push_back(x);
      }
    }
  }
}

}  // namespace

ELog generate_slog(const ELog& e, const std::set<ObjectId>& subset, const BeLog& b, std::optional<ObjectId> new_id) {
  require_causally_closed(e, subset);
  // Performers of included actions come along.
  std::set<ObjectId> objects = subset;
  for (const auto& id : subset)
    if (const Action* a = e.find_action(id); a && !is_sentinel(a->who)) objects.insert(a->who);
  ELog sub = extract_subepisode(e, objects);
  ELog out(new_id.value_or(e.id() + "_scenario"), LogKind::scenario);
  out.set_parent(e.id());

  std::map<ObjectId, ObjectId> cls;
  auto class_of = [&](const ObjectId& p) -> ObjectId {
    if (is_sentinel(p) || sub.is_action(p)) return p;
    auto it = cls.find(p);
    if (it != cls.end()) return it->second;
    ObjectId c = narrowest_class(b, p).value_or(p);
    cls.emplace(p, c);
    if (!out.find_participant(c)) {
      const Participant* src = sub.find_participant(p);
      out.put_participant({c, c == p && src ? src->label : std::string(), ParticipantKind::class_});
    }
    return c;
  };
  for (const auto& p : sub.content_participants()) class_of(p);

  std::set<std::int64_t> ticks;
  for (const auto& [id, a] : sub.actions()) {
    if (a.raw.t_start) ticks.insert(*a.raw.t_start);
    if (a.raw.t_end) ticks.insert(*a.raw.t_end);
  }
  auto rank = [&](std::optional<std::int64_t> t) -> std::optional<std::int64_t> {
    if (!t) return std::nullopt;
    return static_cast<std::int64_t>(std::distance(ticks.begin(), ticks.find(*t)));
  };
  for (const auto& [id, a] : sub.actions()) {
    if (is_sentinel(id)) continue;
    Action x = a;
    x.who = class_of(a.who);
    x.raw.t_start = rank(a.raw.t_start);
    x.raw.t_end = rank(a.raw.t_end);
    out.put_action(std::move(x));
  }
  require_valid(out);
  return out;
}

InductionResult induce_slog(const std::vector<ELog>& exemplars, const BeLog& b, ObjectId id) {
  if (exemplars.empty()) throw Error(ErrorCode::invalid_config, "induction needs at least one exemplar");
  const ELog& first = exemplars.front();
  std::set<ObjectId> all;
  for (const auto& a : first.content_actions()) all.insert(a);
  for (const auto& p : first.content_participants()) all.insert(p);
  InductionResult r{generate_slog(first, all, b, std::move(id)), {}};

  std::map<ObjectId, bool> seeded;
  for (const auto& ex : exemplars)
    for (const auto& p : ex.content_participants()) {
      ObjectId c = narrowest_class(b, p).value_or(p);
      if (!r.slog.find_participant(c)) continue;
      auto ch = b.characteristics(p);
      auto& acc = r.characteristics[c];
      if (!seeded[c]) {
        acc = std::move(ch);
        seeded[c] = true;
        continue;
      }
      std::set<ObjectId> keep;
      std::set_intersection(acc.begin(), acc.end(), ch.begin(), ch.end(), std::inserter(keep, keep.begin()));
      acc = std::move(keep);
    }
  return r;
}

// ---------------------------------------------------------------------------

const TreeNode* ComprehensionTree::find(std::string_view id) const {
  for (const auto& level : levels)
    for (const auto& n : level)
      if (n.id == id) return &n;
  return nullptr;
}

namespace {

/// Union-find over indices.
struct Components {
  std::vector<std::size_t> parent;
  explicit Components(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t root(std::size_t i) { return parent[i] == i ? i : parent[i] = root(parent[i]); }
  void join(std::size_t a, std::size_t b) {
    a = root(a);
    b = root(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

ELog node_episode(const ELog& story, const std::set<ObjectId>& actions, const std::string& id) {
  std::set<ObjectId> objs = actions;
  for (const auto& a : actions) {
    const auto& who = story.find_action(a)->who;
    if (!is_sentinel(who) && (story.find_participant(who) || actions.count(who))) objs.insert(who);
  }
  return extract_subepisode(story, objs, id);
}

void match_node(TreeNode& node, const std::vector<ELog>& library, const BeLog& b, const SearchConfig& cfg) {
  SearchConfig c = cfg;
  c.max_candidates = 1;
  for (const auto& s : library) {
    auto cands = search_functors(node.episode, s, b, c);
    if (cands.empty()) continue;
    if (!node.match || cands.front().score.total > node.match->score.total) {
      node.match = std::move(cands.front());
      node.slog = s.id();
    }
  }
}

}  // namespace

ComprehensionTree comprehend(const ELog& story, const std::vector<ELog>& library, const BeLog& b,
                             const SearchConfig& cfg, std::size_t max_depth) {
  if (library.empty()) throw Error(ErrorCode::invalid_config, "comprehension needs a non-empty library");
  cfg.validate();
  ComprehensionTree tree;
  if (max_depth == 0) return tree;

  const auto actions = canonical_action_order(story);
  std::map<ObjectId, std::size_t> pos;
  for (std::size_t i = 0; i < actions.size(); ++i) pos[actions[i]] = i;
  const auto edges = causal_edges(story);

  Components cc(actions.size());
  for (const auto& [c, x] : edges) cc.join(pos.at(c), pos.at(x));
  std::map<std::size_t, std::set<ObjectId>> groups;
  for (std::size_t i = 0; i < actions.size(); ++i) groups[cc.root(i)].insert(actions[i]);

  auto make_node = [&](std::size_t level, std::size_t index, std::set<ObjectId> acts) {
    std::string id = "L" + std::to_string(level) + ".N" + std::to_string(index);
    TreeNode n{id, level, std::nullopt, {}, std::move(acts), node_episode(story, {}, id), std::nullopt, std::nullopt};
    n.episode = node_episode(story, n.actions, id);
    match_node(n, library, b, cfg);
    return n;
  };

  std::vector<TreeNode> level0;
  for (auto& [_, acts] : groups) level0.push_back(make_node(0, level0.size(), std::move(acts)));
  tree.levels.push_back(std::move(level0));

  while (tree.levels.size() < max_depth && tree.levels.back().size() > 1) {
    auto& prev = tree.levels.back();
    Components merge(prev.size());
    std::map<ObjectId, std::size_t> owner;
    for (std::size_t i = 0; i < prev.size(); ++i)
      for (const auto& a : prev[i].actions) owner[a] = i;
    for (const auto& [c, x] : edges) merge.join(owner.at(c), owner.at(x));
    std::map<ObjectId, std::size_t> performer;
    for (std::size_t i = 0; i < prev.size(); ++i)
      for (const auto& a : prev[i].actions) {
        const auto& who = story.find_action(a)->who;
        if (is_sentinel(who)) continue;
        auto [it, fresh] = performer.emplace(who, i);
        if (!fresh) merge.join(it->second, i);
      }

    std::map<std::size_t, std::vector<std::size_t>> parts;
    for (std::size_t i = 0; i < prev.size(); ++i) parts[merge.root(i)].push_back(i);
    if (parts.size() == prev.size()) break;

    const std::size_t level = tree.levels.size();
    std::vector<TreeNode> next;
    for (const auto& [_, members] : parts) {
      std::set<ObjectId> acts;
      for (std::size_t i : members) acts.insert(prev[i].actions.begin(), prev[i].actions.end());
      TreeNode n = make_node(level, next.size(), std::move(acts));
      for (std::size_t i : members) {
        prev[i].parent = n.id;
        n.children.push_back(prev[i].id);
      }
      next.push_back(std::move(n));
    }
    tree.levels.push_back(std::move(next));
  }
  return tree;
}

ClassScores classify_story(const ComprehensionTree& tree, const BeLog& b) {
  ClassScores out;
  if (!tree.levels.empty())
    for (const auto& n : tree.levels.front())
      if (n.slog) out.scenes.insert(*n.slog);
  out.no_matched_scenes = out.scenes.empty();
  for (const auto& obj : b.objects()) {
    auto ch = b.characteristics(obj);
    if (ch.empty()) continue;
    std::int64_t common = 0;
    for (const auto& c : ch) common += out.scenes.count(c);
    out.scores.emplace(obj, Ratio{common, static_cast<std::int64_t>(ch.size())});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Planning

namespace {

/// Last terminal action in canonical order (the scenario's outcome).
std::optional<ObjectId> outcome(const ELog& s) {
  std::optional<ObjectId> last;
  for (const auto& id : canonical_action_order(s)) {
    const Action& a = *s.find_action(id);
    if (is_sentinel(a.cause_n) || a.cause_n == a.id) last = id;
  }
  return last;
}

std::optional<ObjectId> initial_action(const ELog& s) {
  auto order = canonical_action_order(s);
  if (order.empty()) return std::nullopt;
  return order.front();
}

bool matches_goal(const BeLog& b, const ObjectId& action, const ObjectId& goal) {
  return action == goal || b.find(BeVerbType::be3, action, goal) != nullptr;
}

bool unifiable(const BeLog& b, const ObjectId& x, const ObjectId& y, double min_compat) {
  if (x == y) return true;
  const double c = mapping_compatibility(b, x, y, {});
  return c > 0.0 && c >= min_compat;
}

/// Prepends `pre` to `chain`, fusing pre's outcome with chain's initial
/// action. Actions of `pre` are prefixed with its id.
ELog prepend(const ELog& pre, const ELog& chain, const ObjectId& id) {
  const ObjectId t = *outcome(pre);
  const ObjectId i = *initial_action(chain);
  const std::int64_t t_rank = pre.find_action(t)->raw.t_start.value_or(0);
  const std::int64_t i_rank = chain.find_action(i)->raw.t_start.value_or(0);
  const std::int64_t shift = t_rank - i_rank;

  std::map<ObjectId, ObjectId> rename;
  for (const auto& a : pre.content_actions()) rename[a] = a == t ? i : pre.id() + "." + a;
  auto re = [&](const ObjectId& x) {
    auto it = rename.find(x);
    return it == rename.end() ? x : it->second;
  };

  ELog out(id, LogKind::scenario);
  for (const auto& [pid, p] : pre.participants())
    if (!is_sentinel(pid)) out.put_participant(p);
  for (const auto& [pid, p] : chain.participants())
    if (!is_sentinel(pid)) out.put_participant(p);
  for (const auto& [aid, a] : chain.actions()) {
    if (is_sentinel(aid)) continue;
    Action x = a;
    if (x.raw.t_start) *x.raw.t_start += shift;
    if (x.raw.t_end) *x.raw.t_end += shift;
    out.put_action(std::move(x));
  }
  const Action& tpre = *pre.find_action(t);
  Action& fused = out.action_ref(i);
  if (is_sentinel(fused.cause_s)) fused.cause_s = re(tpre.cause_s);
  for (const auto& [aid, a] : pre.actions()) {
    if (is_sentinel(aid) || aid == t) continue;
    Action x = a;
    x.id = re(aid);
    x.who = re(a.who);
    x.cause_s = re(a.cause_s);
    x.cause_n = re(a.cause_n);
    if (x.trivial_partner) {
      if (*x.trivial_partner == t) x.trivial_partner.reset();
      else x.trivial_partner = re(*x.trivial_partner);
    }
    out.put_action(std::move(x));
  }
  require_valid(out);
  return out;
}

struct Chain {
  std::vector<ObjectId> ids;
  ELog scenario;
};

}  // namespace

std::vector<Plan> plan(const ObjectId& goal, const std::vector<ELog>& library, const ELog& world, const BeLog& b,
                       const SearchConfig& cfg, std::size_t depth) {
  cfg.validate();
  std::vector<Chain> frontier;
  for (const auto& s : library) {
    auto t = outcome(s);
    if (t && matches_goal(b, *t, goal)) frontier.push_back({{s.id()}, s});
  }
  if (frontier.empty()) throw Error(ErrorCode::no_plan_found, "no scenario ends in '" + goal + "'");

  std::vector<Chain> chains = frontier;
  for (std::size_t len = 1; len < depth; ++len) {
    std::vector<Chain> next;
    for (const auto& ch : frontier) {
      auto head = initial_action(ch.scenario);
      if (!head) continue;
      for (const auto& s : library) {
        if (std::find(ch.ids.begin(), ch.ids.end(), s.id()) != ch.ids.end()) continue;
        auto t = outcome(s);
        if (!t || !unifiable(b, *t, *head, cfg.min_compatibility)) continue;
        std::vector<ObjectId> ids{s.id()};
        ids.insert(ids.end(), ch.ids.begin(), ch.ids.end());
        std::string id;
        for (const auto& x : ids) id += (id.empty() ? "" : "+") + x;
        try {
          next.push_back({ids, prepend(s, ch.scenario, id)});
        } catch (const Error&) {
          // fusing produced an invalid scenario; skip this composition
        }
      }
    }
    if (next.empty()) break;
    chains.insert(chains.end(), next.begin(), next.end());
    frontier = std::move(next);
  }

  std::vector<ObjectId> world_parts = world.content_participants();
  std::vector<Plan> out;
  const std::size_t limit = cfg.max_candidates;
  for (const auto& ch : chains) {
    const auto classes = ch.scenario.content_participants();
    std::map<ObjectId, ObjectId> assignment;
    std::set<ObjectId> used;
    std::function<void(std::size_t)> assign = [&](std::size_t k) {
      if (limit && out.size() >= limit) return;
      if (k == classes.size()) {
        ELog g(ch.scenario.id() + "_plan", LogKind::episode);
        for (const auto& [cls, p] : assignment) {
          const Participant* wp = world.find_participant(p);
          g.put_participant({p, wp ? wp->label : std::string(), ParticipantKind::plain});
        }
        for (const auto& [aid, a] : ch.scenario.actions()) {
          if (is_sentinel(aid)) continue;
          Action x = a;
          if (auto it = assignment.find(a.who); it != assignment.end()) x.who = it->second;
          g.put_action(std::move(x));
        }
        require_valid(g);
        out.push_back({ch.ids, ch.scenario, std::move(g), assignment});
        return;
      }
      const ObjectId& cls = classes[k];
      for (const auto& p : world_parts) {
        if (used.count(p) || !unifiable(b, p, cls, cfg.min_compatibility)) continue;
        assignment[cls] = p;
        used.insert(p);
        assign(k + 1);
        used.erase(p);
        assignment.erase(cls);
      }
    };
    assign(0);
  }
  if (out.empty()) throw Error(ErrorCode::no_plan_found, "no grounding of a scenario ending in '" + goal + "'");
  return out;
}

}  // namespace cognilog
