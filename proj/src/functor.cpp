#include "cognilog/functor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cognilog/error.hpp"

namespace cognilog {

std::string_view to_string(FunctorDirection d) { return d == FunctorDirection::e_to_s ? "e_to_s" : "s_to_e"; }

bool functor_less(const Functor& a, const Functor& b) {
  if (a.action_map != b.action_map) return a.action_map < b.action_map;
  return a.participant_map < b.participant_map;
}

Functor identity_functor(const ELog& log) {
  Functor f{log.id(), log.id(), {}, {}, log.is_scenario() ? FunctorDirection::s_to_e : FunctorDirection::e_to_s};
  for (const auto& a : log.content_actions()) f.action_map.emplace(a, a);
  for (const auto& p : adjacency(log).participants)
    if (!is_sentinel(p)) f.participant_map.emplace(p, p);
  return f;
}

void SearchConfig::validate() const {
  const auto& w = weights;
  if (w.structural < 0 || w.temporal < 0 || w.similarity < 0 ||
      std::abs(w.structural + w.temporal + w.similarity - 1.0) > 1e-9)
    throw Error(ErrorCode::invalid_config, "score weights must be non-negative and sum to 1");
  if (!(min_compatibility >= 0.0 && min_compatibility <= 1.0))
    throw Error(ErrorCode::invalid_config, "min_compatibility must lie in [0,1]");
}

namespace {

FunctorDirection direction_for(const ELog& source) {
  return source.is_scenario() ? FunctorDirection::s_to_e : FunctorDirection::e_to_s;
}

// A functor sends cause_s arrows to cause_s arrows and cause_n to cause_n.
// The causal equations alone cannot see this inside a trivial pair, whose
// do/be-done links close into a 2-cycle; without it a pair could be mapped
// onto its target pair back to front.
class ArrowOrientation {
 public:
  explicit ArrowOrientation(const CauseMatrices& s) : s_reach_(transitive_closure(s.S)), n_reach_(transitive_closure(s.N)) {}

  /// img[i] is the target index of source action i, or -1.
  bool ok(const CauseMatrices& e, const std::vector<int>& img) const {
    for (std::size_t i = 0; i < img.size(); ++i)
      for (std::size_t j = 0; j < img.size(); ++j) {
        if (img[i] < 0 || img[j] < 0 || img[i] == img[j]) continue;
        const auto k = static_cast<std::size_t>(img[i]), l = static_cast<std::size_t>(img[j]);
        if (e.S.get(i, j) && !s_reach_.get(k, l)) return false;
        if (e.N.get(i, j) && !n_reach_.get(k, l)) return false;
      }
    return true;
  }

 private:
  BoolMatrix s_reach_, n_reach_;
};

}  // namespace

CompletenessReport completeness(const Functor& f, const ELog& source, const ELog& target) {
  FunctorChecker checker(adjacency(source), adjacency(target));
  return checker.evaluate(make_conversion(checker.source(), checker.target(), f.action_map, f.participant_map));
}

namespace {

Score score_with(const Functor& f, const ELog& source, const ELog& target, const BeLog& belog,
                 const SearchConfig& cfg, const FunctorChecker& checker) {
  Score s;
  s.report = checker.evaluate(make_conversion(checker.source(), checker.target(), f.action_map, f.participant_map));
  const auto& r = s.report;
  const int passed = int(r.causal_eq_S_ok) + int(r.causal_eq_N_ok) + int(r.who_eq_ok) + int(r.surjective);
  const std::size_t objects = checker.source().actions.size() + checker.source().participants.size() - 1;
  const std::size_t mapped = f.action_map.size() + f.participant_map.size();
  const double coverage = objects == 0 ? 1.0 : static_cast<double>(mapped) / static_cast<double>(objects);
  s.structural = passed / 4.0 * coverage;

  s.temporal_report = check_temporal_consistency(source, target, f);
  s.temporal = s.temporal_report.consistency();

  double sum = 0.0;
  std::size_t n = 0;
  for (const auto* m : {&f.action_map, &f.participant_map})
    for (const auto& [x, y] : *m) {
      sum += mapping_compatibility(belog, x, y, cfg.compatibility);
      ++n;
    }
  s.similarity = n == 0 ? 1.0 : sum / static_cast<double>(n);
  s.total = cfg.weights.structural * s.structural + cfg.weights.temporal * s.temporal +
            cfg.weights.similarity * s.similarity;
  return s;
}

}  // namespace

Score score_functor(const Functor& f, const ELog& source, const ELog& target, const BeLog& belog,
                    const SearchConfig& cfg) {
  cfg.validate();
  FunctorChecker checker(adjacency(source), adjacency(target));
  return score_with(f, source, target, belog, cfg, checker);
}

// ---------------------------------------------------------------------------
// Search

namespace {

constexpr int kUnmapped = -1;

struct SearchState {
  std::vector<int> act;   // image of each source action (index into target actions)
  std::vector<int> part;  // image of each source participant
  std::vector<int> forced_by;  // source action that fixed the participant image, or -1
  double compat_sum = 0.0;
};

class FunctorSearch {
 public:
  FunctorSearch(const ELog& source, const ELog& target, const BeLog& belog, const SearchConfig& cfg)
      : source_(source),
        target_(target),
        belog_(belog),
        cfg_(cfg),
        checker_(adjacency(source), adjacency(target)),
        e_(checker_.source()),
        s_(checker_.target()) {
    ne_ = e_.actions.size();
    ns_ = s_.actions.size();
    pe_ = e_.participants.size();
    ps_ = s_.participants.size();
    e_who_ = who_indices(e_);
    s_who_ = who_indices(s_);
    act_compat_.assign(ne_, std::vector<double>(ns_, 0.0));
    for (std::size_t i = 0; i < ne_; ++i)
      for (std::size_t k = 0; k < ns_; ++k)
        act_compat_[i][k] = mapping_compatibility(belog_, e_.actions[i], s_.actions[k], cfg_.compatibility);
    part_compat_.assign(pe_, std::vector<double>(ps_, 0.0));
    for (std::size_t p = 0; p + 1 < pe_; ++p)
      for (std::size_t q = 0; q + 1 < ps_; ++q)
        part_compat_[p][q] = mapping_compatibility(belog_, e_.participants[p], s_.participants[q], cfg_.compatibility);
  }

  std::vector<Candidate> run() {
    SearchState root;
    root.act.assign(ne_, kUnmapped);
    root.part.assign(pe_, kUnmapped);
    root.forced_by.assign(pe_, -1);
    root.part[pe_ - 1] = static_cast<int>(ps_ - 1);  // nobody -> nobody

    if (cfg_.beam_width == 0) {
      descend(root, 0);
    } else {
      std::vector<SearchState> layer{root};
      for (std::size_t t = 0; t < ne_; ++t) {
        std::vector<SearchState> next;
        for (const auto& st : layer) expand(st, t, [&](SearchState child) { next.push_back(std::move(child)); });
        std::stable_sort(next.begin(), next.end(), [](const SearchState& a, const SearchState& b) {
          if (a.compat_sum != b.compat_sum) return a.compat_sum > b.compat_sum;
          return a.act < b.act;
        });
        if (next.size() > cfg_.beam_width) next.resize(cfg_.beam_width);
        layer = std::move(next);
      }
      for (auto& st : layer) assign_free_participants(st, 0);
    }

    std::sort(results_.begin(), results_.end(), [](const Candidate& a, const Candidate& b) {
      if (a.score.total != b.score.total) return a.score.total > b.score.total;
      return functor_less(a.functor, b.functor);
    });
    if (cfg_.max_candidates > 0 && results_.size() > cfg_.max_candidates) results_.resize(cfg_.max_candidates);
    return std::move(results_);
  }

 private:
  static std::vector<std::size_t> who_indices(const CauseMatrices& m) {
    std::vector<std::size_t> out(m.actions.size());
    for (std::size_t i = 0; i < m.actions.size(); ++i)
      for (std::size_t p = 0; p < m.participants.size(); ++p)
        if (m.E.get(i, p)) out[i] = p;
    return out;
  }

  /// Direct source arrows between i and an already mapped j must land inside
  /// the reflexive-transitive cause relation of the target.
  bool arrows_fit(const SearchState& st, std::size_t i, std::size_t k) const {
    const auto& ls = checker_.target_s_reach();
    const auto& ln = checker_.target_n_reach();
    for (std::size_t j = 0; j < ne_; ++j) {
      if (j == i || st.act[j] == kUnmapped) continue;
      const auto l = static_cast<std::size_t>(st.act[j]);
      if ((e_.S.get(i, j) || e_.N_tri.get(i, j)) && !ls.get(k, l)) return false;
      if ((e_.S.get(j, i) || e_.N_tri.get(j, i)) && !ls.get(l, k)) return false;
      if ((e_.N.get(i, j) || e_.S_tri.get(i, j)) && !ln.get(k, l)) return false;
      if ((e_.N.get(j, i) || e_.S_tri.get(j, i)) && !ln.get(l, k)) return false;
    }
    return true;
  }

  std::size_t unhit_actions(const SearchState& st) const {
    std::vector<bool> hit(ns_, false);
    for (int k : st.act)
      if (k != kUnmapped) hit[static_cast<std::size_t>(k)] = true;
    return static_cast<std::size_t>(std::count(hit.begin(), hit.end(), false));
  }

  template <typename Emit>
  void expand(const SearchState& st, std::size_t t, Emit&& emit) const {
    if (cfg_.require_surjective && unhit_actions(st) > ne_ - t) return;
    const double min = cfg_.min_compatibility;
    const std::size_t p = e_who_[t];
    for (std::size_t k = 0; k < ns_; ++k) {
      if (act_compat_[t][k] < min) continue;
      const std::size_t q = s_who_[k];
      SearchState child = st;
      if (p == pe_ - 1) {
        if (q != ps_ - 1) continue;
      } else if (child.part[p] == kUnmapped) {
        if (q == ps_ - 1 || part_compat_[p][q] < min) continue;
        child.part[p] = static_cast<int>(q);
        child.forced_by[p] = static_cast<int>(t);
        child.compat_sum += part_compat_[p][q];
      } else if (child.part[p] != static_cast<int>(q)) {
        continue;
      }
      if (!arrows_fit(st, t, k)) continue;
      child.act[t] = static_cast<int>(k);
      child.compat_sum += act_compat_[t][k];
      emit(std::move(child));
    }
    if (!cfg_.require_injective) emit(SearchState(st));
  }

  void descend(const SearchState& st, std::size_t t) {
    if (t == ne_) {
      assign_free_participants(st, 0);
      return;
    }
    expand(st, t, [&](SearchState child) { descend(child, t + 1); });
  }

  /// Participants not fixed by a mapped action get any compatible image.
  void assign_free_participants(const SearchState& st, std::size_t p) {
    while (p + 1 < pe_ && st.part[p] != kUnmapped) ++p;
    if (p + 1 >= pe_) {
      finish(st);
      return;
    }
    for (std::size_t q = 0; q + 1 < ps_; ++q) {
      if (part_compat_[p][q] < cfg_.min_compatibility) continue;
      SearchState child = st;
      child.part[p] = static_cast<int>(q);
      child.compat_sum += part_compat_[p][q];
      assign_free_participants(child, p + 1);
    }
    if (!cfg_.require_injective) {
      SearchState child = st;
      child.part[p] = -2;  // deliberately left unmapped
      assign_free_participants(child, p + 1);
    }
  }

  void finish(const SearchState& st) {
    Functor f{source_.id(), target_.id(), {}, {}, direction_for(source_)};
    for (std::size_t i = 0; i < ne_; ++i)
      if (st.act[i] >= 0) f.action_map.emplace(e_.actions[i], s_.actions[static_cast<std::size_t>(st.act[i])]);
    for (std::size_t p = 0; p + 1 < pe_; ++p)
      if (st.part[p] >= 0)
        f.participant_map.emplace(e_.participants[p], s_.participants[static_cast<std::size_t>(st.part[p])]);
    if (f.empty() && (ne_ > 0 || pe_ > 1)) return;

    Score score = score_with(f, source_, target_, belog_, cfg_, checker_);
    const auto& r = score.report;
    if (!r.is_function || !r.zero_column_rule_ok || !r.causal_eq_S_ok || !r.causal_eq_N_ok || !r.who_eq_ok) return;
    if (!orientation_.ok(e_, st.act)) return;
    if (cfg_.require_surjective && !r.surjective) return;
    if (cfg_.require_injective && !r.injective) return;
    results_.push_back({std::move(f), std::move(score)});
  }

  const ELog& source_;
  const ELog& target_;
  const BeLog& belog_;
  const SearchConfig& cfg_;
  FunctorChecker checker_;
  ArrowOrientation orientation_{checker_.target()};
  const CauseMatrices& e_;
  const CauseMatrices& s_;
  std::size_t ne_ = 0, ns_ = 0, pe_ = 0, ps_ = 0;
  std::vector<std::size_t> e_who_, s_who_;
  std::vector<std::vector<double>> act_compat_, part_compat_;
  std::vector<Candidate> results_;
};

}  // namespace

std::vector<Candidate> search_functors(const ELog& source, const ELog& target, const BeLog& belog,
                                       const SearchConfig& cfg) {
  cfg.validate();
  return FunctorSearch(source, target, belog, cfg).run();
}

std::vector<Functor> brute_force_functors(const ELog& source, const ELog& target, const SearchConfig& cfg) {
  (void)cfg;
  FunctorChecker checker(adjacency(source), adjacency(target));
  const auto& e = checker.source();
  const auto& s = checker.target();
  if (e.actions.size() > 8 || s.actions.size() > 8)
    throw Error(ErrorCode::too_large, "brute force is limited to 8 actions per log");
  const std::size_t ne = e.actions.size(), ns = s.actions.size();
  const std::size_t pe = e.participants.size() - 1, ps = s.participants.size() - 1;

  double combos = std::pow(double(ns), double(ne)) * std::pow(double(ps), double(pe));
  if (combos > 5e7) throw Error(ErrorCode::too_large, "brute-force enumeration too large");

  std::vector<Functor> out;
  if ((ne > 0 && ns == 0) || (pe > 0 && ps == 0)) return out;
  std::vector<std::size_t> a(ne, 0), p(pe, 0);
  const ArrowOrientation orientation(s);
  std::vector<int> img(ne);
  // Odometer over actions, inner odometer over participants.
  auto bump = [](std::vector<std::size_t>& digits, std::size_t radix) {
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (++digits[i] < radix) return true;
      digits[i] = 0;
    }
    return false;
  };
  do {
    std::fill(p.begin(), p.end(), 0);
    do {
      Functor f{source.id(), target.id(), {}, {}, direction_for(source)};
      for (std::size_t i = 0; i < ne; ++i) {
        f.action_map.emplace(e.actions[i], s.actions[a[i]]);
        img[i] = static_cast<int>(a[i]);
      }
      for (std::size_t i = 0; i < pe; ++i) f.participant_map.emplace(e.participants[i], s.participants[p[i]]);
      auto report = checker.evaluate(make_conversion(e, s, f.action_map, f.participant_map));
      if (report.complete() && orientation.ok(e, img)) out.push_back(std::move(f));
    } while (bump(p, ps));
  } while (bump(a, ns));
  std::sort(out.begin(), out.end(), functor_less);
  return out;
}

// ---------------------------------------------------------------------------
// Fullness and natural transformations

std::map<ObjectId, std::set<ObjectId>> hom_reachability(const ELog& log) {
  std::map<ObjectId, std::vector<ObjectId>> succ;
  std::vector<ObjectId> nodes = log.content_participants();
  for (const auto& id : log.content_actions()) {
    nodes.push_back(id);
    const Action& a = *log.find_action(id);
    for (const ObjectId* t : {&a.who, &a.cause_s, &a.cause_n})
      if (!is_sentinel(*t) && *t != id) succ[id].push_back(*t);
  }
  std::map<ObjectId, std::set<ObjectId>> out;
  for (const auto& start : nodes) {
    auto& seen = out[start];
    seen.insert(start);
    std::vector<ObjectId> stack{start};
    while (!stack.empty()) {
      ObjectId cur = stack.back();
      stack.pop_back();
      for (const auto& nxt : succ[cur])
        if (seen.insert(nxt).second) stack.push_back(nxt);
    }
  }
  return out;
}

namespace {

bool has_arrow(const std::map<ObjectId, std::set<ObjectId>>& hom, const ObjectId& x, const ObjectId& y) {
  if (x == y) return true;
  auto it = hom.find(x);
  return it != hom.end() && it->second.count(y) > 0;
}

std::map<ObjectId, ObjectId> object_map(const Functor& f) {
  std::map<ObjectId, ObjectId> all = f.participant_map;
  for (const auto& [k, v] : f.action_map) all[k] = v;
  return all;
}

}  // namespace

bool is_full(const Functor& f, const ELog& source, const ELog& target) {
  const auto hs = hom_reachability(source);
  const auto ht = hom_reachability(target);
  const auto obj = object_map(f);
  for (const auto& [x, fx] : obj)
    for (const auto& [y, fy] : obj) {
      if (fx == fy) continue;
      if (has_arrow(ht, fx, fy) && !has_arrow(hs, x, y)) return false;
    }
  return true;
}

std::optional<NaturalTransformation> natural_transformation(const Functor& f, const Functor& g,
                                                            const ELog& source, const ELog& target) {
  if (f.src != g.src || f.dst != g.dst || f.src != source.id() || f.dst != target.id())
    throw Error(ErrorCode::source_target_mismatch, "functors must share source '" + source.id() +
                                                       "' and target '" + target.id() + "'");
  const auto fo = object_map(f);
  const auto go = object_map(g);
  std::set<ObjectId> keys;
  for (const auto& [k, _] : fo) keys.insert(k);
  for (const auto& [k, _] : go) keys.insert(k);
  const auto ht = hom_reachability(target);

  NaturalTransformation eta;
  for (const auto& x : keys) {
    auto fi = fo.find(x);
    auto gi = go.find(x);
    if (fi == fo.end() || gi == go.end()) return std::nullopt;
    if (!has_arrow(ht, fi->second, gi->second)) return std::nullopt;
    eta.components.emplace(x, std::make_pair(fi->second, gi->second));
  }
  // Naturality squares for each generating arrow x -> y of the source. The
  // target is thin, so both composites F x -> G y agree as soon as that
  // hom-set is inhabited.
  for (const auto& x : keys) {
    const Action* a = source.find_action(x);
    if (!a) continue;
    for (const ObjectId* y : {&a->who, &a->cause_s, &a->cause_n}) {
      if (is_sentinel(*y) || *y == x || !keys.count(*y)) continue;
      if (!has_arrow(ht, fo.at(x), go.at(*y))) return std::nullopt;
    }
  }
  return eta;
}

}  // namespace cognilog
