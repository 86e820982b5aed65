#include "cognilog/temporal.hpp"

#include <map>

#include "cognilog/error.hpp"
#include "cognilog/functor.hpp"

namespace cognilog {

std::string_view to_string(VendlerClass c) {
  switch (c) {
    case VendlerClass::activities: return "Activities";
    case VendlerClass::status: return "Status";
    case VendlerClass::accomplishments: return "Accomplishments";
    case VendlerClass::achievements: return "Achievements";
    case VendlerClass::indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

std::set<VendlerClass> vendler_cell(EndRelation row, StartRelation column) {
  switch (column) {
    case StartRelation::A:
      if (row == EndRelation::b) return {VendlerClass::accomplishments, VendlerClass::achievements};
      return {VendlerClass::indeterminate};
    case StartRelation::B:
    case StartRelation::C:
      return {VendlerClass::activities, VendlerClass::status};
  }
  return {VendlerClass::indeterminate};
}

Interval interval_of(const Action& action) { return {action.raw.t_start, action.raw.t_end}; }

VendlerTyping vendler_type(const Interval& cause, const Interval& effect) {
  if (!cause.t_start || !cause.t_end || !effect.t_start || !effect.t_end)
    throw Error(ErrorCode::missing_timestamp, "aspect typing needs start and end times on both actions");
  const auto cs = *cause.t_start, ce = *cause.t_end, es = *effect.t_start, ee = *effect.t_end;
  if (cs > ce || es > ee) throw Error(ErrorCode::invalid_interval, "interval ends before it starts");
  if (es < cs) throw Error(ErrorCode::invalid_interval, "effect starts before its cause");

  VendlerTyping t{};
  if (es == cs)
    t.column = StartRelation::A;
  else if (es < ce)
    t.column = StartRelation::B;
  else
    t.column = StartRelation::C;

  if (ee == ce)
    t.row = EndRelation::a;
  else if (ee < ce)
    t.row = EndRelation::b;
  else
    t.row = EndRelation::c;

  t.classes = vendler_cell(t.row, t.column);
  return t;
}

double TemporalReport::consistency() const noexcept {
  if (checked == 0) return 1.0;
  return static_cast<double>(checked - violations.size()) / static_cast<double>(checked);
}

std::set<std::pair<ObjectId, ObjectId>> causal_reachability(const ELog& log) {
  std::map<ObjectId, std::set<ObjectId>> succ;
  for (const auto& [c, x] : causal_edges(log)) succ[c].insert(x);
  std::set<std::pair<ObjectId, ObjectId>> out;
  for (const auto& start : log.content_actions()) {
    std::vector<ObjectId> stack{start};
    std::set<ObjectId> seen;
    while (!stack.empty()) {
      ObjectId cur = stack.back();
      stack.pop_back();
      for (const auto& nxt : succ[cur])
        if (seen.insert(nxt).second) stack.push_back(nxt);
    }
    for (const auto& x : seen)
      if (x != start) out.emplace(start, x);
  }
  return out;
}

namespace {

int sign(std::int64_t v) { return (v > 0) - (v < 0); }

}  // namespace

TemporalReport check_temporal_consistency(const ELog& source, const ELog& target, const Functor& functor) {
  TemporalReport report;
  const auto target_reach = causal_reachability(target);
  for (const auto& [c, x] : causal_reachability(source)) {
    auto fc = functor.action_map.find(c);
    auto fx = functor.action_map.find(x);
    if (fc == functor.action_map.end() || fx == functor.action_map.end()) continue;
    if (fc->second == fx->second) continue;
    if (!target_reach.count({fc->second, fx->second}) && !target_reach.count({fx->second, fc->second})) continue;
    const Action* sc = source.find_action(c);
    const Action* sx = source.find_action(x);
    const Action* tc = target.find_action(fc->second);
    const Action* tx = target.find_action(fx->second);
    if (!sc || !sx || !tc || !tx || !sc->raw.t_start || !sx->raw.t_start || !tc->raw.t_start ||
        !tx->raw.t_start) {
      ++report.indeterminate;
      continue;
    }
    ++report.checked;
    if (sign(*sx->raw.t_start - *sc->raw.t_start) * sign(*tx->raw.t_start - *tc->raw.t_start) < 0)
      report.violations.emplace_back(c, x);
  }
  report.ok = report.violations.empty();
  return report;
}

}  // namespace cognilog
