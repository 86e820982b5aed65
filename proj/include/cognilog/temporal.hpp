#pragma once

// Timestamp-order checks for functors and aspect typing of causal pairs.
//
// Only the order of ticks matters. Causally unrelated actions may appear in
// either order; causally related ones must keep their order under a functor.

#include <cstdint>
#include <optional>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "cognilog/model.hpp"

namespace cognilog {

struct Functor;

struct Interval {
  std::optional<std::int64_t> t_start;
  std::optional<std::int64_t> t_end;
};

enum class VendlerClass { activities, status, accomplishments, achievements, indeterminate };

std::string_view to_string(VendlerClass c);

/// Start-time relation of effect to cause:
///   A  effect starts when the cause starts
///   B  effect starts strictly inside the cause's interval
///   C  effect starts at or after the cause's end
enum class StartRelation { A, B, C };
/// End-time relation of effect to cause:
///   a  both end together
///   b  effect ends before the cause ends
///   c  effect ends after the cause ends
enum class EndRelation { a, b, c };

struct VendlerTyping {
  StartRelation column;
  EndRelation row;
  std::set<VendlerClass> classes;
};

/// Table lookup; an empty cell ("---") yields {indeterminate}. Parenthesised
/// alternatives are part of the returned set.
std::set<VendlerClass> vendler_cell(EndRelation row, StartRelation column);

/// Throws missing_timestamp when any bound is absent and invalid_interval
/// when the effect starts before the cause or an interval is reversed.
VendlerTyping vendler_type(const Interval& cause, const Interval& effect);

Interval interval_of(const Action& action);

struct TemporalReport {
  bool ok = true;
  /// Source-side (cause, effect) pairs whose images run backwards in time.
  std::vector<std::pair<ObjectId, ObjectId>> violations;
  std::size_t checked = 0;        // determinate pairs
  std::size_t indeterminate = 0;  // pairs skipped for missing timestamps

  /// Fraction of determinate pairs that are consistent; 1 when none.
  double consistency() const noexcept;
};

/// Every causal pair (c, x) of the source (transitively, through cause
/// arrows) whose images are distinct and causally related in the target must
/// keep its order: the signs of t(x) - t(c) and t(F x) - t(F c) may not be
/// opposite.
TemporalReport check_temporal_consistency(const ELog& source, const ELog& target, const Functor& functor);

/// Reachability through cause arrows (sentinels and self arrows ignored):
/// pairs (c, x), c != x, with x reachable from c.
std::set<std::pair<ObjectId, ObjectId>> causal_reachability(const ELog& log);

}  // namespace cognilog
