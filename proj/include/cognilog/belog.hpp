#pragma once

// Be-logs: static relations expressed by be-like verbs (identification,
// classification, characteristics, belonging, similarity, association).
//
// Similarity edges are directed and never symmetrized, and no transitive
// closure is stored: S(A->B) says nothing about S(B->A), and Similar(A,B)
// with Similar(B,C) does not give Similar(A,C).

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cognilog/model.hpp"

namespace cognilog {

enum class BeVerbType { be1, be2, be3, be4, belong, similar, association };

std::string_view to_string(BeVerbType type);
std::optional<BeVerbType> parse_be_verb(std::string_view text);

struct BeRelation {
  BeVerbType type = BeVerbType::be3;
  ObjectId source;
  ObjectId target;
  double weight = 1.0;
  std::string label;
  RawData raw;

  /// Composite key "<type>:<source>:<target>"; unique within a be-log.
  std::string id() const;
  bool operator==(const BeRelation&) const = default;
};

class BeLog {
 public:
  BeLog() = default;

  /// Throws duplicate_id for a repeated (type, source, target) and
  /// invalid_log for a non-positive weight or a self edge on a non-Be1 type.
  void add(BeRelation relation);
  /// Removes the edge with the given key; returns false when absent.
  bool remove(BeVerbType type, std::string_view source, std::string_view target);

  /// Relations in canonical (type, source, target) order.
  const std::vector<BeRelation>& relations() const noexcept { return relations_; }
  bool empty() const noexcept { return relations_.empty(); }

  const BeRelation* find(BeVerbType type, std::string_view source, std::string_view target) const;
  std::vector<const BeRelation*> from(BeVerbType type, std::string_view source) const;
  std::vector<const BeRelation*> to(BeVerbType type, std::string_view target) const;

  /// Ch(A): targets of Be4 edges leaving A.
  std::set<ObjectId> characteristics(std::string_view owner) const;
  /// Every id that appears as an edge endpoint.
  std::set<ObjectId> objects() const;

  bool operator==(const BeLog&) const = default;

 private:
  std::vector<BeRelation> relations_;
};

/// Exact value of |Ch(A) ∩ Ch(B)| / |Ch(B)|. An empty Ch(B) gives 1/1: a
/// class without characteristics contains everything (top element).
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  bool is_one() const noexcept { return num == den; }
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Ratio&) const = default;
};

Ratio similarity_ratio(const BeLog& belog, std::string_view a, std::string_view b);
double similarity_by_characteristics(const BeLog& belog, std::string_view a, std::string_view b);

/// True iff S(A->B) = 1 or an explicit Be3 edge A->B exists.
bool is_member(const BeLog& belog, std::string_view a, std::string_view cls);
/// Reflexive-transitive closure of is_member over the objects known to the
/// be-log (syllogism chains A is B, B is C, so A is C).
bool is_member_transitive(const BeLog& belog, std::string_view a, std::string_view cls);

/// Member with the largest summed in-similarity from the other members
/// (explicit Similar weight, else characteristic similarity when the
/// receiver has characteristics). Ties go to the smaller id. Throws empty_class.
ObjectId class_centre(const BeLog& belog, const std::set<ObjectId>& members);

/// 1 - S(member -> centre), using the Similar edge weight when present.
/// Throws not_in_class when either id is outside `members`.
double prototype_distance(const BeLog& belog, const std::set<ObjectId>& members,
                          std::string_view member, std::string_view centre);

/// One block of an equivalence relation: all participants that are members
/// of the class. Pairs are all (x, y) with x, y in the block.
struct EquivalenceBlock {
  ObjectId cls;
  std::set<ObjectId> members;

  bool related(std::string_view x, std::string_view y) const;
  std::vector<std::pair<ObjectId, ObjectId>> pairs() const;
};

EquivalenceBlock equivalence_from_class(const BeLog& belog, std::string_view cls,
                                        const std::set<ObjectId>& participants);

struct CompatibilityConfig {
  /// Multiplier on Association weights; Similar weights count as-is.
  double association_factor = 1.0;
};

/// Evidence that x may be mapped onto y, as the max over: x == y (1); a
/// shared Be3 class (1); Similar / Association edge weight x->y; and the
/// characteristic similarity S(x->y) when Ch(y) is non-empty. 0 when no
/// evidence exists.
double mapping_compatibility(const BeLog& belog, std::string_view x, std::string_view y,
                             const CompatibilityConfig& cfg = {});

}  // namespace cognilog
