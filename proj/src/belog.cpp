#include "cognilog/belog.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

#include "cognilog/error.hpp"

namespace cognilog {

std::string_view to_string(BeVerbType type) {
  switch (type) {
    case BeVerbType::be1: return "Be1";
    case BeVerbType::be2: return "Be2";
    case BeVerbType::be3: return "Be3";
    case BeVerbType::be4: return "Be4";
    case BeVerbType::belong: return "Belong";
    case BeVerbType::similar: return "Similar";
    case BeVerbType::association: return "Association";
  }
  return "Be3";
}

std::optional<BeVerbType> parse_be_verb(std::string_view text) {
  for (auto t : {BeVerbType::be1, BeVerbType::be2, BeVerbType::be3, BeVerbType::be4, BeVerbType::belong,
                 BeVerbType::similar, BeVerbType::association})
    if (to_string(t) == text) return t;
  return std::nullopt;
}

std::string BeRelation::id() const {
  return std::string(to_string(type)) + ":" + source + ":" + target;
}

namespace {

auto sort_key(const BeRelation& r) { return std::tie(r.type, r.source, r.target); }

}  // namespace

void BeLog::add(BeRelation relation) {
  if (!is_valid_id(relation.source) || !is_valid_id(relation.target))
    throw Error(ErrorCode::invalid_log, "be-relation endpoints must be valid ids");
  if (!(relation.weight > 0.0) || relation.weight > 1.0)
    throw Error(ErrorCode::invalid_log, "be-relation weight must lie in (0,1]: " + relation.id());
  if (relation.source == relation.target && relation.type != BeVerbType::be1)
    throw Error(ErrorCode::invalid_log, "only identification may relate an object to itself: " + relation.id());
  auto pos = std::lower_bound(relations_.begin(), relations_.end(), relation,
                              [](const BeRelation& a, const BeRelation& b) { return sort_key(a) < sort_key(b); });
  if (pos != relations_.end() && sort_key(*pos) == sort_key(relation))
    throw Error(ErrorCode::duplicate_id, "be-relation repeated: " + relation.id());
  relations_.insert(pos, std::move(relation));
}

bool BeLog::remove(BeVerbType type, std::string_view source, std::string_view target) {
  auto it = std::find_if(relations_.begin(), relations_.end(), [&](const BeRelation& r) {
    return r.type == type && r.source == source && r.target == target;
  });
  if (it == relations_.end()) return false;
  relations_.erase(it);
  return true;
}

const BeRelation* BeLog::find(BeVerbType type, std::string_view source, std::string_view target) const {
  for (const auto& r : relations_)
    if (r.type == type && r.source == source && r.target == target) return &r;
  return nullptr;
}

std::vector<const BeRelation*> BeLog::from(BeVerbType type, std::string_view source) const {
  std::vector<const BeRelation*> out;
  for (const auto& r : relations_)
    if (r.type == type && r.source == source) out.push_back(&r);
  return out;
}

std::vector<const BeRelation*> BeLog::to(BeVerbType type, std::string_view target) const {
  std::vector<const BeRelation*> out;
  for (const auto& r : relations_)
    if (r.type == type && r.target == target) out.push_back(&r);
  return out;
}

std::set<ObjectId> BeLog::characteristics(std::string_view owner) const {
  std::set<ObjectId> out;
  for (const BeRelation* r : from(BeVerbType::be4, owner)) out.insert(r->target);
  return out;
}

std::set<ObjectId> BeLog::objects() const {
  std::set<ObjectId> out;
  for (const auto& r : relations_) {
    out.insert(r.source);
    out.insert(r.target);
  }
  return out;
}

Ratio similarity_ratio(const BeLog& belog, std::string_view a, std::string_view b) {
  if (a == b) return {1, 1};
  auto cha = belog.characteristics(a);
  auto chb = belog.characteristics(b);
  if (chb.empty()) return {1, 1};
  std::int64_t common = 0;
  for (const auto& c : chb) common += cha.count(c);
  return {common, static_cast<std::int64_t>(chb.size())};
}

double similarity_by_characteristics(const BeLog& belog, std::string_view a, std::string_view b) {
  return similarity_ratio(belog, a, b).value();
}

bool is_member(const BeLog& belog, std::string_view a, std::string_view cls) {
  return similarity_ratio(belog, a, cls).is_one() || belog.find(BeVerbType::be3, a, cls) != nullptr;
}

bool is_member_transitive(const BeLog& belog, std::string_view a, std::string_view cls) {
  if (is_member(belog, a, cls)) return true;
  auto universe = belog.objects();
  universe.insert(std::string(cls));
  std::set<ObjectId> seen{std::string(a)};
  std::deque<ObjectId> frontier{std::string(a)};
  while (!frontier.empty()) {
    ObjectId cur = frontier.front();
    frontier.pop_front();
    for (const auto& next : universe) {
      if (seen.count(next) || !is_member(belog, cur, next)) continue;
      if (next == cls) return true;
      seen.insert(next);
      frontier.push_back(next);
    }
  }
  return false;
}

namespace {

/// Weight of the similarity of `from` to `to` as used by prototype analysis.
double in_similarity(const BeLog& belog, const ObjectId& from, const ObjectId& to) {
  if (const BeRelation* r = belog.find(BeVerbType::similar, from, to)) return r->weight;
  if (belog.characteristics(to).empty()) return 0.0;
  return similarity_by_characteristics(belog, from, to);
}

}  // namespace

ObjectId class_centre(const BeLog& belog, const std::set<ObjectId>& members) {
  if (members.empty()) throw Error(ErrorCode::empty_class, "class has no members");
  ObjectId best;
  double best_score = -1.0;
  for (const auto& m : members) {  // ascending id, so strict > keeps the smaller id on ties
    double score = 0.0;
    for (const auto& o : members)
      if (o != m) score += in_similarity(belog, o, m);
    if (score > best_score) {
      best_score = score;
      best = m;
    }
  }
  return best;
}

double prototype_distance(const BeLog& belog, const std::set<ObjectId>& members, std::string_view member,
                          std::string_view centre) {
  for (std::string_view id : {member, centre})
    if (!members.count(std::string(id)))
      throw Error(ErrorCode::not_in_class, "'" + std::string(id) + "' is not a member of the class");
  if (member == centre) return 0.0;
  if (const BeRelation* r = belog.find(BeVerbType::similar, member, centre)) return 1.0 - r->weight;
  return 1.0 - similarity_by_characteristics(belog, member, centre);
}

bool EquivalenceBlock::related(std::string_view x, std::string_view y) const {
  return members.count(std::string(x)) && members.count(std::string(y));
}

std::vector<std::pair<ObjectId, ObjectId>> EquivalenceBlock::pairs() const {
  std::vector<std::pair<ObjectId, ObjectId>> out;
  for (const auto& x : members)
    for (const auto& y : members) out.emplace_back(x, y);
  return out;
}

EquivalenceBlock equivalence_from_class(const BeLog& belog, std::string_view cls,
                                        const std::set<ObjectId>& participants) {
  EquivalenceBlock block{std::string(cls), {}};
  for (const auto& p : participants)
    if (is_member(belog, p, cls)) block.members.insert(p);
  return block;
}

double mapping_compatibility(const BeLog& belog, std::string_view x, std::string_view y,
                             const CompatibilityConfig& cfg) {
  if (x == y) return 1.0;
  double best = 0.0;
  for (const BeRelation* cx : belog.from(BeVerbType::be3, x))
    if (cx->target == y || belog.find(BeVerbType::be3, y, cx->target)) return 1.0;
  if (const BeRelation* r = belog.find(BeVerbType::similar, x, y)) best = std::max(best, r->weight);
  if (const BeRelation* r = belog.find(BeVerbType::association, x, y))
    best = std::max(best, std::min(1.0, r->weight * cfg.association_factor));
  if (!belog.characteristics(y).empty()) best = std::max(best, similarity_by_characteristics(belog, x, y));
  return best;
}

}  // namespace cognilog
