#include "cognilog/matrix_engine.hpp"

#include <algorithm>

#include "cognilog/error.hpp"

namespace cognilog {

namespace {

std::optional<std::size_t> index_of(const std::vector<ObjectId>& ids, std::string_view id) {
  auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ids.begin());
}

}  // namespace

std::optional<std::size_t> CauseMatrices::action_index(std::string_view id) const { return index_of(actions, id); }

std::optional<std::size_t> CauseMatrices::participant_index(std::string_view id) const {
  return index_of(participants, id);
}

CauseMatrices adjacency(const ELog& log) {
  CauseMatrices m;
  m.actions = canonical_action_order(log);
  std::set<ObjectId> parts;
  for (const auto& p : log.content_participants()) parts.insert(p);
  for (const auto& a : m.actions) {
    const Action& act = *log.find_action(a);
    if (!is_sentinel(act.who)) parts.insert(act.who);
  }
  m.participants.assign(parts.begin(), parts.end());
  m.participants.emplace_back(kNobody);

  const std::size_t n = m.actions.size();
  m.S = m.N = m.S_tri = m.N_tri = BoolMatrix(n, n);
  m.E = BoolMatrix(n, m.participants.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Action& a = *log.find_action(m.actions[i]);
    auto partner_is = [&](const ObjectId& other) { return a.trivial_partner && *a.trivial_partner == other; };
    if (a.cause_s != a.id && !is_sentinel(a.cause_s)) {
      std::size_t j = *m.action_index(a.cause_s);
      m.S.set(i, j);
      if (partner_is(a.cause_s)) m.S_tri.set(i, j);
    }
    if (a.cause_n != a.id && !is_sentinel(a.cause_n)) {
      std::size_t j = *m.action_index(a.cause_n);
      m.N.set(i, j);
      if (partner_is(a.cause_n)) m.N_tri.set(i, j);
    }
    m.E.set(i, *m.participant_index(is_sentinel(a.who) ? std::string(kNobody) : a.who));
  }
  return m;
}

ConversionPair make_conversion(const CauseMatrices& e, const CauseMatrices& s,
                               const std::map<ObjectId, ObjectId>& action_map,
                               const std::map<ObjectId, ObjectId>& participant_map) {
  ConversionPair p{BoolMatrix(s.actions.size(), e.actions.size()),
                   BoolMatrix(s.participants.size(), e.participants.size())};
  auto missing = [](const ObjectId& id) {
    return Error(ErrorCode::unknown_object, "functor refers to unknown object '" + id + "'");
  };
  for (const auto& [from, to] : action_map) {
    auto i = e.action_index(from);
    auto k = s.action_index(to);
    if (!i) throw missing(from);
    if (!k) throw missing(to);
    p.P_S.set(*k, *i);
  }
  for (const auto& [from, to] : participant_map) {
    auto i = e.participant_index(from);
    auto k = s.participant_index(to);
    if (!i) throw missing(from);
    if (!k) throw missing(to);
    p.P_E.set(*k, *i);
  }
  p.P_E.set(s.participants.size() - 1, e.participants.size() - 1);
  return p;
}

FunctorChecker::FunctorChecker(CauseMatrices e, CauseMatrices s) : e_(std::move(e)), s_(std::move(s)) {
  const auto id = BoolMatrix::identity(s_.actions.size());
  ls_ = transitive_closure(s_.S + s_.N_tri) + id;
  ln_ = transitive_closure(s_.N + s_.S_tri) + id;
  rs_ = transitive_closure(e_.S + e_.N_tri);
  rn_ = transitive_closure(e_.N + e_.S_tri);
}

void FunctorChecker::check_dims(const ConversionPair& p) const {
  if (p.P_S.rows() != s_.actions.size() || p.P_S.cols() != e_.actions.size() ||
      p.P_E.rows() != s_.participants.size() || p.P_E.cols() != e_.participants.size())
    throw Error(ErrorCode::dimension_mismatch, "conversion matrices do not fit the two logs");
}

CausalEquationResult FunctorChecker::causal_equations(const ConversionPair& p) const {
  check_dims(p);
  const BoolMatrix pt = p.P_S.transpose();
  const auto id = BoolMatrix::identity(s_.actions.size());
  const BoolMatrix rs = p.P_S * rs_ * pt + id;
  const BoolMatrix rn = p.P_S * rn_ * pt + id;
  CausalEquationResult out;
  const std::size_t n = s_.actions.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (!p.P_S.row_any(k)) continue;
    for (std::size_t l = 0; l < n; ++l) {
      if (!p.P_S.row_any(l)) continue;
      if (ls_.get(k, l) != rs.get(k, l)) out.s_mismatches.emplace_back(s_.actions[k], s_.actions[l]);
      if (ln_.get(k, l) != rn.get(k, l)) out.n_mismatches.emplace_back(s_.actions[k], s_.actions[l]);
    }
  }
  out.s_ok = out.s_mismatches.empty();
  out.n_ok = out.n_mismatches.empty();
  return out;
}

WhoEquationResult FunctorChecker::who_equation(const ConversionPair& p) const {
  check_dims(p);
  const BoolMatrix converted = p.P_S * e_.E * p.P_E.transpose();
  WhoEquationResult out;
  for (std::size_t k = 0; k < s_.actions.size(); ++k) {
    if (!p.P_S.row_any(k)) continue;
    for (std::size_t q = 0; q < s_.participants.size(); ++q)
      if (converted.get(k, q) != s_.E.get(k, q)) out.mismatches.emplace_back(s_.actions[k], s_.participants[q]);
  }
  out.ok = out.mismatches.empty();
  return out;
}

FunctionRulesResult FunctorChecker::function_rules(const ConversionPair& p) const {
  check_dims(p);
  FunctionRulesResult out;
  auto column_count = [](const BoolMatrix& m, std::size_t c) {
    std::size_t n = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) n += m.get(r, c);
    return n;
  };
  const std::size_t nobody_e = e_.participants.size() - 1;
  const std::size_t nobody_s = s_.participants.size() - 1;

  for (std::size_t i = 0; i < e_.actions.size(); ++i) {
    std::size_t c = column_count(p.P_S, i);
    if (c > 1) out.multi_mapped.push_back(e_.actions[i]);
    if (c == 0) out.unmapped.push_back(e_.actions[i]);
  }
  for (std::size_t i = 0; i < nobody_e; ++i) {
    std::size_t c = column_count(p.P_E, i);
    if (c > 1) out.multi_mapped.push_back(e_.participants[i]);
    if (c == 0) out.unmapped.push_back(e_.participants[i]);
  }
  for (std::size_t k = 0; k < s_.actions.size(); ++k)
    if (!p.P_S.row_any(k)) out.unhit.push_back(s_.actions[k]);
  for (std::size_t k = 0; k < nobody_s; ++k)
    if (!p.P_E.row_any(k)) out.unhit.push_back(s_.participants[k]);

  // A mapped action needs its performer mapped: column i of P_S must be zero
  // whenever row i of E_e P_E^T (column i of P_E E_e in the transposed view) is.
  const BoolMatrix who_images = e_.E * p.P_E.transpose();
  for (std::size_t i = 0; i < e_.actions.size(); ++i)
    if (column_count(p.P_S, i) > 0 && !who_images.row_any(i)) out.zero_column_actions.push_back(e_.actions[i]);

  out.is_function = out.multi_mapped.empty();
  out.zero_column_rule_ok = out.zero_column_actions.empty();
  out.surjective = out.unhit.empty();
  out.injective = out.unmapped.empty();
  return out;
}

CompletenessReport FunctorChecker::evaluate(const ConversionPair& p) const {
  CompletenessReport r;
  FunctionRulesResult f = function_rules(p);
  CausalEquationResult c = causal_equations(p);
  WhoEquationResult w = who_equation(p);
  r.is_function = f.is_function;
  r.zero_column_rule_ok = f.zero_column_rule_ok;
  r.surjective = f.surjective;
  r.injective = f.injective;
  r.multi_mapped = std::move(f.multi_mapped);
  r.zero_column_actions = std::move(f.zero_column_actions);
  r.unhit = std::move(f.unhit);
  r.unmapped = std::move(f.unmapped);
  r.causal_eq_S_ok = c.s_ok;
  r.causal_eq_N_ok = c.n_ok;
  r.causal_S_mismatches = std::move(c.s_mismatches);
  r.causal_N_mismatches = std::move(c.n_mismatches);
  r.who_eq_ok = w.ok;
  r.who_mismatches = std::move(w.mismatches);

  const BoolMatrix e_tri = e_.S_tri + e_.N_tri;
  const BoolMatrix s_tri = s_.S_tri + s_.N_tri;
  for (std::size_t i = 0; i < e_.actions.size(); ++i)
    for (std::size_t j = 0; j < e_.actions.size(); ++j) {
      if (!e_tri.get(i, j)) continue;
      for (std::size_t k = 0; k < s_.actions.size(); ++k)
        for (std::size_t l = 0; l < s_.actions.size(); ++l)
          if (k != l && p.P_S.get(k, i) && p.P_S.get(l, j) && !s_tri.get(k, l) && !s_tri.get(l, k))
            r.trivial_breaks.emplace_back(e_.actions[i], e_.actions[j]);
    }
  r.trivial_preserved = r.trivial_breaks.empty();
  return r;
}

CausalEquationResult check_causal_equations(const CauseMatrices& e, const CauseMatrices& s,
                                            const ConversionPair& p) {
  return FunctorChecker(e, s).causal_equations(p);
}

WhoEquationResult check_who_equation(const CauseMatrices& e, const CauseMatrices& s, const ConversionPair& p) {
  return FunctorChecker(e, s).who_equation(p);
}

FunctionRulesResult check_function_rules(const CauseMatrices& e, const CauseMatrices& s,
                                         const ConversionPair& p) {
  return FunctorChecker(e, s).function_rules(p);
}

}  // namespace cognilog
