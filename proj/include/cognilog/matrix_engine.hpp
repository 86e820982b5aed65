#pragma once

// Logical-matrix form of a log and of a functor between two logs.
//
// Orientation: arrow matrices are indexed (source, target). S(i, j) = 1 iff
// cause_s(a_i) = a_j, N(i, j) = 1 iff cause_n(a_i) = a_j, and E(i, p) = 1 iff
// who(a_i) = p. Under the canonical causal order S is strictly lower and N
// strictly upper triangular. Conversion matrices are indexed (target object,
// source object): P_S(k, i) = 1 iff the e-action i maps onto the s-action k,
// so a function has at most one entry per column. A cause matrix M converts
// as P_S M P_S^T and the who matrix as P_S E P_E^T.
//
// Sentinel actions are left out of the matrices (their mapping is forced).
// `nobody` is kept as the last participant so that actions performed by
// nobody still have a who entry; it is excluded from surjectivity and
// injectivity counts.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cognilog/bool_matrix.hpp"
#include "cognilog/model.hpp"

namespace cognilog {

struct CauseMatrices {
  std::vector<ObjectId> actions;
  std::vector<ObjectId> participants;
  BoolMatrix S;
  BoolMatrix N;
  BoolMatrix S_tri;
  BoolMatrix N_tri;
  BoolMatrix E;

  std::optional<std::size_t> action_index(std::string_view id) const;
  std::optional<std::size_t> participant_index(std::string_view id) const;
};

CauseMatrices adjacency(const ELog& log);

struct ConversionPair {
  BoolMatrix P_S;
  BoolMatrix P_E;
};

/// Builds P_S and P_E from object maps; `nobody` maps to `nobody`.
/// Throws unknown_object for ids missing from either side.
ConversionPair make_conversion(const CauseMatrices& e, const CauseMatrices& s,
                               const std::map<ObjectId, ObjectId>& action_map,
                               const std::map<ObjectId, ObjectId>& participant_map);

using IdPair = std::pair<ObjectId, ObjectId>;

struct CausalEquationResult {
  bool s_ok = true;
  bool n_ok = true;
  std::vector<IdPair> s_mismatches;  // s-action pairs where the two sides differ
  std::vector<IdPair> n_mismatches;
};

struct WhoEquationResult {
  bool ok = true;
  std::vector<IdPair> mismatches;  // (s-action, s-participant)
};

struct FunctionRulesResult {
  bool is_function = true;
  bool zero_column_rule_ok = true;
  bool surjective = true;
  bool injective = true;
  std::vector<ObjectId> multi_mapped;         // e objects with >1 image
  std::vector<ObjectId> zero_column_actions;  // mapped e-actions whose who is unmapped
  std::vector<ObjectId> unhit;                // s objects with no preimage
  std::vector<ObjectId> unmapped;             // e objects with no image
};

struct CompletenessReport {
  bool is_function = true;
  bool zero_column_rule_ok = true;
  bool surjective = true;
  bool injective = true;
  bool causal_eq_S_ok = true;
  bool causal_eq_N_ok = true;
  bool who_eq_ok = true;
  /// Soft flag: every mapped trivial pair with distinct images lands on a
  /// trivial pair. Not part of completeness.
  bool trivial_preserved = true;

  std::vector<IdPair> causal_S_mismatches;
  std::vector<IdPair> causal_N_mismatches;
  std::vector<IdPair> who_mismatches;
  std::vector<ObjectId> multi_mapped;
  std::vector<ObjectId> zero_column_actions;
  std::vector<ObjectId> unhit;
  std::vector<ObjectId> unmapped;
  std::vector<IdPair> trivial_breaks;

  bool complete() const noexcept {
    return is_function && zero_column_rule_ok && surjective && injective && causal_eq_S_ok &&
           causal_eq_N_ok && who_eq_ok;
  }
};

/// Caches the closures of both logs so that many conversions can be checked
/// against the same pair of logs.
class FunctorChecker {
 public:
  FunctorChecker(CauseMatrices e, CauseMatrices s);

  const CauseMatrices& source() const noexcept { return e_; }
  const CauseMatrices& target() const noexcept { return s_; }

  /// closure(S + N_tri) + I and closure(N + S_tri) + I of the target.
  const BoolMatrix& target_s_reach() const noexcept { return ls_; }
  const BoolMatrix& target_n_reach() const noexcept { return ln_; }

  /// Both causal equations, compared on the image of P_S.
  CausalEquationResult causal_equations(const ConversionPair& p) const;
  /// P_S E_e P_E^T = E_s on the image of P_S.
  WhoEquationResult who_equation(const ConversionPair& p) const;
  FunctionRulesResult function_rules(const ConversionPair& p) const;
  CompletenessReport evaluate(const ConversionPair& p) const;

 private:
  void check_dims(const ConversionPair& p) const;

  CauseMatrices e_;
  CauseMatrices s_;
  BoolMatrix ls_, ln_;  // target closures + I
  BoolMatrix rs_, rn_;  // source closures (without I)
};

CausalEquationResult check_causal_equations(const CauseMatrices& e, const CauseMatrices& s,
                                            const ConversionPair& p);
WhoEquationResult check_who_equation(const CauseMatrices& e, const CauseMatrices& s, const ConversionPair& p);
FunctionRulesResult check_function_rules(const CauseMatrices& e, const CauseMatrices& s,
                                         const ConversionPair& p);

}  // namespace cognilog
