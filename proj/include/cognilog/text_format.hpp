#pragma once

// Line-oriented text forms of logs, be-logs, functors, matrices and
// reasoning output. Writers are canonical (objects sorted by id), so
// parse -> format reproduces a canonical file byte for byte.
//
//   #ELOG <id>            | #SLOG <id>
//   P <id> [kind=<k>] [label="..."]
//   A <id> who=<p> cs=<a> cn=<a> [triv=<a>] [vol] [ts=<int>] [te=<int>] [label="..."]
//   B <type> <source> <target> [w=<real>] [label="..."]
//
// Blank lines and any other line starting with "#" are comments.

#include <string>
#include <string_view>
#include <vector>

#include "cognilog/belog.hpp"
#include "cognilog/functor.hpp"
#include "cognilog/matrix_engine.hpp"
#include "cognilog/model.hpp"
#include "cognilog/reasoning.hpp"

namespace cognilog {

/// Structure only; call validate_category / require_valid for the laws.
/// Throws ParseError (including for repeated ids).
ELog parse_log(std::string_view text);
std::string format_log(const ELog& log);

/// Relational layout: header `action who cause_s cause_n`, one row per
/// non-sentinel action.
std::string format_log_tsv(const ELog& log);

BeLog parse_belog(std::string_view text);
std::string format_belog(const BeLog& belog);

/// `F src -> dst`, `map A x -> y`, `map P x -> y`, then `score ...` when a
/// score is given.
std::string format_functor(const Functor& f, const Score* score = nullptr);
Functor parse_functor(std::string_view text);
std::string format_candidates_tsv(const std::vector<Candidate>& candidates);

/// `M <name> <rows>x<cols>` followed by rows of 0/1.
std::string format_matrix(std::string_view name, const BoolMatrix& m);
std::string format_matrices(const CauseMatrices& m);

std::string format_report(const ValidationReport& report);
std::string format_report_tsv(const ValidationReport& report);

std::string format_completeness(const CompletenessReport& r);

/// Nodes' functors, then a `TREE` section of `level node parent slog functor-ref`.
std::string format_tree(const ComprehensionTree& tree);
std::string format_tree_tsv(const ComprehensionTree& tree);

std::string quote(std::string_view text);

}  // namespace cognilog
