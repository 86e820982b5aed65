#include "cognilog/text_format.hpp"

#include <charconv>
#include <cstdio>
#include <optional>
#include <sstream>

#include "cognilog/error.hpp"

namespace cognilog {

namespace {

struct Token {
  std::string text;   // key part, or the whole token
  std::optional<std::string> value;  // after '=' (unquoted)
  std::size_t column = 1;
};

/// Splits a line on blanks; `key="..."` values may hold blanks and the
/// escapes \" and \\.
std::vector<Token> tokenize(std::string_view line, std::size_t lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    Token t;
    t.column = i + 1;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '=' && line[i] != '\r') ++i;
    t.text = std::string(line.substr(start, i - start));
    if (i < line.size() && line[i] == '=') {
      ++i;
      std::string value;
      if (i < line.size() && line[i] == '"') {
        ++i;
        bool closed = false;
        while (i < line.size()) {
          char c = line[i++];
          if (c == '\\' && i < line.size()) {
            value += line[i++];
          } else if (c == '"') {
            closed = true;
            break;
          } else {
            value += c;
          }
        }
        if (!closed) throw ParseError(lineno, t.column, "unterminated quoted value");
        if (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
          throw ParseError(lineno, i + 1, "expected a blank after a quoted value");
      } else {
        std::size_t vstart = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        value = std::string(line.substr(vstart, i - vstart));
      }
      t.value = std::move(value);
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::int64_t parse_int(const Token& t, std::size_t lineno) {
  std::int64_t v = 0;
  const std::string& s = *t.value;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw ParseError(lineno, t.column, "'" + t.text + "' expects an integer, got '" + s + "'");
  return v;
}

double parse_real(const Token& t, std::size_t lineno) {
  double v = 0;
  const std::string& s = *t.value;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw ParseError(lineno, t.column, "'" + t.text + "' expects a number, got '" + s + "'");
  return v;
}

std::string real_text(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

const std::string& need_value(const Token& t, std::size_t lineno) {
  if (!t.value) throw ParseError(lineno, t.column, "'" + t.text + "' needs a value");
  return *t.value;
}

std::string need_id(const std::vector<Token>& toks, std::size_t k, std::size_t lineno, std::string_view what) {
  if (k >= toks.size()) throw ParseError(lineno, 1, "missing " + std::string(what));
  const Token& t = toks[k];
  if (t.value || !is_valid_id(t.text)) throw ParseError(lineno, t.column, "invalid " + std::string(what));
  return t.text;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, lineno);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

bool is_blank(std::string_view line) { return line.find_first_not_of(" \t") == std::string_view::npos; }

}  // namespace

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

// ---------------------------------------------------------------------------
// Logs

ELog parse_log(std::string_view text) {
  std::optional<ELog> log;
  for_each_line(text, [&](std::string_view line, std::size_t n) {
    if (is_blank(line)) return;
    if (line.front() == '#') {
      auto toks = tokenize(line, n);
      if (toks[0].text != "#ELOG" && toks[0].text != "#SLOG") return;  // comment
      if (log) throw ParseError(n, 1, "second log header");
      if (toks.size() != 2) throw ParseError(n, 1, "header takes exactly one id");
      log.emplace(need_id(toks, 1, n, "log id"), toks[0].text == "#SLOG" ? LogKind::scenario : LogKind::episode);
      return;
    }
    auto toks = tokenize(line, n);
    if (!log) throw ParseError(n, 1, "missing #ELOG/#SLOG header");
    const std::string& tag = toks[0].text;
    if (tag == "P") {
      Participant p;
      p.id = need_id(toks, 1, n, "participant id");
      if (is_sentinel(p.id) || log->has_object(p.id)) throw ParseError(n, toks[1].column, "repeated id '" + p.id + "'");
      for (std::size_t k = 2; k < toks.size(); ++k) {
        const Token& t = toks[k];
        if (t.text == "kind") {
          auto kind = parse_participant_kind(need_value(t, n));
          if (!kind) throw ParseError(n, t.column, "unknown participant kind '" + *t.value + "'");
          p.kind = *kind;
        } else if (t.text == "label") {
          p.label = need_value(t, n);
        } else {
          throw ParseError(n, t.column, "unknown key '" + t.text + "'");
        }
      }
      log->put_participant(std::move(p));
    } else if (tag == "A") {
      Action a;
      a.id = need_id(toks, 1, n, "action id");
      if (is_sentinel(a.id) || log->has_object(a.id)) throw ParseError(n, toks[1].column, "repeated id '" + a.id + "'");
      a.cause_s = a.cause_n = std::string(kUnknown);  // absent causes are unknown
      for (std::size_t k = 2; k < toks.size(); ++k) {
        const Token& t = toks[k];
        if (t.text == "who") a.who = need_value(t, n);
        else if (t.text == "cs") a.cause_s = need_value(t, n);
        else if (t.text == "cn") a.cause_n = need_value(t, n);
        else if (t.text == "triv") a.trivial_partner = need_value(t, n);
        else if (t.text == "label") a.label = need_value(t, n);
        else if (t.text == "ts") a.raw.t_start = (need_value(t, n), parse_int(t, n));
        else if (t.text == "te") a.raw.t_end = (need_value(t, n), parse_int(t, n));
        else if (t.text == "vol" && !t.value) a.volition = true;
        else throw ParseError(n, t.column, "unknown key '" + t.text + "'");
      }
      if (a.who.empty()) throw ParseError(n, 1, "action '" + a.id + "' has no who=");
      log->put_action(std::move(a));
    } else {
      throw ParseError(n, toks[0].column, "unknown record type '" + tag + "'");
    }
  });
  if (!log) throw ParseError(1, 1, "missing #ELOG/#SLOG header");
  return std::move(*log);
}

std::string format_log(const ELog& log) {
  std::string out = "#" + std::string(to_string(log.kind())) + " " + log.id() + "\n";
  for (const auto& [id, p] : log.participants()) {
    if (is_sentinel(id)) continue;
    out += "P " + id;
    if (p.kind != ParticipantKind::plain) out += " kind=" + std::string(to_string(p.kind));
    if (!p.label.empty()) out += " label=" + quote(p.label);
    out += '\n';
  }
  for (const auto& [id, a] : log.actions()) {
    if (is_sentinel(id)) continue;
    out += "A " + id + " who=" + a.who + " cs=" + a.cause_s + " cn=" + a.cause_n;
    if (a.trivial_partner) out += " triv=" + *a.trivial_partner;
    if (a.volition) out += " vol";
    if (a.raw.t_start) out += " ts=" + std::to_string(*a.raw.t_start);
    if (a.raw.t_end) out += " te=" + std::to_string(*a.raw.t_end);
    if (!a.label.empty()) out += " label=" + quote(a.label);
    out += '\n';
  }
  return out;
}

std::string format_log_tsv(const ELog& log) {
  std::string out = "action\twho\tcause_s\tcause_n\n";
  for (const auto& [id, a] : log.actions())
    if (!is_sentinel(id)) out += id + "\t" + a.who + "\t" + a.cause_s + "\t" + a.cause_n + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Be-logs

BeLog parse_belog(std::string_view text) {
  BeLog b;
  for_each_line(text, [&](std::string_view line, std::size_t n) {
    if (is_blank(line) || line.front() == '#') return;
    auto toks = tokenize(line, n);
    if (toks[0].text != "B" || toks[0].value) throw ParseError(n, toks[0].column, "expected a B record");
    if (toks.size() < 4) throw ParseError(n, 1, "B needs a type, a source and a target");
    auto type = parse_be_verb(toks[1].text);
    if (!type || toks[1].value) throw ParseError(n, toks[1].column, "unknown be-verb '" + toks[1].text + "'");
    BeRelation r;
    r.type = *type;
    r.source = need_id(toks, 2, n, "source");
    r.target = need_id(toks, 3, n, "target");
    for (std::size_t k = 4; k < toks.size(); ++k) {
      const Token& t = toks[k];
      if (t.text == "w") r.weight = (need_value(t, n), parse_real(t, n));
      else if (t.text == "label") r.label = need_value(t, n);
      else throw ParseError(n, t.column, "unknown key '" + t.text + "'");
    }
    try {
      b.add(std::move(r));
    } catch (const Error& e) {
      throw ParseError(n, 1, e.what());
    }
  });
  return b;
}

std::string format_belog(const BeLog& belog) {
  std::string out;
  for (const auto& r : belog.relations()) {
    out += "B " + std::string(to_string(r.type)) + " " + r.source + " " + r.target;
    if (r.weight != 1.0) out += " w=" + real_text(r.weight);
    if (!r.label.empty()) out += " label=" + quote(r.label);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Functors

std::string format_functor(const Functor& f, const Score* score) {
  std::string out = "F " + f.src + " -> " + f.dst + "\n";
  for (const auto& [x, y] : f.action_map) out += "map A " + x + " -> " + y + "\n";
  for (const auto& [x, y] : f.participant_map) out += "map P " + x + " -> " + y + "\n";
  if (score) {
    out += "score total=" + fixed(score->total) + " structural=" + fixed(score->structural) +
           " temporal=" + fixed(score->temporal) + " similarity=" + fixed(score->similarity) +
           " complete=" + (score->report.complete() ? "1" : "0") + "\n";
  }
  return out;
}

Functor parse_functor(std::string_view text) {
  std::optional<Functor> f;
  for_each_line(text, [&](std::string_view line, std::size_t n) {
    if (is_blank(line) || line.front() == '#') return;
    auto toks = tokenize(line, n);
    const std::string& tag = toks[0].text;
    if (tag == "F") {
      if (f) throw ParseError(n, 1, "second functor header");
      if (toks.size() != 4 || toks[2].text != "->") throw ParseError(n, 1, "expected 'F <src> -> <dst>'");
      f.emplace();
      f->src = need_id(toks, 1, n, "source log");
      f->dst = need_id(toks, 3, n, "target log");
    } else if (tag == "map") {
      if (!f) throw ParseError(n, 1, "map before F header");
      if (toks.size() != 5 || toks[3].text != "->" || (toks[1].text != "A" && toks[1].text != "P"))
        throw ParseError(n, 1, "expected 'map A|P <x> -> <y>'");
      auto& m = toks[1].text == "A" ? f->action_map : f->participant_map;
      auto x = need_id(toks, 2, n, "object");
      if (!m.emplace(x, need_id(toks, 4, n, "image")).second)
        throw ParseError(n, toks[2].column, "'" + x + "' mapped twice");
    } else if (tag == "score") {
      if (!f) throw ParseError(n, 1, "score before F header");
    } else {
      throw ParseError(n, toks[0].column, "unknown record type '" + tag + "'");
    }
  });
  if (!f) throw ParseError(1, 1, "missing F header");
  return std::move(*f);
}

std::string format_candidates_tsv(const std::vector<Candidate>& candidates) {
  std::string out = "rank\tkind\tsource\ttarget\ttotal\tstructural\ttemporal\tsimilarity\tcomplete\n";
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    const std::string tail = "\t" + fixed(c.score.total) + "\t" + fixed(c.score.structural) + "\t" +
                             fixed(c.score.temporal) + "\t" + fixed(c.score.similarity) + "\t" +
                             (c.score.report.complete() ? "1" : "0") + "\n";
    const std::string rank = std::to_string(i + 1);
    for (const auto& [x, y] : c.functor.action_map) out += rank + "\tA\t" + x + "\t" + y + tail;
    for (const auto& [x, y] : c.functor.participant_map) out += rank + "\tP\t" + x + "\t" + y + tail;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Matrices and reports

std::string format_matrix(std::string_view name, const BoolMatrix& m) {
  std::string out = "M " + std::string(name) + " " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + "\n";
  for (const auto& row : m.to_strings()) out += row + "\n";
  return out;
}

std::string format_matrices(const CauseMatrices& m) {
  std::string out = "O actions";
  for (const auto& a : m.actions) out += " " + a;
  out += "\nO participants";
  for (const auto& p : m.participants) out += " " + p;
  out += "\n";
  out += format_matrix("S", m.S);
  out += format_matrix("N", m.N);
  out += format_matrix("S_tri", m.S_tri);
  out += format_matrix("N_tri", m.N_tri);
  out += format_matrix("E", m.E);
  return out;
}

std::string format_report(const ValidationReport& report) {
  if (report.ok()) return "ok\n";
  std::string out;
  for (const auto& v : report.violations)
    out += std::string(to_string(v.kind)) + " " + v.object + ": " + v.message + "\n";
  return out;
}

std::string format_report_tsv(const ValidationReport& report) {
  std::string out = "kind\tobject\tmessage\n";
  for (const auto& v : report.violations)
    out += std::string(to_string(v.kind)) + "\t" + v.object + "\t" + v.message + "\n";
  return out;
}

std::string format_completeness(const CompletenessReport& r) {
  auto flag = [](bool b) { return b ? "1" : "0"; };
  std::string out = std::string("check function=") + flag(r.is_function) + " zero_column=" +
                    flag(r.zero_column_rule_ok) + " surjective=" + flag(r.surjective) +
                    " injective=" + flag(r.injective) + " causal_S=" + flag(r.causal_eq_S_ok) +
                    " causal_N=" + flag(r.causal_eq_N_ok) + " who=" + flag(r.who_eq_ok) +
                    " trivial_preserved=" + flag(r.trivial_preserved) + "\n";
  return out;
}

std::string format_tree(const ComprehensionTree& tree) {
  std::string out;
  for (const auto& level : tree.levels)
    for (const auto& n : level)
      if (n.match) {
        out += "# functor " + n.id + "\n";
        out += format_functor(n.match->functor, &n.match->score);
      }
  out += "TREE\n";
  for (const auto& level : tree.levels)
    for (const auto& n : level)
      out += std::to_string(n.level) + " " + n.id + " " + n.parent.value_or("-") + " " + n.slog.value_or("-") + " " +
             (n.match ? n.id : std::string("-")) + "\n";
  return out;
}

std::string format_tree_tsv(const ComprehensionTree& tree) {
  std::string out = "level\tnode\tparent\tslog\tfunctor_ref\tactions\n";
  for (const auto& level : tree.levels)
    for (const auto& n : level) {
      std::string acts;
      for (const auto& a : n.actions) acts += (acts.empty() ? "" : ",") + a;
      out += std::to_string(n.level) + "\t" + n.id + "\t" + n.parent.value_or("-") + "\t" + n.slog.value_or("-") +
             "\t" + (n.match ? n.id : std::string("-")) + "\t" + acts + "\n";
    }
  return out;
}

}  // namespace cognilog
