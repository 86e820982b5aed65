#include "cognilog/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "cognilog/error.hpp"
#include "cognilog/functor.hpp"
#include "cognilog/matrix_engine.hpp"
#include "cognilog/reasoning.hpp"
#include "cognilog/store.hpp"
#include "cognilog/text_format.hpp"

namespace fs = std::filesystem;

namespace cognilog::cli {

namespace {

struct Options {
  std::vector<std::string> files;
  std::string belog;
  std::string out;
  std::string weights;
  std::string format = "text";
  std::string objects;
  std::string id;
  std::string goal;
  double min_compat = 0.0;
  std::size_t max_candidates = 10;
  std::size_t depth = 3;
  std::size_t beam = 0;
  bool partial = false;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<fs::path> store_root() {
  if (const char* env = std::getenv("COGNILOG_STORE"); env && *env) return fs::path(env);
  return std::nullopt;
}

/// A path as given, else a file (or log id) inside $COGNILOG_STORE.
fs::path resolve(const std::string& arg) {
  if (fs::exists(arg)) return arg;
  if (auto root = store_root()) {
    for (const std::string& candidate : {arg, arg + ".elog", arg + ".slog"})
      if (fs::exists(*root / candidate)) return *root / candidate;
  }
  throw Error(ErrorCode::io, "no such file or stored log: '" + arg + "'");
}

ELog load_valid(const std::string& arg) {
  ELog log = load_log(resolve(arg));
  require_valid(log);
  return log;
}

BeLog load_belog_for(const Options& o) {
  if (!o.belog.empty()) return load_belog(resolve(o.belog));
  if (auto root = store_root(); root && fs::exists(*root / "store.belog")) return load_belog(*root / "store.belog");
  if (!o.files.empty()) {
    std::error_code ec;
    fs::path dir = fs::path(o.files.front()).parent_path();
    fs::path p = (dir.empty() ? fs::path(".") : dir) / "store.belog";
    if (fs::exists(p, ec)) return load_belog(p);
  }
  return {};
}

SearchConfig config_for(const Options& o) {
  SearchConfig c;
  if (!o.weights.empty()) {
    std::vector<double> w;
    std::stringstream ss(o.weights);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        std::size_t used = 0;
        w.push_back(std::stod(part, &used));
        if (used != part.size()) throw std::invalid_argument(part);
      } catch (const std::exception&) {
        throw UsageError("--weights expects three numbers, got '" + o.weights + "'");
      }
    }
    if (w.size() != 3) throw UsageError("--weights expects three numbers, got '" + o.weights + "'");
    c.weights = {w[0], w[1], w[2]};
  }
  c.min_compatibility = o.min_compat;
  c.max_candidates = o.max_candidates;
  c.beam_width = o.beam;
  if (o.partial) c.require_surjective = c.require_injective = false;
  c.validate();
  return c;
}

bool tsv(const Options& o) { return o.format == "tsv"; }

void need_files(const Options& o, std::size_t min, std::size_t max, const char* what) {
  if (o.files.size() < min || o.files.size() > max) throw UsageError(std::string("expected ") + what);
}

// --- subcommands -----------------------------------------------------------

int cmd_validate(const Options& o, std::ostream& out) {
  need_files(o, 1, 1, "one log file");
  ELog log = load_log(resolve(o.files[0]));
  ValidationReport r = validate_category(log);
  out << (tsv(o) ? format_report_tsv(r) : format_report(r));
  return r.ok() ? ok : failure;
}

int cmd_match(const Options& o, std::ostream& out) {
  need_files(o, 2, 2, "an e-log and an s-log");
  ELog e = load_valid(o.files[0]);
  ELog s = load_valid(o.files[1]);
  auto cands = search_functors(e, s, load_belog_for(o), config_for(o));
  if (tsv(o)) {
    out << format_candidates_tsv(cands);
    return ok;
  }
  out << "# " << cands.size() << " candidate(s)\n";
  for (std::size_t i = 0; i < cands.size(); ++i) {
    out << "\n# rank " << i + 1 << "\n" << format_functor(cands[i].functor, &cands[i].score);
  }
  return ok;
}

int cmd_abstract(const Options& o, std::ostream& out) {
  need_files(o, 2, 2, "an e-log and an s-log");
  ELog e = load_valid(o.files[0]);
  ELog s = load_valid(o.files[1]);
  auto results = abstract_episode(e, s, load_belog_for(o), config_for(o));
  std::vector<Candidate> as_candidates;
  for (auto& r : results) as_candidates.push_back({r.functor, r.score});
  if (tsv(o)) {
    out << format_candidates_tsv(as_candidates);
    return ok;
  }
  out << "# " << results.size() << " abstraction(s)\n";
  for (std::size_t i = 0; i < as_candidates.size(); ++i)
    out << "\n# rank " << i + 1 << "\n" << format_functor(as_candidates[i].functor, &as_candidates[i].score);
  return ok;
}

int cmd_infer(const Options& o, std::ostream& out) {
  need_files(o, 2, 2, "an e-log and an s-log");
  ELog e = load_valid(o.files[0]);
  ELog s = load_valid(o.files[1]);
  InferenceResult r = infer_missing(e, s, load_belog_for(o), config_for(o));
  if (tsv(o)) {
    out << "action\twho\tcause_s\tcause_n\ttense\n";
    for (const auto& a : r.added) {
      const Action& x = *r.extended.find_action(a.id);
      out << x.id << '\t' << x.who << '\t' << x.cause_s << '\t' << x.cause_n << '\t' << to_string(a.tense) << '\n';
    }
  } else {
    out << format_functor(r.functor);
    out << "# " << r.added.size() << " added action(s)\n";
    for (const auto& a : r.added) {
      const Action& x = *r.extended.find_action(a.id);
      out << "added " << x.id << " who=" << x.who << " cs=" << x.cause_s << " cn=" << x.cause_n
          << " tense=" << to_string(a.tense) << " from=" << a.slog << ":" << a.s_action << '\n';
    }
  }
  if (!o.out.empty()) save_log(r.extended, o.out);
  return ok;
}

int cmd_gen_slog(const Options& o, std::ostream& out) {
  need_files(o, 1, 1, "one e-log");
  ELog e = load_valid(o.files[0]);
  std::set<ObjectId> subset;
  if (o.objects.empty()) {
    for (const auto& a : e.content_actions()) subset.insert(a);
    for (const auto& p : e.content_participants()) subset.insert(p);
  } else {
    std::stringstream ss(o.objects);
    std::string id;
    while (std::getline(ss, id, ','))
      if (!id.empty()) subset.insert(id);
  }
  ELog s = generate_slog(e, subset, load_belog_for(o), o.id.empty() ? std::nullopt : std::optional<ObjectId>(o.id));
  out << (tsv(o) ? format_log_tsv(s) : format_log(s));
  if (!o.out.empty()) save_log(s, o.out);
  return ok;
}

std::vector<ELog> load_library(const Options& o, std::size_t from) {
  std::vector<ELog> lib;
  for (std::size_t i = from; i < o.files.size(); ++i) lib.push_back(load_valid(o.files[i]));
  return lib;
}

int cmd_comprehend(const Options& o, std::ostream& out) {
  if (o.files.size() < 2) throw UsageError("expected a story e-log and at least one s-log");
  ELog story = load_valid(o.files[0]);
  auto tree = comprehend(story, load_library(o, 1), load_belog_for(o), config_for(o), o.depth);
  out << (tsv(o) ? format_tree_tsv(tree) : format_tree(tree));
  return ok;
}

int cmd_classify(const Options& o, std::ostream& out) {
  if (o.files.size() < 2) throw UsageError("expected a story e-log and at least one s-log");
  ELog story = load_valid(o.files[0]);
  BeLog b = load_belog_for(o);
  auto tree = comprehend(story, load_library(o, 1), b, config_for(o), o.depth);
  ClassScores cs = classify_story(tree, b);
  if (tsv(o)) {
    out << "class\tnum\tden\tscore\n";
    for (const auto& [cls, r] : cs.scores) out << cls << '\t' << r.num << '\t' << r.den << '\t' << r.value() << '\n';
    return ok;
  }
  out << "scenes";
  for (const auto& s : cs.scenes) out << ' ' << s;
  out << (cs.no_matched_scenes ? " (none matched)\n" : "\n");
  for (const auto& [cls, r] : cs.scores) out << "class " << cls << " score=" << r.num << '/' << r.den << '\n';
  return ok;
}

int cmd_plan(const Options& o, std::ostream& out) {
  if (o.goal.empty()) throw UsageError("plan needs --goal");
  if (o.files.size() < 2) throw UsageError("expected a world e-log and at least one s-log");
  ELog world = load_valid(o.files[0]);
  auto plans = plan(o.goal, load_library(o, 1), world, load_belog_for(o), config_for(o), o.depth);
  if (tsv(o)) {
    out << "plan\tchain\tclass\tparticipant\n";
    for (std::size_t i = 0; i < plans.size(); ++i)
      for (const auto& [cls, p] : plans[i].assignment)
        out << i + 1 << '\t' << plans[i].scenario.id() << '\t' << cls << '\t' << p << '\n';
    return ok;
  }
  for (std::size_t i = 0; i < plans.size(); ++i) {
    out << (i ? "\n" : "") << "# plan " << i + 1 << " chain " << plans[i].scenario.id() << '\n';
    for (const auto& [cls, p] : plans[i].assignment) out << "# assign " << cls << " -> " << p << '\n';
    out << format_log(plans[i].grounded);
  }
  return ok;
}

int cmd_dump(const Options& o, std::ostream& out) {
  need_files(o, 1, 1, "one log file");
  ELog log = load_valid(o.files[0]);
  out << format_matrices(adjacency(log));
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cognilog: episode logs, scenarios and functor reasoning", "cognilog"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, const char* files_help) {
    sub->add_option("files", o.files, files_help)->required();
    sub->add_option("--belog", o.belog, "be-log file (default: store.belog)");
    sub->add_option("--format", o.format, "text or tsv")->check(CLI::IsMember({"text", "tsv"}));
  };
  auto add_search = [&](CLI::App* sub) {
    sub->add_option("--weights", o.weights, "structural,temporal,similarity");
    sub->add_option("--min-compat", o.min_compat, "minimum mapping compatibility");
    sub->add_option("--max-candidates", o.max_candidates, "0 keeps all");
    sub->add_option("--beam", o.beam, "beam width, 0 = exhaustive");
  };

  struct Entry {
    CLI::App* app;
    int (*fn)(const Options&, std::ostream&);
  };
  std::vector<Entry> cmds;
  auto add = [&](const char* name, const char* help, const char* files_help, int (*fn)(const Options&, std::ostream&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, files_help);
    cmds.push_back({sub, fn});
    return sub;
  };

  add("validate", "check the category laws of a log", "log file", cmd_validate);
  auto* match = add("match", "rank functors from an e-log to an s-log", "e-log s-log", cmd_match);
  add_search(match);
  match->add_flag("--partial", o.partial, "drop surjectivity and totality");
  auto* infer = add("infer", "complete an e-log from an s-log", "e-log s-log", cmd_infer);
  add_search(infer);
  infer->add_option("--out", o.out, "write the extended e-log here");
  add_search(add("abstract", "full surjective abstractions", "e-log s-log", cmd_abstract));
  auto* gen = add("gen-slog", "generalise a sub-episode into an s-log", "e-log", cmd_gen_slog);
  gen->add_option("--objects", o.objects, "comma-separated ids (default: all)");
  gen->add_option("--id", o.id, "id of the new s-log");
  gen->add_option("--out", o.out, "write the s-log here");
  auto* comp = add("comprehend", "build a comprehension tree", "story s-log...", cmd_comprehend);
  add_search(comp);
  comp->add_flag("--partial", o.partial, "drop surjectivity and totality");
  comp->add_option("--depth", o.depth, "maximum number of levels");
  auto* cls = add("classify", "score story classes from matched scenes", "story s-log...", cmd_classify);
  add_search(cls);
  cls->add_flag("--partial", o.partial, "drop surjectivity and totality");
  cls->add_option("--depth", o.depth, "maximum number of levels");
  auto* pl = add("plan", "assemble and ground scenarios reaching a goal", "world s-log...", cmd_plan);
  add_search(pl);
  pl->add_option("--goal", o.goal, "goal action or action class")->required();
  pl->add_option("--depth", o.depth, "maximum scenarios per chain");
  add("dump-matrices", "print the cause and who matrices", "log file", cmd_dump);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return usage;
  }

  try {
    for (const auto& c : cmds)
      if (c.app->parsed()) return c.fn(o, out);
    return usage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return usage;
  } catch (const ParseError& e) {
    err << "parse error at line " << e.line() << ", column " << e.column() << ": " << e.detail() << '\n';
    return failure;
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == ErrorCode::io || e.code() == ErrorCode::invalid_config ? usage : failure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return internal;
  }
}

}  // namespace cognilog::cli
