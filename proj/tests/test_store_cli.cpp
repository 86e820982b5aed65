#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "cognilog/cli.hpp"
#include "cognilog/error.hpp"
#include "cognilog/store.hpp"
#include "cognilog/text_format.hpp"
#include "random_logs.hpp"

using namespace cognilog;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = COGNILOG_FIXTURE_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string path(const std::string& rel) { return (kDir / rel).string(); }

/// Fresh scratch directory under the system temp dir.
fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("cognilog_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("every fixture round-trips byte for byte") {
  int files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(kDir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    const std::string text = read_text_file(entry.path());
    CAPTURE(entry.path().string());
    if (ext == ".elog" || ext == ".slog") {
      CHECK(format_log(parse_log(text)) == text);
      ++files;
    } else if (ext == ".belog") {
      CHECK(format_belog(parse_belog(text)) == text);
      ++files;
    } else if (ext == ".functor") {
      CHECK(format_functor(parse_functor(text)) == text);
      ++files;
    }
  }
  CHECK(files >= 15);
}

TEST_CASE("random logs round-trip") {
  std::mt19937 rng(8);
  for (int i = 0; i < 100; ++i) {
    ELog log = testing::random_log(rng, {6, 3, i % 2 == 1, i % 3 != 0, 30, "a"}, "rt" + std::to_string(i));
    ELog back = parse_log(format_log(log));
    CHECK(same_content(back, log));
    CHECK(format_log(back) == format_log(log));
  }
}

TEST_CASE("labels with quotes and backslashes survive") {
  ELog log = parse_log("#ELOG q\nP p label=\"say \\\"hi\\\" \\\\ bye\"\nA a who=p\n");
  CHECK(log.find_participant("p")->label == "say \"hi\" \\ bye");
  CHECK(same_content(parse_log(format_log(log)), log));
}

TEST_CASE("parse errors point at the offending line") {
  try {
    parse_log("#ELOG bad\nP p\nA a who=p colour=red\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 1);
  }
  CHECK_THROWS_AS(parse_log("#ELOG bad\nP p\nA a\n"), ParseError);
  CHECK_THROWS_AS(parse_log("#ELOG bad\nP p\nP p\n"), ParseError);
  CHECK_THROWS_AS(parse_log("P p\n"), ParseError);
  CHECK_THROWS_AS(parse_belog("B Be9 x y\n"), ParseError);

  fs::path dir = scratch("parse");
  write_text_file(dir / "broken.elog", "#ELOG broken\nP p\nA a who=p ts=soon\n");
  try {
    load_log(dir / "broken.elog");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("broken.elog") != std::string::npos);
  }
}

TEST_CASE("store save and load") {
  fs::path dir = scratch("store");
  Store st;
  for (const char* f : {"robot.elog", "worker.slog", "bob_alice.elog"}) {
    ELog l = load_log(kDir / f);
    st.logs.emplace(l.id(), l);
  }
  st.belog = load_belog(kDir / "store.belog");
  save_store(st, dir);
  CHECK(fs::exists(dir / "robot.elog"));
  CHECK(fs::exists(dir / "worker.slog"));
  CHECK(fs::exists(dir / "store.belog"));
  CHECK(index_consistent(dir));

  Store back = load_store(dir);
  REQUIRE(back.logs.size() == 3);
  for (const auto& [id, l] : st.logs) CHECK(same_content(back.logs.at(id), l));
  CHECK(format_belog(back.belog) == format_belog(st.belog));

  auto index = read_index(dir);
  REQUIRE(index.size() == 3);
  CHECK(index[0].id == "bob_alice");
  CHECK(index[2].type == "SLOG");

  // Dropping a log removes its file on the next save.
  st.logs.erase("bob_alice");
  save_store(st, dir);
  CHECK_FALSE(fs::exists(dir / "bob_alice.elog"));
  CHECK(index_consistent(dir));

  // A stray file makes the index stale.
  write_text_file(dir / "extra.elog", "#ELOG extra\n");
  CHECK_FALSE(index_consistent(dir));
}

TEST_CASE("empty and conflicting stores") {
  fs::path dir = scratch("empty");
  Store empty = load_store(dir);
  CHECK(empty.logs.empty());
  CHECK(empty.belog.empty());
  save_store(empty, dir);
  CHECK(index_consistent(dir));
  CHECK(read_index(dir).empty());

  write_text_file(dir / "one.elog", "#ELOG same\n");
  write_text_file(dir / "two.elog", "#ELOG same\n");
  try {
    load_store(dir);
    FAIL("expected duplicate_id");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::duplicate_id);
  }
  try {
    load_store(dir / "missing");
    FAIL("expected io");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
}

TEST_CASE("cli validate and exit codes") {
  auto good = cli_run({"validate", path("robot.elog")});
  CHECK(good.code == 0);
  CHECK(good.out == "ok\n");

  fs::path dir = scratch("cli_validate");
  write_text_file(dir / "loop.elog", "#ELOG loop\nP p\nA a who=p cs=b\nA b who=p cs=a\n");
  auto bad = cli_run({"validate", (dir / "loop.elog").string()});
  CHECK(bad.code == 1);
  CHECK_FALSE(bad.out.empty());

  write_text_file(dir / "junk.elog", "#ELOG junk\nQ what\n");
  CHECK(cli_run({"validate", (dir / "junk.elog").string()}).code == 1);
  CHECK(cli_run({"validate", (dir / "nope.elog").string()}).code == 2);
  CHECK(cli_run({"frobnicate"}).code == 2);
  CHECK(cli_run({}).code == 2);
  CHECK(cli_run({"--help"}).code == 0);
  CHECK(cli_run({"match", path("robot.elog"), path("worker.slog"), "--weights", "0.5,0.5,0.5"}).code == 2);
  CHECK(cli_run({"plan", path("world.elog"), path("worker.slog")}).code == 2);

  auto tsv = cli_run({"validate", path("robot.elog"), "--format", "tsv"});
  CHECK(tsv.code == 0);
}

TEST_CASE("cli match lists ranked candidates") {
  std::vector<std::string> args{"match",   path("robot.elog"), path("worker.slog"), "--belog",
                                path("store.belog"), "--partial"};
  auto r = cli_run(args);
  REQUIRE(r.code == 0);
  CHECK(count(r.out, "# rank ") >= 2);
  CHECK(count(r.out, "F robot -> worker") >= 2);
  CHECK(r.out.find("score total=") != std::string::npos);
  CHECK(cli_run(args).out == r.out);

  args.push_back("--format");
  args.push_back("tsv");
  auto t = cli_run(args);
  CHECK(t.code == 0);
  CHECK(t.out.rfind("rank\t", 0) == 0);

  // Store lookup by id.
  fs::path dir = scratch("cli_store");
  Store st;
  for (const char* f : {"robot.elog", "worker.slog"}) {
    ELog l = load_log(kDir / f);
    st.logs.emplace(l.id(), l);
  }
  st.belog = load_belog(kDir / "store.belog");
  save_store(st, dir);
  setenv("COGNILOG_STORE", dir.c_str(), 1);
  auto by_id = cli_run({"match", "robot", "worker", "--partial"});
  unsetenv("COGNILOG_STORE");
  CHECK(by_id.code == 0);
  CHECK(by_id.out == r.out);
}

TEST_CASE("cli infer writes the extended e-log") {
  fs::path dir = scratch("cli_infer");
  const std::string out = (dir / "bond_plus.elog").string();
  auto r = cli_run({"infer", path("explosion/bond.elog"), path("explosion/blast.slog"), "--belog",
                    path("explosion/store.belog"), "--out", out});
  REQUIRE(r.code == 0);
  CHECK(count(r.out, "\nadded ") + (r.out.rfind("added ", 0) == 0) == 2);
  CHECK(r.out.find("tense=future") != std::string::npos);
  ELog ext = load_log(out);
  CHECK(validate_category(ext).ok());
  CHECK(ext.content_actions().size() == 7);

  auto again = cli_run({"infer", out, path("explosion/blast.slog"), "--belog", path("explosion/store.belog")});
  CHECK(again.code == 0);
  CHECK(again.out.find("# 0 added action(s)") != std::string::npos);
}

TEST_CASE("cli reasoning commands") {
  auto gen = cli_run({"gen-slog", path("robot.elog"), "--belog", path("store.belog"), "--id", "carry"});
  CHECK(gen.code == 0);
  CHECK(gen.out.rfind("#SLOG carry\n", 0) == 0);
  auto gap = cli_run({"gen-slog", path("robot.elog"), "--objects", "carried0,carried_load"});
  CHECK(gap.code == 1);

  auto ab = cli_run({"abstract", path("robot.elog"), path("worker.slog"), "--belog", path("store.belog")});
  CHECK(ab.code == 0);

  auto comp = cli_run({"comprehend", path("story/story.elog"), path("worker.slog"), path("explosion/blast.slog"),
                       "--belog", path("story/store.belog"), "--partial"});
  CHECK(comp.code == 0);
  CHECK(comp.out.find("TREE") != std::string::npos);

  auto cls = cli_run({"classify", path("story/story.elog"), path("worker.slog"), path("explosion/blast.slog"),
                      "--belog", path("story/store.belog"), "--partial"});
  CHECK(cls.code == 0);
  CHECK(cls.out.find("adventure") != std::string::npos);

  auto pl = cli_run({"plan", path("world.elog"), path("worker.slog"), "--goal", "is_carried", "--belog",
                     path("store.belog")});
  CHECK(pl.code == 0);
  CHECK(count(pl.out, "# plan ") == 3);
  CHECK(cli_run({"plan", path("world.elog"), path("worker.slog"), "--goal", "flies", "--belog",
                 path("store.belog")}).code == 1);

  auto dump = cli_run({"dump-matrices", path("bob_alice.elog")});
  CHECK(dump.code == 0);
  CHECK(dump.out.find("M S 2x2") != std::string::npos);
}
