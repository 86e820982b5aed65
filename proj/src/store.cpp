#include "cognilog/store.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "cognilog/error.hpp"
#include "cognilog/text_format.hpp"

namespace fs = std::filesystem;

namespace cognilog {

namespace {

constexpr const char* kBelogFile = "store.belog";
constexpr const char* kIndexFile = "index.tsv";

bool is_log_file(const fs::path& p) { return p.extension() == ".elog" || p.extension() == ".slog"; }

std::int64_t mtime_of(const fs::path& p) {
  std::error_code ec;
  auto t = fs::last_write_time(p, ec);
  if (ec) return 0;
  return std::chrono::duration_cast<std::chrono::seconds>(t.time_since_epoch()).count();
}

std::vector<fs::path> log_files(const fs::path& root) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_regular_file() && is_log_file(entry.path())) out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read '" + path.string() + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out.flush()) throw Error(ErrorCode::io, "write failed for '" + path.string() + "'");
}

ELog load_log(const fs::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_log(text);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), path.filename().string() + ": " + e.detail());
  }
}

void save_log(const ELog& log, const fs::path& path) { write_text_file(path, format_log(log)); }

BeLog load_belog(const fs::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_belog(text);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), path.filename().string() + ": " + e.detail());
  }
}

void save_belog(const BeLog& belog, const fs::path& path) { write_text_file(path, format_belog(belog)); }

Store load_store(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(ErrorCode::io, "store '" + root.string() + "' is not a directory");
  Store store;
  for (const auto& file : log_files(root)) {
    ELog log = load_log(file);
    const ObjectId id = log.id();
    if (!store.logs.emplace(id, std::move(log)).second)
      throw Error(ErrorCode::duplicate_id, "log id '" + id + "' appears in two files");
  }
  if (fs::exists(root / kBelogFile)) store.belog = load_belog(root / kBelogFile);
  return store;
}

void save_store(const Store& store, const fs::path& root) {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (!fs::is_directory(root)) throw Error(ErrorCode::io, "cannot create store '" + root.string() + "'");

  std::set<std::string> written;
  for (const auto& [id, log] : store.logs) {
    const std::string file = id + (log.is_scenario() ? ".slog" : ".elog");
    save_log(log, root / file);
    written.insert(file);
  }
  for (const auto& file : log_files(root))
    if (!written.count(file.filename().string())) fs::remove(file);
  save_belog(store.belog, root / kBelogFile);

  std::string index = "id\ttype\tfile\tmtime\n";
  for (const auto& [id, log] : store.logs) {
    const std::string file = id + (log.is_scenario() ? ".slog" : ".elog");
    index += id + "\t" + std::string(to_string(log.kind())) + "\t" + file + "\t" +
             std::to_string(mtime_of(root / file)) + "\n";
  }
  write_text_file(root / kIndexFile, index);
}

std::vector<IndexEntry> read_index(const fs::path& root) {
  std::istringstream in(read_text_file(root / kIndexFile));
  std::vector<IndexEntry> out;
  std::string line;
  std::getline(in, line);  // header
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    IndexEntry e;
    std::string mtime;
    if (!std::getline(row, e.id, '\t') || !std::getline(row, e.type, '\t') || !std::getline(row, e.file, '\t') ||
        !std::getline(row, mtime))
      throw ParseError(lineno, 1, "index row needs four fields");
    try {
      e.mtime = std::stoll(mtime);
    } catch (const std::exception&) {
      throw ParseError(lineno, 1, "bad mtime '" + mtime + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

bool index_consistent(const fs::path& root) {
  std::vector<IndexEntry> index;
  try {
    index = read_index(root);
  } catch (const Error&) {
    return false;
  }
  std::set<std::tuple<std::string, std::string, std::string>> listed, actual;
  for (const auto& e : index) listed.emplace(e.id, e.type, e.file);
  for (const auto& file : log_files(root)) {
    ELog log = load_log(file);
    actual.emplace(log.id(), std::string(to_string(log.kind())), file.filename().string());
  }
  return listed == actual && listed.size() == index.size();
}

}  // namespace cognilog
