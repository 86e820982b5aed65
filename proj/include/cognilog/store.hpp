#pragma once

// On-disk store: a directory of `<id>.elog` / `<id>.slog` files, one
// `store.belog` and an `index.tsv` listing id, type, file and mtime.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cognilog/belog.hpp"
#include "cognilog/model.hpp"

namespace cognilog {

struct Store {
  std::map<ObjectId, ELog> logs;
  BeLog belog;
};

struct IndexEntry {
  ObjectId id;
  std::string type;  // ELOG | SLOG
  std::string file;
  std::int64_t mtime = 0;

  bool operator==(const IndexEntry&) const = default;
};

/// Throws Error(io) on unreadable / unwritable paths.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Parse errors keep their line and column; the message names the file.
ELog load_log(const std::filesystem::path& path);
void save_log(const ELog& log, const std::filesystem::path& path);
BeLog load_belog(const std::filesystem::path& path);
void save_belog(const BeLog& belog, const std::filesystem::path& path);

/// Missing store.belog means an empty be-log. A log whose header id differs
/// from another file's id is a duplicate_id error.
Store load_store(const std::filesystem::path& root);
/// Writes every log, the be-log and a fresh index; removes log files that
/// are no longer in the store.
void save_store(const Store& store, const std::filesystem::path& root);

std::vector<IndexEntry> read_index(const std::filesystem::path& root);
/// Index ids, types and files agree with the log files on disk (mtimes are
/// informational).
bool index_consistent(const std::filesystem::path& root);

}  // namespace cognilog
