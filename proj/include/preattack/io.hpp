#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "preattack/network.hpp"
#include "preattack/types.hpp"

namespace preattack {

// Line-oriented UTF-8 text, comma-separated fields, one header line:
//   labels:  "#preattack-labels v1 k=<k>"                "user_id,class_index"
//   edges:   "#preattack-edges v1"                       "src_id,dst_id"
//   stream:  "#preattack-stream v1 new_range=<lo>-<hi>"  "seq,direction(S|R),new_user,preexisting_user"
// Writers emit labels sorted by id and events in seq order, so
// ingest(write(x)) reproduces x exactly.

struct LabelFile {
  std::uint32_t k = 2;
  std::map<UserId, ClassIndex> labels;
};

struct StreamFile {
  IdRange new_range;
  std::vector<EdgeEvent> events;
};

LabelFile read_labels(const std::filesystem::path& path);
void write_labels(const LabelFile& labels, const std::filesystem::path& path);

void write_edges(std::span<const std::pair<UserId, UserId>> edges,
                 const std::filesystem::path& path);

// Labels plus edges in a single counting pass; every edge endpoint must be
// labeled. Malformed lines are reported with their line number.
LabeledNetwork ingest_network(const std::filesystem::path& labels_file,
                              const std::filesystem::path& edges_file);

// Validates seq strictly increasing, new_user inside the declared range and
// preexisting_user outside it (a new<->new edge is a model violation). When a
// network is supplied, preexisting endpoints must also exist in it.
StreamFile ingest_stream(const std::filesystem::path& path);
StreamFile ingest_stream(const std::filesystem::path& path,
                         const LabeledNetwork& network);

void write_stream(const StreamFile& stream, const std::filesystem::path& path);

// key=value configuration with a "#preattack-config v1" header; '#' opens a
// comment, blank lines are skipped. Command-line flags override via set().
class ConfigFile {
 public:
  ConfigFile() = default;
  static ConfigFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  std::string get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::uint64_t get_u64_or(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::uint64_t> get_u64s(const std::string& key) const;

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

  // Effective key=value lines, sorted, for provenance echoes.
  std::string echo() const;

 private:
  std::map<std::string, std::string> kv_;
};

// Shared float formatting for every CSV surface: shortest round-trippable
// form, identical across runs and thread counts.
std::string format_double(double v);

}  // namespace preattack
