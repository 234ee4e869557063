#include "preattack/io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace preattack {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

[[noreturn]] void bad_line(const std::filesystem::path& path, std::size_t lineno,
                           const std::string& why) {
  throw DomainError(path.string() + ":" + std::to_string(lineno) +
                    ": malformed line: " + why);
}

std::uint64_t parse_u64(std::string_view field, const std::filesystem::path& path,
                        std::size_t lineno) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    bad_line(path, lineno, "expected unsigned integer, got '" + std::string(field) + "'");
  }
  return value;
}

// Splits line into exactly n comma-separated fields.
std::vector<std::string_view> split_fields(std::string_view line, std::size_t n,
                                           const std::filesystem::path& path,
                                           std::size_t lineno) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  if (fields.size() != n) {
    bad_line(path, lineno, "expected " + std::to_string(n) + " fields, got " +
                               std::to_string(fields.size()));
  }
  return fields;
}

std::string read_header(std::ifstream& in, const std::filesystem::path& path,
                        const std::string& expected_prefix) {
  std::string header;
  if (!std::getline(in, header)) {
    throw DomainError(path.string() + ": empty file, expected header '" +
                      expected_prefix + " ...'");
  }
  strip_cr(header);
  if (header.rfind(expected_prefix, 0) != 0) {
    throw DomainError(path.string() + ": bad header '" + header + "', expected '" +
                      expected_prefix + " ...'");
  }
  return header;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

LabelFile read_labels(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string header = read_header(in, path, "#preattack-labels v1");
  LabelFile out;
  auto kpos = header.find("k=");
  if (kpos == std::string::npos) {
    throw DomainError(path.string() + ": labels header missing k=<k>");
  }
  out.k = static_cast<std::uint32_t>(parse_u64(
      std::string_view(header).substr(kpos + 2), path, 1));
  if (out.k < 2) throw DomainError(path.string() + ": labels header needs k >= 2");

  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_fields(line, 2, path, lineno);
    UserId id = parse_u64(fields[0], path, lineno);
    auto cls = static_cast<ClassIndex>(parse_u64(fields[1], path, lineno));
    if (cls >= out.k) {
      bad_line(path, lineno, "class index " + std::to_string(cls) +
                                 " out of range for k=" + std::to_string(out.k));
    }
    auto [it, fresh] = out.labels.emplace(id, cls);
    (void)it;
    if (!fresh) {
      throw DomainError(path.string() + ":" + std::to_string(lineno) +
                        ": duplicate label for user " + std::to_string(id));
    }
  }
  return out;
}

void write_labels(const LabelFile& labels, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "#preattack-labels v1 k=" << labels.k << "\n";
  for (const auto& [id, cls] : labels.labels) {
    out << id << ',' << cls << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_edges(std::span<const std::pair<UserId, UserId>> edges,
                 const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "#preattack-edges v1\n";
  for (const auto& [src, dst] : edges) {
    out << src << ',' << dst << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

LabeledNetwork ingest_network(const std::filesystem::path& labels_file,
                              const std::filesystem::path& edges_file) {
  LabelFile labels = read_labels(labels_file);
  LabeledNetwork net(labels.k);
  for (const auto& [id, cls] : labels.labels) {
    net.add_user(id, cls);
  }

  auto in = open_in(edges_file);
  read_header(in, edges_file, "#preattack-edges v1");
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_fields(line, 2, edges_file, lineno);
    UserId src = parse_u64(fields[0], edges_file, lineno);
    UserId dst = parse_u64(fields[1], edges_file, lineno);
    try {
      net.add_edge(src, dst);
    } catch (const DomainError& e) {
      throw DomainError(edges_file.string() + ":" + std::to_string(lineno) + ": " +
                        e.what());
    }
  }
  return net;
}

namespace {

StreamFile ingest_stream_impl(const std::filesystem::path& path,
                              const LabeledNetwork* net) {
  auto in = open_in(path);
  std::string header = read_header(in, path, "#preattack-stream v1");
  StreamFile out;
  auto rpos = header.find("new_range=");
  auto dash = header.find('-', rpos == std::string::npos ? 0 : rpos);
  if (rpos == std::string::npos || dash == std::string::npos) {
    throw DomainError(path.string() + ": stream header missing new_range=<lo>-<hi>");
  }
  out.new_range.lo =
      parse_u64(std::string_view(header).substr(rpos + 10, dash - (rpos + 10)), path, 1);
  out.new_range.hi = parse_u64(std::string_view(header).substr(dash + 1), path, 1);
  if (out.new_range.hi < out.new_range.lo) {
    throw DomainError(path.string() + ": new_range upper bound below lower bound");
  }

  std::string line;
  std::size_t lineno = 1;
  std::uint64_t last_seq = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_fields(line, 4, path, lineno);
    EdgeEvent ev;
    ev.seq = parse_u64(fields[0], path, lineno);
    if (fields[1] == "S") {
      ev.direction = Direction::Send;
    } else if (fields[1] == "R") {
      ev.direction = Direction::Receive;
    } else {
      bad_line(path, lineno, "direction must be S or R, got '" + std::string(fields[1]) + "'");
    }
    ev.new_user = parse_u64(fields[2], path, lineno);
    ev.preexisting_user = parse_u64(fields[3], path, lineno);

    if (!first && ev.seq <= last_seq) {
      throw DomainError(path.string() + ":" + std::to_string(lineno) +
                        ": out-of-order seq " + std::to_string(ev.seq) +
                        " after " + std::to_string(last_seq));
    }
    first = false;
    last_seq = ev.seq;
    if (!out.new_range.contains(ev.new_user)) {
      throw DomainError(path.string() + ":" + std::to_string(lineno) + ": new user " +
                        std::to_string(ev.new_user) + " outside declared new_range");
    }
    if (out.new_range.contains(ev.preexisting_user)) {
      throw DomainError(path.string() + ":" + std::to_string(lineno) +
                        ": edge between two new users (" + std::to_string(ev.new_user) +
                        ", " + std::to_string(ev.preexisting_user) +
                        "); the model generates none");
    }
    if (net != nullptr && !net->has_user(ev.preexisting_user)) {
      throw DomainError(path.string() + ":" + std::to_string(lineno) +
                        ": unknown preexisting user " +
                        std::to_string(ev.preexisting_user));
    }
    out.events.push_back(ev);
  }
  return out;
}

}  // namespace

StreamFile ingest_stream(const std::filesystem::path& path) {
  return ingest_stream_impl(path, nullptr);
}

StreamFile ingest_stream(const std::filesystem::path& path,
                         const LabeledNetwork& network) {
  return ingest_stream_impl(path, &network);
}

void write_stream(const StreamFile& stream, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "#preattack-stream v1 new_range=" << stream.new_range.lo << '-'
      << stream.new_range.hi << "\n";
  for (const EdgeEvent& ev : stream.events) {
    out << ev.seq << ',' << (ev.direction == Direction::Send ? 'S' : 'R') << ','
        << ev.new_user << ',' << ev.preexisting_user << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string header = read_header(in, path, "#preattack-config v1");
  ConfigFile cfg;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      bad_line(path, lineno, "expected key=value");
    }
    cfg.kv_[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return cfg;
}

std::string ConfigFile::get(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw DomainError("config key missing: " + key);
  return it->second;
}

std::string ConfigFile::get_or(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double ConfigFile::get_double(const std::string& key) const {
  const std::string raw = get(key);
  try {
    std::size_t used = 0;
    double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw DomainError("config key " + key + ": expected number, got '" + raw + "'");
  }
}

double ConfigFile::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::uint64_t ConfigFile::get_u64(const std::string& key) const {
  const std::string raw = get(key);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc() || ptr != raw.data() + raw.size()) {
    throw DomainError("config key " + key + ": expected unsigned integer, got '" +
                      raw + "'");
  }
  return v;
}

std::uint64_t ConfigFile::get_u64_or(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? get_u64(key) : fallback;
}

std::vector<double> ConfigFile::get_doubles(const std::string& key) const {
  const std::string raw = get(key);
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("config key " + key + ": expected comma-separated numbers");
    }
  }
  if (out.empty()) throw DomainError("config key " + key + ": empty list");
  return out;
}

std::vector<std::uint64_t> ConfigFile::get_u64s(const std::string& key) const {
  const std::string raw = get(key);
  std::vector<std::uint64_t> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw DomainError("config key " + key + ": expected comma-separated integers");
    }
    out.push_back(v);
  }
  if (out.empty()) throw DomainError("config key " + key + ": empty list");
  return out;
}

std::string ConfigFile::echo() const {
  std::string out;
  for (const auto& [key, value] : kv_) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

}  // namespace preattack
