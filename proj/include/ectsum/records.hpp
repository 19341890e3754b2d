#pragma once

// Line-delimited JSON stage files. Every file written by a pipeline stage
// starts with one header record:
//   {"format": "<kind>", "version": <n>, "config_hash": "<16 hex>", "config": {...}}
// followed by one record per line. Raw ingest inputs carry no header.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ectsum/error.hpp"
#include "json.hpp"

namespace ectsum {

using Json = nlohmann::ordered_json;

inline constexpr int kStageFormatVersion = 1;

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = kDigits[v & 0xF];
    v >>= 4;
  }
  return s;
}

inline std::string config_hash(const Json& config) { return hex64(fnv1a64(config.dump())); }

struct StageHeader {
  std::string format;
  int version = kStageFormatVersion;
  std::string config_hash;
  Json config = Json::object();

  Json to_json() const {
    Json j;
    j["format"] = format;
    j["version"] = version;
    j["config_hash"] = config_hash;
    j["config"] = config;
    return j;
  }
};

inline StageHeader make_header(std::string format, const Json& config) {
  return StageHeader{std::move(format), kStageFormatVersion, config_hash(config), config};
}

class RecordWriter {
 public:
  explicit RecordWriter(const std::filesystem::path& path) : path_(path) {
    if (path.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(path.parent_path(), ec);
    }
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot open for writing: " + path.string());
  }

  RecordWriter(const std::filesystem::path& path, const StageHeader& header)
      : RecordWriter(path) {
    write(header.to_json());
  }

  void write(const Json& record) {
    out_ << record.dump() << '\n';
    if (!out_) throw IoError("write failed: " + path_.string());
  }

  void close() {
    out_.close();
    if (!out_) throw IoError("close failed: " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

// Every non-blank line parsed as JSON.
inline std::vector<Json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("cannot open: " + path.string());
  std::vector<Json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

struct StageFile {
  StageHeader header;
  std::vector<Json> records;
};

// Reads a stage file and checks its header format tag.
inline StageFile read_stage_file(const std::filesystem::path& path,
                                 std::string_view expected_format) {
  auto lines = read_jsonl(path);
  if (lines.empty() || !lines.front().is_object() || !lines.front().contains("format"))
    throw FormatError(path.string() + ": missing stage header");
  const Json& h = lines.front();
  StageFile f;
  f.header.format = h.value("format", "");
  f.header.version = h.value("version", 0);
  f.header.config_hash = h.value("config_hash", "");
  f.header.config = h.value("config", Json::object());
  if (f.header.format != expected_format)
    throw FormatError(path.string() + ": expected format '" + std::string(expected_format) +
                      "', found '" + f.header.format + "'");
  if (f.header.version != kStageFormatVersion)
    throw FormatError(path.string() + ": unsupported format version " +
                      std::to_string(f.header.version));
  f.records.assign(std::make_move_iterator(lines.begin() + 1),
                   std::make_move_iterator(lines.end()));
  return f;
}

// Typed field access with a FormatError naming the missing field.
template <typename T>
T require(const Json& record, const char* field) {
  auto it = record.find(field);
  if (it == record.end()) throw FormatError(std::string("missing field '") + field + "'");
  try {
    return it->template get<T>();
  } catch (const Json::exception& e) {
    throw FormatError(std::string("bad field '") + field + "': " + e.what());
  }
}

}  // namespace ectsum
