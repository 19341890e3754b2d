#pragma once

// Checkpoint layout (little-endian):
//   "ECTXCKPT" u32 version
//   u64 D, Hd, P, max_pos
//   u32 tensor count, then per tensor: u32 name length, name, u64 rows,
//   u64 cols, rows*cols float64 values (row-major)

#include <filesystem>
#include <string>

#include "ectsum/binary_io.hpp"
#include "ectsum/extractor/params.hpp"
#include "ectsum/records.hpp"

namespace ectsum {

inline constexpr std::string_view kCheckpointMagic = "ECTXCKPT";
inline constexpr std::uint32_t kCheckpointVersion = 1;

inline std::string serialize_params(const ExtractorParams& p) {
  ByteWriter w;
  w.raw(kCheckpointMagic);
  w.u32(kCheckpointVersion);
  w.u64(p.dims.input);
  w.u64(p.dims.hidden);
  w.u64(p.dims.position);
  w.u64(p.dims.max_pos);
  w.u32(static_cast<std::uint32_t>(p.tensors.size()));
  for (const auto& t : p.tensors) {
    w.str(t.name);
    w.u64(t.rows);
    w.u64(t.cols);
    for (double v : t.data) w.f64(v);
  }
  return w.bytes();
}

inline ExtractorParams deserialize_params(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.raw(kCheckpointMagic.size()) != kCheckpointMagic) throw FormatError("not an extractor checkpoint");
  if (auto v = r.u32(); v != kCheckpointVersion)
    throw FormatError("unsupported checkpoint version " + std::to_string(v));
  ExtractorDims d;
  d.input = r.u64();
  d.hidden = r.u64();
  d.position = r.u64();
  d.max_pos = r.u64();
  if (d.input > (1u << 24) || d.hidden > (1u << 16) || d.position > (1u << 16) || d.max_pos > (1u << 20))
    throw FormatError("checkpoint dimensions out of range");
  ExtractorParams p = zero_params(d);
  if (r.u32() != p.tensors.size()) throw FormatError("checkpoint tensor count mismatch");
  for (auto& t : p.tensors) {
    auto name = r.str();
    auto rows = r.u64();
    auto cols = r.u64();
    if (name != t.name || rows != t.rows || cols != t.cols)
      throw FormatError("checkpoint tensor '" + name + "' does not match layout of '" + t.name + "'");
    for (auto& v : t.data) v = r.f64();
  }
  if (!r.done()) throw FormatError("trailing bytes in checkpoint");
  if (!p.all_finite()) throw FormatError("checkpoint contains non-finite weights");
  return p;
}

inline void save_checkpoint(const std::filesystem::path& path, const ExtractorParams& p) {
  write_file(path, serialize_params(p));
}

inline ExtractorParams load_checkpoint(const std::filesystem::path& path) {
  return deserialize_params(read_file(path));
}

}  // namespace ectsum
