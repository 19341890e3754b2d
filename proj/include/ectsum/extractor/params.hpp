#pragma once

// Extractor weights as an ordered list of named row-major tensors. Gradients
// and optimizer moments reuse the same layout.

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ectsum/error.hpp"
#include "ectsum/rng.hpp"

namespace ectsum {

struct ExtractorDims {
  std::size_t input = 0;     // D, from the embedding provider
  std::size_t hidden = 64;   // Hd
  std::size_t position = 16; // P
  std::size_t max_pos = 100;
  friend bool operator==(const ExtractorDims&, const ExtractorDims&) = default;
};

inline constexpr std::size_t kRelativeBins = 10;

// Tensor slots. The GRU block repeats for the forward and backward cells.
enum GruSlot : std::size_t { kWz, kUz, kBz, kWr, kUr, kBr, kWn, kUn, kBn, kGruSlots };

enum TensorId : std::size_t {
  kFwd = 0,                  // forward cell, kGruSlots tensors
  kBwd = kGruSlots,          // backward cell
  kWh = 2 * kGruSlots,       // Hd x 2Hd
  kBh,                       // Hd
  kWd,                       // Hd x 2Hd
  kBd,                       // Hd
  kWc,                       // Hd, content
  kWs,                       // Hd x Hd, salience
  kWnov,                     // Hd x Hd, novelty
  kPabs,                     // max_pos x P
  kWap,                      // P
  kPrel,                     // 10 x P
  kWrp,                      // P
  kWnum,                     // 1
  kBcls,                     // 1
  kTensorCount
};

struct Tensor {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
  double* row(std::size_t r) { return data.data() + r * cols; }
};

struct ExtractorParams {
  ExtractorDims dims;
  std::vector<Tensor> tensors;

  Tensor& operator[](std::size_t id) { return tensors[id]; }
  const Tensor& operator[](std::size_t id) const { return tensors[id]; }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& t : tensors) n += t.data.size();
    return n;
  }

  bool all_finite() const {
    for (const auto& t : tensors)
      for (double v : t.data)
        if (!std::isfinite(v)) return false;
    return true;
  }

  friend bool operator==(const ExtractorParams& a, const ExtractorParams& b) {
    if (!(a.dims == b.dims) || a.tensors.size() != b.tensors.size()) return false;
    for (std::size_t i = 0; i < a.tensors.size(); ++i) {
      const auto& x = a.tensors[i];
      const auto& y = b.tensors[i];
      if (x.name != y.name || x.rows != y.rows || x.cols != y.cols || x.data != y.data)
        return false;
    }
    return true;
  }
};

inline bool is_bias(std::size_t id) {
  if (id < 2 * kGruSlots) {
    auto s = id % kGruSlots;
    return s == kBz || s == kBr || s == kBn;
  }
  return id == kBh || id == kBd || id == kBcls;
}

// All-zero tensors with the layout implied by dims.
inline ExtractorParams zero_params(const ExtractorDims& d) {
  if (d.input == 0 || d.hidden == 0 || d.position == 0 || d.max_pos == 0)
    throw ConfigError("extractor dimensions must be positive");
  ExtractorParams p;
  p.dims = d;
  p.tensors.resize(kTensorCount);
  auto set = [&](std::size_t id, std::string name, std::size_t r, std::size_t c) {
    p.tensors[id] = Tensor{std::move(name), r, c, std::vector<double>(r * c, 0.0)};
  };
  const std::size_t H = d.hidden, D = d.input, P = d.position;
  static constexpr std::array<std::string_view, kGruSlots> kGruNames = {
      "W_z", "U_z", "b_z", "W_r", "U_r", "b_r", "W_n", "U_n", "b_n"};
  for (int dir = 0; dir < 2; ++dir) {
    std::string prefix = dir == 0 ? "gru_fwd." : "gru_bwd.";
    std::size_t base = dir == 0 ? kFwd : kBwd;
    for (std::size_t s = 0; s < kGruSlots; ++s) {
      std::size_t cols = (s == kWz || s == kWr || s == kWn) ? D : (s == kBz || s == kBr || s == kBn) ? 1 : H;
      set(base + s, prefix + std::string(kGruNames[s]), H, cols);
    }
  }
  set(kWh, "W_h", H, 2 * H);
  set(kBh, "b_h", H, 1);
  set(kWd, "W_d", H, 2 * H);
  set(kBd, "b_d", H, 1);
  set(kWc, "w_c", H, 1);
  set(kWs, "W_s", H, H);
  set(kWnov, "W_nov", H, H);
  set(kPabs, "P_abs", d.max_pos, P);
  set(kWap, "w_ap", P, 1);
  set(kPrel, "P_rel", kRelativeBins, P);
  set(kWrp, "w_rp", P, 1);
  set(kWnum, "w_num", 1, 1);
  set(kBcls, "b_cls", 1, 1);
  return p;
}

// Weights uniform in [-scale, scale], biases zero.
inline ExtractorParams init_params(const ExtractorDims& d, std::uint64_t seed, double scale = 0.1) {
  auto p = zero_params(d);
  Rng rng(seed);
  for (std::size_t id = 0; id < kTensorCount; ++id) {
    if (is_bias(id)) continue;
    for (auto& v : p.tensors[id].data) v = rng.uniform(-scale, scale);
  }
  return p;
}

// Shape check used when combining parameter-shaped values.
inline void require_same_layout(const ExtractorParams& a, const ExtractorParams& b) {
  if (!(a.dims == b.dims) || a.tensors.size() != b.tensors.size())
    throw ShapeError("extractor parameter layouts differ");
}

inline void add_scaled(ExtractorParams& acc, const ExtractorParams& g, double scale) {
  require_same_layout(acc, g);
  for (std::size_t t = 0; t < acc.tensors.size(); ++t) {
    auto& a = acc.tensors[t].data;
    const auto& b = g.tensors[t].data;
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += scale * b[i];
  }
}

}  // namespace ectsum
