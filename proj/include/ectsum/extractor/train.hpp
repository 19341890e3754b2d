#pragma once

// Mini-batch Adam training with per-epoch validation and best-snapshot
// selection.

#include <cmath>
#include <functional>
#include <span>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ectsum/extractor/model.hpp"
#include "ectsum/numeral.hpp"
#include "ectsum/parallel.hpp"
#include "ectsum/records.hpp"
#include "ectsum/rng.hpp"

namespace ectsum {

struct TrainingDoc {
  std::string id;
  std::vector<SentenceVec> x;
  std::vector<int> nu;
  std::vector<int> labels;
};

struct TrainConfig {
  ExtractorDims dims;
  double learning_rate = 1e-5;
  std::size_t batch_size = 8;
  std::size_t max_epochs = 30;
  std::size_t patience = 5;  // epochs without improvement before stopping; 0 disables
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double init_scale = 0.1;
  std::uint64_t seed = 13;
  std::size_t threads = 1;  // does not affect results

  void validate() const {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
      throw ConfigError("learning rate must be a finite non-negative number");
    if (batch_size == 0) throw ConfigError("batch size must be >= 1");
    if (max_epochs == 0) throw ConfigError("max epochs must be >= 1");
  }

  Json to_json() const {
    Json j;
    j["input_dim"] = dims.input;
    j["hidden"] = dims.hidden;
    j["position"] = dims.position;
    j["max_pos"] = dims.max_pos;
    j["learning_rate"] = learning_rate;
    j["batch_size"] = batch_size;
    j["max_epochs"] = max_epochs;
    j["patience"] = patience;
    j["beta1"] = beta1;
    j["beta2"] = beta2;
    j["adam_epsilon"] = adam_epsilon;
    j["init_scale"] = init_scale;
    j["seed"] = seed;
    return j;
  }
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0;
  double val_loss = 0;
};

struct TrainResult {
  ExtractorParams params;  // lowest validation loss snapshot
  std::size_t best_epoch = 0;
  double best_val_loss = 0;
  std::vector<EpochLog> log;
};

inline std::vector<int> numeral_flags(const std::vector<Sentence>& sentences) {
  std::vector<int> nu;
  nu.reserve(sentences.size());
  for (const auto& s : sentences) nu.push_back(has_numerals(s.text) ? 1 : 0);
  return nu;
}

inline double mean_loss(const std::vector<TrainingDoc>& docs, const ExtractorParams& p,
                        std::size_t threads) {
  if (docs.empty()) return 0.0;
  auto losses = parallel_map(docs.size(), threads, [&](std::size_t i) {
    return bce_loss(predict(docs[i].x, docs[i].nu, p), docs[i].labels);
  });
  double s = 0;
  for (double l : losses) s += l;
  return s / static_cast<double>(docs.size());
}

class Adam {
 public:
  Adam(const ExtractorParams& like, const TrainConfig& cfg)
      : m_(zero_params(like.dims)), v_(zero_params(like.dims)), cfg_(cfg) {}

  void step(ExtractorParams& p, const ExtractorParams& g) {
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t id = 0; id < p.tensors.size(); ++id) {
      auto& w = p.tensors[id].data;
      const auto& gr = g.tensors[id].data;
      auto& m = m_.tensors[id].data;
      auto& v = v_.tensors[id].data;
      for (std::size_t k = 0; k < w.size(); ++k) {
        m[k] = cfg_.beta1 * m[k] + (1.0 - cfg_.beta1) * gr[k];
        v[k] = cfg_.beta2 * v[k] + (1.0 - cfg_.beta2) * gr[k] * gr[k];
        w[k] -= cfg_.learning_rate * (m[k] / c1) / (std::sqrt(v[k] / c2) + cfg_.adam_epsilon);
      }
    }
  }

 private:
  ExtractorParams m_, v_;
  TrainConfig cfg_;
  std::uint64_t t_ = 0;
};

// Per-epoch callback, e.g. for streaming the training log.
using EpochCallback = std::function<void(const EpochLog&)>;

inline TrainResult train(const std::vector<TrainingDoc>& train_docs,
                         const std::vector<TrainingDoc>& val_docs, const TrainConfig& cfg,
                         const EpochCallback& on_epoch = {}) {
  cfg.validate();
  if (train_docs.empty()) throw ConfigError("training split is empty");
  if (val_docs.empty()) throw ConfigError("validation split is empty");

  ExtractorParams params = init_params(cfg.dims, cfg.seed, cfg.init_scale);
  Adam opt(params, cfg);
  Rng order_rng(cfg.seed ^ 0x6f7264657273ULL);
  std::vector<std::size_t> order(train_docs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainResult result;
  std::size_t since_best = 0;
  std::size_t step = 0;
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    order_rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t len = std::min(cfg.batch_size, order.size() - start);
      const double scale = 1.0 / static_cast<double>(len);
      auto parts = parallel_map(len, cfg.threads, [&](std::size_t b) {
        const auto& d = train_docs[order[start + b]];
        return loss_and_gradients(d.x, d.nu, d.labels, params, scale);
      });
      ExtractorParams grad = zero_params(cfg.dims);
      for (const auto& part : parts) {
        if (!std::isfinite(part.loss) || !part.grad.all_finite())
          throw TrainingDiverged("non-finite loss or gradient at epoch " + std::to_string(epoch) +
                                 ", step " + std::to_string(step + 1));
        epoch_loss += part.loss;
        add_scaled(grad, part.grad, 1.0);
      }
      opt.step(params, grad);
      ++step;
      if (!params.all_finite())
        throw TrainingDiverged("non-finite weights after epoch " + std::to_string(epoch) +
                               ", step " + std::to_string(step));
    }
    EpochLog entry{epoch, epoch_loss / static_cast<double>(train_docs.size()),
                   mean_loss(val_docs, params, cfg.threads)};
    if (!std::isfinite(entry.val_loss))
      throw TrainingDiverged("non-finite validation loss at epoch " + std::to_string(epoch));
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
    if (result.best_epoch == 0 || entry.val_loss < result.best_val_loss) {
      result.best_epoch = epoch;
      result.best_val_loss = entry.val_loss;
      result.params = params;
      since_best = 0;
    } else if (cfg.patience > 0 && ++since_best >= cfg.patience) {
      break;
    }
  }
  return result;
}

inline Json to_json(const EpochLog& e) {
  Json j;
  j["epoch"] = e.epoch;
  j["train_loss"] = e.train_loss;
  j["val_loss"] = e.val_loss;
  return j;
}

}  // namespace ectsum
