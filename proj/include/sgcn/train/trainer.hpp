#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sgcn/data/embeddings.hpp"
#include "sgcn/data/example.hpp"
#include "sgcn/data/vocab.hpp"
#include "sgcn/eval/scorer.hpp"
#include "sgcn/model/model.hpp"
#include "sgcn/train/checkpoint.hpp"

namespace sgcn::train {

struct TrainConfig {
  double lr = 0.3;
  std::size_t batch_size = 50;
  std::size_t patience = 5;
  std::size_t max_epochs = 100;
  double lr_decay = 0.9;
  // First epoch (1-based) after which the learning rate decays.
  std::size_t decay_start_epoch = 15;
  double grad_clip_norm = 5.0;
  std::uint64_t seed = 1;

  void validate() const;
};

// Returns false for keys that are not TrainConfig fields.
bool set_train_config_key(TrainConfig& config, std::string_view key, std::string_view value);

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  eval::ScoreReport dev;
  double lr = 0.0;
  double seconds = 0.0;
  double best_dev_f1 = 0.0;
};

/// epoch, train_loss, dev_P, dev_R, dev_F1, lr, seconds; tab-separated, no
/// newline. Scores are percentages with two decimals; wall time comes last.
std::string format_epoch_line(const EpochLog& log);
std::string epoch_log_header();

/// Patience counter over a score that should increase.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience);

  // Records one epoch's score; returns true when it is a strict improvement.
  bool update(double score);
  bool should_stop() const { return stale_ >= patience_; }
  double best() const { return best_; }
  std::size_t best_epoch() const { return best_epoch_; }
  std::size_t epochs_seen() const { return epochs_; }

 private:
  std::size_t patience_;
  std::size_t stale_ = 0;
  std::size_t epochs_ = 0;
  std::size_t best_epoch_ = 0;
  double best_ = -1.0;
};

// Evaluation batches are fixed so that scores do not depend on the training batch size.
inline constexpr std::size_t kEvalBatchSize = 50;

template <typename T>
eval::ScoreReport evaluate(SgcnModel<T>& model, const std::vector<data::ProcessedExample>& examples,
                           std::size_t no_relation, std::size_t batch_size = kEvalBatchSize);

template <typename T>
struct TrainResult {
  Checkpoint<T> best;
  std::vector<EpochLog> log;
};

/// SGD with clipping and per-epoch decay; keeps the parameters of the epoch
/// with the best dev micro-F1 and stops after `patience` epochs without a
/// strict improvement or at max_epochs.
template <typename T>
TrainResult<T> train(const std::vector<data::ProcessedExample>& train_set,
                     const std::vector<data::ProcessedExample>& dev_set, const data::Vocabulary& vocab,
                     const ModelConfig& model_config, const TrainConfig& train_config,
                     const data::EmbeddingTable* pretrained = nullptr,
                     const std::function<void(const EpochLog&)>& on_epoch = {});

}  // namespace sgcn::train
