#include "sgcn/train/trainer.hpp"

#include <chrono>
#include <cstdio>
#include <stdexcept>

#include "sgcn/data/batch.hpp"
#include "sgcn/train/sgd.hpp"

namespace sgcn::train {

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("train config: " + what); };
  if (!(lr > 0.0)) fail("lr must be positive");
  if (batch_size == 0) fail("batch_size must be positive");
  if (patience < 1) fail("patience must be >= 1");
  if (max_epochs < 1) fail("max_epochs must be >= 1");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) fail("lr_decay must lie in (0, 1]");
}

bool set_train_config_key(TrainConfig& c, std::string_view key, std::string_view value) {
  if (key == "lr") c.lr = parse_double(key, value);
  else if (key == "batch_size") c.batch_size = parse_size(key, value);
  else if (key == "patience") c.patience = parse_size(key, value);
  else if (key == "max_epochs") c.max_epochs = parse_size(key, value);
  else if (key == "lr_decay") c.lr_decay = parse_double(key, value);
  else if (key == "decay_start_epoch") c.decay_start_epoch = parse_size(key, value);
  else if (key == "grad_clip_norm") c.grad_clip_norm = parse_double(key, value);
  else if (key == "train_seed") c.seed = parse_size(key, value);
  else return false;
  return true;
}

std::string epoch_log_header() { return "epoch\ttrain_loss\tdev_P\tdev_R\tdev_F1\tlr\tseconds"; }

std::string format_epoch_line(const EpochLog& log) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu\t%.6f\t%.2f\t%.2f\t%.2f\t%.6g\t%.3f", log.epoch, log.train_loss,
                100.0 * log.dev.precision, 100.0 * log.dev.recall, 100.0 * log.dev.f1, log.lr, log.seconds);
  return buf;
}

EarlyStopping::EarlyStopping(std::size_t patience) : patience_(patience) {
  if (patience == 0) throw std::invalid_argument("EarlyStopping: patience must be >= 1");
}

bool EarlyStopping::update(double score) {
  ++epochs_;
  if (score > best_) {
    best_ = score;
    best_epoch_ = epochs_;
    stale_ = 0;
    return true;
  }
  ++stale_;
  return false;
}

template <typename T>
eval::ScoreReport evaluate(SgcnModel<T>& model, const std::vector<data::ProcessedExample>& examples,
                           std::size_t no_relation, std::size_t batch_size) {
  if (examples.empty()) throw std::invalid_argument("evaluate: no examples");
  const std::vector<data::Batch> batches = data::make_batches(examples, batch_size, std::nullopt);
  const std::vector<std::size_t> pred = model.predict(batches);
  std::vector<std::size_t> gold;
  gold.reserve(examples.size());
  for (const auto& ex : examples) gold.push_back(ex.label_id);
  return eval::micro_prf(gold, pred, no_relation);
}

template <typename T>
TrainResult<T> train(const std::vector<data::ProcessedExample>& train_set,
                     const std::vector<data::ProcessedExample>& dev_set, const data::Vocabulary& vocab,
                     const ModelConfig& model_config, const TrainConfig& train_config,
                     const data::EmbeddingTable* pretrained,
                     const std::function<void(const EpochLog&)>& on_epoch) {
  train_config.validate();
  if (train_set.empty() || dev_set.empty()) throw std::invalid_argument("train: empty train or dev split");

  SgcnModel<T> model = SgcnModel<T>::initialize(model_config);
  if (pretrained) {
    Tensor<T>& table = model.params().word_embedding;
    if (pretrained->rows != table.rows() || pretrained->dim != table.cols()) {
      throw std::invalid_argument("train: pretrained embedding table does not match the word vocabulary");
    }
    for (std::size_t i = 0; i < table.size(); ++i) table[i] = static_cast<T>(pretrained->values[i]);
  }
  const std::size_t no_relation = vocab.no_relation_id();

  TrainResult<T> result;
  result.best = Checkpoint<T>{model.config(), model.params(), vocab, {}};
  EarlyStopping stopping(train_config.patience);
  Rng dropout_rng(train_config.seed * 0x9E3779B97F4A7C15ull + 17);
  double lr = train_config.lr;

  for (std::size_t epoch = 1; epoch <= train_config.max_epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    const std::vector<data::Batch> batches =
        data::make_batches(train_set, train_config.batch_size, train_config.seed * 1000003ull + epoch);
    double loss_sum = 0.0;
    for (const data::Batch& batch : batches) {
      ad::Tape<T> tape;
      ForwardResult<T> out = model.forward(tape, batch, ForwardOptions{true, &dropout_rng, false});
      Var<T> loss = model.loss(out, batch);
      tape.backward(loss);
      loss_sum += static_cast<double>(loss.value()[0]) * static_cast<double>(batch.size);
      sgd_step(model.params(), lr, train_config.grad_clip_norm);
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = loss_sum / static_cast<double>(train_set.size());
    entry.dev = evaluate(model, dev_set, no_relation, kEvalBatchSize);
    entry.lr = lr;
    if (stopping.update(entry.dev.f1)) {
      result.best.params = model.params();
      result.best.params.visit([](const std::string&, Tensor<T>& t) { t.clear_grad(); });
      result.best.state = TrainingState{epoch, entry.dev.f1, lr};
    }
    entry.best_dev_f1 = stopping.best();
    entry.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
    if (stopping.should_stop()) break;
    if (epoch >= train_config.decay_start_epoch) lr *= train_config.lr_decay;
  }
  return result;
}

template eval::ScoreReport evaluate(SgcnModel<float>&, const std::vector<data::ProcessedExample>&, std::size_t,
                                    std::size_t);
template eval::ScoreReport evaluate(SgcnModel<double>&, const std::vector<data::ProcessedExample>&, std::size_t,
                                    std::size_t);
template TrainResult<float> train(const std::vector<data::ProcessedExample>&,
                                  const std::vector<data::ProcessedExample>&, const data::Vocabulary&,
                                  const ModelConfig&, const TrainConfig&, const data::EmbeddingTable*,
                                  const std::function<void(const EpochLog&)>&);
template TrainResult<double> train(const std::vector<data::ProcessedExample>&,
                                   const std::vector<data::ProcessedExample>&, const data::Vocabulary&,
                                   const ModelConfig&, const TrainConfig&, const data::EmbeddingTable*,
                                   const std::function<void(const EpochLog&)>&);

}  // namespace sgcn::train
