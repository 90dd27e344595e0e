#include "sgcn/cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "sgcn/autodiff/gradcheck.hpp"
#include "sgcn/cli/config_file.hpp"
#include "sgcn/data/batch.hpp"
#include "sgcn/data/dataset.hpp"
#include "sgcn/data/embeddings.hpp"
#include "sgcn/data/masking.hpp"
#include "sgcn/data/synthetic.hpp"
#include "sgcn/data/vocab.hpp"
#include "sgcn/eval/scorer.hpp"
#include "sgcn/model/model.hpp"
#include "sgcn/train/checkpoint.hpp"
#include "sgcn/train/trainer.hpp"

namespace sgcn::cli {

namespace fs = std::filesystem;

namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ad::NumericError& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const data::DatasetError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const train::CheckpointError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kInputError;
}

RunConfig run_config(const CliOptions& options) {
  return options.config ? load_run_config(*options.config) : RunConfig{};
}

const fs::path& require(const std::optional<fs::path>& value, const char* flag) {
  if (!value) throw InputError(std::string("missing required option ") + flag);
  return *value;
}

std::vector<data::RawExample> load_nonempty(const fs::path& path) {
  std::vector<data::RawExample> records = data::load_dataset(path);
  if (records.empty()) throw InputError(path.string() + ": dataset has no records");
  return records;
}

std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

// Precision used to load a checkpoint: --precision if given, else the stored width.
Precision checkpoint_precision(const CliOptions& options, const fs::path& path) {
  if (options.precision) {
    auto p = parse_precision(*options.precision);
    if (!p) throw InputError("--precision expects 32 or 64, got '" + *options.precision + "'");
    return *p;
  }
  return train::checkpoint_value_width(path) == 8 ? Precision::k64 : Precision::k32;
}

template <typename T>
train::Checkpoint<T> load_for_cli(const CliOptions& options, const fs::path& path) {
  // An explicit --precision 32 is the narrowing request for 64-bit checkpoints.
  return train::load_checkpoint<T>(path, train::LoadOptions{options.precision.has_value()});
}

template <typename T>
int train_typed(const RunConfig& rc, const std::vector<data::ProcessedExample>& train_set,
                const std::vector<data::ProcessedExample>& dev_set, const data::Vocabulary& vocab,
                const data::EmbeddingTable* pretrained, const fs::path& out_dir, std::ostream& out) {
  const fs::path log_path = out_dir / kTrainLogFile;
  std::ofstream log(log_path, std::ios::trunc);
  if (!log) throw InputError("cannot write " + log_path.string());
  log << train::epoch_log_header() << "\n";
  out << train::epoch_log_header() << "\n";
  auto on_epoch = [&](const train::EpochLog& e) {
    const std::string line = train::format_epoch_line(e);
    log << line << "\n" << std::flush;
    out << line << "\n" << std::flush;
  };
  train::TrainResult<T> result =
      train::train<T>(train_set, dev_set, vocab, rc.model, rc.train, pretrained, on_epoch);
  const fs::path ckpt_path = out_dir / kCheckpointFile;
  train::save_checkpoint(result.best, ckpt_path);

  const train::EpochLog& best = result.log.at(result.best.state.epoch - 1);
  out << "best epoch " << best.epoch << " of " << result.log.size() << "; checkpoint " << ckpt_path.string()
      << "\n";
  out << "dev\n" << eval::format_report(best.dev, vocab.relations.tokens());
  return kOk;
}

template <typename T>
int eval_typed(const CliOptions& options, const fs::path& ckpt_path, std::ostream& out) {
  train::Checkpoint<T> ckpt = load_for_cli<T>(options, ckpt_path);
  const auto records = load_nonempty(require(options.input, "--input"));
  const auto examples = data::encode_all(records, ckpt.vocab);
  SgcnModel<T> model(ckpt.config, std::move(ckpt.params));
  const eval::ScoreReport report = train::evaluate(model, examples, ckpt.vocab.no_relation_id());
  out << eval::format_report(report, ckpt.vocab.relations.tokens());
  return kOk;
}

template <typename T>
int predict_typed(const CliOptions& options, const fs::path& ckpt_path, std::ostream& out) {
  train::Checkpoint<T> ckpt = load_for_cli<T>(options, ckpt_path);
  const auto records = load_nonempty(require(options.input, "--input"));
  std::vector<data::ProcessedExample> examples;
  examples.reserve(records.size());
  for (const auto& r : records) {
    data::RawExample unlabeled = r;
    unlabeled.relation = data::kNoRelation;  // gold labels are not needed here
    examples.push_back(data::encode(unlabeled, ckpt.vocab));
  }
  SgcnModel<T> model(ckpt.config, std::move(ckpt.params));
  const auto pred = model.predict(data::make_batches(examples, train::kEvalBatchSize, std::nullopt));

  std::ofstream file;
  std::ostream* sink = &out;
  if (options.output) {
    file.open(*options.output, std::ios::trunc);
    if (!file) throw InputError("cannot write " + options.output->string());
    sink = &file;
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    *sink << records[i].id << '\t' << ckpt.vocab.relations.token(pred[i]) << '\n';
  }
  return kOk;
}

template <typename T>
int export_typed(const CliOptions& options, const fs::path& ckpt_path, std::ostream& out) {
  train::Checkpoint<T> ckpt = load_for_cli<T>(options, ckpt_path);
  const ModelConfig& cfg = ckpt.config;
  if (cfg.no_sgcn) throw InputError("checkpoint was trained without the SGCN stack; no adjacency to export");
  if (options.layer >= cfg.sgcn_layers) {
    throw InputError("--layer " + std::to_string(options.layer) + " out of range; model has " +
                     std::to_string(cfg.sgcn_layers) + " layers");
  }
  if (options.head >= cfg.heads) {
    throw InputError("--head " + std::to_string(options.head) + " out of range; model has " +
                     std::to_string(cfg.heads) + " heads");
  }
  const auto records = load_nonempty(require(options.input, "--input"));
  if (options.index >= records.size()) {
    throw InputError("--index " + std::to_string(options.index) + " out of range; file has " +
                     std::to_string(records.size()) + " records");
  }
  data::RawExample record = records[options.index];
  if (!ckpt.vocab.relations.find(record.relation)) record.relation = data::kNoRelation;
  const std::vector<data::ProcessedExample> one{data::encode(record, ckpt.vocab)};
  const data::Batch batch = data::make_batch(one);

  SgcnModel<T> model(cfg, std::move(ckpt.params));
  ad::Tape<T> tape;
  tape.set_grad_enabled(false);
  ForwardOptions fo;
  fo.collect_adjacency = true;
  const ForwardResult<T> result = model.forward(tape, batch, fo);
  const Tensor<T>& a = result.adjacency.at(0).matrices.at(options.layer).at(options.head);

  const std::vector<std::string> labels = data::mask_entities(record);
  std::string csv = "source\\target";
  for (const auto& t : labels) csv += "," + csv_field(t);
  csv += "\n";
  for (std::size_t u = 0; u < labels.size(); ++u) {
    csv += csv_field(labels[u]);
    for (std::size_t v = 0; v < labels.size(); ++v) {
      csv += "," + format_double("%.6f", static_cast<double>(a(u, v)));
    }
    csv += "\n";
  }

  const fs::path& out_path = require(options.output, "--output");
  std::ofstream file(out_path, std::ios::trunc);
  if (!file) throw InputError("cannot write " + out_path.string());
  file << csv;
  out << "wrote " << labels.size() << "x" << labels.size() << " adjacency (layer " << options.layer << ", head "
      << options.head << ") to " << out_path.string() << "\n";
  return kOk;
}

// Three 5-token sentences over small random vocabularies, one per relation.
data::Batch gradcheck_batch(const ModelConfig& config, Rng& rng) {
  std::vector<data::ProcessedExample> examples;
  const std::size_t n = 5;
  for (std::size_t k = 0; k < 3; ++k) {
    data::ProcessedExample ex;
    for (std::size_t t = 0; t < n; ++t) {
      ex.token_ids.push_back(1 + rng.index(config.word_vocab - 1));
      ex.pos_ids.push_back(1 + rng.index(config.pos_vocab - 1));
      ex.ner_ids.push_back(1 + rng.index(config.ner_vocab - 1));
    }
    ex.subj = {0, 1};
    ex.obj = {3, 3 + k % 2};
    ex.label_id = k % config.relation_count;
    examples.push_back(std::move(ex));
  }
  return data::make_batch(examples);
}

}  // namespace

std::optional<fs::path> resolve_data_dir(const CliOptions& options) {
  if (options.data_dir) return options.data_dir;
  if (const char* env = std::getenv(kDataDirEnv); env != nullptr && *env != '\0') return fs::path(env);
  return std::nullopt;
}

void apply_model_overrides(ModelConfig& config, const CliOptions& options) {
  if (options.seed) config.seed = *options.seed;
  if (options.precision) {
    auto p = parse_precision(*options.precision);
    if (!p) throw InputError("--precision expects 32 or 64, got '" + *options.precision + "'");
    config.precision = *p;
  }
  if (options.adjacency_norm) {
    auto m = parse_adjacency_mode(*options.adjacency_norm);
    if (!m) throw InputError("--adjacency-norm expects relu-mean or softmax, got '" + *options.adjacency_norm + "'");
    config.adjacency_mode = *m;
  }
  for (const std::string& a : options.ablations) {
    if (a == "no_sgcn") config.no_sgcn = true;
    else if (a == "no_lstm") config.no_lstm = true;
    else if (a == "no_layer_agg") config.no_layer_agg = true;
    else throw InputError("--ablation expects no_sgcn, no_lstm or no_layer_agg, got '" + a + "'");
  }
  if (options.layers) config.sgcn_layers = *options.layers;
  if (options.heads) config.heads = *options.heads;
}

int cmd_train(const CliOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig rc = run_config(options);
    apply_model_overrides(rc.model, options);
    if (options.seed) rc.train.seed = *options.seed;
    if (options.max_epochs) rc.train.max_epochs = *options.max_epochs;
    rc.train.validate();
    const auto data_dir = resolve_data_dir(options);
    if (!data_dir) throw InputError(std::string("no data directory; pass --data-dir or set ") + kDataDirEnv);
    const fs::path& out_dir = require(options.out_dir, "--out-dir");

    const auto train_raw = load_nonempty(*data_dir / "train.json");
    const auto dev_raw = load_nonempty(*data_dir / "dev.json");
    std::unordered_set<std::string> pretrained_tokens;
    if (options.embeddings) pretrained_tokens = data::read_embedding_tokens(*options.embeddings);
    const data::Vocabulary vocab = data::build_vocab(train_raw, pretrained_tokens);
    rc.model.word_vocab = vocab.words.size();
    rc.model.pos_vocab = vocab.pos.size();
    rc.model.ner_vocab = vocab.ner.size();
    rc.model.relation_count = vocab.relations.size();
    rc.model.validate();

    const auto train_set = data::encode_all(train_raw, vocab);
    const auto dev_set = data::encode_all(dev_raw, vocab);
    std::optional<data::EmbeddingTable> table;
    if (options.embeddings) {
      Rng rng(rc.model.seed ^ 0x5DEECE66Dull);
      table = data::load_pretrained_embeddings(*options.embeddings, vocab.words, rc.model.word_dim, rng,
                                               rc.model.embedding_init);
      out << "pretrained vectors for " << table->rows_from_file << " of " << vocab.words.size() << " words\n";
    }
    fs::create_directories(out_dir);
    const data::EmbeddingTable* pretrained = table ? &*table : nullptr;
    if (rc.model.precision == Precision::k64) {
      return train_typed<double>(rc, train_set, dev_set, vocab, pretrained, out_dir, out);
    }
    return train_typed<float>(rc, train_set, dev_set, vocab, pretrained, out_dir, out);
  });
}

int cmd_eval(const CliOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const fs::path& ckpt = require(options.checkpoint, "--checkpoint");
    if (checkpoint_precision(options, ckpt) == Precision::k64) return eval_typed<double>(options, ckpt, out);
    return eval_typed<float>(options, ckpt, out);
  });
}

int cmd_predict(const CliOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const fs::path& ckpt = require(options.checkpoint, "--checkpoint");
    if (checkpoint_precision(options, ckpt) == Precision::k64) return predict_typed<double>(options, ckpt, out);
    return predict_typed<float>(options, ckpt, out);
  });
}

int cmd_gen_synthetic(const CliOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig rc = run_config(options);
    if (options.seed) rc.synthetic.seed = *options.seed;
    rc.synthetic.validate();
    const fs::path& out_dir = require(options.out_dir, "--out-dir");
    const data::SyntheticSplits splits = data::generate_synthetic_splits(rc.synthetic);
    fs::create_directories(out_dir);
    data::save_dataset(out_dir / "train.json", splits.train);
    data::save_dataset(out_dir / "dev.json", splits.dev);
    data::save_dataset(out_dir / "test.json", splits.test);
    out << "wrote " << splits.train.size() << "/" << splits.dev.size() << "/" << splits.test.size()
        << " train/dev/test records to " << out_dir.string() << "\n";
    return kOk;
  });
}

int cmd_export_adjacency(const CliOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const fs::path& ckpt = require(options.checkpoint, "--checkpoint");
    if (checkpoint_precision(options, ckpt) == Precision::k64) return export_typed<double>(options, ckpt, out);
    return export_typed<float>(options, ckpt, out);
  });
}

ModelConfig gradcheck_model_config() {
  ModelConfig c;
  c.word_dim = 6;
  c.pos_dim = 3;
  c.ner_dim = 3;
  c.hidden_dim = 12;
  c.heads = 3;
  c.sgcn_layers = 2;
  c.word_vocab = 10;
  c.pos_vocab = 5;
  c.ner_vocab = 5;
  c.relation_count = 3;
  c.precision = Precision::k64;
  return c;
}

int cmd_gradcheck(const CliOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ModelConfig config = gradcheck_model_config();
    if (options.config) {
      std::ifstream in(*options.config);
      if (!in) throw InputError("cannot open config file " + options.config->string());
      std::ostringstream text;
      text << in.rdbuf();
      for (const auto& [key, value] : parse_key_values(text.str())) {
        if (!set_model_config_key(config, key, value)) {
          throw InputError(options.config->string() + ": unknown key '" + key + "'");
        }
      }
    }
    apply_model_overrides(config, options);
    config.precision = Precision::k64;
    config.validate();

    const auto started = std::chrono::steady_clock::now();
    SgcnModel<double> model = SgcnModel<double>::initialize(config);
    Rng data_rng(config.seed + 101);
    const data::Batch batch = gradcheck_batch(config, data_rng);
    auto loss = [&](ad::Tape<double>& tape) {
      ForwardResult<double> r = model.forward(tape, batch, ForwardOptions{});
      return model.loss(r, batch);
    };
    const ad::GradCheckReport report =
        options.fault_op.empty()
            ? ad::finite_difference_check(loss, model.params().named())
            : ad::finite_difference_check(loss, model.params().named(), {}, options.fault_op, options.fault_scale);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    const bool pass = report.max_rel_error < kGradcheckTolerance;
    out << "coordinates checked: " << report.coords_checked << " in " << report.groups.size() << " groups\n";
    out << "max relative error: " << format_double("%.3e", report.max_rel_error) << " (worst group "
        << report.worst_group << ")\n";
    out << "elapsed: " << format_double("%.2f", seconds) << " s\n";
    if (!pass) {
      err << "gradient check failed: " << report.worst_group << " exceeds "
          << format_double("%.0e", kGradcheckTolerance) << "\n";
      return static_cast<int>(kCheckFailed);
    }
    out << "gradient check passed\n";
    return static_cast<int>(kOk);
  });
}

}  // namespace sgcn::cli
