#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sgcn/model/config.hpp"

namespace sgcn::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInputError = 2 };

/// Parsed command-line values shared by all subcommands. Unset optionals
/// fall back to the config file, then to built-in defaults.
struct CliOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> data_dir;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::filesystem::path> checkpoint;
  std::optional<std::filesystem::path> input;
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> precision;
  std::optional<std::string> adjacency_norm;
  std::vector<std::string> ablations;
  std::optional<std::size_t> layers;
  std::optional<std::size_t> heads;
  std::optional<std::size_t> max_epochs;
  std::size_t layer = 0;
  std::size_t head = 0;
  std::size_t index = 0;
  // Test hook for gradcheck: scales the backward rule of one op kind.
  std::string fault_op;
  double fault_scale = 0.5;
};

inline constexpr const char* kDataDirEnv = "SGCN_DATA_DIR";
inline constexpr const char* kCheckpointFile = "model.ckpt";
inline constexpr const char* kTrainLogFile = "train_log.tsv";

// Data directory from --data-dir, else $SGCN_DATA_DIR.
std::optional<std::filesystem::path> resolve_data_dir(const CliOptions& options);

// Applies --seed, --precision, --adjacency-norm, --ablation, --layers and --heads.
void apply_model_overrides(ModelConfig& config, const CliOptions& options);

/// Trains on <data>/train.json with model selection on <data>/dev.json and
/// writes model.ckpt and train_log.tsv to the output directory.
int cmd_train(const CliOptions& options, std::ostream& out, std::ostream& err);
/// Scores a checkpoint on --input; prints the P/R/F1 report.
int cmd_eval(const CliOptions& options, std::ostream& out, std::ostream& err);
/// Writes "id<TAB>relation" lines for --input to --output (default stdout).
int cmd_predict(const CliOptions& options, std::ostream& out, std::ostream& err);
/// Writes train.json, dev.json and test.json to the output directory.
int cmd_gen_synthetic(const CliOptions& options, std::ostream& out, std::ostream& err);
/// Writes the adjacency matrix of one layer and head for record --index of
/// --input as CSV. Row u, column v holds the weight of the edge u -> v, so
/// each column over real tokens sums to 1 or is all zero.
int cmd_export_adjacency(const CliOptions& options, std::ostream& out, std::ostream& err);
/// Finite-difference check of a small random model in 64-bit; exit 0 iff the
/// maximum relative error is below kGradcheckTolerance.
int cmd_gradcheck(const CliOptions& options, std::ostream& out, std::ostream& err);

inline constexpr double kGradcheckTolerance = 1e-4;

/// Toy setup for gradcheck: 5 tokens, d=12, 3 heads, 2 layers, 3 relations.
ModelConfig gradcheck_model_config();

}  // namespace sgcn::cli
