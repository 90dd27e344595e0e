#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sgcn {

enum class AdjacencyMode { kReluMean, kSoftmax };
enum class Precision { k32, k64 };

std::string_view to_string(AdjacencyMode mode);
std::string_view to_string(Precision precision);
// Accepts "relu-mean"/"relu_mean" and "softmax".
std::optional<AdjacencyMode> parse_adjacency_mode(std::string_view text);
std::optional<Precision> parse_precision(std::string_view text);

/// Architecture hyperparameters. Defaults are the full-scale relation
/// extraction setup (300-d words, 30-d tags, 2 layers of 3 heads).
struct ModelConfig {
  std::size_t word_dim = 300;
  std::size_t pos_dim = 30;
  std::size_t ner_dim = 30;
  std::size_t hidden_dim = 300;
  std::size_t sgcn_layers = 2;
  std::size_t heads = 3;
  double dropout = 0.5;
  double word_dropout = 0.04;
  // Bound of the uniform init for embedding rows not taken from a pretrained file.
  double embedding_init = 1.0;
  AdjacencyMode adjacency_mode = AdjacencyMode::kReluMean;
  bool no_sgcn = false;
  bool no_lstm = false;
  bool no_layer_agg = false;

  std::size_t word_vocab = 0;
  std::size_t pos_vocab = 0;
  std::size_t ner_vocab = 0;
  std::size_t relation_count = 0;

  Precision precision = Precision::k32;
  std::uint64_t seed = 1;

  std::size_t input_dim() const { return word_dim + pos_dim + ner_dim; }
  std::size_t head_dim() const { return hidden_dim / heads; }
  std::size_t lstm_units() const { return hidden_dim / 2; }

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

bool operator==(const ModelConfig& a, const ModelConfig& b);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Flat "key = value" text. Blank lines and '#' comments are ignored; a line
/// without '=' throws std::invalid_argument with its line number.
KeyValues parse_key_values(const std::string& text);

/// One "key = value" line per ModelConfig field; doubles keep full precision.
std::string format_model_config(const ModelConfig& config);
/// Returns false for keys that are not ModelConfig fields; throws
/// std::invalid_argument for malformed values.
bool set_model_config_key(ModelConfig& config, std::string_view key, std::string_view value);
ModelConfig parse_model_config(const std::string& text);

// Shared value parsers for the key-value format.
std::size_t parse_size(std::string_view key, std::string_view value);
double parse_double(std::string_view key, std::string_view value);
bool parse_bool(std::string_view key, std::string_view value);

// Denominator guard for mean normalization of attention columns.
inline constexpr double kAdjacencyEpsilon = 1e-10;

}  // namespace sgcn
