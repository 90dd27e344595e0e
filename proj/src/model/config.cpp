#include "sgcn/model/config.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace sgcn {

std::string_view to_string(AdjacencyMode mode) {
  return mode == AdjacencyMode::kReluMean ? "relu-mean" : "softmax";
}

std::string_view to_string(Precision precision) {
  return precision == Precision::k32 ? "32" : "64";
}

std::optional<AdjacencyMode> parse_adjacency_mode(std::string_view text) {
  if (text == "relu-mean" || text == "relu_mean") return AdjacencyMode::kReluMean;
  if (text == "softmax") return AdjacencyMode::kSoftmax;
  return std::nullopt;
}

std::optional<Precision> parse_precision(std::string_view text) {
  if (text == "32") return Precision::k32;
  if (text == "64") return Precision::k64;
  return std::nullopt;
}

void ModelConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("model config: " + what); };
  if (word_dim == 0) fail("word_dim must be positive");
  if (hidden_dim == 0) fail("hidden_dim must be positive");
  if (sgcn_layers < 1) fail("sgcn_layers must be >= 1");
  if (heads < 1) fail("heads must be >= 1");
  if (hidden_dim % heads != 0) {
    fail("hidden_dim (" + std::to_string(hidden_dim) + ") must be divisible by heads (" +
         std::to_string(heads) + ")");
  }
  if (!no_lstm && hidden_dim % 2 != 0) fail("hidden_dim must be even for the BiLSTM halves");
  if (!(dropout >= 0.0 && dropout < 1.0)) fail("dropout must lie in [0, 1)");
  if (!(word_dropout >= 0.0 && word_dropout < 1.0)) fail("word_dropout must lie in [0, 1)");
  if (!(embedding_init > 0.0)) fail("embedding_init must be positive");
  if (word_vocab < 2) fail("word_vocab must include PAD and UNK");
  if (pos_dim > 0 && pos_vocab < 2) fail("pos_vocab must include PAD and UNK");
  if (ner_dim > 0 && ner_vocab < 2) fail("ner_vocab must include PAD and UNK");
  if (relation_count < 1) fail("relation_count must be positive");
}

bool operator==(const ModelConfig& a, const ModelConfig& b) {
  return a.word_dim == b.word_dim && a.pos_dim == b.pos_dim && a.ner_dim == b.ner_dim &&
         a.hidden_dim == b.hidden_dim && a.sgcn_layers == b.sgcn_layers && a.heads == b.heads &&
         a.dropout == b.dropout && a.word_dropout == b.word_dropout && a.embedding_init == b.embedding_init &&
         a.adjacency_mode == b.adjacency_mode && a.no_sgcn == b.no_sgcn && a.no_lstm == b.no_lstm &&
         a.no_layer_agg == b.no_layer_agg && a.word_vocab == b.word_vocab &&
         a.pos_vocab == b.pos_vocab && a.ner_vocab == b.ner_vocab &&
         a.relation_count == b.relation_count && a.precision == b.precision && a.seed == b.seed;
}

}  // namespace sgcn

namespace sgcn {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw std::invalid_argument("config: key '" + std::string(key) + "' expects " + expected + ", got '" +
                              std::string(value) + "'");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
    out.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }
  return out;
}

std::size_t parse_size(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    bad_value(key, value, "a non-negative integer");
  }
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) bad_value(key, value, "a number");
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value, "true or false");
}

std::string format_model_config(const ModelConfig& c) {
  std::string out;
  auto line = [&](const char* key, const std::string& value) { out += std::string(key) + " = " + value + "\n"; };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  line("word_dim", std::to_string(c.word_dim));
  line("pos_dim", std::to_string(c.pos_dim));
  line("ner_dim", std::to_string(c.ner_dim));
  line("hidden_dim", std::to_string(c.hidden_dim));
  line("sgcn_layers", std::to_string(c.sgcn_layers));
  line("heads", std::to_string(c.heads));
  line("dropout", format_double(c.dropout));
  line("word_dropout", format_double(c.word_dropout));
  line("embedding_init", format_double(c.embedding_init));
  line("adjacency_mode", std::string(to_string(c.adjacency_mode)));
  line("no_sgcn", flag(c.no_sgcn));
  line("no_lstm", flag(c.no_lstm));
  line("no_layer_agg", flag(c.no_layer_agg));
  line("word_vocab", std::to_string(c.word_vocab));
  line("pos_vocab", std::to_string(c.pos_vocab));
  line("ner_vocab", std::to_string(c.ner_vocab));
  line("relation_count", std::to_string(c.relation_count));
  line("precision", std::string(to_string(c.precision)));
  line("seed", std::to_string(c.seed));
  return out;
}

bool set_model_config_key(ModelConfig& c, std::string_view key, std::string_view value) {
  if (key == "word_dim") c.word_dim = parse_size(key, value);
  else if (key == "pos_dim") c.pos_dim = parse_size(key, value);
  else if (key == "ner_dim") c.ner_dim = parse_size(key, value);
  else if (key == "hidden_dim") c.hidden_dim = parse_size(key, value);
  else if (key == "sgcn_layers") c.sgcn_layers = parse_size(key, value);
  else if (key == "heads") c.heads = parse_size(key, value);
  else if (key == "dropout") c.dropout = parse_double(key, value);
  else if (key == "word_dropout") c.word_dropout = parse_double(key, value);
  else if (key == "embedding_init") c.embedding_init = parse_double(key, value);
  else if (key == "adjacency_mode") {
    auto mode = parse_adjacency_mode(value);
    if (!mode) bad_value(key, value, "relu-mean or softmax");
    c.adjacency_mode = *mode;
  } else if (key == "no_sgcn") c.no_sgcn = parse_bool(key, value);
  else if (key == "no_lstm") c.no_lstm = parse_bool(key, value);
  else if (key == "no_layer_agg") c.no_layer_agg = parse_bool(key, value);
  else if (key == "word_vocab") c.word_vocab = parse_size(key, value);
  else if (key == "pos_vocab") c.pos_vocab = parse_size(key, value);
  else if (key == "ner_vocab") c.ner_vocab = parse_size(key, value);
  else if (key == "relation_count") c.relation_count = parse_size(key, value);
  else if (key == "precision") {
    auto p = parse_precision(value);
    if (!p) bad_value(key, value, "32 or 64");
    c.precision = *p;
  } else if (key == "seed") c.seed = parse_size(key, value);
  else return false;
  return true;
}

ModelConfig parse_model_config(const std::string& text) {
  ModelConfig c;
  for (const auto& [key, value] : parse_key_values(text)) {
    if (!set_model_config_key(c, key, value)) {
      throw std::invalid_argument("model config: unknown key '" + key + "'");
    }
  }
  return c;
}

}  // namespace sgcn
