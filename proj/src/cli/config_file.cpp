#include "sgcn/cli/config_file.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sgcn::cli {

namespace {

constexpr std::string_view kSyntheticPrefix = "synthetic.";

}  // namespace

bool set_synthetic_config_key(data::SyntheticConfig& c, std::string_view key, std::string_view value) {
  if (key == "num_train") c.num_train = parse_size(key, value);
  else if (key == "num_dev") c.num_dev = parse_size(key, value);
  else if (key == "num_test") c.num_test = parse_size(key, value);
  else if (key == "vocab_size") c.vocab_size = parse_size(key, value);
  else if (key == "min_len") c.min_len = parse_size(key, value);
  else if (key == "max_len") c.max_len = parse_size(key, value);
  else if (key == "num_relations") c.num_relations = parse_size(key, value);
  else if (key == "trigger_distance") c.trigger_distance = parse_size(key, value);
  else if (key == "include_no_relation") c.include_no_relation = parse_bool(key, value);
  else if (key == "label_noise") c.label_noise = parse_double(key, value);
  else if (key == "seed") c.seed = parse_size(key, value);
  else return false;
  return true;
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig rc;
  for (const auto& [key, value] : parse_key_values(text)) {
    bool known = false;
    if (key.rfind(kSyntheticPrefix, 0) == 0) {
      known = set_synthetic_config_key(rc.synthetic, std::string_view(key).substr(kSyntheticPrefix.size()), value);
    } else {
      known = set_model_config_key(rc.model, key, value) || train::set_train_config_key(rc.train, key, value);
    }
    if (!known) throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_run_config(text.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

std::string format_synthetic_config(const data::SyntheticConfig& c) {
  std::ostringstream out;
  out << "synthetic.num_train = " << c.num_train << "\n"
      << "synthetic.num_dev = " << c.num_dev << "\n"
      << "synthetic.num_test = " << c.num_test << "\n"
      << "synthetic.vocab_size = " << c.vocab_size << "\n"
      << "synthetic.min_len = " << c.min_len << "\n"
      << "synthetic.max_len = " << c.max_len << "\n"
      << "synthetic.num_relations = " << c.num_relations << "\n"
      << "synthetic.trigger_distance = " << c.trigger_distance << "\n"
      << "synthetic.include_no_relation = " << (c.include_no_relation ? "true" : "false") << "\n"
      << "synthetic.label_noise = " << c.label_noise << "\n"
      << "synthetic.seed = " << c.seed << "\n";
  return out.str();
}

}  // namespace sgcn::cli
