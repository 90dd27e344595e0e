#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sgcn/data/synthetic.hpp"
#include "sgcn/model/config.hpp"
#include "sgcn/train/trainer.hpp"

namespace sgcn::cli {

/// Everything a config file can set. Model and training keys use the field
/// names of ModelConfig and TrainConfig (`train_seed` for TrainConfig::seed);
/// generator keys carry a `synthetic.` prefix.
struct RunConfig {
  ModelConfig model;
  train::TrainConfig train;
  data::SyntheticConfig synthetic;
};

bool set_synthetic_config_key(data::SyntheticConfig& config, std::string_view key, std::string_view value);

// Unknown keys are rejected.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

std::string format_synthetic_config(const data::SyntheticConfig& config);

}  // namespace sgcn::cli
