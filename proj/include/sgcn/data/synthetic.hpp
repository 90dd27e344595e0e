#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sgcn/data/example.hpp"

namespace sgcn::data {

/// A relation task whose label is carried by one trigger token planted far
/// from both entities. Filler words, tags and entity types are independent
/// of the label.
struct SyntheticConfig {
  std::size_t num_train = 2000;
  std::size_t num_dev = 400;
  std::size_t num_test = 400;
  std::size_t vocab_size = 50;
  std::size_t min_len = 12;
  std::size_t max_len = 20;
  std::size_t num_relations = 4;
  std::size_t trigger_distance = 5;
  bool include_no_relation = true;
  // Probability that a label is redrawn independently of the planted trigger.
  double label_noise = 0.0;
  std::uint64_t seed = 1;

  std::size_t num_examples() const { return num_train + num_dev + num_test; }
  // Throws std::invalid_argument for infeasible settings.
  void validate() const;
};

struct SyntheticSplits {
  std::vector<RawExample> train;
  std::vector<RawExample> dev;
  std::vector<RawExample> test;
};

std::string synthetic_relation_name(std::size_t relation);
std::string synthetic_trigger_token(std::size_t relation);

/// All num_examples() records, in generation order.
std::vector<RawExample> generate_synthetic(const SyntheticConfig& config, std::uint64_t seed);
/// The same records cut into train/dev/test in that order.
SyntheticSplits generate_synthetic_splits(const SyntheticConfig& config);

}  // namespace sgcn::data
