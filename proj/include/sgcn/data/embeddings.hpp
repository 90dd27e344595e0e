#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

#include "sgcn/data/vocab.hpp"
#include "sgcn/random.hpp"

namespace sgcn::data {

struct EmbeddingTable {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<double> values;  // row-major [rows x dim]
  std::size_t rows_from_file = 0;

  double at(std::size_t row, std::size_t col) const { return values[row * dim + col]; }
};

/// Reads "token v1 ... v_dim" lines. Rows of in-vocabulary tokens are copied
/// from the file, other rows are uniform(+-init_bound), the PAD row is zero.
/// A line with the wrong number of values is rejected with its line number.
EmbeddingTable load_pretrained_embeddings(const std::filesystem::path& path, const Lexicon& words,
                                          std::size_t dim, Rng& rng, double init_bound = 1.0);

// Token column of an embedding file, for vocabulary construction.
std::unordered_set<std::string> read_embedding_tokens(const std::filesystem::path& path);

}  // namespace sgcn::data
