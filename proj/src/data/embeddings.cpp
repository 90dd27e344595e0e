#include "sgcn/data/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sgcn::data {

EmbeddingTable load_pretrained_embeddings(const std::filesystem::path& path, const Lexicon& words,
                                          std::size_t dim, Rng& rng, double init_bound) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open embedding file " + path.string());

  EmbeddingTable table;
  table.rows = words.size();
  table.dim = dim;
  table.values.resize(table.rows * dim);
  if (!(init_bound > 0.0)) throw std::invalid_argument("embedding init bound must be positive");
  for (double& v : table.values) v = rng.uniform(-init_bound, init_bound);
  std::vector<bool> seen(table.rows, false);

  std::string line;
  std::size_t line_no = 0;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string token;
    fields >> token;
    row.clear();
    std::string number;
    while (fields >> number) {
      double v = 0;
      auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), v);
      if (ec != std::errc() || ptr != number.data() + number.size()) {
        throw DatasetError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + number + "'");
      }
      row.push_back(v);
    }
    if (row.size() != dim) {
      throw DatasetError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                         std::to_string(dim) + " values, found " + std::to_string(row.size()));
    }
    auto id = words.find(token);
    if (!id || *id == kPadId || seen[*id]) continue;
    seen[*id] = true;
    ++table.rows_from_file;
    std::copy(row.begin(), row.end(), table.values.begin() + static_cast<std::ptrdiff_t>(*id * dim));
  }
  if (table.rows > 0) std::fill_n(table.values.begin(), dim, 0.0);
  return table;
}

std::unordered_set<std::string> read_embedding_tokens(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open embedding file " + path.string());
  std::unordered_set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string token;
    if (fields >> token) out.insert(token);
  }
  return out;
}

}  // namespace sgcn::data
