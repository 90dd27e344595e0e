#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sgcn/data/example.hpp"

namespace sgcn::data {

/// Examples padded to the longest member. Id matrices are row-major
/// [size x max_len]; padded cells hold PAD and have mask 0.
struct Batch {
  std::size_t size = 0;
  std::size_t max_len = 0;
  std::vector<std::size_t> token_ids;
  std::vector<std::size_t> pos_ids;
  std::vector<std::size_t> ner_ids;
  std::vector<std::uint8_t> mask;
  std::vector<std::size_t> lengths;
  std::vector<Span> subj;
  std::vector<Span> obj;
  std::vector<std::size_t> labels;
  // Positions of the members in the list the batch was cut from.
  std::vector<std::size_t> source_index;

  std::span<const std::size_t> tokens(std::size_t i) const { return row(token_ids, i); }
  std::span<const std::size_t> pos(std::size_t i) const { return row(pos_ids, i); }
  std::span<const std::size_t> ner(std::size_t i) const { return row(ner_ids, i); }
  std::span<const std::uint8_t> mask_row(std::size_t i) const {
    return std::span<const std::uint8_t>(mask).subspan(i * max_len, max_len);
  }

 private:
  std::span<const std::size_t> row(const std::vector<std::size_t>& v, std::size_t i) const {
    return std::span<const std::size_t>(v).subspan(i * max_len, max_len);
  }
};

/// Pads the given examples, in order, into one batch. `pad_to` raises the padded
/// length above the longest member.
Batch make_batch(std::span<const ProcessedExample> examples, std::size_t pad_to = 0);

/// Cuts `examples` into batches of `batch_size`; the final partial batch is
/// kept. A seed shuffles the order deterministically; no seed keeps it.
std::vector<Batch> make_batches(const std::vector<ProcessedExample>& examples, std::size_t batch_size,
                                std::optional<std::uint64_t> shuffle_seed);

}  // namespace sgcn::data
