#include "sgcn/data/batch.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "sgcn/data/vocab.hpp"
#include "sgcn/random.hpp"

namespace sgcn::data {

namespace {

Batch pad(const std::vector<const ProcessedExample*>& members, const std::vector<std::size_t>& index,
          std::size_t pad_to) {
  Batch b;
  b.size = members.size();
  b.max_len = pad_to;
  for (const ProcessedExample* ex : members) b.max_len = std::max(b.max_len, ex->length());
  const std::size_t cells = b.size * b.max_len;
  b.token_ids.assign(cells, kPadId);
  b.pos_ids.assign(cells, kPadId);
  b.ner_ids.assign(cells, kPadId);
  b.mask.assign(cells, 0);
  for (std::size_t i = 0; i < b.size; ++i) {
    const ProcessedExample& ex = *members[i];
    if (ex.length() == 0) throw DatasetError("make_batch: empty example");
    const std::size_t off = i * b.max_len;
    std::copy(ex.token_ids.begin(), ex.token_ids.end(), b.token_ids.begin() + off);
    std::copy(ex.pos_ids.begin(), ex.pos_ids.end(), b.pos_ids.begin() + off);
    std::copy(ex.ner_ids.begin(), ex.ner_ids.end(), b.ner_ids.begin() + off);
    std::fill_n(b.mask.begin() + off, ex.length(), 1);
    b.lengths.push_back(ex.length());
    b.subj.push_back(ex.subj);
    b.obj.push_back(ex.obj);
    b.labels.push_back(ex.label_id);
  }
  b.source_index = index;
  return b;
}

}  // namespace

Batch make_batch(std::span<const ProcessedExample> examples, std::size_t pad_to) {
  std::vector<const ProcessedExample*> members;
  std::vector<std::size_t> index;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    members.push_back(&examples[i]);
    index.push_back(i);
  }
  return pad(members, index, pad_to);
}

std::vector<Batch> make_batches(const std::vector<ProcessedExample>& examples, std::size_t batch_size,
                                std::optional<std::uint64_t> shuffle_seed) {
  if (examples.empty()) throw DatasetError("make_batches: no examples");
  if (batch_size == 0) throw DatasetError("make_batches: batch size must be positive");
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (shuffle_seed) {
    Rng rng(*shuffle_seed);
    rng.shuffle(order.begin(), order.end());
  }
  std::vector<Batch> out;
  for (std::size_t begin = 0; begin < order.size(); begin += batch_size) {
    const std::size_t end = std::min(order.size(), begin + batch_size);
    std::vector<const ProcessedExample*> members;
    std::vector<std::size_t> index(order.begin() + begin, order.begin() + end);
    for (std::size_t i : index) members.push_back(&examples[i]);
    out.push_back(pad(members, index, 0));
  }
  return out;
}

}  // namespace sgcn::data
