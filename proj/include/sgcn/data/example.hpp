#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgcn::data {

/// Inclusive token range [start, end].
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start + 1; }
  bool contains(std::size_t i) const { return i >= start && i <= end; }
  bool overlaps(const Span& other) const { return start <= other.end && other.start <= end; }
  friend bool operator==(const Span&, const Span&) = default;
};

/// One record in the sentence-level relation extraction schema.
struct RawExample {
  std::string id;
  std::vector<std::string> tokens;
  std::size_t subj_start = 0;
  std::size_t subj_end = 0;
  std::size_t obj_start = 0;
  std::size_t obj_end = 0;
  std::string subj_type;
  std::string obj_type;
  std::vector<std::string> pos_tags;
  std::vector<std::string> ner_tags;
  std::string relation;

  Span subj() const { return {subj_start, subj_end}; }
  Span obj() const { return {obj_start, obj_end}; }
  friend bool operator==(const RawExample&, const RawExample&) = default;
};

struct ProcessedExample {
  std::vector<std::size_t> token_ids;
  std::vector<std::size_t> pos_ids;
  std::vector<std::size_t> ner_ids;
  Span subj;
  Span obj;
  std::size_t label_id = 0;

  std::size_t length() const { return token_ids.size(); }
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Empty string when the record satisfies the schema invariants, else the reason.
std::string validate_example(const RawExample& ex);

inline constexpr const char* kNoRelation = "no_relation";

}  // namespace sgcn::data
