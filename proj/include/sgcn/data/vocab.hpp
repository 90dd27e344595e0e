#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sgcn/data/example.hpp"

namespace sgcn::data {

inline constexpr std::size_t kPadId = 0;
inline constexpr std::size_t kUnkId = 1;
inline constexpr const char* kPadToken = "<PAD>";
inline constexpr const char* kUnkToken = "<UNK>";

/// Bijective string <-> id map. Token vocabularies reserve PAD=0 and UNK=1;
/// label vocabularies have no reserved entries.
class Lexicon {
 public:
  Lexicon() = default;
  // Ids follow the order of `tokens`.
  explicit Lexicon(std::vector<std::string> tokens);
  static Lexicon with_reserved(std::vector<std::string> sorted_tokens);

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(std::size_t id) const { return tokens_.at(id); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::optional<std::size_t> find(std::string_view token) const;
  bool has_reserved() const;
  // Unknown strings map to UNK; throws for a lexicon without reserved ids.
  std::size_t id_or_unk(std::string_view token) const;

  friend bool operator==(const Lexicon& a, const Lexicon& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> ids_;
};

struct Vocabulary {
  Lexicon words;
  Lexicon pos;
  Lexicon ner;
  Lexicon relations;
  // Number of word entries (excluding PAD/UNK) present in the pretrained set.
  std::size_t pretrained_coverage = 0;

  std::size_t no_relation_id() const;
  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.words == b.words && a.pos == b.pos && a.ner == b.ner && a.relations == b.relations;
  }
};

/// Words are the normalized masked training tokens plus SUBJ-/OBJ- tokens for
/// every entity type seen; each lexicon is sorted. Words absent from
/// `pretrained_tokens` still receive ids.
Vocabulary build_vocab(const std::vector<RawExample>& train,
                       const std::unordered_set<std::string>& pretrained_tokens = {});

/// Masks, normalizes and maps a record to ids. Unknown tokens and tags become
/// UNK; an unknown relation label throws DatasetError.
ProcessedExample encode(const RawExample& ex, const Vocabulary& vocab);
std::vector<ProcessedExample> encode_all(const std::vector<RawExample>& examples, const Vocabulary& vocab);

// Inverse of the word mapping.
std::vector<std::string> decode_tokens(const std::vector<std::size_t>& ids, const Vocabulary& vocab);

}  // namespace sgcn::data
