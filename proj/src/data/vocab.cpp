#include "sgcn/data/vocab.hpp"

#include <algorithm>
#include <set>

#include "sgcn/data/masking.hpp"

namespace sgcn::data {

Lexicon::Lexicon(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    auto [it, inserted] = ids_.emplace(tokens_[i], i);
    if (!inserted) throw DatasetError("lexicon: duplicate entry '" + tokens_[i] + "'");
  }
}

Lexicon Lexicon::with_reserved(std::vector<std::string> sorted_tokens) {
  std::vector<std::string> all{kPadToken, kUnkToken};
  for (auto& t : sorted_tokens) {
    if (t != kPadToken && t != kUnkToken) all.push_back(std::move(t));
  }
  return Lexicon(std::move(all));
}

std::optional<std::size_t> Lexicon::find(std::string_view token) const {
  if (auto it = ids_.find(std::string(token)); it != ids_.end()) return it->second;
  return std::nullopt;
}

bool Lexicon::has_reserved() const {
  return tokens_.size() >= 2 && tokens_[kPadId] == kPadToken && tokens_[kUnkId] == kUnkToken;
}

std::size_t Lexicon::id_or_unk(std::string_view token) const {
  if (auto id = find(token)) return *id;
  if (!has_reserved()) throw DatasetError("lexicon: unknown entry '" + std::string(token) + "'");
  return kUnkId;
}

std::size_t Vocabulary::no_relation_id() const {
  if (auto id = relations.find(kNoRelation)) return *id;
  throw DatasetError("vocabulary: relation set lacks '" + std::string(kNoRelation) + "'");
}

Vocabulary build_vocab(const std::vector<RawExample>& train,
                       const std::unordered_set<std::string>& pretrained_tokens) {
  if (train.empty()) throw DatasetError("build_vocab: empty training set");
  std::set<std::string> words, pos, ner, relations{kNoRelation}, types;
  for (const RawExample& ex : train) {
    for (const std::string& t : mask_entities(ex)) words.insert(normalize_token(t));
    pos.insert(ex.pos_tags.begin(), ex.pos_tags.end());
    ner.insert(ex.ner_tags.begin(), ex.ner_tags.end());
    relations.insert(ex.relation);
    types.insert(ex.subj_type);
    types.insert(ex.obj_type);
  }
  for (const std::string& type : types) {
    words.insert(subject_mask_token(type));
    words.insert(object_mask_token(type));
  }
  Vocabulary v;
  v.words = Lexicon::with_reserved({words.begin(), words.end()});
  v.pos = Lexicon::with_reserved({pos.begin(), pos.end()});
  v.ner = Lexicon::with_reserved({ner.begin(), ner.end()});
  v.relations = Lexicon({relations.begin(), relations.end()});
  for (std::size_t i = 2; i < v.words.size(); ++i) {
    if (pretrained_tokens.contains(v.words.token(i))) ++v.pretrained_coverage;
  }
  return v;
}

ProcessedExample encode(const RawExample& ex, const Vocabulary& vocab) {
  if (std::string reason = validate_example(ex); !reason.empty()) {
    throw DatasetError("record " + ex.id + ": " + reason);
  }
  ProcessedExample out;
  for (const std::string& t : mask_entities(ex)) out.token_ids.push_back(vocab.words.id_or_unk(normalize_token(t)));
  for (const std::string& t : ex.pos_tags) out.pos_ids.push_back(vocab.pos.id_or_unk(t));
  for (const std::string& t : ex.ner_tags) out.ner_ids.push_back(vocab.ner.id_or_unk(t));
  out.subj = ex.subj();
  out.obj = ex.obj();
  auto label = vocab.relations.find(ex.relation);
  if (!label) throw DatasetError("record " + ex.id + ": unknown relation '" + ex.relation + "'");
  out.label_id = *label;
  return out;
}

std::vector<ProcessedExample> encode_all(const std::vector<RawExample>& examples, const Vocabulary& vocab) {
  std::vector<ProcessedExample> out;
  out.reserve(examples.size());
  for (const RawExample& ex : examples) out.push_back(encode(ex, vocab));
  return out;
}

std::vector<std::string> decode_tokens(const std::vector<std::size_t>& ids, const Vocabulary& vocab) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (std::size_t id : ids) out.push_back(vocab.words.token(id));
  return out;
}

}  // namespace sgcn::data
