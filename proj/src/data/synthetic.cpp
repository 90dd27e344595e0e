#include "sgcn/data/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <stdexcept>

#include "sgcn/random.hpp"

namespace sgcn::data {

namespace {

constexpr std::array<const char*, 6> kPosTags{"DT", "IN", "JJ", "NN", "RB", "VB"};
constexpr std::array<const char*, 2> kSubjectTypes{"PERSON", "ORGANIZATION"};
constexpr std::array<const char*, 4> kObjectTypes{"PERSON", "ORGANIZATION", "LOCATION", "DATE"};
constexpr std::array<const char*, 8> kNames{"ada", "boris", "chen", "dana", "emil", "fatou", "gita", "hugo"};

struct Placement {
  std::size_t subj, obj, trigger;
};

std::size_t distance(std::size_t pos, std::size_t start, std::size_t len) {
  if (pos < start) return start - pos;
  if (pos >= start + len) return pos - (start + len - 1);
  return 0;
}

// Uniform over every placement that keeps the trigger far from both spans.
Placement place(std::size_t n, std::size_t subj_len, std::size_t obj_len, std::size_t gap, Rng& rng) {
  std::vector<Placement> options;
  for (std::size_t s = 0; s + subj_len <= n; ++s) {
    for (std::size_t o = 0; o + obj_len <= n; ++o) {
      if (s < o + obj_len && o < s + subj_len) continue;
      for (std::size_t t = 0; t < n; ++t) {
        if (distance(t, s, subj_len) >= gap && distance(t, o, obj_len) >= gap) options.push_back({s, o, t});
      }
    }
  }
  if (options.empty()) throw std::logic_error("synthetic: no feasible placement");
  return options[rng.index(options.size())];
}

}  // namespace

void SyntheticConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("synthetic config: " + what); };
  if (num_relations < 1) fail("num_relations must be positive");
  if (vocab_size < 1) fail("vocab_size must be positive");
  if (trigger_distance < 1) fail("trigger_distance must be positive");
  if (min_len > max_len) fail("min_len exceeds max_len");
  if (max_len < trigger_distance + 3) {
    fail("max_len (" + std::to_string(max_len) + ") must be at least trigger_distance + 3 (" +
         std::to_string(trigger_distance + 3) + ")");
  }
  if (!(label_noise >= 0.0 && label_noise <= 1.0)) fail("label_noise must lie in [0, 1]");
  if (num_examples() == 0) fail("no examples requested");
}

std::string synthetic_relation_name(std::size_t relation) { return "syn:rel_" + std::to_string(relation); }

std::string synthetic_trigger_token(std::size_t relation) { return "trigger" + std::to_string(relation); }

std::vector<RawExample> generate_synthetic(const SyntheticConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  const std::size_t classes = config.num_relations + (config.include_no_relation ? 1 : 0);
  const std::size_t shortest = std::max(config.min_len, config.trigger_distance + 3);

  std::vector<RawExample> out;
  out.reserve(config.num_examples());
  for (std::size_t i = 0; i < config.num_examples(); ++i) {
    const std::size_t n = shortest + rng.index(config.max_len - shortest + 1);
    // Class `num_relations` is the no-trigger class.
    const std::size_t cls = rng.index(classes);
    std::size_t subj_len = 1 + rng.index(2);
    std::size_t obj_len = 1 + rng.index(2);
    if (n < subj_len + obj_len + config.trigger_distance) subj_len = obj_len = 1;
    const Placement at = place(n, subj_len, obj_len, config.trigger_distance, rng);

    RawExample ex;
    char id[32];
    std::snprintf(id, sizeof id, "syn-%06zu", i);
    ex.id = id;
    ex.subj_type = kSubjectTypes[rng.index(kSubjectTypes.size())];
    ex.obj_type = kObjectTypes[rng.index(kObjectTypes.size())];
    for (std::size_t p = 0; p < n; ++p) {
      ex.tokens.push_back("w" + std::to_string(rng.index(config.vocab_size)));
      ex.pos_tags.push_back(kPosTags[rng.index(kPosTags.size())]);
      ex.ner_tags.push_back("O");
    }
    ex.subj_start = at.subj;
    ex.subj_end = at.subj + subj_len - 1;
    ex.obj_start = at.obj;
    ex.obj_end = at.obj + obj_len - 1;
    for (std::size_t p = ex.subj_start; p <= ex.subj_end; ++p) {
      ex.tokens[p] = kNames[rng.index(kNames.size())];
      ex.pos_tags[p] = "NNP";
      ex.ner_tags[p] = ex.subj_type;
    }
    for (std::size_t p = ex.obj_start; p <= ex.obj_end; ++p) {
      ex.tokens[p] = kNames[rng.index(kNames.size())];
      ex.pos_tags[p] = "NNP";
      ex.ner_tags[p] = ex.obj_type;
    }
    std::size_t label = cls;
    if (cls < config.num_relations) ex.tokens[at.trigger] = synthetic_trigger_token(cls);
    if (config.label_noise > 0.0 && rng.bernoulli(config.label_noise)) label = rng.index(classes);
    ex.relation = label < config.num_relations ? synthetic_relation_name(label) : kNoRelation;
    out.push_back(std::move(ex));
  }
  return out;
}

SyntheticSplits generate_synthetic_splits(const SyntheticConfig& config) {
  std::vector<RawExample> all = generate_synthetic(config, config.seed);
  SyntheticSplits s;
  auto first = all.begin();
  auto cut = [&](std::size_t count) {
    std::vector<RawExample> part(std::make_move_iterator(first), std::make_move_iterator(first + count));
    first += count;
    return part;
  };
  s.train = cut(config.num_train);
  s.dev = cut(config.num_dev);
  s.test = cut(config.num_test);
  return s;
}

}  // namespace sgcn::data
