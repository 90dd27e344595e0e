// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sgcn/cli/commands.hpp"
#include "sgcn/cli/config_file.hpp"
#include "sgcn/data/batch.hpp"
#include "sgcn/data/synthetic.hpp"
#include "sgcn/data/vocab.hpp"
#include "sgcn/eval/scorer.hpp"
#include "sgcn/model/layers.hpp"
#include "sgcn/model/model.hpp"
#include "sgcn/train/checkpoint.hpp"
#include "sgcn/train/trainer.hpp"
#include "test_util.hpp"

namespace {

using namespace sgcn;
using ad::Tape;
using ad::Tensor;
using testing::random_tensor;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SgcnLayerParams<double> random_layer(std::size_t d, std::size_t heads, Rng& rng, double scale = 0.5) {
  SgcnLayerParams<double> p;
  for (std::size_t h = 0; h < heads; ++h) {
    p.attention.push_back({random_tensor({d, d}, rng, scale), random_tensor({d, d}, rng, scale)});
    GcnHeadParams<double> g;
    g.weight = random_tensor({d, d / heads}, rng, scale);
    g.bias = random_tensor({d / heads}, rng, scale);
    p.gcn.push_back(std::move(g));
  }
  return p;
}

// ------------------------------------------------------------ synthetic task

/// The criterion-6 task and model, read from configs/synthetic.conf.
struct SyntheticTask {
  cli::RunConfig run;
  data::Vocabulary vocab;
  std::vector<data::ProcessedExample> train;
  std::vector<data::ProcessedExample> dev;
  std::vector<data::ProcessedExample> test;
};

const SyntheticTask& synthetic_task() {
  static const SyntheticTask task = [] {
    SyntheticTask t;
    t.run = cli::load_run_config(std::string(SGCN_SOURCE_DIR) + "/configs/synthetic.conf");
    const auto splits = data::generate_synthetic_splits(t.run.synthetic);
    t.vocab = data::build_vocab(splits.train);
    t.train = data::encode_all(splits.train, t.vocab);
    t.dev = data::encode_all(splits.dev, t.vocab);
    t.test = data::encode_all(splits.test, t.vocab);
    ModelConfig& m = t.run.model;
    m.word_vocab = t.vocab.words.size();
    m.pos_vocab = t.vocab.pos.size();
    m.ner_vocab = t.vocab.ner.size();
    m.relation_count = t.vocab.relations.size();
    return t;
  }();
  return task;
}

struct RunResult {
  train::TrainResult<float> result;
  double seconds = 0.0;
  std::optional<std::size_t> first_epoch_at_target;
  double test_f1 = 0.0;
};

/// Trains one variant on the synthetic task; results are cached by key.
const RunResult& synthetic_run(AdjacencyMode mode, const std::string& ablation, std::uint64_t seed) {
  static std::map<std::string, RunResult> cache;
  const std::string key = std::string(to_string(mode)) + "/" + ablation + "/" + std::to_string(seed);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const SyntheticTask& task = synthetic_task();
  ModelConfig model = task.run.model;
  model.adjacency_mode = mode;
  model.seed = seed;
  model.no_sgcn = ablation == "no_sgcn";
  model.no_layer_agg = ablation == "no_layer_agg";
  train::TrainConfig tc = task.run.train;
  tc.seed = seed;

  RunResult r;
  std::fprintf(stderr, "  training %s\n", key.c_str());
  const auto start = Clock::now();
  r.result = train::train<float>(task.train, task.dev, task.vocab, model, tc, nullptr, [&](const train::EpochLog& e) {
    std::fprintf(stderr, "    %s\n", train::format_epoch_line(e).c_str());
    if (!r.first_epoch_at_target && e.dev.f1 >= 0.90) r.first_epoch_at_target = e.epoch;
  });
  r.seconds = seconds_since(start);
  SgcnModel<float> best(r.result.best.config, r.result.best.params);
  r.test_f1 = train::evaluate(best, task.test, task.vocab.no_relation_id()).f1;
  return cache.emplace(key, std::move(r)).first->second;
}

// ----------------------------------------------------------------- criteria

Outcome gradient_correctness() {
  cli::CliOptions options;
  std::ostringstream out, err;
  const auto start = Clock::now();
  const int code = cli::cmd_gradcheck(options, out, err);
  const double elapsed = seconds_since(start);
  std::smatch m;
  const std::string text = out.str();
  std::regex_search(text, m, std::regex(R"(max relative error: (\S+))"));
  const bool pass = code == cli::kOk && elapsed < 60.0;
  return {pass, "max rel error " + (m.empty() ? std::string("?") : m[1].str()) + " (< 1e-4), " +
                    fmt("%.1f s", elapsed) + " (< 60 s), exit " + std::to_string(code)};
}

struct AdjacencyStats {
  std::size_t draws = 0;
  std::size_t draws_with_zero = 0;
  std::size_t violations = 0;  // column sums, negatives, masked entries
  std::size_t valid_zeros = 0;
  double worst_column_error = 0.0;
};

AdjacencyStats adjacency_draws(AdjacencyMode mode, std::size_t draws, std::uint64_t seed) {
  Rng rng(seed);
  AdjacencyStats s;
  const std::size_t d = 8;
  for (std::size_t k = 0; k < draws; ++k) {
    const std::size_t n = 3 + rng.index(8);
    const std::size_t valid = 3 + rng.index(n - 2);
    std::vector<std::uint8_t> mask(n, 0);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(valid), 1);
    rng.shuffle(mask.begin(), mask.end());
    Tensor<double> z = random_tensor({n, d}, rng);
    AttentionHeadParams<double> head{random_tensor({d, d}, rng), random_tensor({d, d}, rng)};
    Tape<double> tape;
    const Tensor<double> a = self_determined_adjacency(tape.constant(z), head, mask, mode).value();
    bool zero = false;
    for (std::size_t v = 0; v < n; ++v) {
      double total = 0.0;
      for (std::size_t u = 0; u < n; ++u) {
        const double x = a(u, v);
        if (!(x >= 0.0)) ++s.violations;
        if ((!mask[u] || !mask[v]) && x != 0.0) ++s.violations;
        if (mask[u] && mask[v] && x == 0.0) {
          zero = true;
          ++s.valid_zeros;
        }
        total += x;
      }
      if (mask[v] && total != 0.0) {
        s.worst_column_error = std::max(s.worst_column_error, std::abs(total - 1.0));
        if (std::abs(total - 1.0) > 1e-5) ++s.violations;
      }
    }
    ++s.draws;
    if (zero) ++s.draws_with_zero;
  }
  return s;
}

Outcome adjacency_invariants(AdjacencyMode mode) {
  const AdjacencyStats s = adjacency_draws(mode, 1000, mode == AdjacencyMode::kReluMean ? 21 : 22);
  const double zero_rate = static_cast<double>(s.draws_with_zero) / static_cast<double>(s.draws);
  bool pass = s.violations == 0 && s.draws >= 1000;
  std::string detail = std::to_string(s.draws) + " draws, " + std::to_string(s.violations) +
                       " invariant violations, worst |colsum-1| " + fmt("%.2e", s.worst_column_error);
  if (mode == AdjacencyMode::kReluMean) {
    pass = pass && zero_rate >= 0.99;
    detail += ", draws with an exact zero " + fmt("%.1f%%", 100.0 * zero_rate) + " (>= 99%)";
  } else {
    pass = pass && s.valid_zeros == 0;
    detail += ", zeros on valid entries " + std::to_string(s.valid_zeros);
  }
  return {pass, detail};
}

Outcome identity_case() {
  Rng rng(31);
  bool bitwise = true;
  std::size_t checked = 0;
  for (std::size_t n : {1u, 3u, 7u}) {
    for (std::size_t d : {1u, 4u, 9u}) {
      Tensor<double> z = random_tensor({n, d}, rng, 3.0);
      Tensor<double> eye({n, n}, 0.0);
      for (std::size_t i = 0; i < n; ++i) eye(i, i) = 1.0;
      GcnHeadParams<double> head{Tensor<double>({d, d}, 0.0), Tensor<double>({d}, 0.0), ad::Activation::kIdentity};
      for (std::size_t i = 0; i < d; ++i) head.weight(i, i) = 1.0;
      Tape<double> tape;
      const Tensor<double> y = gcn_propagate(tape.constant(z), tape.constant(eye), head).value();
      for (std::size_t i = 0; i < z.size(); ++i) bitwise = bitwise && y[i] == z[i];
      checked += z.size();
    }
  }
  return {bitwise, std::to_string(checked) + " values, bitwise equal: " + (bitwise ? "yes" : "no")};
}

Outcome brute_force_equivalence() {
  Rng rng(41);
  double worst = 0.0;
  std::size_t cases = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 25; ++trial) {
      for (auto mode : {AdjacencyMode::kReluMean, AdjacencyMode::kSoftmax}) {
        const std::size_t heads = 1 + rng.index(3);
        auto layer = random_layer(6, heads, rng);
        Tensor<double> z = random_tensor({n, 6}, rng);
        const auto mask = testing::full_mask(n);
        Tape<double> tape;
        const auto out = sgcn_layer(tape.constant(z), layer, mask, mode);
        const auto ref = oracle::sgcn_layer(oracle::to_matrix(z), layer, mask, mode);
        worst = std::max(worst, oracle::max_abs_diff(oracle::to_matrix(out.output.value()), ref.output));
        for (std::size_t h = 0; h < layer.heads(); ++h) {
          worst = std::max(worst,
                           oracle::max_abs_diff(oracle::to_matrix(out.adjacency[h].value()), ref.adjacency[h]));
        }
        ++cases;
      }
    }
  }
  return {worst < 1e-10, std::to_string(cases) + " cases over n in {1,2,3,4}, max abs diff " + fmt("%.2e", worst) +
                             " (< 1e-10)"};
}

Outcome permutation_equivariance() {
  Rng rng(51);
  double worst = 0.0;
  std::size_t cases = 0;
  for (int trial = 0; trial < 50; ++trial) {
    for (auto mode : {AdjacencyMode::kReluMean, AdjacencyMode::kSoftmax}) {
      const std::size_t n = 2 + rng.index(9);
      auto layer = random_layer(8, 2, rng);
      Tensor<double> z = random_tensor({n, 8}, rng);
      std::vector<std::uint8_t> mask(n, 1);
      if (n > 3) mask[rng.index(n)] = 0;
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      rng.shuffle(perm.begin(), perm.end());
      // Row i of the permuted input is row perm[i] of the original.
      Tensor<double> zp({n, 8});
      std::vector<std::uint8_t> mp(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < 8; ++c) zp(i, c) = z(perm[i], c);
        mp[i] = mask[perm[i]];
      }
      Tape<double> tape;
      const auto a = sgcn_layer(tape.constant(z), layer, mask, mode);
      const auto b = sgcn_layer(tape.constant(zp), layer, mp, mode);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < 8; ++c) {
          worst = std::max(worst, std::abs(b.output.value()(i, c) - a.output.value()(perm[i], c)));
        }
        for (std::size_t h = 0; h < 2; ++h) {
          for (std::size_t j = 0; j < n; ++j) {
            worst = std::max(worst,
                             std::abs(b.adjacency[h].value()(i, j) - a.adjacency[h].value()(perm[i], perm[j])));
          }
        }
      }
      ++cases;
    }
  }
  return {worst < 1e-6, std::to_string(cases) + " random permutations, max abs diff " + fmt("%.2e", worst) +
                            " (< 1e-6)"};
}

Outcome synthetic_learnability(AdjacencyMode mode) {
  const RunResult& r = synthetic_run(mode, "", 1);
  const double best = r.result.best.state.best_dev_f1;
  const bool pass = r.first_epoch_at_target.has_value() && *r.first_epoch_at_target <= 30 && r.seconds < 300.0;
  std::string detail = "best dev F1 " + fmt("%.4f", best) + " (>= 0.90)";
  detail += r.first_epoch_at_target ? ", first reached at epoch " + std::to_string(*r.first_epoch_at_target)
                                    : std::string(", never reached");
  detail += " (<= 30), " + std::to_string(r.result.log.size()) + " epochs in " + fmt("%.1f s", r.seconds) +
            " (< 300 s)";
  return {pass, detail};
}

Outcome ablation_direction() {
  double full = 0.0, no_sgcn = 0.0, no_agg = 0.0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    full += synthetic_run(AdjacencyMode::kReluMean, "", seed).test_f1 / 3.0;
    no_sgcn += synthetic_run(AdjacencyMode::kReluMean, "no_sgcn", seed).test_f1 / 3.0;
    no_agg += synthetic_run(AdjacencyMode::kReluMean, "no_layer_agg", seed).test_f1 / 3.0;
  }
  const bool pass = full >= no_sgcn && no_agg <= full;
  return {pass, "mean test F1 over seeds {1,2,3}: full " + fmt("%.4f", full) + ", no_sgcn " + fmt("%.4f", no_sgcn) +
                    ", no_layer_agg " + fmt("%.4f", no_agg)};
}

Outcome scorer_oracle() {
  Rng rng(81);
  std::size_t mismatches = 0;
  for (int k = 0; k < 10000; ++k) {
    const std::size_t n = rng.index(60);
    const std::size_t labels = 1 + rng.index(6);
    std::vector<std::size_t> gold(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      gold[i] = rng.index(labels);
      pred[i] = rng.index(labels);
    }
    const auto r = eval::micro_prf(gold, pred, 0);
    const auto o = oracle::micro_prf(gold, pred, 0);
    if (r.precision != o.precision || r.recall != o.recall || r.f1 != o.f1 || r.correct != o.correct ||
        r.predicted != o.predicted || r.gold != o.gold) {
      ++mismatches;
    }
  }
  const std::vector<std::size_t> gold{1, 0, 2}, pred{1, 2, 0};
  const auto hand = eval::micro_prf(gold, pred, 0);
  const bool hand_ok = hand.precision == 0.5 && hand.recall == 0.5 && hand.f1 == 0.5;
  return {mismatches == 0 && hand_ok, "10000 random vectors, " + std::to_string(mismatches) +
                                          " mismatches; hand example P/R/F1 " + fmt("%.3f", hand.precision) + "/" +
                                          fmt("%.3f", hand.recall) + "/" + fmt("%.3f", hand.f1)};
}

Outcome checkpoint_round_trip() {
  const SyntheticTask& task = synthetic_task();
  const RunResult& r = synthetic_run(AdjacencyMode::kReluMean, "", 1);
  const std::vector<data::ProcessedExample> held_out(task.test.begin(), task.test.begin() + 100);
  const auto batches = data::make_batches(held_out, train::kEvalBatchSize, std::nullopt);

  SgcnModel<float> before(r.result.best.config, r.result.best.params);
  testing::TempDir dir("acceptance_ckpt");
  const auto path = dir / "model.ckpt";
  train::save_checkpoint(r.result.best, path);
  const auto loaded = train::load_checkpoint<float>(path);
  SgcnModel<float> after(loaded.config, loaded.params);

  std::size_t logits_equal = 0, labels_equal = 0, total = 0;
  for (const auto& b : batches) {
    const auto la = before.logits(b);
    const auto lb = after.logits(b);
    for (std::size_t i = 0; i < la.size(); ++i) {
      bool same = la[i].size() == lb[i].size();
      for (std::size_t j = 0; same && j < la[i].size(); ++j) {
        same = std::memcmp(&la[i][j], &lb[i][j], sizeof(float)) == 0;
      }
      logits_equal += same;
      ++total;
    }
  }
  const auto pa = before.predict(batches);
  const auto pb = after.predict(batches);
  for (std::size_t i = 0; i < pa.size(); ++i) labels_equal += pa[i] == pb[i];
  const bool pass = total == 100 && logits_equal == total && labels_equal == total;
  return {pass, std::to_string(total) + " held-out sentences, bitwise-equal logits " + std::to_string(logits_equal) +
                    ", equal predictions " + std::to_string(labels_equal)};
}

Outcome softmax_variant() {
  const Outcome c2 = adjacency_invariants(AdjacencyMode::kSoftmax);
  const Outcome c6 = synthetic_learnability(AdjacencyMode::kSoftmax);

  Rng rng(101);
  const std::size_t n = 6, d = 8;
  Tensor<double> z = random_tensor({n, d}, rng);
  AttentionHeadParams<double> head{random_tensor({d, d}, rng), random_tensor({d, d}, rng)};
  const auto mask = testing::full_mask(n);
  Tape<double> tape;
  const auto zv = tape.constant(z);
  const Tensor<double> relu = self_determined_adjacency(zv, head, mask, AdjacencyMode::kReluMean).value();
  const Tensor<double> soft = self_determined_adjacency(zv, head, mask, AdjacencyMode::kSoftmax).value();
  double diff = 0.0;
  for (std::size_t i = 0; i < relu.size(); ++i) diff = std::max(diff, std::abs(relu[i] - soft[i]));

  const bool pass = c2.pass && c6.pass && diff > 0.0;
  return {pass, std::string("invariants ") + (c2.pass ? "pass" : "FAIL") + " [" + c2.detail + "]; learnability " +
                    (c6.pass ? "pass" : "FAIL") + " [" + c6.detail + "]; probe max |relu-mean - softmax| " +
                    fmt("%.4f", diff) + " (> 0)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"gradient correctness", gradient_correctness},
      {"adjacency invariants", [] { return adjacency_invariants(AdjacencyMode::kReluMean); }},
      {"identity case", identity_case},
      {"brute-force equivalence", brute_force_equivalence},
      {"permutation equivariance", permutation_equivariance},
      {"synthetic learnability", [] { return synthetic_learnability(AdjacencyMode::kReluMean); }},
      {"ablation direction", ablation_direction},
      {"scorer oracle", scorer_oracle},
      {"checkpoint round-trip", checkpoint_round_trip},
      {"softmax variant", softmax_variant},
  };
  std::set<std::size_t> selected;
  for (int i = 1; i < argc; ++i) selected.insert(static_cast<std::size_t>(std::stoul(argv[i])));

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const std::size_t number = k + 1;
    if (!selected.empty() && !selected.count(number)) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", number, criteria[k].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
