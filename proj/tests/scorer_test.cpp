#include <gtest/gtest.h>

#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "sgcn/eval/scorer.hpp"
#include "sgcn/random.hpp"

namespace sgcn::eval {
namespace {

constexpr std::size_t kNone = 0;

TEST(Scorer, AllNoRelationPredictionsScoreZero) {
  std::vector<std::size_t> gold{1, 2, 0, 3};
  std::vector<std::size_t> pred(4, kNone);
  auto r = micro_prf(gold, pred, kNone);
  EXPECT_EQ(r.precision, 0.0);
  EXPECT_EQ(r.recall, 0.0);
  EXPECT_EQ(r.f1, 0.0);
}

TEST(Scorer, HandExampleGivesOneHalf) {
  std::vector<std::size_t> gold{1, kNone, 2};
  std::vector<std::size_t> pred{1, 2, kNone};
  auto r = micro_prf(gold, pred, kNone);
  EXPECT_DOUBLE_EQ(r.precision, 0.5);
  EXPECT_DOUBLE_EQ(r.recall, 0.5);
  EXPECT_DOUBLE_EQ(r.f1, 0.5);
}

TEST(Scorer, PerfectPredictionScoresOne) {
  std::vector<std::size_t> gold{1, 0, 2, 2};
  auto r = micro_prf(gold, gold, kNone);
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.recall, 1.0);
  EXPECT_EQ(r.f1, 1.0);
}

TEST(Scorer, LengthMismatchThrows) {
  std::vector<std::size_t> a{1, 2}, b{1};
  EXPECT_THROW(micro_prf(a, b, kNone), std::invalid_argument);
}

TEST(Scorer, MatchesBruteForceAndPerRelationTotals) {
  Rng rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = rng.index(40);
    const std::size_t labels = 1 + rng.index(5);
    std::vector<std::size_t> gold(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      gold[i] = rng.index(labels);
      pred[i] = rng.index(labels);
    }
    const auto r = micro_prf(gold, pred, kNone);
    const auto o = oracle::micro_prf(gold, pred, kNone);
    ASSERT_EQ(r.precision, o.precision);
    ASSERT_EQ(r.recall, o.recall);
    ASSERT_EQ(r.f1, o.f1);
    std::size_t correct = 0, predicted = 0, gold_total = 0;
    for (const auto& [label, c] : r.per_relation) {
      EXPECT_NE(label, kNone);
      correct += c.correct;
      predicted += c.predicted;
      gold_total += c.gold;
    }
    EXPECT_EQ(correct, r.correct);
    EXPECT_EQ(predicted, r.predicted);
    EXPECT_EQ(gold_total, r.gold);
  }
}

TEST(Scorer, JointPermutationLeavesReportUnchanged) {
  Rng rng(2);
  std::vector<std::size_t> gold(50), pred(50);
  for (std::size_t i = 0; i < 50; ++i) {
    gold[i] = rng.index(4);
    pred[i] = rng.index(4);
  }
  std::vector<std::size_t> order(50);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order.begin(), order.end());
  std::vector<std::size_t> g2, p2;
  for (std::size_t i : order) {
    g2.push_back(gold[i]);
    p2.push_back(pred[i]);
  }
  const auto a = micro_prf(gold, pred, kNone);
  const auto b = micro_prf(g2, p2, kNone);
  EXPECT_EQ(a.f1, b.f1);
  EXPECT_EQ(a.per_relation, b.per_relation);
}

TEST(Scorer, RelabelingNoRelationPredictionsNeverRaisesScores) {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.index(30);
    std::vector<std::size_t> gold(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      gold[i] = rng.index(4);
      pred[i] = rng.index(4);
    }
    std::vector<std::size_t> worse = pred;
    for (std::size_t i = 0; i < n; ++i) {
      if (worse[i] != kNone || !rng.bernoulli(0.5)) continue;
      // A wrong, non-negative label.
      std::size_t label = 1 + rng.index(3);
      if (label == gold[i]) label = label % 3 + 1;
      worse[i] = label;
    }
    const auto before = micro_prf(gold, pred, kNone);
    const auto after = micro_prf(gold, worse, kNone);
    EXPECT_LE(after.precision, before.precision);
    EXPECT_LE(after.recall, before.recall);
  }
}

TEST(Scorer, ReportFormat) {
  std::vector<std::size_t> gold{1, 2, 0};
  std::vector<std::size_t> pred{1, 1, 0};
  const std::string text = format_report(micro_prf(gold, pred, kNone), {"no_relation", "r:a", "r:b"});
  EXPECT_EQ(text, "P\tR\tF1\n50.0\t50.0\t50.0\nr:a\t1\t2\t1\nr:b\t1\t0\t0\n");
  EXPECT_EQ(percent(0.678), "67.8");
  EXPECT_EQ(percent(0.0), "0.0");
}

}  // namespace
}  // namespace sgcn::eval
