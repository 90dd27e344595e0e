#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace sgcn::eval {

struct RelationCounts {
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t correct = 0;
  friend bool operator==(const RelationCounts&, const RelationCounts&) = default;
};

/// Micro-averaged scores with the no-relation label treated as negative.
struct ScoreReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t correct = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
  // Keyed by label id; the no-relation label is never a key.
  std::map<std::size_t, RelationCounts> per_relation;
};

// Throws std::invalid_argument when the lists differ in length.
ScoreReport micro_prf(std::span<const std::size_t> gold, std::span<const std::size_t> pred,
                      std::size_t no_relation);

/// "P\tR\tF1" header, then the percentages with one decimal, then one
/// "relation\tgold\tpredicted\tcorrect" line per relation.
std::string format_report(const ScoreReport& report, const std::vector<std::string>& label_names);

// Percentage with one decimal, e.g. 0.678 -> "67.8".
std::string percent(double fraction);

}  // namespace sgcn::eval
