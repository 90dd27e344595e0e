#include "sgcn/eval/scorer.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace sgcn::eval {

ScoreReport micro_prf(std::span<const std::size_t> gold, std::span<const std::size_t> pred,
                      std::size_t no_relation) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("micro_prf: " + std::to_string(gold.size()) + " gold labels vs " +
                                std::to_string(pred.size()) + " predictions");
  }
  ScoreReport r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] != no_relation) {
      ++r.gold;
      ++r.per_relation[gold[i]].gold;
    }
    if (pred[i] != no_relation) {
      ++r.predicted;
      ++r.per_relation[pred[i]].predicted;
      if (pred[i] == gold[i]) {
        ++r.correct;
        ++r.per_relation[pred[i]].correct;
      }
    }
  }
  r.precision = r.predicted ? static_cast<double>(r.correct) / static_cast<double>(r.predicted) : 0.0;
  r.recall = r.gold ? static_cast<double>(r.correct) / static_cast<double>(r.gold) : 0.0;
  r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * fraction);
  return buf;
}

std::string format_report(const ScoreReport& report, const std::vector<std::string>& label_names) {
  std::ostringstream os;
  os << "P\tR\tF1\n";
  os << percent(report.precision) << '\t' << percent(report.recall) << '\t' << percent(report.f1) << '\n';
  for (const auto& [label, c] : report.per_relation) {
    const std::string name = label < label_names.size() ? label_names[label] : std::to_string(label);
    os << name << '\t' << c.gold << '\t' << c.predicted << '\t' << c.correct << '\n';
  }
  return os.str();
}

}  // namespace sgcn::eval
