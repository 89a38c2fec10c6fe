#include "xauc/samples.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "xauc/errors.hpp"

namespace xauc {

void GroupedScores::add_cell(const std::string& group, int outcome,
                             std::vector<double> scores) {
  std::sort(scores.begin(), scores.end());
  auto& cell = cells_[{group, outcome}];
  if (cell.empty()) {
    cell = std::move(scores);
  } else {
    cell.insert(cell.end(), scores.begin(), scores.end());
    std::inplace_merge(cell.begin(), cell.end() - scores.size(), cell.end());
  }
}

bool GroupedScores::has_cell(const std::string& group, int outcome) const {
  auto it = cells_.find({group, outcome});
  return it != cells_.end() && !it->second.empty();
}

const std::vector<double>& GroupedScores::cell(const std::string& group,
                                               int outcome) const {
  auto it = cells_.find({group, outcome});
  if (it == cells_.end() || it->second.empty()) {
    throw MissingCell("no samples in cell (group=" + group +
                      ", outcome=" + std::to_string(outcome) + ")");
  }
  return it->second;
}

std::size_t GroupedScores::count(const std::string& group,
                                 int outcome) const {
  auto it = cells_.find({group, outcome});
  return it == cells_.end() ? 0 : it->second.size();
}

std::vector<std::string> GroupedScores::groups() const {
  std::set<std::string> names;
  for (const auto& [key, cell] : cells_) names.insert(key.first);
  return {names.begin(), names.end()};
}

std::vector<double> GroupedScores::pooled(int outcome) const {
  std::vector<double> out;
  for (const auto& [key, cell] : cells_) {
    if (key.second != outcome) continue;
    const std::size_t old = out.size();
    out.insert(out.end(), cell.begin(), cell.end());
    std::inplace_merge(out.begin(), out.begin() + old, out.end());
  }
  return out;
}

std::size_t GroupedScores::total_count() const {
  std::size_t n = 0;
  for (const auto& [key, cell] : cells_) n += cell.size();
  return n;
}

GroupedScores build_grouped(std::span<const ScoredSample> samples) {
  if (samples.empty()) {
    throw EmptyInput("build_grouped: no samples");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].score)) {
      throw NonFiniteScore("build_grouped: non-finite score at index " +
                           std::to_string(i));
    }
  }
  std::map<std::pair<std::string, int>, std::vector<double>> buckets;
  for (const auto& s : samples) {
    buckets[{s.group, s.outcome}].push_back(s.score);
  }
  GroupedScores out;
  for (auto& [key, scores] : buckets) {
    out.add_cell(key.first, key.second, std::move(scores));
  }
  return out;
}

}  // namespace xauc
