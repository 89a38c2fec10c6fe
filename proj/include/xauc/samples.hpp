#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace xauc {

/// One individual's (risk score, binary outcome, group attribute) triple.
struct ScoredSample {
  double score = 0.0;
  int outcome = 0;  // 0 or 1
  std::string group;
};

/// Convention for tied score pairs in pair counting: strict counts a tie
/// as 0 (the plain indicator estimator), half counts it as 1/2 (the
/// classical AUC convention; curve areas use this one).
enum class TiePolicy { strict, half };

inline const char* to_string(TiePolicy t) {
  return t == TiePolicy::strict ? "strict" : "half";
}

/// Score vectors partitioned by (group, outcome), each sorted ascending.
/// This is the empirical model of R | Y=y, A=a that every metric
/// consumes.
class GroupedScores {
 public:
  GroupedScores() = default;

  /// Moves `scores` into cell (group, outcome), sorting it.
  void add_cell(const std::string& group, int outcome,
                std::vector<double> scores);

  bool has_cell(const std::string& group, int outcome) const;

  /// Sorted ascending. Throws MissingCell if the cell is absent or empty.
  const std::vector<double>& cell(const std::string& group,
                                  int outcome) const;

  std::size_t count(const std::string& group, int outcome) const;

  /// Group names in lexicographic order.
  std::vector<std::string> groups() const;

  /// All groups' outcome-y scores merged into one sorted vector.
  std::vector<double> pooled(int outcome) const;

  std::size_t total_count() const;

 private:
  // Cell key (group, outcome); map keeps iteration deterministic.
  std::map<std::pair<std::string, int>, std::vector<double>> cells_;
};

/// Partitions samples into per-(group, outcome) sorted cells.
/// Throws EmptyInput on no samples and NonFiniteScore (with the offending
/// index) on NaN/infinite scores.
GroupedScores build_grouped(std::span<const ScoredSample> samples);

}  // namespace xauc
