#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "xauc/samples.hpp"

namespace xauc {

struct GroupMetric {
  std::string group;
  double value = 0.0;
  std::optional<double> se;
};

struct PairMetric {
  std::string pos_group;  // group supplying positives
  std::string neg_group;  // group supplying negatives
  double value = 0.0;
  std::optional<double> se;
};

/// The full per-dataset metric bundle: within-group AUCs, every ordered
/// cross pair, disparities, balanced variants, Brier scores, and optional
/// DeLong standard errors on each AUC-type entry. Brier entries are
/// present only when every score lies in [0, 1].
struct AuditReport {
  TiePolicy ties = TiePolicy::strict;
  double pooled_auc = 0.0;
  std::optional<double> pooled_auc_se;
  std::vector<GroupMetric> auc;        // within-group
  std::vector<PairMetric> xauc;        // ordered pairs, a != b
  std::vector<PairMetric> delta;       // unordered pairs, pos_group < neg_group
  std::vector<GroupMetric> xauc_pos;   // group positives vs pooled negatives
  std::vector<GroupMetric> xauc_neg;   // pooled positives vs group negatives
  std::vector<GroupMetric> brier;
  bool tie_discrepancy = false;

  /// Flat "metric:key" -> value view; aggregation and JSON use it.
  std::map<std::string, double> flatten() const;

  nlohmann::json to_json() const;
};

/// Computes every metric of the report from grouped scores. Standard
/// errors are DeLong estimates when with_se is set (cells need >= 2
/// samples each for that).
AuditReport audit(const GroupedScores& g, TiePolicy ties,
                  bool with_se = true);

}  // namespace xauc
