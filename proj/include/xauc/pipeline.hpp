#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "xauc/curves.hpp"
#include "xauc/models.hpp"
#include "xauc/report.hpp"
#include "xauc/samples.hpp"

namespace xauc {

/// How to read a CSV into a TabularDataset: which column is the label,
/// which the group attribute, and which label value maps to Y=1. Every
/// other column must be numeric and becomes a feature.
struct ColumnRoles {
  std::string label_col;
  std::string group_col;
  std::string positive_label;
  // When set, the group attribute also enters the feature matrix as a
  // single integer-coded column; by default it is carried for auditing
  // only.
  bool group_as_feature = false;
};

/// Parses a headered CSV. Throws FileNotFound, MissingColumn, or
/// NonNumericFeature (naming the offending row/column).
TabularDataset load_dataset(const std::filesystem::path& path,
                            const ColumnRoles& roles);

/// Seeded uniform permutation, then prefix split. Deterministic; throws
/// DegenerateSplit when either side would be empty.
std::pair<TabularDataset, TabularDataset> split(const TabularDataset& data,
                                                double fraction,
                                                std::uint64_t seed);

struct ExperimentConfig {
  std::filesystem::path data_path;
  ColumnRoles roles;
  std::string model = "logistic";  // logistic | rankboost | rankboost-cal
  double train_fraction = 0.70;
  int n_runs = 50;
  std::uint64_t base_seed = 0;
  TiePolicy ties = TiePolicy::strict;
  int fpr_grid_size = 200;
  int rankboost_rounds = 100;
  int workers = 1;  // never affects results, only wall time
};

/// Mean curve on a common FPR grid with a pointwise standard error of the
/// mean across runs.
struct GriddedCurve {
  std::vector<double> fpr;
  std::vector<double> tpr_mean;
  std::vector<double> tpr_se;
  // Largest correction the isotonic clip applied to the mean (0 in
  // practice; interpolated means of monotone curves stay monotone).
  double isotonic_adjustment = 0.0;
};

/// Interpolates each curve onto the grid (linear between vertices, flat
/// extension at the ends) and averages pointwise.
GriddedCurve average_curves(std::span<const CurveSeries> curves,
                            std::span<const double> fpr_grid);

struct AggregateMetric {
  double mean = 0.0;
  double se_across_runs = 0.0;
  std::optional<double> mean_delong_se;
};

/// Everything the repeated-split protocol produces. Conditional
/// accuracies and raw score samples come from run 0, the designated
/// representative split.
struct ExperimentResult {
  std::vector<AuditReport> runs;
  std::map<std::string, AggregateMetric> aggregate;  // keyed like flatten()
  std::map<std::string, GriddedCurve> curves;
  // key "a|b": (negative's score, conditional accuracy) per instance
  std::map<std::string, std::vector<std::array<double, 2>>> conditional;
  // key "group|outcome": raw test scores
  std::map<std::string, std::vector<double>> score_samples;

  nlohmann::json report_json(const ExperimentConfig& config) const;

  /// Writes report.json plus curves/, conditional/, and scores/ CSV
  /// trees. Byte-identical for identical configs regardless of the
  /// worker count.
  void write(const ExperimentConfig& config,
             const std::filesystem::path& out_dir) const;
};

/// Runs the full split/train/score/audit protocol n_runs times. A run
/// that fails (for example a test split missing a (group, outcome) cell)
/// aborts the experiment, naming the run index.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace xauc
