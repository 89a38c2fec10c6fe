#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace xauc {

/// Numeric tabular data with a binary label and a group attribute per row.
struct TabularDataset {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> features;  // row-major, n_rows * n_cols
  std::vector<int> labels;       // 0/1
  std::vector<std::string> groups;
  std::vector<std::string> feature_names;

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * n_cols, n_cols};
  }
};

enum class ScorerKind { logistic, rankboost, rankboost_calibrated };

const char* to_string(ScorerKind k);
ScorerKind scorer_kind_from_string(const std::string& s);

/// Single-feature threshold stump: emits 1 when the feature value is
/// above the threshold (below it when flipped), else 0.
struct Stump {
  std::size_t feature = 0;
  double threshold = 0.0;
  bool flipped = false;
  double alpha = 0.0;  // ensemble weight, >= 0

  double evaluate(std::span<const double> row) const {
    const bool above = row[feature] > threshold;
    return (above != flipped) ? 1.0 : 0.0;
  }
};

/// Sigmoid map s -> 1 / (1 + exp(-(slope * s + offset))); slope >= 0 so
/// the map is monotone and rank-preserving.
struct PlattCalibrator {
  double slope = 1.0;
  double offset = 0.0;
  // Set when the fitted slope came out nonpositive and the calibrator
  // fell back to the best constant prediction.
  bool degenerate = false;

  double operator()(double raw) const;
};

/// A trained risk score. Logistic models standardize features with the
/// stored per-feature location/scale before applying weights; RankBoost
/// models sum weighted stumps; the calibrated kind pushes the raw margin
/// through a Platt sigmoid.
struct Scorer {
  ScorerKind kind = ScorerKind::logistic;
  std::size_t n_features = 0;

  // logistic
  std::vector<double> weights;
  double intercept = 0.0;
  std::vector<double> feature_mean;
  std::vector<double> feature_scale;
  bool converged = true;
  int iterations = 0;

  // rankboost
  std::vector<Stump> stumps;
  std::optional<PlattCalibrator> calibrator;

  nlohmann::json to_json() const;
  static Scorer from_json(const nlohmann::json& j);
};

/// L2-penalized logistic regression via damped Newton iterations on
/// standardized features. The intercept is unpenalized. Non-convergence
/// within max_iter is recorded on the scorer, not an error.
Scorer train_logistic(const TabularDataset& data, double reg_strength = 1.0,
                      int max_iter = 100, double tol = 1e-8);

/// Bipartite RankBoost over threshold stumps. Candidate thresholds are
/// midpoints of consecutive distinct feature values; each round keeps the
/// stump with the largest weighted ranking edge (ties broken by lowest
/// feature index, then lowest threshold).
Scorer train_rankboost(const TabularDataset& data, int rounds = 100);

/// Fits a Platt sigmoid on raw scores with the smoothed targets
/// (n_pos+1)/(n_pos+2) and 1/(n_neg+2). Falls back to the best constant
/// (slope 0, flagged) if the fitted slope is nonpositive.
PlattCalibrator platt_scale(std::span<const double> raw_scores,
                            std::span<const int> labels, int max_iter = 100,
                            double tol = 1e-10);

/// Returns a copy of `base` (kind rankboost) upgraded to
/// rankboost_calibrated using its scores on `data`.
Scorer calibrate_rankboost(const Scorer& base, const TabularDataset& data);

double score_row(const Scorer& model, std::span<const double> row);

/// Scores every row; DimensionMismatch when widths disagree.
std::vector<double> score(const Scorer& model, const TabularDataset& data);

}  // namespace xauc
