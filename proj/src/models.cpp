#include "xauc/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "xauc/errors.hpp"

namespace xauc {

const char* to_string(ScorerKind k) {
  switch (k) {
    case ScorerKind::logistic:
      return "logistic";
    case ScorerKind::rankboost:
      return "rankboost";
    case ScorerKind::rankboost_calibrated:
      return "rankboost_calibrated";
  }
  return "logistic";
}

ScorerKind scorer_kind_from_string(const std::string& s) {
  if (s == "logistic") return ScorerKind::logistic;
  if (s == "rankboost") return ScorerKind::rankboost;
  if (s == "rankboost_calibrated" || s == "rankboost-cal") {
    return ScorerKind::rankboost_calibrated;
  }
  throw std::invalid_argument("unknown scorer kind: " + s);
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  if (z > 35.0) return z;
  if (z < -35.0) return 0.0;
  return std::log1p(std::exp(z));
}

void require_both_classes(std::span<const int> labels,
                          const std::string& who) {
  const bool has_pos =
      std::find(labels.begin(), labels.end(), 1) != labels.end();
  const bool has_neg =
      std::find(labels.begin(), labels.end(), 0) != labels.end();
  if (!has_pos || !has_neg) {
    throw SingleClassData(who + ": training data contains a single class");
  }
}

}  // namespace

double PlattCalibrator::operator()(double raw) const {
  return sigmoid(slope * raw + offset);
}

Scorer train_logistic(const TabularDataset& data, double reg_strength,
                      int max_iter, double tol) {
  require_both_classes(data.labels, "train_logistic");
  if (!(reg_strength > 0.0)) {
    throw std::invalid_argument("train_logistic: reg_strength must be > 0");
  }
  const auto n = static_cast<Eigen::Index>(data.n_rows);
  const auto p = static_cast<Eigen::Index>(data.n_cols);

  Scorer model;
  model.kind = ScorerKind::logistic;
  model.n_features = data.n_cols;
  model.feature_mean.assign(data.n_cols, 0.0);
  model.feature_scale.assign(data.n_cols, 1.0);

  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      raw(data.features.data(), n, p);

  // Standardize to zero mean / unit variance; constant columns get scale
  // 1 and contribute nothing after centering.
  Eigen::MatrixXd x(n, p + 1);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double mean = raw.col(j).mean();
    const double var = (raw.col(j).array() - mean).square().mean();
    const double scale = var > 0.0 ? std::sqrt(var) : 1.0;
    model.feature_mean[j] = mean;
    model.feature_scale[j] = scale;
    x.col(j) = (raw.col(j).array() - mean) / scale;
  }
  x.col(p).setOnes();

  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = data.labels[i];

  // Ridge on the weights only, never the intercept.
  Eigen::VectorXd penalty = Eigen::VectorXd::Constant(p + 1, reg_strength);
  penalty[p] = 0.0;

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p + 1);

  auto loss_at = [&](const Eigen::VectorXd& b, Eigen::VectorXd& z) {
    z.noalias() = x * b;
    double nll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      nll += softplus(z[i]) - y[i] * z[i];
    }
    return nll + 0.5 * (penalty.array() * b.array().square()).sum();
  };

  Eigen::VectorXd z(n), prob(n), grad(p + 1), step(p + 1);
  double loss = loss_at(beta, z);
  model.converged = false;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    for (Eigen::Index i = 0; i < n; ++i) prob[i] = sigmoid(z[i]);
    grad.noalias() = x.transpose() * (prob - y);
    grad += penalty.asDiagonal() * beta;
    if (grad.lpNorm<Eigen::Infinity>() < tol) {
      model.converged = true;
      break;
    }

    Eigen::VectorXd w = (prob.array() * (1.0 - prob.array()))
                            .max(1e-10)
                            .sqrt()
                            .matrix();
    Eigen::MatrixXd wx = w.asDiagonal() * x;
    Eigen::MatrixXd hess(p + 1, p + 1);
    hess.setZero();
    hess.selfadjointView<Eigen::Lower>().rankUpdate(wx.transpose());
    hess += Eigen::MatrixXd(penalty.asDiagonal());
    step = hess.selfadjointView<Eigen::Lower>().ldlt().solve(grad);

    // Damped update: halve the step until the penalized loss decreases.
    double scale = 1.0;
    Eigen::VectorXd candidate;
    double candidate_loss = loss;
    for (int halving = 0; halving < 40; ++halving) {
      candidate = beta - scale * step;
      candidate_loss = loss_at(candidate, z);
      if (candidate_loss <= loss) break;
      scale *= 0.5;
    }
    if (candidate_loss > loss) {
      break;  // no descent direction left at this precision
    }
    beta = candidate;
    loss = candidate_loss;
  }
  model.iterations = iter;
  model.weights.assign(beta.data(), beta.data() + p);
  model.intercept = beta[p];
  return model;
}

namespace {

struct StumpCandidate {
  double edge = 0.0;  // |r|
  double signed_edge = 0.0;
  double threshold = 0.0;
  bool valid = false;
};

}  // namespace

Scorer train_rankboost(const TabularDataset& data, int rounds) {
  require_both_classes(data.labels, "train_rankboost");
  if (rounds < 1) {
    throw std::invalid_argument("train_rankboost: rounds must be >= 1");
  }
  const std::size_t n = data.n_rows;
  const std::size_t p = data.n_cols;

  // Per-feature sample order, descending feature value, precomputed once.
  std::vector<std::vector<std::uint32_t>> order(p);
  for (std::size_t f = 0; f < p; ++f) {
    auto& idx = order[f];
    idx.resize(n);
    std::iota(idx.begin(), idx.end(), 0u);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       return data.features[a * p + f] >
                              data.features[b * p + f];
                     });
  }

  // Bipartite factorization: one weight per positive and one per
  // negative; the pair distribution is their product.
  std::size_t n_pos = 0;
  for (int y : data.labels) n_pos += y;
  const std::size_t n_neg = n - n_pos;
  std::vector<double> weight(n);
  for (std::size_t i = 0; i < n; ++i) {
    weight[i] = data.labels[i] == 1 ? 1.0 / static_cast<double>(n_pos)
                                    : 1.0 / static_cast<double>(n_neg);
  }

  Scorer model;
  model.kind = ScorerKind::rankboost;
  model.n_features = p;

  for (int round = 0; round < rounds; ++round) {
    // Best stump per feature, then across features; the double loop keeps
    // ties deterministic (lowest feature, then lowest threshold).
    std::size_t best_feature = 0;
    StumpCandidate best;
    for (std::size_t f = 0; f < p; ++f) {
      StumpCandidate cand;
      double pos_above = 0.0;
      double neg_above = 0.0;
      const auto& idx = order[f];
      for (std::size_t k = 0; k < n; ++k) {
        const std::uint32_t i = idx[k];
        const double v = data.features[i * p + f];
        if (data.labels[i] == 1) {
          pos_above += weight[i];
        } else {
          neg_above += weight[i];
        }
        // Candidate threshold only at a boundary between distinct values.
        if (k + 1 < n) {
          const double next = data.features[idx[k + 1] * p + f];
          if (next == v) continue;
          const double r = pos_above - neg_above;
          if (!cand.valid || std::abs(r) >= cand.edge) {
            cand = {std::abs(r), r, 0.5 * (v + next), true};
          }
        }
      }
      if (cand.valid && (!best.valid || cand.edge > best.edge)) {
        best = cand;
        best_feature = f;
      }
    }
    if (!best.valid || best.edge <= 0.0) break;  // nothing left to rank

    // Orient the stump so its edge is nonnegative; cap r away from +/-1
    // so alpha stays finite on separable data.
    const bool flipped = best.signed_edge < 0.0;
    const double r = std::min(best.edge, 1.0 - 1e-12);
    const double alpha = 0.5 * std::log((1.0 + r) / (1.0 - r));
    Stump stump{best_feature, best.threshold, flipped, alpha};
    model.stumps.push_back(stump);

    double z_pos = 0.0;
    double z_neg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double h = stump.evaluate(data.row(i));
      if (data.labels[i] == 1) {
        weight[i] *= std::exp(-alpha * h);
        z_pos += weight[i];
      } else {
        weight[i] *= std::exp(alpha * h);
        z_neg += weight[i];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      weight[i] /= data.labels[i] == 1 ? z_pos : z_neg;
    }
  }
  return model;
}

PlattCalibrator platt_scale(std::span<const double> raw_scores,
                            std::span<const int> labels, int max_iter,
                            double tol) {
  if (raw_scores.size() != labels.size()) {
    throw LengthMismatch("platt_scale: size mismatch");
  }
  require_both_classes(labels, "platt_scale");

  const std::size_t n = raw_scores.size();
  std::size_t n_pos = 0;
  for (int y : labels) n_pos += y;
  const std::size_t n_neg = n - n_pos;

  // Smoothed targets regularize the fit near separable data.
  const double hi = (static_cast<double>(n_pos) + 1.0) /
                    (static_cast<double>(n_pos) + 2.0);
  const double lo = 1.0 / (static_cast<double>(n_neg) + 2.0);
  std::vector<double> target(n);
  for (std::size_t i = 0; i < n; ++i) target[i] = labels[i] == 1 ? hi : lo;

  auto objective = [&](double a, double b) {
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = a * raw_scores[i] + b;
      f += softplus(z) - target[i] * z;
    }
    return f;
  };

  double slope = 0.0;
  double offset = std::log((static_cast<double>(n_pos) + 1.0) /
                           (static_cast<double>(n_neg) + 1.0));
  double f = objective(slope, offset);
  for (int iter = 0; iter < max_iter; ++iter) {
    double ga = 0.0, gb = 0.0, haa = 1e-12, hab = 0.0, hbb = 1e-12;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = slope * raw_scores[i] + offset;
      const double prob = sigmoid(z);
      const double d = prob - target[i];
      const double w = std::max(prob * (1.0 - prob), 1e-12);
      ga += d * raw_scores[i];
      gb += d;
      haa += w * raw_scores[i] * raw_scores[i];
      hab += w * raw_scores[i];
      hbb += w;
    }
    if (std::abs(ga) < tol && std::abs(gb) < tol) break;
    const double det = haa * hbb - hab * hab;
    double da = (hbb * ga - hab * gb) / det;
    double db = (haa * gb - hab * ga) / det;
    double scale = 1.0;
    double f_new = f;
    for (int halving = 0; halving < 40; ++halving) {
      f_new = objective(slope - scale * da, offset - scale * db);
      if (f_new <= f) break;
      scale *= 0.5;
    }
    if (f_new > f) break;
    slope -= scale * da;
    offset -= scale * db;
    f = f_new;
  }

  PlattCalibrator cal{slope, offset, false};
  if (!(slope > 0.0)) {
    // Anti-monotone or flat fit: fall back to the best constant.
    const double t =
        std::accumulate(target.begin(), target.end(), 0.0) /
        static_cast<double>(n);
    cal.slope = 0.0;
    cal.offset = std::log(t / (1.0 - t));
    cal.degenerate = true;
  }
  return cal;
}

Scorer calibrate_rankboost(const Scorer& base, const TabularDataset& data) {
  if (base.kind != ScorerKind::rankboost) {
    throw std::invalid_argument(
        "calibrate_rankboost: base model must be a raw rankboost scorer");
  }
  const std::vector<double> raw = score(base, data);
  Scorer out = base;
  out.kind = ScorerKind::rankboost_calibrated;
  out.calibrator = platt_scale(raw, data.labels);
  return out;
}

double score_row(const Scorer& model, std::span<const double> row) {
  if (row.size() != model.n_features) {
    throw DimensionMismatch("score: row has " + std::to_string(row.size()) +
                            " features, model expects " +
                            std::to_string(model.n_features));
  }
  switch (model.kind) {
    case ScorerKind::logistic: {
      double z = model.intercept;
      for (std::size_t j = 0; j < row.size(); ++j) {
        z += model.weights[j] * (row[j] - model.feature_mean[j]) /
             model.feature_scale[j];
      }
      return sigmoid(z);
    }
    case ScorerKind::rankboost:
    case ScorerKind::rankboost_calibrated: {
      double margin = 0.0;
      for (const auto& stump : model.stumps) {
        margin += stump.alpha * stump.evaluate(row);
      }
      if (model.kind == ScorerKind::rankboost) return margin;
      return (*model.calibrator)(margin);
    }
  }
  return 0.0;
}

std::vector<double> score(const Scorer& model, const TabularDataset& data) {
  if (data.n_cols != model.n_features) {
    throw DimensionMismatch("score: dataset has " +
                            std::to_string(data.n_cols) +
                            " features, model expects " +
                            std::to_string(model.n_features));
  }
  std::vector<double> out(data.n_rows);
  for (std::size_t i = 0; i < data.n_rows; ++i) {
    out[i] = score_row(model, data.row(i));
  }
  return out;
}

nlohmann::json Scorer::to_json() const {
  nlohmann::json j;
  j["version"] = 1;
  j["kind"] = xauc::to_string(kind);
  j["n_features"] = n_features;
  if (kind == ScorerKind::logistic) {
    j["weights"] = weights;
    j["intercept"] = intercept;
    j["feature_mean"] = feature_mean;
    j["feature_scale"] = feature_scale;
    j["converged"] = converged;
    j["iterations"] = iterations;
  } else {
    auto& stumps_json = j["stumps"] = nlohmann::json::array();
    for (const auto& s : stumps) {
      stumps_json.push_back({{"feature", s.feature},
                             {"threshold", s.threshold},
                             {"flipped", s.flipped},
                             {"alpha", s.alpha}});
    }
    if (calibrator) {
      j["calibrator"] = {{"slope", calibrator->slope},
                         {"offset", calibrator->offset},
                         {"degenerate", calibrator->degenerate}};
    }
  }
  return j;
}

Scorer Scorer::from_json(const nlohmann::json& j) {
  if (j.at("version").get<int>() != 1) {
    throw std::invalid_argument("Scorer::from_json: unsupported version");
  }
  Scorer model;
  model.kind = scorer_kind_from_string(j.at("kind").get<std::string>());
  model.n_features = j.at("n_features").get<std::size_t>();
  if (model.kind == ScorerKind::logistic) {
    model.weights = j.at("weights").get<std::vector<double>>();
    model.intercept = j.at("intercept").get<double>();
    model.feature_mean = j.at("feature_mean").get<std::vector<double>>();
    model.feature_scale = j.at("feature_scale").get<std::vector<double>>();
    model.converged = j.at("converged").get<bool>();
    model.iterations = j.at("iterations").get<int>();
  } else {
    for (const auto& s : j.at("stumps")) {
      model.stumps.push_back({s.at("feature").get<std::size_t>(),
                              s.at("threshold").get<double>(),
                              s.at("flipped").get<bool>(),
                              s.at("alpha").get<double>()});
    }
    if (j.contains("calibrator")) {
      const auto& c = j.at("calibrator");
      model.calibrator = PlattCalibrator{c.at("slope").get<double>(),
                                         c.at("offset").get<double>(),
                                         c.at("degenerate").get<bool>()};
    }
  }
  return model;
}

}  // namespace xauc
