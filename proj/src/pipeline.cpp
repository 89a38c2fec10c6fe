#include "xauc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "xauc/errors.hpp"
#include "xauc/metrics.hpp"
#include "xauc/numeric.hpp"

namespace xauc {

namespace {

// Splits one CSV record, honoring double quotes.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  const char* first = t.data();
  const char* last = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && !t.empty();
}

bool label_matches(const std::string& raw, const std::string& positive) {
  if (trim(raw) == trim(positive)) return true;
  double a, b;
  return parse_double(raw, a) && parse_double(positive, b) && a == b;
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name) {
    out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  }
  return out.empty() ? "_" : out;
}

}  // namespace

TabularDataset load_dataset(const std::filesystem::path& path,
                            const ColumnRoles& roles) {
  std::ifstream in(path);
  if (!in) {
    throw FileNotFound("load_dataset: cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw EmptyInput("load_dataset: " + path.string() + " is empty");
  }
  const auto header = split_csv_line(line);

  std::size_t label_idx = header.size();
  std::size_t group_idx = header.size();
  std::vector<std::size_t> feature_idx;
  TabularDataset data;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string name = trim(header[i]);
    if (name == roles.label_col) {
      label_idx = i;
    } else if (name == roles.group_col) {
      group_idx = i;
    } else {
      feature_idx.push_back(i);
      data.feature_names.push_back(name);
    }
  }
  if (label_idx == header.size()) {
    throw MissingColumn("load_dataset: label column '" + roles.label_col +
                        "' not in header");
  }
  if (group_idx == header.size()) {
    throw MissingColumn("load_dataset: group column '" + roles.group_col +
                        "' not in header");
  }
  if (roles.group_as_feature) {
    data.feature_names.push_back(roles.group_col + "_code");
  }

  data.n_cols = feature_idx.size() + (roles.group_as_feature ? 1 : 0);
  std::map<std::string, double> group_codes;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw LengthMismatch("load_dataset: row " + std::to_string(row_no) +
                           " has " + std::to_string(fields.size()) +
                           " fields, expected " +
                           std::to_string(header.size()));
    }
    for (std::size_t k = 0; k < feature_idx.size(); ++k) {
      double v;
      if (!parse_double(fields[feature_idx[k]], v) || !std::isfinite(v)) {
        throw NonNumericFeature(
            "load_dataset: row " + std::to_string(row_no) + ", column '" +
            trim(header[feature_idx[k]]) + "': cannot parse '" +
            fields[feature_idx[k]] + "' as a finite number");
      }
      data.features.push_back(v);
    }
    const std::string group = trim(fields[group_idx]);
    if (roles.group_as_feature) {
      auto [it, inserted] = group_codes.try_emplace(
          group, static_cast<double>(group_codes.size()));
      data.features.push_back(it->second);
    }
    data.labels.push_back(
        label_matches(fields[label_idx], roles.positive_label) ? 1 : 0);
    data.groups.push_back(group);
    ++data.n_rows;
  }
  if (data.n_rows == 0) {
    throw EmptyInput("load_dataset: " + path.string() + " has no data rows");
  }
  return data;
}

namespace {

TabularDataset take_rows(const TabularDataset& data,
                         std::span<const std::size_t> rows) {
  TabularDataset out;
  out.n_cols = data.n_cols;
  out.feature_names = data.feature_names;
  out.n_rows = rows.size();
  out.features.reserve(rows.size() * data.n_cols);
  out.labels.reserve(rows.size());
  out.groups.reserve(rows.size());
  for (std::size_t i : rows) {
    const auto row = data.row(i);
    out.features.insert(out.features.end(), row.begin(), row.end());
    out.labels.push_back(data.labels[i]);
    out.groups.push_back(data.groups[i]);
  }
  return out;
}

}  // namespace

std::pair<TabularDataset, TabularDataset> split(const TabularDataset& data,
                                                double fraction,
                                                std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("split: fraction must be in (0, 1)");
  }
  Rng rng(seed);
  const auto perm = rng.permutation(data.n_rows);
  const auto n_train = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(data.n_rows)));
  if (n_train == 0 || n_train >= data.n_rows) {
    throw DegenerateSplit("split: fraction " + std::to_string(fraction) +
                          " leaves an empty side for n = " +
                          std::to_string(data.n_rows));
  }
  return {take_rows(data, {perm.data(), n_train}),
          take_rows(data, {perm.data() + n_train, data.n_rows - n_train})};
}

GriddedCurve average_curves(std::span<const CurveSeries> curves,
                            std::span<const double> fpr_grid) {
  if (curves.empty()) {
    throw EmptyInput("average_curves: no curves");
  }
  if (fpr_grid.size() < 2 || !std::is_sorted(fpr_grid.begin(), fpr_grid.end()) ||
      fpr_grid.front() < 0.0 || fpr_grid.back() > 1.0) {
    throw std::invalid_argument(
        "average_curves: grid must be sorted within [0, 1]");
  }

  // Upper envelope per curve: for repeated x keep the largest y, then
  // interpolate linearly with flat extension outside the vertex range.
  auto interpolate = [](const CurveSeries& c, double v) {
    const auto& pts = c.points;
    if (v <= pts.front().x) return pts.front().y;
    if (v >= pts.back().x) return pts.back().y;
    // first point right of v; x is nondecreasing along the series
    const auto it = std::upper_bound(
        pts.begin(), pts.end(), v,
        [](double val, const CurvePoint& p) { return val < p.x; });
    const auto& p1 = *it;
    const auto& p0 = *(it - 1);  // last point with x <= v
    if (p0.x == v) return p0.y;
    return p0.y + (p1.y - p0.y) * (v - p0.x) / (p1.x - p0.x);
  };

  GriddedCurve out;
  out.fpr.assign(fpr_grid.begin(), fpr_grid.end());
  out.tpr_mean.resize(fpr_grid.size());
  out.tpr_se.assign(fpr_grid.size(), 0.0);
  std::vector<double> values(curves.size());
  for (std::size_t gi = 0; gi < fpr_grid.size(); ++gi) {
    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
      values[ci] = interpolate(curves[ci], fpr_grid[gi]);
    }
    out.tpr_mean[gi] = mean(values);
    if (curves.size() > 1) {
      out.tpr_se[gi] =
          sample_sd(values) / std::sqrt(static_cast<double>(values.size()));
    }
  }
  double running = 0.0;
  for (double& m : out.tpr_mean) {
    if (m < running) {
      out.isotonic_adjustment = std::max(out.isotonic_adjustment, running - m);
      m = running;
    }
    running = m;
  }
  return out;
}

namespace {

struct RunArtifacts {
  AuditReport report;
  std::map<std::string, CurveSeries> curves;
  std::map<std::string, double> delong_ses;  // flatten()-style keys
  // Representative-run (index 0) extras.
  std::map<std::string, std::vector<std::array<double, 2>>> conditional;
  std::map<std::string, std::vector<double>> score_samples;
};

Scorer train_model(const ExperimentConfig& config,
                   const TabularDataset& train) {
  if (config.model == "logistic") {
    return train_logistic(train);
  }
  if (config.model == "rankboost") {
    return train_rankboost(train, config.rankboost_rounds);
  }
  if (config.model == "rankboost-cal" ||
      config.model == "rankboost_calibrated") {
    return calibrate_rankboost(train_rankboost(train, config.rankboost_rounds),
                               train);
  }
  throw std::invalid_argument("unknown model kind: " + config.model);
}

GroupedScores group_test_scores(const TabularDataset& test,
                                std::span<const double> scores) {
  std::vector<ScoredSample> samples(test.n_rows);
  for (std::size_t i = 0; i < test.n_rows; ++i) {
    samples[i] = {scores[i], test.labels[i], test.groups[i]};
  }
  return build_grouped(samples);
}

std::map<std::string, double> collect_ses(const AuditReport& r) {
  std::map<std::string, double> ses;
  if (r.pooled_auc_se) ses["auc:pooled"] = *r.pooled_auc_se;
  for (const auto& m : r.auc) {
    if (m.se) ses["auc:" + m.group] = *m.se;
  }
  for (const auto& m : r.xauc) {
    if (m.se) ses["xauc:" + m.pos_group + "|" + m.neg_group] = *m.se;
  }
  for (const auto& m : r.xauc_pos) {
    if (m.se) ses["xauc1:" + m.group] = *m.se;
  }
  for (const auto& m : r.xauc_neg) {
    if (m.se) ses["xauc0:" + m.group] = *m.se;
  }
  return ses;
}

RunArtifacts run_once(const ExperimentConfig& config,
                      const TabularDataset& data, int run_index) {
  const auto [train, test] =
      split(data, config.train_fraction,
            config.base_seed + static_cast<std::uint64_t>(run_index));
  const Scorer model = train_model(config, train);
  const std::vector<double> scores = score(model, test);
  const GroupedScores grouped = group_test_scores(test, scores);

  RunArtifacts artifacts;
  artifacts.report = audit(grouped, config.ties, /*with_se=*/true);
  artifacts.delong_ses = collect_ses(artifacts.report);

  artifacts.curves.emplace(
      "roc_pooled", roc_curve(grouped.pooled(1), grouped.pooled(0)));
  const auto groups = grouped.groups();
  for (const auto& a : groups) {
    artifacts.curves.emplace("roc_" + sanitize(a),
                             roc_curve(grouped.cell(a, 1), grouped.cell(a, 0)));
    for (const auto& b : groups) {
      if (a == b) continue;
      artifacts.curves.emplace("xroc_" + sanitize(a) + "_" + sanitize(b),
                               xroc_curve(grouped, a, b));
    }
  }

  if (run_index == 0) {
    for (const auto& a : groups) {
      for (int y : {0, 1}) {
        artifacts.score_samples.emplace(
            sanitize(a) + "|" + std::to_string(y), grouped.cell(a, y));
      }
      for (const auto& b : groups) {
        if (a == b) continue;
        const auto acc = conditional_xauc(grouped, a, b, config.ties);
        const auto& neg = grouped.cell(b, 0);
        std::vector<std::array<double, 2>> rows(neg.size());
        for (std::size_t i = 0; i < neg.size(); ++i) {
          rows[i] = {neg[i], acc[i]};
        }
        artifacts.conditional.emplace(sanitize(a) + "|" + sanitize(b),
                                      std::move(rows));
      }
    }
  }
  return artifacts;
}

nlohmann::json config_echo(const ExperimentConfig& config) {
  // workers and output location deliberately left out: they must not
  // change a single byte of the results.
  return {{"data", config.data_path.string()},
          {"label_col", config.roles.label_col},
          {"group_col", config.roles.group_col},
          {"positive_label", config.roles.positive_label},
          {"group_as_feature", config.roles.group_as_feature},
          {"model", config.model},
          {"train_fraction", config.train_fraction},
          {"n_runs", config.n_runs},
          {"base_seed", config.base_seed},
          {"ties", to_string(config.ties)},
          {"fpr_grid_size", config.fpr_grid_size},
          {"rankboost_rounds", config.rankboost_rounds}};
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.n_runs < 1) {
    throw std::invalid_argument("run_experiment: n_runs must be >= 1");
  }
  if (config.fpr_grid_size < 2) {
    throw std::invalid_argument("run_experiment: grid size must be >= 2");
  }
  const TabularDataset data = load_dataset(config.data_path, config.roles);

  const std::size_t n_runs = static_cast<std::size_t>(config.n_runs);
  std::vector<RunArtifacts> artifacts(n_runs);
  std::vector<std::exception_ptr> failures(n_runs);

  const std::size_t n_workers = std::min<std::size_t>(
      n_runs, static_cast<std::size_t>(std::max(1, config.workers)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < n_runs;
         k = next.fetch_add(1)) {
      try {
        artifacts[k] = run_once(config, data, static_cast<int>(k));
      } catch (...) {
        failures[k] = std::current_exception();
      }
    }
  };
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t k = 0; k < n_runs; ++k) {
    if (!failures[k]) continue;
    try {
      std::rethrow_exception(failures[k]);
    } catch (const std::exception& e) {
      throw Error("run " + std::to_string(k) + ": " + e.what());
    }
  }

  ExperimentResult result;
  result.runs.reserve(n_runs);
  for (auto& a : artifacts) result.runs.push_back(a.report);

  // Metric aggregation: mean, SE of the mean across runs, mean per-run
  // DeLong SE where one exists.
  std::map<std::string, std::vector<double>> values;
  std::map<std::string, std::vector<double>> delong;
  for (const auto& a : artifacts) {
    for (const auto& [key, v] : a.report.flatten()) values[key].push_back(v);
    for (const auto& [key, v] : a.delong_ses) delong[key].push_back(v);
  }
  for (const auto& [key, vs] : values) {
    AggregateMetric m;
    m.mean = mean(vs);
    m.se_across_runs =
        vs.size() > 1 ? sample_sd(vs) / std::sqrt(static_cast<double>(vs.size()))
                      : 0.0;
    if (auto it = delong.find(key); it != delong.end()) {
      m.mean_delong_se = mean(it->second);
    }
    result.aggregate.emplace(key, m);
  }

  std::vector<double> grid(config.fpr_grid_size);
  for (int i = 0; i < config.fpr_grid_size; ++i) {
    grid[i] = static_cast<double>(i) /
              static_cast<double>(config.fpr_grid_size - 1);
  }
  std::map<std::string, std::vector<CurveSeries>> by_name;
  for (auto& a : artifacts) {
    for (auto& [name, curve] : a.curves) {
      by_name[name].push_back(std::move(curve));
    }
  }
  for (const auto& [name, cs] : by_name) {
    if (cs.size() != n_runs) {
      throw Error("curve " + name + " missing from some runs");
    }
    result.curves.emplace(name, average_curves(cs, grid));
  }

  result.conditional = std::move(artifacts[0].conditional);
  result.score_samples = std::move(artifacts[0].score_samples);
  return result;
}

nlohmann::json ExperimentResult::report_json(
    const ExperimentConfig& config) const {
  nlohmann::json j;
  j["config"] = config_echo(config);
  j["representative_run"] = 0;
  auto& agg = j["aggregate"] = nlohmann::json::object();
  for (const auto& [key, m] : aggregate) {
    nlohmann::json entry{{"mean", m.mean},
                         {"se_across_runs", m.se_across_runs}};
    if (m.mean_delong_se) entry["mean_delong_se"] = *m.mean_delong_se;
    agg[key] = std::move(entry);
  }
  auto& runs_json = j["runs"] = nlohmann::json::array();
  for (const auto& r : runs) runs_json.push_back(r.to_json());
  return j;
}

void ExperimentResult::write(const ExperimentConfig& config,
                             const std::filesystem::path& out_dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "curves");
  fs::create_directories(out_dir / "conditional");
  fs::create_directories(out_dir / "scores");

  {
    std::ofstream out(out_dir / "report.json");
    out << report_json(config).dump(2) << '\n';
  }
  for (const auto& [name, curve] : curves) {
    std::ofstream out(out_dir / "curves" / (name + ".csv"));
    out.precision(17);
    out << "fpr,tpr_mean,tpr_se\n";
    for (std::size_t i = 0; i < curve.fpr.size(); ++i) {
      out << curve.fpr[i] << ',' << curve.tpr_mean[i] << ','
          << curve.tpr_se[i] << '\n';
    }
  }
  for (const auto& [key, rows] : conditional) {
    const auto sep = key.find('|');
    const std::string name =
        key.substr(0, sep) + "_" + key.substr(sep + 1);
    std::ofstream out(out_dir / "conditional" / (name + ".csv"));
    out.precision(17);
    out << "neg_score,accuracy\n";
    for (const auto& [s, acc] : rows) {
      out << s << ',' << acc << '\n';
    }
  }
  for (const auto& [key, scores] : score_samples) {
    const auto sep = key.find('|');
    const std::string name =
        key.substr(0, sep) + "_" + key.substr(sep + 1);
    std::ofstream out(out_dir / "scores" / (name + ".csv"));
    out.precision(17);
    out << "score\n";
    for (double s : scores) out << s << '\n';
  }
}

}  // namespace xauc
