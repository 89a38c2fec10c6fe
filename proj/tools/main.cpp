// Command-line front end: audit | experiment | adjust | simulate.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "xauc/adjust.hpp"
#include "xauc/curves.hpp"
#include "xauc/errors.hpp"
#include "xauc/gaussian.hpp"
#include "xauc/metrics.hpp"
#include "xauc/pipeline.hpp"
#include "xauc/report.hpp"

namespace {

using namespace xauc;

TiePolicy parse_ties(const std::string& s) {
  if (s == "strict") return TiePolicy::strict;
  if (s == "half") return TiePolicy::half;
  throw std::invalid_argument("--ties must be 'strict' or 'half'");
}

void add_dataset_options(CLI::App* cmd, ExperimentConfig& config,
                         std::string& ties) {
  cmd->add_option("--data", config.data_path, "input CSV with header row")
      ->required()
      ->envname("XAUC_DATA");
  cmd->add_option("--label-col", config.roles.label_col,
                  "name of the binary outcome column")
      ->required()
      ->envname("XAUC_LABEL_COL");
  cmd->add_option("--group-col", config.roles.group_col,
                  "name of the group attribute column")
      ->required()
      ->envname("XAUC_GROUP_COL");
  cmd->add_option("--positive-label", config.roles.positive_label,
                  "label value mapped to Y=1")
      ->required()
      ->envname("XAUC_POSITIVE_LABEL");
  cmd->add_flag("--group-as-feature", config.roles.group_as_feature,
                "also feed the integer-coded group to the model")
      ->envname("XAUC_GROUP_AS_FEATURE");
  cmd->add_option("--model", config.model,
                  "logistic, rankboost, or rankboost-cal")
      ->check(CLI::IsMember({"logistic", "rankboost", "rankboost-cal"}))
      ->envname("XAUC_MODEL");
  cmd->add_option("--train-frac", config.train_fraction,
                  "training fraction of each split")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9))
      ->envname("XAUC_TRAIN_FRAC");
  cmd->add_option("--seed", config.base_seed, "base RNG seed")
      ->envname("XAUC_SEED");
  cmd->add_option("--rounds", config.rankboost_rounds,
                  "boosting rounds for rankboost models")
      ->check(CLI::PositiveNumber)
      ->envname("XAUC_ROUNDS");
  cmd->add_option("--ties", ties, "tie policy: strict or half")
      ->check(CLI::IsMember({"strict", "half"}))
      ->envname("XAUC_TIES");
}

void print_summary(const AuditReport& report) {
  std::cout << std::fixed << std::setprecision(4);
  auto se_of = [&](const std::optional<double>& se) {
    return se ? " (se " + std::to_string(*se).substr(0, 6) + ")" : "";
  };
  std::cout << "ties: " << to_string(report.ties) << "\n";
  std::cout << "pooled AUC: " << report.pooled_auc
            << se_of(report.pooled_auc_se) << "\n";
  for (const auto& m : report.auc) {
    std::cout << "AUC[" << m.group << "]: " << m.value << se_of(m.se) << "\n";
  }
  for (const auto& m : report.xauc) {
    std::cout << "xAUC(" << m.pos_group << "," << m.neg_group
              << "): " << m.value << se_of(m.se) << "\n";
  }
  for (const auto& m : report.delta) {
    std::cout << "delta xAUC(" << m.pos_group << "," << m.neg_group
              << "): " << m.value << "\n";
  }
  for (const auto& m : report.xauc_pos) {
    std::cout << "xAUC1[" << m.group << "]: " << m.value << se_of(m.se)
              << "\n";
  }
  for (const auto& m : report.xauc_neg) {
    std::cout << "xAUC0[" << m.group << "]: " << m.value << se_of(m.se)
              << "\n";
  }
  for (const auto& m : report.brier) {
    std::cout << "Brier[" << m.group << "]: " << m.value << "\n";
  }
  if (report.tie_discrepancy) {
    std::cout << "note: tied scores present; strict and half-tie point "
                 "estimates differ\n";
  }
}

int run_audit_like(const ExperimentConfig& config,
                   const std::filesystem::path& out_dir) {
  const TabularDataset data = load_dataset(config.data_path, config.roles);
  std::map<std::string, std::size_t> group_counts;
  for (const auto& g : data.groups) ++group_counts[g];
  std::cout << "loaded " << data.n_rows << " rows, " << data.n_cols
            << " features";
  for (const auto& [g, c] : group_counts) std::cout << ", " << g << "=" << c;
  std::cout << "\n";

  const ExperimentResult result = run_experiment(config);
  if (config.n_runs == 1) {
    print_summary(result.runs.front());
  } else {
    std::cout << std::fixed << std::setprecision(4);
    for (const auto& [key, m] : result.aggregate) {
      std::cout << key << ": mean " << m.mean << ", se "
                << m.se_across_runs;
      if (m.mean_delong_se) {
        std::cout << ", mean delong se " << *m.mean_delong_se;
      }
      std::cout << "\n";
    }
  }
  if (!out_dir.empty()) {
    result.write(config, out_dir);
    std::cout << "wrote " << (out_dir / "report.json").string() << "\n";
  }
  return 0;
}

int run_adjust(const ExperimentConfig& config, const std::string& adjust_group,
               double alpha_lo, double alpha_hi, double beta, int resolution,
               const std::filesystem::path& out_dir) {
  const TabularDataset data = load_dataset(config.data_path, config.roles);
  auto [train, test] =
      split(data, config.train_fraction, config.base_seed);
  Scorer model;
  if (config.model == "logistic") {
    model = train_logistic(train);
  } else if (config.model == "rankboost") {
    model = train_rankboost(train, config.rankboost_rounds);
  } else {
    model = calibrate_rankboost(train_rankboost(train, config.rankboost_rounds),
                                train);
  }
  const std::vector<double> scores = score(model, test);
  std::vector<ScoredSample> samples(test.n_rows);
  for (std::size_t i = 0; i < test.n_rows; ++i) {
    samples[i] = {scores[i], test.labels[i], test.groups[i]};
  }
  const GroupedScores grouped = build_grouped(samples);

  const auto groups = grouped.groups();
  if (groups.size() != 2) {
    throw std::invalid_argument("adjust needs exactly two groups, got " +
                                std::to_string(groups.size()));
  }
  std::string target = adjust_group;
  if (target.empty()) {
    // Default to the disadvantaged group: the one whose positives are
    // ranked worse against the other group's negatives.
    const double ab = xauc(grouped, groups[0], groups[1], config.ties);
    const double ba = xauc(grouped, groups[1], groups[0], config.ties);
    target = ab < ba ? groups[0] : groups[1];
  }

  const AuditReport before = audit(grouped, config.ties);
  const LogisticAdjustment fit = fit_logistic_adjustment(
      grouped, target, alpha_lo, alpha_hi, beta, resolution, config.ties);

  std::cout << std::fixed << std::setprecision(4);
  std::cout << "transformed group: " << target << "\n";
  std::cout << "alpha*: " << fit.alpha << " (beta " << fit.beta << ")\n";
  std::cout << "|delta xAUC|: "
            << std::abs(delta_xauc(grouped, groups[0], groups[1], config.ties))
            << " -> " << fit.objective << "\n";
  std::cout << "pooled AUC: " << before.pooled_auc << " -> "
            << fit.adjusted.pooled_auc << "\n";

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    nlohmann::json j;
    j["target_group"] = target;
    j["alpha_star"] = fit.alpha;
    j["beta"] = fit.beta;
    j["objective"] = fit.objective;
    j["before"] = before.to_json();
    j["after"] = fit.adjusted.to_json();
    std::ofstream out(out_dir / "adjust.json");
    out << j.dump(2) << '\n';

    const MonotoneTransform transform{
        target, LogisticTransform{fit.alpha, beta}};
    const GroupedScores adjusted = apply_transform(grouped, transform);
    for (const auto& [name, g] :
         {std::pair{std::string("before"), &grouped},
          std::pair{std::string("after"), &adjusted}}) {
      for (const auto& a : groups) {
        for (const auto& b : groups) {
          if (a == b) continue;
          std::ofstream csv(out_dir /
                            ("xroc_" + a + "_" + b + "_" + name + ".csv"));
          xroc_curve(*g, a, b).write_csv(csv);
        }
      }
    }
    std::cout << "wrote " << (out_dir / "adjust.json").string() << "\n";
  }
  return 0;
}

int run_simulate(const GaussianGroupModel& model, std::size_t samples,
                 std::uint64_t seed, bool search, int resolution, bool peaked,
                 const std::filesystem::path& out_dir) {
  nlohmann::json j;
  for (const auto& g : model.groups()) {
    const auto& p = model.group(g);
    j["model"][g] = {{"mu0", p.neg.mean},
                     {"var0", p.neg.variance},
                     {"mu1", p.pos.mean},
                     {"var1", p.pos.variance}};
  }
  const std::string a = model.groups()[0];
  const std::string b = model.groups()[1];
  j["closed_form"] = {
      {"xauc_ab", closed_form_xauc(model, a, b)},
      {"xauc_ba", closed_form_xauc(model, b, a)},
      {"delta_xauc", closed_form_delta_xauc(model, a, b)},
  };

  if (samples > 0) {
    const GroupedScores g = sample_scores(model, samples, seed);
    j["empirical"] = {
        {"samples_per_cell", samples},
        {"seed", seed},
        {"xauc_ab", xauc(g, a, b, TiePolicy::half)},
        {"xauc_ba", xauc(g, b, a, TiePolicy::half)},
        {"delta_xauc", delta_xauc(g, a, b, TiePolicy::half)},
    };
  }

  if (search) {
    DisparitySearchOptions opts;
    opts.resolution = resolution;
    opts.require_peaked = peaked;
    const DisparitySearchResult best =
        equal_auc_disparity_search(model.group(a), opts);
    j["equal_auc_search"] = {
        {"mu_b0", best.best.neg.mean},   {"var_b0", best.best.neg.variance},
        {"mu_b1", best.best.pos.mean},   {"var_b1", best.best.pos.variance},
        {"delta_xauc", best.delta_xauc}, {"objective", best.objective},
    };
  }

  std::cout << j.dump(2) << "\n";
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    {
      std::ofstream out(out_dir / "simulate.json");
      out << j.dump(2) << '\n';
    }
    // xAUC surface over group-b means at the configured b variances.
    const auto& pb = model.group(b);
    std::ofstream surf(out_dir / "xauc_surface.csv");
    surf.precision(17);
    surf << "mu_b0,mu_b1,xauc_ab,xauc_ba,delta_xauc\n";
    const int grid = 21;
    for (int i = 0; i < grid; ++i) {
      for (int k = 0; k < grid; ++k) {
        GaussianGroupModel m = model;
        GaussianGroupParams moved = pb;
        moved.neg.mean = static_cast<double>(i) / (grid - 1);
        moved.pos.mean = static_cast<double>(k) / (grid - 1);
        m.set_group(b, moved);
        surf << moved.neg.mean << ',' << moved.pos.mean << ','
             << closed_form_xauc(m, a, b) << ',' << closed_form_xauc(m, b, a)
             << ',' << closed_form_delta_xauc(m, a, b) << '\n';
      }
    }
    std::cout << "wrote " << (out_dir / "simulate.json").string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bipartite-ranking fairness audits: cross-group AUC metrics, "
               "confidence intervals, and score adjustments"};
  app.require_subcommand(1);

  ExperimentConfig config;
  std::string ties = "strict";
  std::filesystem::path out_dir;

  auto* audit_cmd =
      app.add_subcommand("audit", "single-split audit with standard errors");
  add_dataset_options(audit_cmd, config, ties);
  audit_cmd->add_option("--out", out_dir, "output directory")
      ->envname("XAUC_OUT");

  auto* exp_cmd = app.add_subcommand(
      "experiment", "repeated-split protocol with averaged curves");
  add_dataset_options(exp_cmd, config, ties);
  int runs = 50;
  exp_cmd->add_option("--runs", runs, "number of train/test splits")
      ->check(CLI::PositiveNumber)
      ->envname("XAUC_RUNS");
  exp_cmd->add_option("--grid", config.fpr_grid_size,
                      "FPR interpolation grid size")
      ->check(CLI::Range(2, 100000))
      ->envname("XAUC_GRID");
  exp_cmd->add_option("--workers", config.workers,
                      "concurrent runs (results are identical at any count)")
      ->check(CLI::PositiveNumber)
      ->envname("XAUC_WORKERS");
  exp_cmd->add_option("--out", out_dir, "output directory")
      ->envname("XAUC_OUT");

  auto* adj_cmd = app.add_subcommand(
      "adjust", "fit the logistic transform equalizing xAUC across groups");
  add_dataset_options(adj_cmd, config, ties);
  std::vector<double> alpha_range{0.0, 5.0};
  double beta = -2.0;
  int resolution = 501;
  std::string adjust_group;
  adj_cmd->add_option("--alpha-range", alpha_range, "alpha search interval")
      ->expected(2)
      ->envname("XAUC_ALPHA_RANGE");
  adj_cmd->add_option("--beta", beta, "fixed transform offset")
      ->envname("XAUC_BETA");
  adj_cmd->add_option("--resolution", resolution, "alpha grid points")
      ->check(CLI::Range(2, 1000000))
      ->envname("XAUC_RESOLUTION");
  adj_cmd->add_option("--adjust-group", adjust_group,
                      "group to transform (default: the disadvantaged one)")
      ->envname("XAUC_ADJUST_GROUP");
  adj_cmd->add_option("--out", out_dir, "output directory")
      ->envname("XAUC_OUT");

  auto* sim_cmd = app.add_subcommand(
      "simulate", "closed-form Gaussian score-model analysis");
  double mu_a0 = 0.25, mu_a1 = 0.75, mu_b0 = 0.25, mu_b1 = 0.75;
  double var_a0 = 0.25, var_a1 = 0.25, var_b0 = 0.25, var_b1 = 0.25;
  std::size_t sim_samples = 100000;
  std::uint64_t sim_seed = 0;
  bool do_search = false;
  bool peaked = false;
  int search_resolution = 41;
  sim_cmd->add_option("--mu-a0", mu_a0, "group-a negative-class mean");
  sim_cmd->add_option("--mu-a1", mu_a1, "group-a positive-class mean");
  sim_cmd->add_option("--mu-b0", mu_b0, "group-b negative-class mean");
  sim_cmd->add_option("--mu-b1", mu_b1, "group-b positive-class mean");
  sim_cmd->add_option("--var-a0", var_a0, "group-a negative-class variance");
  sim_cmd->add_option("--var-a1", var_a1, "group-a positive-class variance");
  sim_cmd->add_option("--var-b0", var_b0, "group-b negative-class variance");
  sim_cmd->add_option("--var-b1", var_b1, "group-b positive-class variance");
  sim_cmd->add_option("--samples", sim_samples,
                      "Monte Carlo samples per cell (0 disables)");
  sim_cmd->add_option("--seed", sim_seed, "sampling seed")
      ->envname("XAUC_SEED");
  sim_cmd->add_flag("--search", do_search,
                    "run the equal-AUC maximal-disparity grid search");
  sim_cmd->add_flag("--peaked", peaked,
                    "restrict the search to mu_b1 > 0.5 > mu_b0");
  sim_cmd->add_option("--resolution", search_resolution,
                      "search grid points per axis")
      ->check(CLI::Range(10, 10000));
  sim_cmd->add_option("--out", out_dir, "output directory")
      ->envname("XAUC_OUT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    config.ties = parse_ties(ties);
    if (audit_cmd->parsed()) {
      config.n_runs = 1;
      return run_audit_like(config, out_dir);
    }
    if (exp_cmd->parsed()) {
      config.n_runs = runs;
      return run_audit_like(config, out_dir);
    }
    if (adj_cmd->parsed()) {
      config.n_runs = 1;
      return run_adjust(config, adjust_group, alpha_range[0], alpha_range[1],
                        beta, resolution, out_dir);
    }
    GaussianGroupModel model;
    model.set_group("a", {{mu_a0, var_a0}, {mu_a1, var_a1}});
    model.set_group("b", {{mu_b0, var_b0}, {mu_b1, var_b1}});
    return run_simulate(model, sim_samples, sim_seed, do_search,
                        search_resolution, peaked, out_dir);
  } catch (const FileNotFound& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const MissingColumn& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NonNumericFeature& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  }
}
