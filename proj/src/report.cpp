#include "xauc/report.hpp"

#include <nlohmann/json.hpp>

#include "xauc/inference.hpp"
#include "xauc/metrics.hpp"
#include "xauc/numeric.hpp"

namespace xauc {

namespace {

nlohmann::json group_metrics_json(const std::vector<GroupMetric>& ms) {
  auto arr = nlohmann::json::array();
  for (const auto& m : ms) {
    nlohmann::json j{{"group", m.group}, {"value", m.value}};
    if (m.se) j["se"] = *m.se;
    arr.push_back(std::move(j));
  }
  return arr;
}

nlohmann::json pair_metrics_json(const std::vector<PairMetric>& ms) {
  auto arr = nlohmann::json::array();
  for (const auto& m : ms) {
    nlohmann::json j{{"pos_group", m.pos_group},
                     {"neg_group", m.neg_group},
                     {"value", m.value}};
    if (m.se) j["se"] = *m.se;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace

std::map<std::string, double> AuditReport::flatten() const {
  std::map<std::string, double> flat;
  flat["auc:pooled"] = pooled_auc;
  for (const auto& m : auc) flat["auc:" + m.group] = m.value;
  for (const auto& m : xauc) {
    flat["xauc:" + m.pos_group + "|" + m.neg_group] = m.value;
  }
  for (const auto& m : delta) {
    flat["delta_xauc:" + m.pos_group + "|" + m.neg_group] = m.value;
  }
  for (const auto& m : xauc_pos) flat["xauc1:" + m.group] = m.value;
  for (const auto& m : xauc_neg) flat["xauc0:" + m.group] = m.value;
  for (const auto& m : brier) flat["brier:" + m.group] = m.value;
  return flat;
}

nlohmann::json AuditReport::to_json() const {
  nlohmann::json j;
  j["ties"] = to_string(ties);
  j["pooled_auc"] = pooled_auc;
  if (pooled_auc_se) j["pooled_auc_se"] = *pooled_auc_se;
  j["auc"] = group_metrics_json(auc);
  j["xauc"] = pair_metrics_json(xauc);
  j["delta_xauc"] = pair_metrics_json(delta);
  j["xauc_pos"] = group_metrics_json(xauc_pos);
  j["xauc_neg"] = group_metrics_json(xauc_neg);
  j["brier"] = group_metrics_json(brier);
  j["tie_discrepancy"] = tie_discrepancy;
  return j;
}

AuditReport audit(const GroupedScores& g, TiePolicy ties, bool with_se) {
  AuditReport report;
  report.ties = ties;

  const auto pooled_pos = g.pooled(1);
  const auto pooled_neg = g.pooled(0);
  const auto groups = g.groups();

  auto estimate = [&](std::span<const double> pos,
                      std::span<const double> neg,
                      std::optional<double>& se_out) {
    if (!with_se) return auc(pos, neg, ties);
    const VarianceEstimate est = delong_se(pos, neg, ties);
    se_out = est.se;
    report.tie_discrepancy |= est.tie_discrepancy;
    return est.point;
  };

  report.pooled_auc = estimate(pooled_pos, pooled_neg, report.pooled_auc_se);

  bool brier_ok = true;
  for (const auto& a : groups) {
    for (int y : {0, 1}) {
      for (double s : g.cell(a, y)) {
        brier_ok &= s >= 0.0 && s <= 1.0;
      }
    }
  }

  for (const auto& a : groups) {
    GroupMetric m{a, 0.0, std::nullopt};
    m.value = estimate(g.cell(a, 1), g.cell(a, 0), m.se);
    report.auc.push_back(m);

    GroupMetric m1{a, 0.0, std::nullopt};
    m1.value = estimate(g.cell(a, 1), pooled_neg, m1.se);
    report.xauc_pos.push_back(m1);

    GroupMetric m0{a, 0.0, std::nullopt};
    m0.value = estimate(pooled_pos, g.cell(a, 0), m0.se);
    report.xauc_neg.push_back(m0);

    if (brier_ok) {
      KahanSum acc;
      for (double s : g.cell(a, 1)) acc.add((s - 1.0) * (s - 1.0));
      for (double s : g.cell(a, 0)) acc.add(s * s);
      const double n =
          static_cast<double>(g.count(a, 1) + g.count(a, 0));
      report.brier.push_back({a, acc.value() / n, std::nullopt});
    }
  }

  for (const auto& a : groups) {
    for (const auto& b : groups) {
      if (a == b) continue;
      PairMetric m{a, b, 0.0, std::nullopt};
      m.value = estimate(g.cell(a, 1), g.cell(b, 0), m.se);
      report.xauc.push_back(m);
    }
  }

  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      PairMetric m{groups[i], groups[j], 0.0, std::nullopt};
      m.value = delta_xauc(g, groups[i], groups[j], ties);
      report.delta.push_back(m);
    }
  }

  return report;
}

}  // namespace xauc
