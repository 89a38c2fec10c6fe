#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "xauc/samples.hpp"

namespace xauc {

enum class VarianceMethod { delong, bootstrap };

/// Point estimate with a standard error for an AUC-type statistic.
/// Applies to xAUC by passing cell (a,1) as pos and cell (b,0) as neg.
struct VarianceEstimate {
  double point = 0.0;
  double se = 0.0;
  VarianceMethod method = VarianceMethod::delong;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  // True when ties make the reported point estimate differ from the
  // half-tie value the U-statistic theory is built on.
  bool tie_discrepancy = false;
};

/// Generalized-U-statistic (DeLong) standard error. The point estimate
/// uses the requested tie policy; the structural components always use
/// the half-tie kernel. Needs at least two samples per class
/// (InsufficientSamples).
VarianceEstimate delong_se(std::span<const double> pos,
                           std::span<const double> neg, TiePolicy ties);

/// Stratified bootstrap standard error (validation oracle for delong_se).
/// Resamples within each class with replacement; each resample draws its
/// own stream from the seed, so evaluation order cannot change results.
/// Requires resamples >= 100 and nonempty classes.
VarianceEstimate bootstrap_se(std::span<const double> pos,
                              std::span<const double> neg, TiePolicy ties,
                              std::size_t resamples, std::uint64_t seed);

}  // namespace xauc
