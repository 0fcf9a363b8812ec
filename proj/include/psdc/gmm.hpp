#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace psdc {

/// EM hyperparameters. variance_floor == 0 means "auto": 1e-6 times the
/// sample variance (an absolute 1e-12 when the sample has zero spread).
/// The percentile initializer is deterministic; seed is reserved for
/// randomized-restart variants and is currently ignored.
struct EmConfig {
  int max_iterations = 100;
  double tolerance = 1e-6;
  double variance_floor = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Two-component univariate Gaussian mixture.
struct Gmm1D {
  double weight_1 = 0.5, weight_2 = 0.5;
  double mean_1 = 0.0, mean_2 = 0.0;
  double var_1 = 1.0, var_2 = 1.0;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;           // zero-spread input: both components coincide
  std::vector<double> ll_history;    // per-iteration log-likelihood (non-decreasing)
};

/// Fit by expectation-maximization. Deterministic: means start at the 10th
/// and 90th percentiles, variances at the sample variance, weights at 1/2.
/// Log-likelihood is non-decreasing across iterations. Inputs with fewer
/// than 2 values raise ValidationError; all-identical values produce the
/// degenerate result (both components on the value, floor variance).
Gmm1D fit_gmm(std::span<const double> values, const EmConfig& config = {});

/// Posterior membership probabilities (p_1, p_2) for a point; sums to 1.
std::pair<double, double> posterior(const Gmm1D& gmm, double x);

/// 1-based index of the component with the strictly greater mean; ties
/// return 1 (use means_tied to detect the flagged case).
int higher_mean_component(const Gmm1D& gmm);
bool means_tied(const Gmm1D& gmm);

}  // namespace psdc
