#include "psdc/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psdc/errors.hpp"

namespace psdc {

namespace {

constexpr double kLogTwoPi = 1.8378770664093453;  // log(2*pi)

double log_normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (kLogTwoPi + std::log(var) + d * d / var);
}

double percentile(std::vector<double> sorted, double q) {
  // `sorted` must be ascending; linear interpolation between ranks.
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

void EmConfig::validate() const {
  if (max_iterations < 1) throw ValidationError("em config: max_iterations must be >= 1");
  if (!(tolerance > 0.0)) throw ValidationError("em config: tolerance must be positive");
  if (variance_floor < 0.0) throw ValidationError("em config: variance_floor must be >= 0");
}

Gmm1D fit_gmm(std::span<const double> values, const EmConfig& config) {
  config.validate();
  const std::size_t n = values.size();
  if (n < 2) throw ValidationError("fit_gmm: need at least 2 values, got " + std::to_string(n));
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("fit_gmm: values must be finite");

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double sample_var = 0.0;
  for (double v : values) sample_var += (v - mean) * (v - mean);
  sample_var /= static_cast<double>(n);

  Gmm1D gmm;
  if (sample_var == 0.0) {
    const double floor = config.variance_floor > 0.0 ? config.variance_floor : 1e-12;
    gmm.mean_1 = gmm.mean_2 = values[0];
    gmm.var_1 = gmm.var_2 = floor;
    gmm.weight_1 = gmm.weight_2 = 0.5;
    gmm.converged = true;
    gmm.degenerate = true;
    gmm.log_likelihood = static_cast<double>(n) * log_normal_pdf(values[0], values[0], floor);
    return gmm;
  }

  const double floor = config.variance_floor > 0.0 ? config.variance_floor : 1e-6 * sample_var;

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  gmm.mean_1 = percentile(sorted, 0.10);
  gmm.mean_2 = percentile(sorted, 0.90);
  if (gmm.mean_1 == gmm.mean_2) {
    // Heavy ties can collapse the percentile spread; fall back to the range.
    gmm.mean_1 = sorted.front();
    gmm.mean_2 = sorted.back();
  }
  gmm.var_1 = gmm.var_2 = std::max(sample_var, floor);
  gmm.weight_1 = gmm.weight_2 = 0.5;

  std::vector<double> resp(n);  // responsibility of component 1
  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    // E-step in the log domain.
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double l1 = std::log(gmm.weight_1) + log_normal_pdf(values[i], gmm.mean_1, gmm.var_1);
      const double l2 = std::log(gmm.weight_2) + log_normal_pdf(values[i], gmm.mean_2, gmm.var_2);
      const double hi = std::max(l1, l2);
      const double lse = hi + std::log(std::exp(l1 - hi) + std::exp(l2 - hi));
      resp[i] = std::exp(l1 - lse);
      ll += lse;
    }

    // M-step.
    double n1 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      n1 += resp[i];
      s1 += resp[i] * values[i];
      s2 += (1.0 - resp[i]) * values[i];
    }
    const double n2 = static_cast<double>(n) - n1;
    constexpr double kTinyMass = 1e-10;
    if (n1 > kTinyMass) gmm.mean_1 = s1 / n1;
    if (n2 > kTinyMass) gmm.mean_2 = s2 / n2;
    double v1 = 0.0, v2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d1 = values[i] - gmm.mean_1;
      const double d2 = values[i] - gmm.mean_2;
      v1 += resp[i] * d1 * d1;
      v2 += (1.0 - resp[i]) * d2 * d2;
    }
    if (n1 > kTinyMass) gmm.var_1 = std::max(v1 / n1, floor);
    if (n2 > kTinyMass) gmm.var_2 = std::max(v2 / n2, floor);
    const double w1 = std::clamp(n1 / static_cast<double>(n), 1e-12, 1.0 - 1e-12);
    gmm.weight_1 = w1;
    gmm.weight_2 = 1.0 - w1;

    gmm.iterations = iter;
    gmm.log_likelihood = ll;
    gmm.ll_history.push_back(ll);
    if (std::abs(ll - prev_ll) < config.tolerance) {
      gmm.converged = true;
      break;
    }
    prev_ll = ll;
  }
  return gmm;
}

std::pair<double, double> posterior(const Gmm1D& gmm, double x) {
  const double l1 = std::log(gmm.weight_1) + log_normal_pdf(x, gmm.mean_1, gmm.var_1);
  const double l2 = std::log(gmm.weight_2) + log_normal_pdf(x, gmm.mean_2, gmm.var_2);
  const double p1 = 1.0 / (1.0 + std::exp(l2 - l1));
  return {p1, 1.0 - p1};
}

int higher_mean_component(const Gmm1D& gmm) { return gmm.mean_2 > gmm.mean_1 ? 2 : 1; }

bool means_tied(const Gmm1D& gmm) { return gmm.mean_1 == gmm.mean_2; }

}  // namespace psdc
