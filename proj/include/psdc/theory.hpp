#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "psdc/dataset.hpp"
#include "psdc/noise.hpp"

namespace psdc {

/// Monte Carlo evidence for the row-sum ordering claim: clean samples carry
/// higher affinity row sums than mislabeled ones, provided they are not
/// submerged and the class distributions differ.
struct Theorem1Report {
  double mu_p = 0.0;     // mean row sum over clean samples
  double mu_q = 0.0;     // mean row sum over mislabeled samples
  double sigma_p = 0.0;
  double sigma_q = 0.0;
  double skewness_p = 0.0;  // descriptive normality diagnostics
  double skewness_q = 0.0;
  bool submerged = false;       // any class in any trial had clean mass below noisy mass
  bool ordering_holds = false;  // mu_p > mu_q in every trial with noisy samples
  bool vacuous = false;         // no mislabeled samples anywhere
  double lyapunov_variance_sum = 0.0;      // total squared deviation of noisy row sums
  double max_single_variance_share = 0.0;  // largest single-sample share of a class's total
  int excluded_class_trials = 0;           // class/trial pairs with no clean samples
  int submerged_class_trials = 0;

  struct Trial {
    double mu_p = 0.0;
    double mu_q = 0.0;
    bool ordering = false;
    bool any_submerged = false;
    bool vacuous = false;
  };
  std::vector<Trial> per_trial;
};

/// Closed-form divergence landscape of an idealized classifier whose softmax
/// equals the transition row of the predicted class.
struct Theorem2Report {
  NoiseType noise_type = NoiseType::kUniform;
  double rate = 0.0;
  int k = 0;
  double jsd_clean = 0.0;            // worst (largest) correctly-labeled case
  std::vector<double> jsd_noisy;     // distinct wrong-class case values, ascending
  double jsd_noisy_min = 0.0;
  double off_diagonal_gap = 0.0;     // smallest noisy-minus-clean off-diagonal gap
  bool ordering_holds = false;       // per label: clean < every wrong-class case
  bool expected_ordering = false;    // what the rate conditions predict
  bool gap_identity_holds = false;   // gaps match the family's closed forms exactly
  bool diagonally_dominant = false;
};

/// Row `predicted_class` of T: the idealized softmax output.
std::vector<double> oracle_softmax(const TransitionMatrix& t, int predicted_class);

/// Closed-form JSD between that idealized softmax and onehot(label):
///   (log 2 * (1 + S) + T_hy * log(2 T_hy / (1 + T_hy)) - log(1 + T_hy)) / 2
/// with S the off-diagonal sum of row h w.r.t. label y and T_hy its mass on y.
double jsd_closed_form(const TransitionMatrix& t, int h_class, int label);

/// Evaluate the divergence ordering for each rate. Wrong-class cases
/// enumerate every h != label; the reported minimum is the worst case.
std::vector<Theorem2Report> verify_theorem2(NoiseType type, const std::vector<double>& rates,
                                            int k);

/// True iff the clean row-sum mass is strictly below the noisy mass.
bool submerged_check(std::span<const double> clean_row_sums,
                     std::span<const double> noisy_row_sums);

/// Monte Carlo ordering check: generate, corrupt, build per-class affinity
/// groups, split row sums by ground truth, aggregate over trials.
Theorem1Report verify_theorem1(const SyntheticSpec& spec, const TransitionMatrix& noise,
                               int trials, std::uint64_t seed);

std::string theorem1_to_json(const Theorem1Report& report);
std::string theorem2_to_json(const std::vector<Theorem2Report>& reports);

}  // namespace psdc
