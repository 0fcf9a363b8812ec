#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "psdc/dataset.hpp"
#include "psdc/gmm.hpp"
#include "psdc/matrix.hpp"

namespace psdc {

/// Class-centroid classifier predicting via temperature-scaled softmax over
/// cosine similarity. Stands in for a trained network at desk scale.
struct PrototypeModel {
  Matrix centroids;  // k x D
  double temperature = 1.0;
  std::vector<bool> zero_init;  // classes never fitted (centroid is zero)

  int k() const { return static_cast<int>(centroids.rows()); }
};

/// One semi-supervised training round record. Per-model values are kept so
/// co-teaching symmetry is observable; the aggregate columns are means over
/// the two models.
struct RoundRecord {
  int round = 0;  // 1-based
  std::string method_a, method_b;     // psdc | jsd
  std::string method;                 // aggregate: psdc | jsd | mixed
  double clean_purity = 0.0, clean_recall = 0.0;
  double clean_size = 0.0;            // mean of the two models' clean sizes
  double total_loss = 0.0;
  double pseudo_label_accuracy = 0.0;
  std::optional<double> agreement_a, agreement_b;  // hybrid rounds only
  double purity_a = 0.0, purity_b = 0.0;
  double loss_a = 0.0, loss_b = 0.0;
};

struct TrainReport {
  std::vector<RoundRecord> rounds;
  std::optional<double> final_accuracy;  // nearest-centroid on held-out data
  bool aborted = false;
  std::string abort_reason;
};

struct LoopConfig {
  int rounds = 5;
  double d_cutoff = 0.9;
  double lambda_u = 30.0;
  double lambda_r = 1.0;
  double lambda_c = 0.025;
  double kappa = 0.05;        // contrastive temperature
  double beta_param = 4.0;    // MixUp Beta parameter
  int warmup_rounds = 3;      // rounds with the divergence fallback active
  double temperature = 1.0;   // prototype softmax temperature
  int contrastive_batch = 64;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> model_seed_a, model_seed_b;  // default: derived from seed
  EmConfig em;

  void validate() const;
};

/// Weighted per-class centroids. Classes absent from `labels` keep the
/// previous model's centroid when given, else stay zero and are flagged.
PrototypeModel fit_prototypes(const Matrix& features, const std::vector<int>& labels, int k,
                              const std::optional<std::vector<double>>& weights = std::nullopt,
                              const PrototypeModel* previous = nullptr, double temperature = 1.0);

/// Centroids fitted on a seeded bootstrap of `fraction` of the rows: a
/// deliberately rough model state, used by the ablation harness as the
/// early-training surrogate whose predictions feed the label-dependent
/// selectors.
PrototypeModel fit_prototypes_subsample(const Matrix& features, const std::vector<int>& labels,
                                        int k, double fraction, std::uint64_t seed,
                                        double temperature = 1.0);

/// softmax_c(cosine(feature, centroid_c) / temperature); zero-init classes
/// contribute similarity 0.
std::vector<double> predict_soft(const PrototypeModel& model, std::span<const double> feature);
Matrix predict_soft_matrix(const PrototypeModel& model, const Matrix& features);

/// Convex blend dominated by the first argument: lambda ~ Beta(b, b),
/// lambda' = max(lambda, 1 - lambda).
std::pair<std::vector<double>, std::vector<double>> mixup(
    std::span<const double> x1, std::span<const double> p1, std::span<const double> x2,
    std::span<const double> p2, double beta_param, std::uint64_t seed);

/// Cross-entropy -sum target * log(pred), predictions clamped at 1e-12.
double loss_labeled(std::span<const double> pred, std::span<const double> target);

/// Squared L2 distance between target and prediction.
double loss_unlabeled(std::span<const double> pred, std::span<const double> target);

/// KL(prior || mean prediction of the batch); guards against single-class
/// collapse.
double loss_reg(const std::vector<std::vector<double>>& batch_preds,
                std::span<const double> prior);

std::vector<double> uniform_prior(int k);

/// NT-Xent over adjacent row pairs (2b, 2b+1) of `projections`.
double contrastive_loss(const Matrix& projections, double kappa);

double total_loss(double l_x, double l_u, double l_r, double l_c, const LoopConfig& config);

/// Co-teaching loop: two prototype models; each round one model's partition
/// is computed from the other model's predictions (divergence fallback
/// during warmup, pairwise-similarity selection alone afterwards), clean
/// samples refit the centroids with divergence-derived confidence weights,
/// noisy samples are pseudo-labeled, and MixUp losses are recorded.
/// Ground-truth labels are used for reporting only; selection sees a view
/// of the dataset with them removed.
TrainReport run_loop(const Dataset& dataset, const LoopConfig& config,
                     const std::optional<Dataset>& eval_dataset = std::nullopt);

std::string train_report_to_json(const TrainReport& report);
std::string train_report_to_csv(const TrainReport& report);  // per-round rows

}  // namespace psdc
