#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psdc/dataset.hpp"
#include "psdc/gmm.hpp"
#include "psdc/matrix.hpp"

namespace psdc {

enum class SelectionMethod { kPsdc, kJsd, kHybrid, kGmmRaw, kKmeans, kCrossEntropy };

std::string selection_method_name(SelectionMethod method);
SelectionMethod selection_method_from_name(const std::string& name);

/// Per-class selection record: which members went where and the mixture
/// that decided it (absent for singleton groups and global-statistic methods).
struct ClassSelection {
  int class_id = 0;
  std::vector<std::size_t> clean;  // global indices, sorted
  std::vector<std::size_t> noisy;
  std::optional<Gmm1D> gmm;
  bool single_mode = false;  // group routed wholesale to the clean set
};

/// Global clean/noisy split plus provenance.
struct Partition {
  SelectionMethod method = SelectionMethod::kPsdc;
  std::vector<std::size_t> clean_indices;  // sorted
  std::vector<std::size_t> noisy_indices;  // sorted
  std::vector<ClassSelection> per_class;   // sorted by class_id
  std::optional<Gmm1D> global_gmm;         // jsd / ce / gmm_raw fits
  std::optional<double> agreement_ratio;   // set by hybrid_select
  std::size_t universe = 0;                // dataset size N

  /// clean and noisy are disjoint and together cover [0, universe).
  void validate() const;
};

/// Partition quality against ground truth. Empty sets score 1 by convention
/// and are flagged.
struct ClassReportRow {
  int class_id = 0;
  std::size_t clean_size = 0, noisy_size = 0;
  double clean_purity = 1.0, noisy_purity = 1.0, clean_recall = 1.0;
};

struct SelectionReport {
  double clean_purity = 1.0;   // fraction of clean set with noisy == true
  double noisy_purity = 1.0;   // fraction of noisy set with noisy != true
  double clean_recall = 1.0;   // fraction of truly-clean samples captured
  std::size_t clean_size = 0, noisy_size = 0;
  bool empty_clean = false, empty_noisy = false;
  std::vector<ClassReportRow> per_class;
};

struct SelectConfig {
  double d_cutoff = 0.9;
  EmConfig em;

  void validate() const;
};

/// Pairwise-similarity selection: per label group, fit a two-component GMM
/// on affinity row sums and keep samples whose posterior under the
/// higher-mean component exceeds d_cutoff. Singleton groups and groups whose
/// fitted components are not meaningfully separated go wholesale to clean.
Partition psdc_select(const Dataset& dataset, const Matrix& features,
                      const SelectConfig& config = {});

/// Jensen-Shannon divergence (natural log, 0*log 0 := 0); symmetric,
/// bounded by log 2. Inputs must be distributions (sum 1 within 1e-9).
double jsd(std::span<const double> p, std::span<const double> q);

std::vector<double> onehot(int k, int index);

/// Divergence-based baseline: one global GMM over per-sample
/// jsd(prediction, onehot(label)); the LOW-divergence (lower-mean)
/// component is clean.
Partition jsd_select(const Matrix& predictions, const std::vector<int>& noisy_labels,
                     const SelectConfig& config = {});

/// Small-loss baseline: GMM over per-sample cross-entropy of the prediction
/// at the noisy label; lower-mean component is clean.
Partition ce_select(const Matrix& predictions, const std::vector<int>& noisy_labels,
                    const SelectConfig& config = {});

/// Ungrouped baseline: GMM over per-sample mean feature value; higher-mean
/// component is clean (mirrors the row-sum convention).
Partition gmm_raw_select(const Matrix& features, const std::vector<int>& noisy_labels,
                         const SelectConfig& config = {});

/// Keep the pairwise-similarity partition unless its clean set covers less
/// than 0.8 of the divergence-based clean set, in which case fall back.
/// The agreement ratio |clean_a ∩ clean_b| / |clean_b| is reported on the
/// winner (absent when clean_b is empty).
Partition hybrid_select(const Partition& psdc_partition, const Partition& jsd_partition);

/// 2-means on affinity row sums per class; the cluster holding the majority
/// of that class's anchors (samples with known-clean labels) is clean.
Partition kmeans_select(const Dataset& dataset, const Matrix& features,
                        const std::map<int, std::vector<std::size_t>>& anchors);

/// Pick up to `per_class` anchor indices per class whose noisy label matches
/// the ground truth (requires true_labels).
std::map<int, std::vector<std::size_t>> pick_clean_anchors(const Dataset& dataset,
                                                           int per_class = 3);

SelectionReport evaluate_partition(const Partition& partition, const Dataset& dataset);

// JSON: { "method", "clean", "noisy", "per_class", "agreement_ratio", ... }
// with samples referenced by id.
std::string partition_to_json(const Partition& partition, const Dataset& dataset);
Partition partition_from_json(const std::string& text, const Dataset& dataset);
std::string report_to_json(const SelectionReport& report);

}  // namespace psdc
