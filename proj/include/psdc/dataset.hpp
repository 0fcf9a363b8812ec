#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "psdc/matrix.hpp"

namespace psdc {

/// A labeled feature dataset: the unit everything downstream consumes.
/// `noisy_labels` are the (possibly corrupted) training labels; `true_labels`
/// are optional ground truth kept for evaluation only.
struct Dataset {
  Matrix features;                                // N x D
  std::vector<int> noisy_labels;                  // values in [0, k)
  std::optional<std::vector<int>> true_labels;    // same length when present
  int k = 0;                                      // class count
  std::vector<std::string> ids;                   // unique sample identifiers

  std::size_t size() const { return noisy_labels.size(); }
  std::size_t dim() const { return features.cols(); }

  /// Throws ValidationError if any invariant is broken: label range, finite
  /// features, unique ids, matching lengths.
  void validate() const;

  /// Copy with ground-truth labels removed (selection-facing view).
  Dataset without_true_labels() const;
};

/// Parameters for synthetic feature generation. Class means are mutually
/// separated by at least separation*sigma; each class is an isotropic
/// Gaussian blob with standard deviation sigma.
struct SyntheticSpec {
  int k = 2;
  int dim = 2;
  int per_class = 2;
  double separation = 0.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Deterministic synthetic dataset: k*per_class rows, true_labels == noisy_labels.
Dataset generate_synthetic(const SyntheticSpec& spec);

/// Class-mean layout used by generate_synthetic (exposed for oracle checks).
/// Means sit on coordinate axes at radius separation*scale*sqrt(2)/2, with
/// radius growth per layer once k exceeds dim, so every pair of means is at
/// least separation*scale apart. scale is sigma, or 1 when sigma == 0.
Matrix synthetic_class_means(int k, int dim, double separation, double sigma);

// --- CSV I/O -----------------------------------------------------------
// Format: header `id,label,true_label,f0,...,f{D-1}`; the true_label column
// may be omitted entirely or left empty; UTF-8, LF line endings; features
// rendered with 17 significant digits so save/load round-trips exactly.

/// Parse a dataset from CSV text. expected_k > 0 enforces the class count;
/// otherwise k is inferred as 1 + max label seen.
Dataset parse_dataset_csv(const std::string& text, int expected_k = 0);
std::string dataset_to_csv(const Dataset& dataset);

Dataset load_dataset(const std::string& path, int expected_k = 0);
void save_dataset(const Dataset& dataset, const std::string& path);

}  // namespace psdc
