#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "psdc/dataset.hpp"
#include "psdc/matrix.hpp"

namespace psdc {

/// One class's pairwise cosine-similarity matrix and its row sums. Row sums
/// include the diagonal self-similarity term: the +1 shift is shared by all
/// rows of a group and cannot change which mixture component sits higher.
struct AffinityGroup {
  int class_id = 0;
  std::vector<std::size_t> member_indices;  // global indices, dataset order
  Matrix matrix;                            // n x n cosine similarities
  std::vector<double> row_sums;             // length n

  std::size_t size() const { return member_indices.size(); }

  /// Symmetry, [-1,1] range, unit diagonal, row-sum consistency (1e-9).
  void validate() const;
};

/// Partition sample indices by noisy label. Classes without samples are
/// absent; within a group, dataset order is preserved.
std::vector<std::pair<int, std::vector<std::size_t>>> group_by_label(const Dataset& dataset);
std::vector<std::pair<int, std::vector<std::size_t>>> group_by_label(
    const std::vector<int>& labels);

/// Cosine similarity clamped to [-1, 1]. Zero-norm arguments raise a
/// DomainError naming which side was degenerate.
double cosine(std::span<const double> u, std::span<const double> v);

/// Build the affinity matrix and row sums for one class. Needs n >= 2 and
/// nonzero member features; `ids`, when given, improves error messages.
AffinityGroup affinity_group(const Matrix& features, int class_id,
                             std::vector<std::size_t> member_indices,
                             const std::vector<std::string>* ids = nullptr);
AffinityGroup affinity_group(const Dataset& dataset, int class_id,
                             std::vector<std::size_t> member_indices);

/// Debug dump: square CSV with sample ids on both axes.
std::string affinity_group_to_csv(const AffinityGroup& group, const std::vector<std::string>& ids);

}  // namespace psdc
