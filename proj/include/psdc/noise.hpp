#pragma once

#include <cstdint>
#include <string>

#include "psdc/dataset.hpp"
#include "psdc/matrix.hpp"

namespace psdc {

enum class NoiseType { kUniform, kPairwise, kStructured };

std::string noise_type_name(NoiseType type);
NoiseType noise_type_from_name(const std::string& name);

/// Row-stochastic label-corruption model. entries(i, j) is the probability
/// that a class-i sample is observed with label j.
struct TransitionMatrix {
  Matrix entries;  // k x k
  NoiseType noise_type = NoiseType::kUniform;
  double rate = 0.0;

  int k() const { return static_cast<int>(entries.rows()); }

  /// Rows sum to 1 within 1e-12, all entries in [0, 1].
  void validate() const;

  /// Theorem-2 condition: T_ii > max(max_{j!=i} T_ij, max_{j!=i} T_ji) for all i.
  bool diagonally_dominant() const;
};

/// Build a transition matrix of the given family:
///   uniform    - diagonal 1-(k-1)r/k, every off-diagonal r/k
///   pairwise   - diagonal 1-r, mass r on the next class (cyclic)
///   structured - class 0 stays clean; class i puts mass r on (i+2) mod k
/// Rates above 0.5 for pairwise/structured break diagonal dominance; a
/// warning is printed but the matrix is still returned.
TransitionMatrix make_transition(NoiseType type, double rate, int k);

/// Resample each noisy label from the row T[true_label]. True labels are
/// preserved (noisy_labels are taken as truth when true_labels are absent).
/// Deterministic given seed.
Dataset corrupt_labels(const Dataset& dataset, const TransitionMatrix& t, std::uint64_t seed);

// JSON round-trip: { "k": int, "noise_type": str, "rate": float, "rows": [[...]] }
std::string transition_to_json(const TransitionMatrix& t);
TransitionMatrix transition_from_json(const std::string& text);

}  // namespace psdc
