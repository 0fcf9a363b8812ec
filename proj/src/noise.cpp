#include "psdc/noise.hpp"

#include <cmath>
#include <iostream>

#include <json.hpp>

#include "psdc/errors.hpp"
#include "psdc/rng.hpp"

namespace psdc {

std::string noise_type_name(NoiseType type) {
  switch (type) {
    case NoiseType::kUniform: return "uniform";
    case NoiseType::kPairwise: return "pairwise";
    case NoiseType::kStructured: return "structured";
  }
  throw ValidationError("unknown noise type");
}

NoiseType noise_type_from_name(const std::string& name) {
  if (name == "uniform") return NoiseType::kUniform;
  if (name == "pairwise") return NoiseType::kPairwise;
  if (name == "structured") return NoiseType::kStructured;
  throw ValidationError("unknown noise type '" + name + "'");
}

void TransitionMatrix::validate() const {
  if (entries.rows() != entries.cols() || entries.rows() < 2)
    throw ValidationError("transition matrix must be square with k >= 2");
  for (std::size_t i = 0; i < entries.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < entries.cols(); ++j) {
      const double v = entries.at(i, j);
      if (v < 0.0 || v > 1.0)
        throw ValidationError("transition entry out of [0,1] at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw ValidationError("transition row " + std::to_string(i) + " sums to " +
                            std::to_string(sum) + ", expected 1");
  }
}

bool TransitionMatrix::diagonally_dominant() const {
  const std::size_t n = entries.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      off = std::max(off, std::max(entries.at(i, j), entries.at(j, i)));
    }
    if (!(entries.at(i, i) > off)) return false;
  }
  return true;
}

TransitionMatrix make_transition(NoiseType type, double rate, int k) {
  if (rate < 0.0 || rate > 1.0)
    throw ValidationError("noise rate " + std::to_string(rate) + " outside [0,1]");
  if (k < 2) throw ValidationError("transition matrix needs k >= 2");
  if (type != NoiseType::kUniform && rate > 0.5)
    std::cerr << "warning: " << noise_type_name(type) << " noise rate " << rate
              << " exceeds 0.5; diagonal dominance does not hold\n";

  const std::size_t n = static_cast<std::size_t>(k);
  TransitionMatrix t;
  t.noise_type = type;
  t.rate = rate;
  t.entries = Matrix(n, n, 0.0);

  switch (type) {
    case NoiseType::kUniform: {
      const double off = rate / k;
      const double diag = 1.0 - (k - 1) * rate / k;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t.entries.at(i, j) = (i == j) ? diag : off;
      break;
    }
    case NoiseType::kPairwise: {
      for (std::size_t i = 0; i < n; ++i) {
        t.entries.at(i, i) = 1.0 - rate;
        t.entries.at(i, (i + 1) % n) += rate;
      }
      break;
    }
    case NoiseType::kStructured: {
      // Class 0 is never corrupted; every other class leaks rate onto a
      // fixed target two steps ahead (cyclic). For k == 2 the target
      // coincides with the class itself and the row stays clean.
      t.entries.at(0, 0) = 1.0;
      for (std::size_t i = 1; i < n; ++i) {
        t.entries.at(i, i) += 1.0 - rate;
        t.entries.at(i, (i + 2) % n) += rate;
      }
      break;
    }
  }
  t.validate();
  return t;
}

Dataset corrupt_labels(const Dataset& dataset, const TransitionMatrix& t, std::uint64_t seed) {
  dataset.validate();
  t.validate();
  if (dataset.k != t.k())
    throw ValidationError("corrupt_labels: dataset has k=" + std::to_string(dataset.k) +
                          " but transition matrix has k=" + std::to_string(t.k()));

  Dataset out = dataset;
  const std::vector<int>& truth = dataset.true_labels ? *dataset.true_labels : dataset.noisy_labels;
  out.true_labels = truth;

  Rng rng(seed);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto row = t.entries.row(static_cast<std::size_t>(truth[i]));
    out.noisy_labels[i] = static_cast<int>(rng.discrete(row));
  }
  return out;
}

std::string transition_to_json(const TransitionMatrix& t) {
  nlohmann::json j;
  j["k"] = t.k();
  j["noise_type"] = noise_type_name(t.noise_type);
  j["rate"] = t.rate;
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < t.entries.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (std::size_t c = 0; c < t.entries.cols(); ++c) row.push_back(t.entries.at(i, c));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

TransitionMatrix transition_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("transition json: ") + e.what());
  }
  TransitionMatrix t;
  try {
    const int k = j.at("k").get<int>();
    t.noise_type = noise_type_from_name(j.at("noise_type").get<std::string>());
    t.rate = j.at("rate").get<double>();
    const auto& rows = j.at("rows");
    t.entries = Matrix(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < t.entries.rows(); ++i)
      for (std::size_t c = 0; c < t.entries.cols(); ++c)
        t.entries.at(i, c) = rows.at(i).at(c).get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("transition json: ") + e.what());
  }
  t.validate();
  return t;
}

}  // namespace psdc
