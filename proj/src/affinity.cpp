#include "psdc/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "psdc/errors.hpp"

namespace psdc {

void AffinityGroup::validate() const {
  const std::size_t n = member_indices.size();
  if (matrix.rows() != n || matrix.cols() != n)
    throw ValidationError("affinity group: matrix shape mismatch");
  if (row_sums.size() != n) throw ValidationError("affinity group: row_sums length mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(matrix.at(i, i) - 1.0) > 1e-9)
      throw ValidationError("affinity group: diagonal entry != 1 at " + std::to_string(i));
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix.at(i, j);
      if (v < -1.0 - 1e-9 || v > 1.0 + 1e-9)
        throw ValidationError("affinity group: entry outside [-1,1]");
      if (std::abs(v - matrix.at(j, i)) > 1e-9)
        throw ValidationError("affinity group: matrix not symmetric");
      sum += v;
    }
    if (std::abs(sum - row_sums[i]) > 1e-9)
      throw ValidationError("affinity group: row_sums inconsistent at " + std::to_string(i));
  }
}

std::vector<std::pair<int, std::vector<std::size_t>>> group_by_label(
    const std::vector<int>& labels) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
  std::vector<std::pair<int, std::vector<std::size_t>>> out;
  out.reserve(groups.size());
  for (auto& [cls, members] : groups) out.emplace_back(cls, std::move(members));
  return out;
}

std::vector<std::pair<int, std::vector<std::size_t>>> group_by_label(const Dataset& dataset) {
  return group_by_label(dataset.noisy_labels);
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ValidationError("cosine: dimension mismatch");
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu == 0.0) throw DomainError("cosine: first argument has zero norm");
  if (nv == 0.0) throw DomainError("cosine: second argument has zero norm");
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

AffinityGroup affinity_group(const Matrix& features, int class_id,
                             std::vector<std::size_t> member_indices,
                             const std::vector<std::string>* ids) {
  const std::size_t n = member_indices.size();
  if (n < 2)
    throw ValidationError("affinity group for class " + std::to_string(class_id) +
                          " needs at least 2 members, got " + std::to_string(n));

  auto describe = [&](std::size_t global) {
    return ids ? "sample '" + (*ids)[global] + "'" : "sample index " + std::to_string(global);
  };

  // Normalize once; the gram matrix of unit vectors is the cosine matrix.
  Matrix unit(n, features.cols());
  for (std::size_t p = 0; p < n; ++p) {
    const auto row = features.row(member_indices[p]);
    const double len = norm(row);
    if (len == 0.0)
      throw DomainError("affinity group for class " + std::to_string(class_id) + ": " +
                        describe(member_indices[p]) + " has zero-norm features");
    for (std::size_t d = 0; d < features.cols(); ++d) unit.at(p, d) = row[d] / len;
  }

  AffinityGroup group;
  group.class_id = class_id;
  group.member_indices = std::move(member_indices);
  group.matrix = Matrix(n, n, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    group.matrix.at(p, p) = 1.0;
    for (std::size_t q = p + 1; q < n; ++q) {
      const double sim = std::clamp(dot(unit.row(p), unit.row(q)), -1.0, 1.0);
      group.matrix.at(p, q) = sim;
      group.matrix.at(q, p) = sim;
    }
  }
  group.row_sums.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    double sum = 0.0;
    for (std::size_t q = 0; q < n; ++q) sum += group.matrix.at(p, q);
    group.row_sums[p] = sum;
  }
  return group;
}

AffinityGroup affinity_group(const Dataset& dataset, int class_id,
                             std::vector<std::size_t> member_indices) {
  return affinity_group(dataset.features, class_id, std::move(member_indices), &dataset.ids);
}

std::string affinity_group_to_csv(const AffinityGroup& group,
                                  const std::vector<std::string>& ids) {
  std::string out = "id";
  for (std::size_t idx : group.member_indices) out += "," + ids[idx];
  out += "\n";
  char buf[40];
  for (std::size_t p = 0; p < group.size(); ++p) {
    out += ids[group.member_indices[p]];
    for (std::size_t q = 0; q < group.size(); ++q) {
      std::snprintf(buf, sizeof buf, "%.17g", group.matrix.at(p, q));
      out += ",";
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace psdc
