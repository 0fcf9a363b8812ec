#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "psdc/affinity.hpp"
#include "psdc/errors.hpp"
#include "psdc/rng.hpp"

using namespace psdc;

namespace {

Dataset tiny_dataset(const std::vector<std::vector<double>>& rows, std::vector<int> labels) {
  Dataset d;
  d.features = Matrix::from_rows(rows);
  d.noisy_labels = std::move(labels);
  d.k = 1 + *std::max_element(d.noisy_labels.begin(), d.noisy_labels.end());
  for (std::size_t i = 0; i < d.noisy_labels.size(); ++i) d.ids.push_back("x" + std::to_string(i));
  return d;
}

}  // namespace

TEST_CASE("group_by_label: direct partition") {
  const auto groups = group_by_label(std::vector<int>{0, 1, 0});
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].first == 0);
  CHECK(groups[0].second == std::vector<std::size_t>{0, 2});
  CHECK(groups[1].first == 1);
  CHECK(groups[1].second == std::vector<std::size_t>{1});
}

TEST_CASE("group_by_label: single group and absent classes") {
  const auto one = group_by_label(std::vector<int>{2, 2, 2, 2});
  REQUIRE(one.size() == 1);
  CHECK(one[0].second.size() == 4);

  // class 1 has no samples: only 0 and 2 appear
  const auto sparse = group_by_label(std::vector<int>{0, 2, 0});
  REQUIRE(sparse.size() == 2);
  CHECK(sparse[0].first == 0);
  CHECK(sparse[1].first == 2);
}

TEST_CASE("cosine: identities") {
  const std::vector<double> x{3.0, -1.0, 2.0};
  CHECK(cosine(x, x) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  CHECK(cosine(std::vector<double>{1, 1}, std::vector<double>{1, 0}) ==
        doctest::Approx(0.7071067811865476).epsilon(1e-15));
}

TEST_CASE("cosine: zero-norm arguments identified") {
  const std::vector<double> zero{0.0, 0.0};
  const std::vector<double> x{1.0, 2.0};
  CHECK_THROWS_WITH_AS(static_cast<void>(cosine(zero, x)), doctest::Contains("first"),
                       DomainError);
  CHECK_THROWS_WITH_AS(static_cast<void>(cosine(x, zero)), doctest::Contains("second"),
                       DomainError);
}

TEST_CASE("affinity_group: two identical vectors") {
  const Dataset d = tiny_dataset({{1, 2}, {1, 2}}, {0, 0});
  const AffinityGroup g = affinity_group(d, 0, {0, 1});
  CHECK(g.matrix.at(0, 0) == 1.0);
  CHECK(g.matrix.at(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.row_sums[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g.row_sums[1] == doctest::Approx(2.0).epsilon(1e-15));
  g.validate();
}

TEST_CASE("affinity_group: hand-computed three-vector row sums") {
  const double s = std::numbers::sqrt2 / 2.0;
  const Dataset d = tiny_dataset({{1, 0}, {0, 1}, {s, s}}, {0, 0, 0});
  const AffinityGroup g = affinity_group(d, 0, {0, 1, 2});
  CHECK(g.row_sums[0] == doctest::Approx(1.0 + 0.0 + 1.0 / std::numbers::sqrt2).epsilon(1e-12));
  CHECK(g.row_sums[1] == doctest::Approx(1.0 + 1.0 / std::numbers::sqrt2).epsilon(1e-12));
  CHECK(g.row_sums[2] == doctest::Approx(1.0 + std::numbers::sqrt2).epsilon(1e-12));
  g.validate();
}

TEST_CASE("affinity_group: singleton and zero vectors rejected") {
  const Dataset d = tiny_dataset({{1, 0}, {0, 0}}, {0, 0});
  CHECK_THROWS_AS(static_cast<void>(affinity_group(d, 0, {0})), ValidationError);
  CHECK_THROWS_WITH_AS(static_cast<void>(affinity_group(d, 0, {0, 1})), doctest::Contains("x1"),
                       DomainError);
}

TEST_CASE("affinity_group: invariants hold on random inputs") {
  Rng rng(404);
  for (int round = 0; round < 20; ++round) {
    const std::size_t n = 2 + rng.index(12);
    const std::size_t dim = 2 + rng.index(6);
    std::vector<std::vector<double>> rows(n);
    for (auto& row : rows) {
      row.resize(dim);
      double len = 0.0;
      do {
        for (double& v : row) v = rng.normal();
        len = 0.0;
        for (double v : row) len += v * v;
      } while (len == 0.0);
    }
    Dataset d = tiny_dataset(rows, std::vector<int>(n, 0));
    std::vector<std::size_t> members(n);
    for (std::size_t i = 0; i < n; ++i) members[i] = i;
    const AffinityGroup g = affinity_group(d, 0, members);
    g.validate();
  }
}

TEST_CASE("affinity_group: permutation equivariance") {
  Rng rng(77);
  std::vector<std::vector<double>> rows(6, std::vector<double>(4));
  for (auto& row : rows)
    for (double& v : row) v = rng.normal() + 2.0;
  const Dataset d = tiny_dataset(rows, std::vector<int>(6, 0));

  const std::vector<std::size_t> order{0, 1, 2, 3, 4, 5};
  const std::vector<std::size_t> permuted{3, 0, 5, 1, 4, 2};
  const AffinityGroup a = affinity_group(d, 0, order);
  const AffinityGroup b = affinity_group(d, 0, permuted);
  for (std::size_t p = 0; p < permuted.size(); ++p) {
    CHECK(b.row_sums[p] == doctest::Approx(a.row_sums[permuted[p]]).epsilon(1e-12));
    for (std::size_t q = 0; q < permuted.size(); ++q)
      CHECK(b.matrix.at(p, q) ==
            doctest::Approx(a.matrix.at(permuted[p], permuted[q])).epsilon(1e-12));
  }
}

TEST_CASE("affinity_group_to_csv: indexed by sample id") {
  const Dataset d = tiny_dataset({{1, 0}, {1, 1}}, {0, 0});
  const AffinityGroup g = affinity_group(d, 0, {0, 1});
  const std::string csv = affinity_group_to_csv(g, d.ids);
  CHECK(csv.find("id,x0,x1\n") == 0);
  CHECK(csv.find("\nx0,") != std::string::npos);
  CHECK(csv.find("\nx1,") != std::string::npos);
}
