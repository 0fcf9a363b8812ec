#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "psdc/errors.hpp"
#include "psdc/gmm.hpp"
#include "psdc/rng.hpp"

using namespace psdc;

namespace {

std::vector<double> two_gaussians(double mu_a, double mu_b, std::size_t n_each,
                                  std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> values;
  values.reserve(2 * n_each);
  for (std::size_t i = 0; i < n_each; ++i) values.push_back(mu_a + rng.normal());
  for (std::size_t i = 0; i < n_each; ++i) values.push_back(mu_b + rng.normal());
  return values;
}

void check_monotone_ll(const Gmm1D& gmm) {
  for (std::size_t i = 1; i < gmm.ll_history.size(); ++i)
    CHECK(gmm.ll_history[i] >= gmm.ll_history[i - 1] - 1e-9);
}

}  // namespace

TEST_CASE("fit_gmm: two point masses") {
  const std::vector<double> values{0, 0, 0, 10, 10, 10};
  const Gmm1D gmm = fit_gmm(values);
  const double lo = std::min(gmm.mean_1, gmm.mean_2);
  const double hi = std::max(gmm.mean_1, gmm.mean_2);
  CHECK(lo == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(hi == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(gmm.var_1 <= 1e-4);
  CHECK(gmm.var_2 <= 1e-4);
  CHECK(gmm.converged);
  check_monotone_ll(gmm);
}

TEST_CASE("fit_gmm: zero-spread input degenerates cleanly") {
  const std::vector<double> values{3.0, 3.0, 3.0, 3.0};
  const Gmm1D gmm = fit_gmm(values);
  CHECK(gmm.degenerate);
  CHECK(gmm.converged);
  CHECK(gmm.mean_1 == 3.0);
  CHECK(gmm.mean_2 == 3.0);
}

TEST_CASE("fit_gmm: too few samples") {
  CHECK_THROWS_AS(static_cast<void>(fit_gmm(std::vector<double>{1.0})), ValidationError);
}

TEST_CASE("fit_gmm: recovers a planted 0/6 mixture") {
  const std::vector<double> values = two_gaussians(0.0, 6.0, 500, 2024);

  // Independent oracle: per-half sample means of the generating draws.
  double mean_lo = 0.0, mean_hi = 0.0;
  for (std::size_t i = 0; i < 500; ++i) mean_lo += values[i];
  for (std::size_t i = 500; i < 1000; ++i) mean_hi += values[i];
  mean_lo /= 500.0;
  mean_hi /= 500.0;
  CHECK(std::abs(mean_lo - 0.0) < 0.15);
  CHECK(std::abs(mean_hi - 6.0) < 0.15);

  const Gmm1D gmm = fit_gmm(values);
  const double lo = std::min(gmm.mean_1, gmm.mean_2);
  const double hi = std::max(gmm.mean_1, gmm.mean_2);
  CHECK(std::abs(lo - 0.0) < 0.2);
  CHECK(std::abs(hi - 6.0) < 0.2);
  CHECK(std::abs(gmm.weight_1 - 0.5) < 0.05);
  CHECK(std::abs(gmm.weight_2 - 0.5) < 0.05);
  CHECK(lo == doctest::Approx(mean_lo).epsilon(0.15));
  CHECK(hi == doctest::Approx(mean_hi).epsilon(0.15));
  check_monotone_ll(gmm);
}

TEST_CASE("fit_gmm: log-likelihood monotone on assorted inputs") {
  Rng rng(5150);
  for (int round = 0; round < 25; ++round) {
    std::vector<double> values(20 + rng.index(200));
    const double spread = 0.5 + 4.0 * rng.uniform();
    const double gap = 10.0 * rng.uniform();
    for (std::size_t i = 0; i < values.size(); ++i)
      values[i] = (i % 2 == 0 ? 0.0 : gap) + spread * rng.normal();
    check_monotone_ll(fit_gmm(values));
  }
}

TEST_CASE("fit_gmm: reflection symmetry up to component relabeling") {
  const std::vector<double> values = two_gaussians(-1.0, 4.0, 120, 99);
  std::vector<double> negated(values.size());
  std::transform(values.begin(), values.end(), negated.begin(), [](double v) { return -v; });

  const Gmm1D a = fit_gmm(values);
  const Gmm1D b = fit_gmm(negated);
  auto sorted_triples = [](const Gmm1D& g) {
    std::vector<std::array<double, 3>> t{{g.mean_1, g.var_1, g.weight_1},
                                         {g.mean_2, g.var_2, g.weight_2}};
    std::sort(t.begin(), t.end());
    return t;
  };
  const auto ta = sorted_triples(a);
  auto tb = sorted_triples(b);
  // Negate b's means back and re-sort; the mixtures must coincide.
  for (auto& triple : tb) triple[0] = -triple[0];
  std::sort(tb.begin(), tb.end());
  for (int c = 0; c < 2; ++c)
    for (int f = 0; f < 3; ++f) CHECK(ta[c][f] == doctest::Approx(tb[c][f]).epsilon(1e-6));
}

TEST_CASE("fit_gmm: affine shift equivariance") {
  const std::vector<double> values = two_gaussians(0.0, 5.0, 150, 31);
  const double shift = 17.25;
  std::vector<double> shifted(values.size());
  std::transform(values.begin(), values.end(), shifted.begin(),
                 [&](double v) { return v + shift; });

  const Gmm1D a = fit_gmm(values);
  const Gmm1D b = fit_gmm(shifted);
  const double lo_a = std::min(a.mean_1, a.mean_2), hi_a = std::max(a.mean_1, a.mean_2);
  const double lo_b = std::min(b.mean_1, b.mean_2), hi_b = std::max(b.mean_1, b.mean_2);
  CHECK(lo_b == doctest::Approx(lo_a + shift).epsilon(1e-6));
  CHECK(hi_b == doctest::Approx(hi_a + shift).epsilon(1e-6));
  CHECK(std::min(b.var_1, b.var_2) == doctest::Approx(std::min(a.var_1, a.var_2)).epsilon(1e-6));
  CHECK(std::max(b.var_1, b.var_2) == doctest::Approx(std::max(a.var_1, a.var_2)).epsilon(1e-6));

  // Positive scaling preserves which side the higher mean is on.
  std::vector<double> scaled(values.size());
  std::transform(values.begin(), values.end(), scaled.begin(), [](double v) { return 3.0 * v; });
  const Gmm1D c = fit_gmm(scaled);
  CHECK(higher_mean_component(c) == higher_mean_component(a));
}

TEST_CASE("posterior: sums to one and saturates at a separated mean") {
  const Gmm1D gmm = fit_gmm(two_gaussians(0.0, 8.0, 200, 7));
  const auto [p1, p2] = posterior(gmm, 0.0);
  CHECK(p1 + p2 == doctest::Approx(1.0).epsilon(1e-12));
  const double at_mean_1 = gmm.mean_1 < gmm.mean_2 ? p1 : p2;
  CHECK(at_mean_1 > 0.99);
}

TEST_CASE("posterior: symmetric mixture is even at the midpoint") {
  Gmm1D gmm;
  gmm.weight_1 = gmm.weight_2 = 0.5;
  gmm.mean_1 = 0.0;
  gmm.mean_2 = 4.0;
  gmm.var_1 = gmm.var_2 = 1.0;
  const auto [p1, p2] = posterior(gmm, 2.0);
  CHECK(p1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p2 == doctest::Approx(0.5).epsilon(1e-12));

  // Swapping the component means swaps the posteriors.
  Gmm1D swapped = gmm;
  std::swap(swapped.mean_1, swapped.mean_2);
  const auto [q1, q2] = posterior(gmm, 1.0);
  const auto [r1, r2] = posterior(swapped, 1.0);
  CHECK(q1 == doctest::Approx(r2).epsilon(1e-12));
  CHECK(q2 == doctest::Approx(r1).epsilon(1e-12));
}

TEST_CASE("higher_mean_component: ordering and tie rule") {
  Gmm1D gmm;
  gmm.mean_1 = 2.0;
  gmm.mean_2 = 5.0;
  CHECK(higher_mean_component(gmm) == 2);
  gmm.mean_1 = 5.0;
  gmm.mean_2 = 2.0;
  CHECK(higher_mean_component(gmm) == 1);
  gmm.mean_2 = 5.0;
  CHECK(higher_mean_component(gmm) == 1);
  CHECK(means_tied(gmm));
}
