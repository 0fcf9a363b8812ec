#include <doctest.h>

#include <cmath>
#include <numbers>

#include "psdc/errors.hpp"
#include "psdc/noise.hpp"
#include "psdc/rng.hpp"
#include "psdc/selection.hpp"
#include "psdc/theory.hpp"

using namespace psdc;

TEST_CASE("oracle_softmax: transition rows") {
  const TransitionMatrix identity = make_transition(NoiseType::kUniform, 0.0, 5);
  CHECK(oracle_softmax(identity, 3) == onehot(5, 3));

  const TransitionMatrix t = make_transition(NoiseType::kUniform, 0.4, 10);
  const auto row = oracle_softmax(t, 0);
  CHECK(row[0] == doctest::Approx(0.64).epsilon(1e-14));
  for (std::size_t i = 1; i < 10; ++i) CHECK(row[i] == doctest::Approx(0.04).epsilon(1e-14));
  double sum = 0.0;
  for (double v : row) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));

  CHECK_THROWS_AS(static_cast<void>(oracle_softmax(t, 10)), ValidationError);
}

TEST_CASE("jsd_closed_form: identity transition") {
  const TransitionMatrix identity = make_transition(NoiseType::kUniform, 0.0, 4);
  CHECK(jsd_closed_form(identity, 2, 2) == 0.0);
  CHECK(jsd_closed_form(identity, 1, 2) == doctest::Approx(std::numbers::ln2).epsilon(1e-15));
}

TEST_CASE("jsd_closed_form: agrees with the generic divergence") {
  const TransitionMatrix t = make_transition(NoiseType::kUniform, 0.4, 10);
  for (int h = 0; h < 10; ++h)
    for (int y = 0; y < 10; ++y)
      CHECK(jsd_closed_form(t, h, y) ==
            doctest::Approx(jsd(oracle_softmax(t, h), onehot(10, y))).epsilon(1e-10));
  CHECK(jsd_closed_form(t, 3, 3) < jsd_closed_form(t, 5, 3));
}

TEST_CASE("jsd_closed_form: random row-stochastic cross-check") {
  Rng rng(31337);
  for (int round = 0; round < 100; ++round) {
    const int k = 2 + static_cast<int>(rng.index(15));
    TransitionMatrix t;
    t.entries = Matrix(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      double sum = 0.0;
      for (int j = 0; j < k; ++j) {
        const double v = -std::log(rng.uniform_open());
        t.entries.at(i, j) = v;
        sum += v;
      }
      for (int j = 0; j < k; ++j) t.entries.at(i, j) /= sum;
    }
    const int h = static_cast<int>(rng.index(static_cast<std::size_t>(k)));
    const int y = static_cast<int>(rng.index(static_cast<std::size_t>(k)));
    CHECK(std::abs(jsd_closed_form(t, h, y) - jsd(oracle_softmax(t, h), onehot(k, y))) < 1e-10);
  }
}

TEST_CASE("verify_theorem2: uniform gap identity and ordering") {
  const auto reports = verify_theorem2(NoiseType::kUniform, {0.4}, 10);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].off_diagonal_gap == doctest::Approx(0.6).epsilon(1e-13));
  CHECK(reports[0].gap_identity_holds);
  CHECK(reports[0].ordering_holds);
  CHECK(reports[0].expected_ordering);
  CHECK(reports[0].diagonally_dominant);
}

TEST_CASE("verify_theorem2: pairwise sign change at one half") {
  const auto reports = verify_theorem2(NoiseType::kPairwise, {0.49, 0.51}, 10);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].ordering_holds);
  CHECK(reports[0].expected_ordering);
  CHECK_FALSE(reports[1].ordering_holds);
  CHECK_FALSE(reports[1].expected_ordering);
  CHECK(reports[0].gap_identity_holds);
  CHECK(reports[1].gap_identity_holds);
  // The worst-case gap is 1 - 2r on the pairwise family.
  CHECK(reports[0].off_diagonal_gap == doctest::Approx(1.0 - 2 * 0.49).epsilon(1e-12));
  CHECK(reports[1].off_diagonal_gap == doctest::Approx(1.0 - 2 * 0.51).epsilon(1e-12));
}

TEST_CASE("verify_theorem2: zero rate degenerates to the extremes") {
  for (const NoiseType type : {NoiseType::kUniform, NoiseType::kPairwise}) {
    const auto reports = verify_theorem2(type, {0.0}, 6);
    CHECK(reports[0].jsd_clean == 0.0);
    REQUIRE(reports[0].jsd_noisy.size() == 1);
    CHECK(reports[0].jsd_noisy[0] == doctest::Approx(std::numbers::ln2).epsilon(1e-15));
    CHECK(reports[0].ordering_holds);
  }
}

TEST_CASE("verify_theorem2: structured gaps stay in the documented set") {
  for (const double r : {0.1, 0.3, 0.49}) {
    const auto reports = verify_theorem2(NoiseType::kStructured, {r}, 7);
    CHECK(reports[0].gap_identity_holds);
  }
}

TEST_CASE("verify_theorem2: clean-case divergence grows with the uniform rate") {
  // Numeric sanity property, not a theorem claim.
  for (const int k : {2, 5, 16}) {
    std::vector<double> rates;
    for (double r = 0.0; r <= 0.901; r += 0.1) rates.push_back(r);
    const auto reports = verify_theorem2(NoiseType::kUniform, rates, k);
    for (std::size_t i = 1; i < reports.size(); ++i)
      CHECK(reports[i].jsd_clean >= reports[i - 1].jsd_clean - 1e-12);
  }
}

TEST_CASE("submerged_check: strict mass comparison") {
  CHECK_FALSE(submerged_check(std::vector<double>{3, 3}, std::vector<double>{1, 1}));
  CHECK(submerged_check(std::vector<double>{1}, std::vector<double>{5}));
  CHECK_FALSE(submerged_check(std::vector<double>{2, 2}, std::vector<double>{4}));  // equal sums
  CHECK_THROWS_AS(static_cast<void>(submerged_check({}, std::vector<double>{1})), ValidationError);
  CHECK_THROWS_AS(static_cast<void>(submerged_check(std::vector<double>{1}, {})), ValidationError);
}

TEST_CASE("verify_theorem1: benchmark ordering with a wide margin") {
  const SyntheticSpec spec{10, 32, 200, 8.0, 1.0, 7};
  const TransitionMatrix t = make_transition(NoiseType::kUniform, 0.4, 10);
  const Theorem1Report report = verify_theorem1(spec, t, 5, 7);
  CHECK(report.ordering_holds);
  CHECK_FALSE(report.submerged);
  CHECK(report.mu_p - report.mu_q > 50.0);
  CHECK(report.per_trial.size() == 5);
  for (const auto& trial : report.per_trial) {
    CHECK(trial.ordering);
    CHECK_FALSE(trial.any_submerged);
  }
  CHECK(report.max_single_variance_share < 0.5);
  CHECK(report.lyapunov_variance_sum > 0.0);
}

TEST_CASE("verify_theorem1: zero noise is vacuous") {
  const SyntheticSpec spec{4, 8, 20, 6.0, 1.0, 3};
  const TransitionMatrix t = make_transition(NoiseType::kUniform, 0.0, 4);
  const Theorem1Report report = verify_theorem1(spec, t, 2, 3);
  CHECK(report.vacuous);
  CHECK_FALSE(report.ordering_holds);
}

TEST_CASE("verify_theorem1: identical class distributions are reported, not asserted") {
  // separation 0 violates the distinct-distribution hypothesis; the report
  // must still be well-formed with means close together.
  const SyntheticSpec spec{4, 8, 50, 0.0, 1.0, 13};
  const TransitionMatrix t = make_transition(NoiseType::kUniform, 0.4, 4);
  const Theorem1Report report = verify_theorem1(spec, t, 3, 13);
  CHECK_FALSE(report.vacuous);
  CHECK(std::abs(report.mu_p - report.mu_q) < 5.0);
}

TEST_CASE("theorem reports serialize") {
  const auto t2 = verify_theorem2(NoiseType::kUniform, {0.2, 0.5}, 5);
  const std::string json2 = theorem2_to_json(t2);
  CHECK(json2.find("\"ordering_holds\"") != std::string::npos);

  const SyntheticSpec spec{3, 4, 10, 5.0, 1.0, 2};
  const Theorem1Report t1 =
      verify_theorem1(spec, make_transition(NoiseType::kUniform, 0.3, 3), 2, 2);
  const std::string json1 = theorem1_to_json(t1);
  CHECK(json1.find("\"mu_p\"") != std::string::npos);
  CHECK(json1.find("\"per_trial\"") != std::string::npos);
}
