#include "psdc/theory.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "psdc/affinity.hpp"
#include "psdc/errors.hpp"
#include "psdc/rng.hpp"

namespace psdc {

std::vector<double> oracle_softmax(const TransitionMatrix& t, int predicted_class) {
  if (predicted_class < 0 || predicted_class >= t.k())
    throw ValidationError("oracle_softmax: class index out of range");
  const auto row = t.entries.row(static_cast<std::size_t>(predicted_class));
  return {row.begin(), row.end()};
}

double jsd_closed_form(const TransitionMatrix& t, int h_class, int label) {
  if (h_class < 0 || h_class >= t.k()) throw ValidationError("jsd_closed_form: h_class out of range");
  if (label < 0 || label >= t.k()) throw ValidationError("jsd_closed_form: label out of range");
  const std::size_t h = static_cast<std::size_t>(h_class);
  const std::size_t y = static_cast<std::size_t>(label);

  double off_sum = 0.0;
  for (std::size_t i = 0; i < t.entries.cols(); ++i)
    if (i != y) off_sum += t.entries.at(h, i);
  const double t_hy = t.entries.at(h, y);

  // t * log(2t/(1+t)) -> 0 as t -> 0.
  const double mass_term = t_hy > 0.0 ? t_hy * std::log(2.0 * t_hy / (1.0 + t_hy)) : 0.0;
  const double value =
      0.5 * (std::numbers::ln2 * (1.0 + off_sum) + mass_term - std::log1p(t_hy));
  return std::max(value, 0.0);
}

namespace {

void push_distinct(std::vector<double>& values, double v) {
  for (double existing : values)
    if (std::abs(existing - v) < 1e-12) return;
  values.push_back(v);
}

bool matches_any(double value, std::initializer_list<double> candidates) {
  for (double c : candidates)
    if (std::abs(value - c) <= 1e-12) return true;
  return false;
}

}  // namespace

std::vector<Theorem2Report> verify_theorem2(NoiseType type, const std::vector<double>& rates,
                                            int k) {
  std::vector<Theorem2Report> reports;
  reports.reserve(rates.size());
  for (double rate : rates) {
    const TransitionMatrix t = make_transition(type, rate, k);
    Theorem2Report rep;
    rep.noise_type = type;
    rep.rate = rate;
    rep.k = k;
    rep.diagonally_dominant = t.diagonally_dominant();

    auto off_diagonal_sum = [&](int h, int y) {
      double s = 0.0;
      for (int i = 0; i < k; ++i)
        if (i != y) s += t.entries.at(static_cast<std::size_t>(h), static_cast<std::size_t>(i));
      return s;
    };

    double worst_clean = 0.0;
    double min_noisy = std::numeric_limits<double>::infinity();
    double min_gap = std::numeric_limits<double>::infinity();
    bool ordering = true;
    bool gaps_ok = true;
    for (int y = 0; y < k; ++y) {
      const double clean_value = jsd_closed_form(t, y, y);
      worst_clean = std::max(worst_clean, clean_value);
      const double clean_off = off_diagonal_sum(y, y);
      double label_min_noisy = std::numeric_limits<double>::infinity();
      for (int h = 0; h < k; ++h) {
        if (h == y) continue;
        const double noisy_value = jsd_closed_form(t, h, y);
        push_distinct(rep.jsd_noisy, noisy_value);
        label_min_noisy = std::min(label_min_noisy, noisy_value);
        min_noisy = std::min(min_noisy, noisy_value);
        const double gap = off_diagonal_sum(h, y) - clean_off;
        min_gap = std::min(min_gap, gap);
        switch (type) {
          case NoiseType::kUniform:
            gaps_ok = gaps_ok && matches_any(gap, {1.0 - rate});
            break;
          case NoiseType::kPairwise:
            gaps_ok = gaps_ok && matches_any(gap, {1.0 - rate, 1.0 - 2.0 * rate});
            break;
          case NoiseType::kStructured:
            gaps_ok = gaps_ok && matches_any(gap, {1.0, 1.0 - rate, 1.0 - 2.0 * rate});
            break;
        }
      }
      if (!(clean_value < label_min_noisy)) ordering = false;
    }

    rep.jsd_clean = worst_clean;
    std::sort(rep.jsd_noisy.begin(), rep.jsd_noisy.end());
    rep.jsd_noisy_min = min_noisy;
    rep.off_diagonal_gap = min_gap;
    rep.ordering_holds = ordering;
    rep.gap_identity_holds = gaps_ok;
    rep.expected_ordering = type == NoiseType::kUniform ? rate < 1.0 : rate < 0.5;
    reports.push_back(std::move(rep));
  }
  return reports;
}

bool submerged_check(std::span<const double> clean_row_sums,
                     std::span<const double> noisy_row_sums) {
  if (clean_row_sums.empty()) throw ValidationError("submerged_check: empty clean row sums");
  if (noisy_row_sums.empty()) throw ValidationError("submerged_check: empty noisy row sums");
  double clean = 0.0, noisy = 0.0;
  for (double v : clean_row_sums) clean += v;
  for (double v : noisy_row_sums) noisy += v;
  return clean < noisy;
}

namespace {

struct Moments {
  double mean = 0.0, sd = 0.0, skewness = 0.0;
};

Moments moments(const std::vector<double>& values) {
  Moments m;
  if (values.empty()) return m;
  const double n = static_cast<double>(values.size());
  for (double v : values) m.mean += v;
  m.mean /= n;
  double m2 = 0.0, m3 = 0.0;
  for (double v : values) {
    const double d = v - m.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m.sd = std::sqrt(m2);
  m.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  return m;
}

}  // namespace

Theorem1Report verify_theorem1(const SyntheticSpec& spec, const TransitionMatrix& noise,
                               int trials, std::uint64_t seed) {
  spec.validate();
  noise.validate();
  if (trials < 1) throw ValidationError("verify_theorem1: trials must be >= 1");
  if (spec.k != noise.k())
    throw ValidationError("verify_theorem1: spec k != transition matrix k");

  Theorem1Report report;
  std::vector<double> all_clean, all_noisy;
  bool every_trial_ordered = true;

  for (int trial = 0; trial < trials; ++trial) {
    SyntheticSpec trial_spec = spec;
    trial_spec.seed = mix_seed(seed, static_cast<std::uint64_t>(2 * trial));
    const Dataset clean_data = generate_synthetic(trial_spec);
    const Dataset data =
        corrupt_labels(clean_data, noise, mix_seed(seed, static_cast<std::uint64_t>(2 * trial + 1)));

    Theorem1Report::Trial t;
    std::vector<double> trial_clean, trial_noisy;
    for (auto& [cls, members] : group_by_label(data.noisy_labels)) {
      if (members.size() < 2) continue;
      const AffinityGroup group = affinity_group(data, cls, members);
      std::vector<double> clean_sums, noisy_sums;
      for (std::size_t j = 0; j < members.size(); ++j) {
        const std::size_t idx = members[j];
        const bool is_clean = (*data.true_labels)[idx] == data.noisy_labels[idx];
        (is_clean ? clean_sums : noisy_sums).push_back(group.row_sums[j]);
      }
      if (clean_sums.empty()) {
        ++report.excluded_class_trials;
        continue;
      }
      if (!noisy_sums.empty()) {
        if (submerged_check(clean_sums, noisy_sums)) {
          t.any_submerged = true;
          ++report.submerged_class_trials;
        }
        // Lyapunov diagnostic: share of the class's total squared deviation
        // carried by a single noisy sample.
        const Moments nm = moments(noisy_sums);
        double b_n = 0.0;
        for (double v : noisy_sums) b_n += (v - nm.mean) * (v - nm.mean);
        report.lyapunov_variance_sum += b_n;
        if (b_n > 0.0)
          for (double v : noisy_sums)
            report.max_single_variance_share =
                std::max(report.max_single_variance_share, (v - nm.mean) * (v - nm.mean) / b_n);
      }
      trial_clean.insert(trial_clean.end(), clean_sums.begin(), clean_sums.end());
      trial_noisy.insert(trial_noisy.end(), noisy_sums.begin(), noisy_sums.end());
    }

    t.mu_p = moments(trial_clean).mean;
    t.mu_q = moments(trial_noisy).mean;
    t.vacuous = trial_noisy.empty();
    t.ordering = !t.vacuous && t.mu_p > t.mu_q;
    if (!t.vacuous && !t.ordering) every_trial_ordered = false;
    report.submerged = report.submerged || t.any_submerged;
    all_clean.insert(all_clean.end(), trial_clean.begin(), trial_clean.end());
    all_noisy.insert(all_noisy.end(), trial_noisy.begin(), trial_noisy.end());
    report.per_trial.push_back(t);
  }

  const Moments mp = moments(all_clean);
  const Moments mq = moments(all_noisy);
  report.mu_p = mp.mean;
  report.sigma_p = mp.sd;
  report.skewness_p = mp.skewness;
  report.mu_q = mq.mean;
  report.sigma_q = mq.sd;
  report.skewness_q = mq.skewness;
  report.vacuous = all_noisy.empty();
  report.ordering_holds = !report.vacuous && every_trial_ordered && report.mu_p > report.mu_q;
  return report;
}

std::string theorem1_to_json(const Theorem1Report& r) {
  nlohmann::json j;
  j["mu_p"] = r.mu_p;
  j["mu_q"] = r.mu_q;
  j["sigma_p"] = r.sigma_p;
  j["sigma_q"] = r.sigma_q;
  j["skewness_p"] = r.skewness_p;
  j["skewness_q"] = r.skewness_q;
  j["submerged"] = r.submerged;
  j["ordering_holds"] = r.ordering_holds;
  j["vacuous"] = r.vacuous;
  j["lyapunov_variance_sum"] = r.lyapunov_variance_sum;
  j["max_single_variance_share"] = r.max_single_variance_share;
  j["excluded_class_trials"] = r.excluded_class_trials;
  j["submerged_class_trials"] = r.submerged_class_trials;
  auto trials = nlohmann::json::array();
  for (const auto& t : r.per_trial)
    trials.push_back({{"mu_p", t.mu_p},
                      {"mu_q", t.mu_q},
                      {"ordering", t.ordering},
                      {"any_submerged", t.any_submerged},
                      {"vacuous", t.vacuous}});
  j["per_trial"] = std::move(trials);
  return j.dump(2) + "\n";
}

std::string theorem2_to_json(const std::vector<Theorem2Report>& reports) {
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["noise_type"] = noise_type_name(r.noise_type);
    j["rate"] = r.rate;
    j["k"] = r.k;
    j["jsd_clean"] = r.jsd_clean;
    j["jsd_noisy"] = r.jsd_noisy;
    j["jsd_noisy_min"] = r.jsd_noisy_min;
    j["off_diagonal_gap"] = r.off_diagonal_gap;
    j["ordering_holds"] = r.ordering_holds;
    j["expected_ordering"] = r.expected_ordering;
    j["gap_identity_holds"] = r.gap_identity_holds;
    j["diagonally_dominant"] = r.diagonally_dominant;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace psdc
