#include "psdc/selection.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "psdc/affinity.hpp"
#include "psdc/errors.hpp"

namespace psdc {

namespace {

// Minimum separation, in larger-component standard deviations, for a fitted
// mixture to count as two modes.
constexpr double kMinSeparationRatio = 2.0;

double single_gaussian_log_likelihood(std::span<const double> values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var = std::max(var / static_cast<double>(values.size()), 1e-12);
  constexpr double kLogTwoPi = 1.8378770664093453;
  double ll = 0.0;
  for (double v : values) ll += -0.5 * (kLogTwoPi + std::log(var) + (v - mean) * (v - mean) / var);
  return ll;
}

/// A fitted mixture is treated as one mode when a single Gaussian explains
/// the sample at least as well under BIC (the two-component fit spends three
/// extra parameters) or when the components are not meaningfully separated.
/// Groups judged single-mode go wholesale to the clean set.
bool effectively_single_mode(std::span<const double> values, const Gmm1D& gmm) {
  if (gmm.degenerate || means_tied(gmm)) return true;
  const double spread = std::sqrt(std::max(gmm.var_1, gmm.var_2));
  if (std::abs(gmm.mean_1 - gmm.mean_2) < kMinSeparationRatio * spread) return true;
  const double gain = 2.0 * (gmm.log_likelihood - single_gaussian_log_likelihood(values));
  return gain <= 3.0 * std::log(static_cast<double>(values.size()));
}

void sort_unique(std::vector<std::size_t>& v) { std::sort(v.begin(), v.end()); }

/// Cluster one group's scalar values with a fitted GMM: clean iff the
/// posterior of the chosen component exceeds the cutoff. `clean_is_higher`
/// picks which mean plays the clean role.
void split_by_posterior(const std::vector<std::size_t>& members,
                        const std::vector<double>& values, const Gmm1D& gmm,
                        bool clean_is_higher, double d_cutoff,
                        std::vector<std::size_t>& clean, std::vector<std::size_t>& noisy) {
  const int hi = higher_mean_component(gmm);
  const int clean_component = clean_is_higher ? hi : (hi == 1 ? 2 : 1);
  for (std::size_t j = 0; j < members.size(); ++j) {
    const auto [p1, p2] = posterior(gmm, values[j]);
    const double p_clean = clean_component == 1 ? p1 : p2;
    (p_clean > d_cutoff ? clean : noisy).push_back(members[j]);
  }
}

Partition assemble(SelectionMethod method, std::vector<ClassSelection> per_class,
                   std::size_t universe) {
  Partition out;
  out.method = method;
  out.universe = universe;
  out.per_class = std::move(per_class);
  std::sort(out.per_class.begin(), out.per_class.end(),
            [](const ClassSelection& a, const ClassSelection& b) { return a.class_id < b.class_id; });
  for (const ClassSelection& cs : out.per_class) {
    out.clean_indices.insert(out.clean_indices.end(), cs.clean.begin(), cs.clean.end());
    out.noisy_indices.insert(out.noisy_indices.end(), cs.noisy.begin(), cs.noisy.end());
  }
  sort_unique(out.clean_indices);
  sort_unique(out.noisy_indices);
  out.validate();
  return out;
}

/// Shared path of the global-statistic selectors (jsd / ce / gmm_raw):
/// one GMM over `values`, then a per-class breakdown for reporting.
Partition select_by_global_statistic(SelectionMethod method, const std::vector<double>& values,
                                     const std::vector<int>& labels, bool clean_is_higher,
                                     const SelectConfig& config) {
  const std::size_t n = values.size();
  std::vector<std::size_t> clean, noisy;
  std::optional<Gmm1D> fitted;
  bool single_mode = false;
  if (n == 1) {
    clean.push_back(0);
    single_mode = true;
  } else {
    const Gmm1D gmm = fit_gmm(values, config.em);
    fitted = gmm;
    single_mode = effectively_single_mode(values, gmm);
    if (single_mode) {
      for (std::size_t i = 0; i < n; ++i) clean.push_back(i);
    } else {
      std::vector<std::size_t> all(n);
      for (std::size_t i = 0; i < n; ++i) all[i] = i;
      split_by_posterior(all, values, gmm, clean_is_higher, config.d_cutoff, clean, noisy);
    }
  }

  std::set<std::size_t> clean_set(clean.begin(), clean.end());
  std::vector<ClassSelection> per_class;
  for (auto& [cls, members] : group_by_label(labels)) {
    ClassSelection cs;
    cs.class_id = cls;
    for (std::size_t idx : members) (clean_set.count(idx) ? cs.clean : cs.noisy).push_back(idx);
    cs.single_mode = single_mode;
    per_class.push_back(std::move(cs));
  }
  Partition out = assemble(method, std::move(per_class), n);
  out.global_gmm = fitted;
  return out;
}

}  // namespace

std::string selection_method_name(SelectionMethod method) {
  switch (method) {
    case SelectionMethod::kPsdc: return "psdc";
    case SelectionMethod::kJsd: return "jsd";
    case SelectionMethod::kHybrid: return "hybrid";
    case SelectionMethod::kGmmRaw: return "gmm_raw";
    case SelectionMethod::kKmeans: return "kmeans";
    case SelectionMethod::kCrossEntropy: return "ce";
  }
  throw ValidationError("unknown selection method");
}

SelectionMethod selection_method_from_name(const std::string& name) {
  if (name == "psdc") return SelectionMethod::kPsdc;
  if (name == "jsd") return SelectionMethod::kJsd;
  if (name == "hybrid") return SelectionMethod::kHybrid;
  if (name == "gmm_raw") return SelectionMethod::kGmmRaw;
  if (name == "kmeans") return SelectionMethod::kKmeans;
  if (name == "ce") return SelectionMethod::kCrossEntropy;
  throw ValidationError("unknown selection method '" + name + "'");
}

void SelectConfig::validate() const {
  if (!(d_cutoff > 0.0 && d_cutoff < 1.0))
    throw ValidationError("select config: d_cutoff must be in (0,1)");
  em.validate();
}

void Partition::validate() const {
  if (clean_indices.size() + noisy_indices.size() != universe)
    throw ValidationError("partition: clean+noisy sizes != universe");
  std::vector<std::size_t> all;
  all.reserve(universe);
  all.insert(all.end(), clean_indices.begin(), clean_indices.end());
  all.insert(all.end(), noisy_indices.begin(), noisy_indices.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    if (all[i] != i)
      throw ValidationError("partition: indices not a disjoint cover of [0,universe)");
}

Partition psdc_select(const Dataset& dataset, const Matrix& features, const SelectConfig& config) {
  config.validate();
  if (features.rows() != dataset.size())
    throw ValidationError("psdc_select: features have " + std::to_string(features.rows()) +
                          " rows but dataset has " + std::to_string(dataset.size()));

  std::vector<ClassSelection> per_class;
  for (auto& [cls, members] : group_by_label(dataset.noisy_labels)) {
    ClassSelection cs;
    cs.class_id = cls;
    if (members.size() == 1) {
      // No pairs to compare; trust the label rather than discard the sample.
      cs.clean = members;
      cs.single_mode = true;
    } else {
      const AffinityGroup group = affinity_group(features, cls, members, &dataset.ids);
      const Gmm1D gmm = fit_gmm(group.row_sums, config.em);
      cs.gmm = gmm;
      if (effectively_single_mode(group.row_sums, gmm)) {
        cs.clean = members;
        cs.single_mode = true;
      } else {
        split_by_posterior(members, group.row_sums, gmm, /*clean_is_higher=*/true,
                           config.d_cutoff, cs.clean, cs.noisy);
      }
    }
    sort_unique(cs.clean);
    sort_unique(cs.noisy);
    per_class.push_back(std::move(cs));
  }
  return assemble(SelectionMethod::kPsdc, std::move(per_class), dataset.size());
}

double jsd(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ValidationError("jsd: length mismatch");
  if (p.empty()) throw ValidationError("jsd: empty distributions");
  double sp = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) throw ValidationError("jsd: negative probability");
    sp += p[i];
    sq += q[i];
  }
  if (std::abs(sp - 1.0) > 1e-9 || std::abs(sq - 1.0) > 1e-9)
    throw ValidationError("jsd: inputs must sum to 1");

  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) acc += 0.5 * p[i] * std::log(p[i] / m);
    if (q[i] > 0.0) acc += 0.5 * q[i] * std::log(q[i] / m);
  }
  return std::max(acc, 0.0);
}

std::vector<double> onehot(int k, int index) {
  if (index < 0 || index >= k) throw ValidationError("onehot: index out of range");
  std::vector<double> v(static_cast<std::size_t>(k), 0.0);
  v[static_cast<std::size_t>(index)] = 1.0;
  return v;
}

Partition jsd_select(const Matrix& predictions, const std::vector<int>& noisy_labels,
                     const SelectConfig& config) {
  config.validate();
  if (predictions.rows() != noisy_labels.size())
    throw ValidationError("jsd_select: prediction rows != label count");
  const int k = static_cast<int>(predictions.cols());
  std::vector<double> divergences(noisy_labels.size());
  for (std::size_t i = 0; i < noisy_labels.size(); ++i) {
    if (noisy_labels[i] < 0 || noisy_labels[i] >= k)
      throw ValidationError("jsd_select: label out of range at row " + std::to_string(i));
    divergences[i] = jsd(predictions.row(i), onehot(k, noisy_labels[i]));
  }
  return select_by_global_statistic(SelectionMethod::kJsd, divergences, noisy_labels,
                                    /*clean_is_higher=*/false, config);
}

Partition ce_select(const Matrix& predictions, const std::vector<int>& noisy_labels,
                    const SelectConfig& config) {
  config.validate();
  if (predictions.rows() != noisy_labels.size())
    throw ValidationError("ce_select: prediction rows != label count");
  const int k = static_cast<int>(predictions.cols());
  std::vector<double> losses(noisy_labels.size());
  for (std::size_t i = 0; i < noisy_labels.size(); ++i) {
    if (noisy_labels[i] < 0 || noisy_labels[i] >= k)
      throw ValidationError("ce_select: label out of range at row " + std::to_string(i));
    const double p = std::max(predictions.at(i, static_cast<std::size_t>(noisy_labels[i])), 1e-12);
    losses[i] = -std::log(p);
  }
  return select_by_global_statistic(SelectionMethod::kCrossEntropy, losses, noisy_labels,
                                    /*clean_is_higher=*/false, config);
}

Partition gmm_raw_select(const Matrix& features, const std::vector<int>& noisy_labels,
                         const SelectConfig& config) {
  config.validate();
  if (features.rows() != noisy_labels.size())
    throw ValidationError("gmm_raw_select: feature rows != label count");
  if (features.cols() == 0) throw ValidationError("gmm_raw_select: zero-dimensional features");
  std::vector<double> means(features.rows());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    double s = 0.0;
    for (double v : features.row(i)) s += v;
    means[i] = s / static_cast<double>(features.cols());
  }
  return select_by_global_statistic(SelectionMethod::kGmmRaw, means, noisy_labels,
                                    /*clean_is_higher=*/true, config);
}

Partition hybrid_select(const Partition& psdc_partition, const Partition& jsd_partition) {
  if (psdc_partition.universe != jsd_partition.universe)
    throw ValidationError("hybrid_select: partitions cover different universes");
  std::vector<std::size_t> joint;
  std::set_intersection(psdc_partition.clean_indices.begin(), psdc_partition.clean_indices.end(),
                        jsd_partition.clean_indices.begin(), jsd_partition.clean_indices.end(),
                        std::back_inserter(joint));
  const double a = static_cast<double>(joint.size());
  const double j = static_cast<double>(jsd_partition.clean_indices.size());

  // Fall back to the divergence-based split only when agreement is strictly
  // below 0.8 of its clean set; exact 0.8 keeps the pairwise result.
  Partition out = (j > 0.0 && a < 0.8 * j) ? jsd_partition : psdc_partition;
  if (j > 0.0) out.agreement_ratio = a / j;
  return out;
}

std::map<int, std::vector<std::size_t>> pick_clean_anchors(const Dataset& dataset, int per_class) {
  if (!dataset.true_labels)
    throw ValidationError("pick_clean_anchors: dataset has no true labels");
  std::map<int, std::vector<std::size_t>> anchors;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const int label = dataset.noisy_labels[i];
    if ((*dataset.true_labels)[i] != label) continue;
    auto& list = anchors[label];
    if (static_cast<int>(list.size()) < per_class) list.push_back(i);
  }
  return anchors;
}

Partition kmeans_select(const Dataset& dataset, const Matrix& features,
                        const std::map<int, std::vector<std::size_t>>& anchors) {
  if (features.rows() != dataset.size())
    throw ValidationError("kmeans_select: features rows != dataset size");

  std::vector<ClassSelection> per_class;
  for (auto& [cls, members] : group_by_label(dataset.noisy_labels)) {
    ClassSelection cs;
    cs.class_id = cls;
    if (members.size() == 1) {
      cs.clean = members;
      cs.single_mode = true;
      per_class.push_back(std::move(cs));
      continue;
    }
    const auto anchor_it = anchors.find(cls);
    if (anchor_it == anchors.end() || anchor_it->second.empty())
      throw ValidationError("kmeans_select: no clean anchors for class " + std::to_string(cls));
    for (std::size_t a : anchor_it->second) {
      if (std::find(members.begin(), members.end(), a) == members.end())
        throw ValidationError("kmeans_select: anchor index " + std::to_string(a) +
                              " is not labeled class " + std::to_string(cls));
    }

    const AffinityGroup group = affinity_group(features, cls, members, &dataset.ids);
    const auto [lo_it, hi_it] = std::minmax_element(group.row_sums.begin(), group.row_sums.end());
    if (*lo_it == *hi_it) {
      // Single cluster; nothing to separate.
      cs.clean = members;
      cs.single_mode = true;
      per_class.push_back(std::move(cs));
      continue;
    }

    // Lloyd iterations with deterministic min/max initialization.
    double c_lo = *lo_it, c_hi = *hi_it;
    std::vector<bool> in_hi(members.size());
    for (int iter = 0; iter < 100; ++iter) {
      bool changed = false;
      double sum_lo = 0.0, sum_hi = 0.0;
      std::size_t n_lo = 0, n_hi = 0;
      for (std::size_t i = 0; i < members.size(); ++i) {
        const double v = group.row_sums[i];
        const bool hi = std::abs(v - c_hi) < std::abs(v - c_lo);
        if (hi != in_hi[i]) changed = true;
        in_hi[i] = hi;
        if (hi) {
          sum_hi += v;
          ++n_hi;
        } else {
          sum_lo += v;
          ++n_lo;
        }
      }
      if (n_lo > 0) c_lo = sum_lo / static_cast<double>(n_lo);
      if (n_hi > 0) c_hi = sum_hi / static_cast<double>(n_hi);
      if (!changed && iter > 0) break;
    }

    // The cluster holding the anchor majority is clean; ties go to the
    // higher-centered cluster.
    std::size_t anchors_hi = 0;
    for (std::size_t a : anchor_it->second) {
      const auto pos = std::find(members.begin(), members.end(), a) - members.begin();
      if (in_hi[static_cast<std::size_t>(pos)]) ++anchors_hi;
    }
    const std::size_t anchors_lo = anchor_it->second.size() - anchors_hi;
    const bool clean_is_hi = anchors_hi == anchors_lo ? (c_hi > c_lo) : (anchors_hi > anchors_lo);
    for (std::size_t i = 0; i < members.size(); ++i)
      (in_hi[i] == clean_is_hi ? cs.clean : cs.noisy).push_back(members[i]);
    sort_unique(cs.clean);
    sort_unique(cs.noisy);
    per_class.push_back(std::move(cs));
  }
  return assemble(SelectionMethod::kKmeans, std::move(per_class), dataset.size());
}

SelectionReport evaluate_partition(const Partition& partition, const Dataset& dataset) {
  partition.validate();
  if (!dataset.true_labels)
    throw ValidationError("evaluate_partition: dataset has no true labels");
  if (partition.universe != dataset.size())
    throw ValidationError("evaluate_partition: partition universe != dataset size");
  const std::vector<int>& truth = *dataset.true_labels;

  auto is_clean = [&](std::size_t i) { return dataset.noisy_labels[i] == truth[i]; };

  SelectionReport report;
  report.clean_size = partition.clean_indices.size();
  report.noisy_size = partition.noisy_indices.size();
  report.empty_clean = partition.clean_indices.empty();
  report.empty_noisy = partition.noisy_indices.empty();

  std::size_t clean_hits = 0;
  for (std::size_t i : partition.clean_indices) clean_hits += is_clean(i) ? 1 : 0;
  std::size_t noisy_hits = 0;
  for (std::size_t i : partition.noisy_indices) noisy_hits += is_clean(i) ? 0 : 1;
  std::size_t truly_clean = 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) truly_clean += is_clean(i) ? 1 : 0;

  report.clean_purity = report.empty_clean
                            ? 1.0
                            : static_cast<double>(clean_hits) / static_cast<double>(report.clean_size);
  report.noisy_purity = report.empty_noisy
                            ? 1.0
                            : static_cast<double>(noisy_hits) / static_cast<double>(report.noisy_size);
  report.clean_recall =
      truly_clean == 0 ? 1.0 : static_cast<double>(clean_hits) / static_cast<double>(truly_clean);

  std::set<std::size_t> clean_set(partition.clean_indices.begin(), partition.clean_indices.end());
  for (auto& [cls, members] : group_by_label(dataset.noisy_labels)) {
    ClassReportRow row;
    row.class_id = cls;
    std::size_t hits = 0, miss_hits = 0, cls_truly_clean = 0, captured = 0;
    for (std::size_t i : members) {
      const bool clean_label = is_clean(i);
      cls_truly_clean += clean_label ? 1 : 0;
      if (clean_set.count(i)) {
        ++row.clean_size;
        hits += clean_label ? 1 : 0;
        captured += clean_label ? 1 : 0;
      } else {
        ++row.noisy_size;
        miss_hits += clean_label ? 0 : 1;
      }
    }
    row.clean_purity =
        row.clean_size == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(row.clean_size);
    row.noisy_purity = row.noisy_size == 0
                           ? 1.0
                           : static_cast<double>(miss_hits) / static_cast<double>(row.noisy_size);
    row.clean_recall = cls_truly_clean == 0
                           ? 1.0
                           : static_cast<double>(captured) / static_cast<double>(cls_truly_clean);
    report.per_class.push_back(row);
  }
  return report;
}

namespace {

nlohmann::json gmm_to_json(const Gmm1D& g) {
  return {{"weight_1", g.weight_1}, {"weight_2", g.weight_2}, {"mean_1", g.mean_1},
          {"mean_2", g.mean_2},     {"var_1", g.var_1},       {"var_2", g.var_2},
          {"log_likelihood", g.log_likelihood}, {"iterations", g.iterations},
          {"converged", g.converged}, {"degenerate", g.degenerate}};
}

Gmm1D gmm_from_json(const nlohmann::json& j) {
  Gmm1D g;
  g.weight_1 = j.at("weight_1").get<double>();
  g.weight_2 = j.at("weight_2").get<double>();
  g.mean_1 = j.at("mean_1").get<double>();
  g.mean_2 = j.at("mean_2").get<double>();
  g.var_1 = j.at("var_1").get<double>();
  g.var_2 = j.at("var_2").get<double>();
  g.log_likelihood = j.at("log_likelihood").get<double>();
  g.iterations = j.at("iterations").get<int>();
  g.converged = j.at("converged").get<bool>();
  g.degenerate = j.at("degenerate").get<bool>();
  return g;
}

nlohmann::json ids_of(const std::vector<std::size_t>& indices, const Dataset& dataset) {
  auto arr = nlohmann::json::array();
  for (std::size_t i : indices) arr.push_back(dataset.ids[i]);
  return arr;
}

}  // namespace

std::string partition_to_json(const Partition& partition, const Dataset& dataset) {
  partition.validate();
  if (partition.universe != dataset.size())
    throw ValidationError("partition_to_json: partition universe != dataset size");
  nlohmann::json j;
  j["method"] = selection_method_name(partition.method);
  j["clean"] = ids_of(partition.clean_indices, dataset);
  j["noisy"] = ids_of(partition.noisy_indices, dataset);
  j["agreement_ratio"] =
      partition.agreement_ratio ? nlohmann::json(*partition.agreement_ratio) : nlohmann::json();
  j["global_gmm"] = partition.global_gmm ? gmm_to_json(*partition.global_gmm) : nlohmann::json();
  auto per_class = nlohmann::json::object();
  for (const ClassSelection& cs : partition.per_class) {
    nlohmann::json c;
    c["clean"] = ids_of(cs.clean, dataset);
    c["noisy"] = ids_of(cs.noisy, dataset);
    c["gmm"] = cs.gmm ? gmm_to_json(*cs.gmm) : nlohmann::json();
    c["single_mode"] = cs.single_mode;
    per_class[std::to_string(cs.class_id)] = std::move(c);
  }
  j["per_class"] = std::move(per_class);
  return j.dump(2) + "\n";
}

Partition partition_from_json(const std::string& text, const Dataset& dataset) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("partition json: ") + e.what());
  }
  std::map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < dataset.size(); ++i) index_of[dataset.ids[i]] = i;
  auto to_indices = [&](const nlohmann::json& arr) {
    std::vector<std::size_t> out;
    for (const auto& v : arr) {
      const std::string id = v.get<std::string>();
      const auto it = index_of.find(id);
      if (it == index_of.end())
        throw ParseError("partition json: unknown sample id '" + id + "'");
      out.push_back(it->second);
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  Partition p;
  try {
    p.method = selection_method_from_name(j.at("method").get<std::string>());
    p.clean_indices = to_indices(j.at("clean"));
    p.noisy_indices = to_indices(j.at("noisy"));
    if (j.contains("agreement_ratio") && !j["agreement_ratio"].is_null())
      p.agreement_ratio = j["agreement_ratio"].get<double>();
    if (j.contains("global_gmm") && !j["global_gmm"].is_null())
      p.global_gmm = gmm_from_json(j["global_gmm"]);
    if (j.contains("per_class"))
      for (const auto& [key, c] : j["per_class"].items()) {
        ClassSelection cs;
        cs.class_id = std::stoi(key);
        cs.clean = to_indices(c.at("clean"));
        cs.noisy = to_indices(c.at("noisy"));
        if (!c.at("gmm").is_null()) cs.gmm = gmm_from_json(c["gmm"]);
        cs.single_mode = c.at("single_mode").get<bool>();
        p.per_class.push_back(std::move(cs));
      }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("partition json: ") + e.what());
  }
  std::sort(p.per_class.begin(), p.per_class.end(),
            [](const ClassSelection& a, const ClassSelection& b) { return a.class_id < b.class_id; });
  p.universe = dataset.size();
  p.validate();
  return p;
}

std::string report_to_json(const SelectionReport& report) {
  nlohmann::json j;
  j["clean_purity"] = report.clean_purity;
  j["noisy_purity"] = report.noisy_purity;
  j["clean_recall"] = report.clean_recall;
  j["clean_size"] = report.clean_size;
  j["noisy_size"] = report.noisy_size;
  j["empty_clean"] = report.empty_clean;
  j["empty_noisy"] = report.empty_noisy;
  auto per_class = nlohmann::json::object();
  for (const ClassReportRow& row : report.per_class)
    per_class[std::to_string(row.class_id)] = {
        {"clean_size", row.clean_size},     {"noisy_size", row.noisy_size},
        {"clean_purity", row.clean_purity}, {"noisy_purity", row.noisy_purity},
        {"clean_recall", row.clean_recall}};
  j["per_class"] = std::move(per_class);
  return j.dump(2) + "\n";
}

}  // namespace psdc
