#include "psdc/semiloop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "psdc/errors.hpp"
#include "psdc/rng.hpp"
#include "psdc/selection.hpp"

namespace psdc {

void LoopConfig::validate() const {
  if (rounds < 1) throw ValidationError("loop config: rounds must be >= 1");
  if (!(d_cutoff > 0.0 && d_cutoff < 1.0))
    throw ValidationError("loop config: d_cutoff must be in (0,1)");
  if (lambda_u < 0.0 || lambda_r < 0.0 || lambda_c < 0.0)
    throw ValidationError("loop config: loss coefficients must be >= 0");
  if (!(kappa > 0.0)) throw ValidationError("loop config: kappa must be positive");
  if (!(beta_param > 0.0)) throw ValidationError("loop config: beta_param must be positive");
  if (warmup_rounds < 0) throw ValidationError("loop config: warmup_rounds must be >= 0");
  if (!(temperature > 0.0)) throw ValidationError("loop config: temperature must be positive");
  if (contrastive_batch < 1) throw ValidationError("loop config: contrastive_batch must be >= 1");
  em.validate();
}

PrototypeModel fit_prototypes(const Matrix& features, const std::vector<int>& labels, int k,
                              const std::optional<std::vector<double>>& weights,
                              const PrototypeModel* previous, double temperature) {
  if (features.rows() != labels.size())
    throw ValidationError("fit_prototypes: feature rows != label count");
  if (k < 1) throw ValidationError("fit_prototypes: k must be positive");
  if (weights && weights->size() != labels.size())
    throw ValidationError("fit_prototypes: weight count != label count");
  if (!(temperature > 0.0)) throw ValidationError("fit_prototypes: temperature must be positive");
  if (previous && (previous->k() != k || previous->centroids.cols() != features.cols()))
    throw ValidationError("fit_prototypes: previous model shape mismatch");

  const std::size_t dim = features.cols();
  PrototypeModel model;
  model.temperature = temperature;
  model.centroids = Matrix(static_cast<std::size_t>(k), dim, 0.0);
  model.zero_init.assign(static_cast<std::size_t>(k), false);

  std::vector<double> mass(static_cast<std::size_t>(k), 0.0);
  std::vector<bool> represented(static_cast<std::size_t>(k), false);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int c = labels[i];
    if (c < 0 || c >= k)
      throw ValidationError("fit_prototypes: label out of range at row " + std::to_string(i));
    const double w = weights ? (*weights)[i] : 1.0;
    if (w < 0.0) throw ValidationError("fit_prototypes: negative weight at row " + std::to_string(i));
    represented[static_cast<std::size_t>(c)] = true;
    mass[static_cast<std::size_t>(c)] += w;
    for (std::size_t d = 0; d < dim; ++d)
      model.centroids.at(static_cast<std::size_t>(c), d) += w * features.at(i, d);
  }

  for (int c = 0; c < k; ++c) {
    const std::size_t cc = static_cast<std::size_t>(c);
    if (represented[cc]) {
      if (mass[cc] <= 0.0)
        throw ValidationError("fit_prototypes: class " + std::to_string(c) +
                              " has all-zero weights");
      for (std::size_t d = 0; d < dim; ++d) model.centroids.at(cc, d) /= mass[cc];
    } else if (previous) {
      for (std::size_t d = 0; d < dim; ++d)
        model.centroids.at(cc, d) = previous->centroids.at(cc, d);
      model.zero_init[cc] = previous->zero_init[cc];
    } else {
      model.zero_init[cc] = true;
    }
  }
  return model;
}

PrototypeModel fit_prototypes_subsample(const Matrix& features, const std::vector<int>& labels,
                                        int k, double fraction, std::uint64_t seed,
                                        double temperature) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ValidationError("fit_prototypes_subsample: fraction must be in (0,1]");
  if (features.rows() != labels.size())
    throw ValidationError("fit_prototypes_subsample: feature rows != label count");
  if (features.rows() == 0) throw ValidationError("fit_prototypes_subsample: empty input");

  Rng rng(seed);
  const std::size_t n_pick = std::max<std::size_t>(
      1, static_cast<std::size_t>(fraction * static_cast<double>(features.rows())));
  Matrix picked(n_pick, features.cols());
  std::vector<int> picked_labels(n_pick);
  for (std::size_t i = 0; i < n_pick; ++i) {
    const std::size_t pick = rng.index(features.rows());
    for (std::size_t d = 0; d < features.cols(); ++d) picked.at(i, d) = features.at(pick, d);
    picked_labels[i] = labels[pick];
  }
  return fit_prototypes(picked, picked_labels, k, std::nullopt, nullptr, temperature);
}

std::vector<double> predict_soft(const PrototypeModel& model, std::span<const double> feature) {
  if (feature.size() != model.centroids.cols())
    throw ValidationError("predict_soft: feature dimension mismatch");
  if (norm(feature) == 0.0) throw DomainError("predict_soft: zero-norm feature");

  const int k = model.k();
  std::vector<double> logits(static_cast<std::size_t>(k), 0.0);
  const double feat_norm = norm(feature);
  for (int c = 0; c < k; ++c) {
    const std::size_t cc = static_cast<std::size_t>(c);
    const auto centroid = model.centroids.row(cc);
    const double cn = norm(centroid);
    const double sim = (model.zero_init[cc] || cn == 0.0)
                           ? 0.0
                           : std::clamp(dot(feature, centroid) / (feat_norm * cn), -1.0, 1.0);
    logits[cc] = sim / model.temperature;
  }
  const double hi = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& l : logits) {
    l = std::exp(l - hi);
    sum += l;
  }
  for (double& l : logits) l /= sum;
  return logits;
}

Matrix predict_soft_matrix(const PrototypeModel& model, const Matrix& features) {
  Matrix out(features.rows(), static_cast<std::size_t>(model.k()));
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const std::vector<double> p = predict_soft(model, features.row(i));
    for (std::size_t c = 0; c < p.size(); ++c) out.at(i, c) = p[c];
  }
  return out;
}

namespace {

void check_distribution(std::span<const double> p, const char* what) {
  double s = 0.0;
  for (double v : p) {
    if (v < 0.0) throw ValidationError(std::string(what) + ": negative probability");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-9)
    throw ValidationError(std::string(what) + ": target does not sum to 1");
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> mixup(
    std::span<const double> x1, std::span<const double> p1, std::span<const double> x2,
    std::span<const double> p2, double beta_param, std::uint64_t seed) {
  if (x1.size() != x2.size()) throw ValidationError("mixup: feature dimension mismatch");
  if (p1.size() != p2.size()) throw ValidationError("mixup: target dimension mismatch");
  if (!(beta_param > 0.0)) throw ValidationError("mixup: beta_param must be positive");
  check_distribution(p1, "mixup");
  check_distribution(p2, "mixup");

  Rng rng(seed);
  const double lambda = rng.beta(beta_param, beta_param);
  const double lam = std::max(lambda, 1.0 - lambda);

  std::vector<double> x(x1.size());
  for (std::size_t i = 0; i < x1.size(); ++i) x[i] = lam * x1[i] + (1.0 - lam) * x2[i];
  std::vector<double> p(p1.size());
  for (std::size_t i = 0; i < p1.size(); ++i) p[i] = lam * p1[i] + (1.0 - lam) * p2[i];
  return {std::move(x), std::move(p)};
}

double loss_labeled(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) throw ValidationError("loss_labeled: length mismatch");
  check_distribution(target, "loss_labeled");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    acc -= target[i] * std::log(std::max(pred[i], 1e-12));
  return acc;
}

double loss_unlabeled(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) throw ValidationError("loss_unlabeled: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = target[i] - pred[i];
    acc += d * d;
  }
  return acc;
}

double loss_reg(const std::vector<std::vector<double>>& batch_preds,
                std::span<const double> prior) {
  if (batch_preds.empty()) throw ValidationError("loss_reg: empty batch");
  check_distribution(prior, "loss_reg");
  std::vector<double> mean(prior.size(), 0.0);
  for (const auto& p : batch_preds) {
    if (p.size() != prior.size()) throw ValidationError("loss_reg: prediction length mismatch");
    for (std::size_t c = 0; c < p.size(); ++c) mean[c] += p[c];
  }
  for (double& v : mean) v /= static_cast<double>(batch_preds.size());
  double acc = 0.0;
  for (std::size_t c = 0; c < prior.size(); ++c)
    if (prior[c] > 0.0) acc += prior[c] * std::log(prior[c] / std::max(mean[c], 1e-12));
  return acc;
}

std::vector<double> uniform_prior(int k) {
  if (k < 1) throw ValidationError("uniform_prior: k must be positive");
  return std::vector<double>(static_cast<std::size_t>(k), 1.0 / static_cast<double>(k));
}

double contrastive_loss(const Matrix& projections, double kappa) {
  const std::size_t n = projections.rows();
  if (n == 0 || n % 2 != 0)
    throw ValidationError("contrastive_loss: row count must be even and positive");
  if (!(kappa > 0.0)) throw ValidationError("contrastive_loss: kappa must be positive");

  // Normalize rows; cosine similarities become dot products.
  Matrix unit(n, projections.cols());
  for (std::size_t i = 0; i < n; ++i) {
    const double len = norm(projections.row(i));
    if (len == 0.0)
      throw ValidationError("contrastive_loss: zero-norm row " + std::to_string(i));
    for (std::size_t d = 0; d < projections.cols(); ++d)
      unit.at(i, d) = projections.at(i, d) / len;
  }

  auto pair_term = [&](std::size_t i, std::size_t j) {
    // -log( exp(sim(i,j)/kappa) / sum_{b != i} exp(sim(i,b)/kappa) )
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < n; ++b)
      if (b != i) hi = std::max(hi, dot(unit.row(i), unit.row(b)) / kappa);
    double denom = 0.0;
    for (std::size_t b = 0; b < n; ++b)
      if (b != i) denom += std::exp(dot(unit.row(i), unit.row(b)) / kappa - hi);
    const double pos = dot(unit.row(i), unit.row(j)) / kappa;
    return -(pos - hi - std::log(denom));
  };

  double acc = 0.0;
  for (std::size_t b = 0; b < n / 2; ++b)
    acc += pair_term(2 * b, 2 * b + 1) + pair_term(2 * b + 1, 2 * b);
  return acc / static_cast<double>(n);
}

double total_loss(double l_x, double l_u, double l_r, double l_c, const LoopConfig& config) {
  if (!std::isfinite(l_x) || !std::isfinite(l_u) || !std::isfinite(l_r) || !std::isfinite(l_c))
    throw ValidationError("total_loss: components must be finite");
  return l_x + config.lambda_u * l_u + config.lambda_r * l_r + config.lambda_c * l_c;
}

namespace {

struct ModelRound {
  Partition partition{};
  std::string method;
  std::optional<double> agreement;
  double purity = 0.0, recall = 0.0;
  double total = 0.0;
  double pseudo_accuracy = 1.0;
  std::size_t clean_size = 0;
};

/// One model's half of a co-teaching round. `peer_predictions` come from the
/// other model; `selection_view` carries no ground-truth labels.
ModelRound advance_model(PrototypeModel& model, const Dataset& dataset,
                         const Dataset& selection_view, const Partition& psdc_partition,
                         const Matrix& peer_predictions, const LoopConfig& config, int round,
                         std::uint64_t stream_seed) {
  const int k = dataset.k;
  ModelRound out;

  if (round <= config.warmup_rounds) {
    SelectConfig sc;
    sc.d_cutoff = config.d_cutoff;
    sc.em = config.em;
    const Partition jsd_partition =
        jsd_select(peer_predictions, selection_view.noisy_labels, sc);
    out.partition = hybrid_select(psdc_partition, jsd_partition);
    out.agreement = out.partition.agreement_ratio;
  } else {
    out.partition = psdc_partition;
  }
  out.method = selection_method_name(out.partition.method);
  out.clean_size = out.partition.clean_indices.size();
  if (out.partition.clean_indices.empty()) return out;  // caller aborts

  // Confidence weights from the peer's divergence at the given label.
  const std::vector<std::size_t>& clean_idx = out.partition.clean_indices;
  Matrix clean_features(clean_idx.size(), dataset.dim());
  std::vector<int> clean_labels(clean_idx.size());
  std::vector<double> weights(clean_idx.size());
  for (std::size_t j = 0; j < clean_idx.size(); ++j) {
    const std::size_t i = clean_idx[j];
    for (std::size_t d = 0; d < dataset.dim(); ++d)
      clean_features.at(j, d) = dataset.features.at(i, d);
    clean_labels[j] = dataset.noisy_labels[i];
    const double div = jsd(peer_predictions.row(i), onehot(k, dataset.noisy_labels[i]));
    weights[j] = std::clamp(1.0 - div / std::numbers::ln2, 0.0, 1.0);
  }
  model = fit_prototypes(clean_features, clean_labels, k, weights, &model, config.temperature);

  // Pseudo-labels for the noisy set from the freshly fitted model.
  const std::vector<std::size_t>& noisy_idx = out.partition.noisy_indices;
  std::vector<std::vector<double>> pseudo(noisy_idx.size());
  std::size_t pseudo_hits = 0;
  for (std::size_t j = 0; j < noisy_idx.size(); ++j) {
    pseudo[j] = predict_soft(model, dataset.features.row(noisy_idx[j]));
    if (dataset.true_labels) {
      const auto arg =
          std::max_element(pseudo[j].begin(), pseudo[j].end()) - pseudo[j].begin();
      if (static_cast<int>(arg) == (*dataset.true_labels)[noisy_idx[j]]) ++pseudo_hits;
    }
  }
  out.pseudo_accuracy =
      noisy_idx.empty() ? 1.0
                        : static_cast<double>(pseudo_hits) / static_cast<double>(noisy_idx.size());

  // Loss bookkeeping over MixUp batches.
  Rng rng(stream_seed);
  double l_x = 0.0;
  std::vector<std::vector<double>> round_preds;
  round_preds.reserve(clean_idx.size() + noisy_idx.size());
  for (std::size_t j = 0; j < clean_idx.size(); ++j) {
    const std::size_t i = clean_idx[j];
    const std::vector<double> target = onehot(k, dataset.noisy_labels[i]);
    std::vector<double> mixed_x(dataset.features.row(i).begin(), dataset.features.row(i).end());
    std::vector<double> mixed_p = target;
    if (!noisy_idx.empty()) {
      const std::size_t u_pos = rng.index(noisy_idx.size());
      std::tie(mixed_x, mixed_p) =
          mixup(dataset.features.row(i), target, dataset.features.row(noisy_idx[u_pos]),
                pseudo[u_pos], config.beta_param, rng.next_u64());
    }
    const std::vector<double> pred = predict_soft(model, mixed_x);
    l_x += loss_labeled(pred, mixed_p);
    round_preds.push_back(pred);
  }
  l_x /= static_cast<double>(clean_idx.size());

  double l_u = 0.0;
  for (std::size_t j = 0; j < noisy_idx.size(); ++j) {
    const std::size_t i = noisy_idx[j];
    const std::size_t c = clean_idx[rng.index(clean_idx.size())];
    const auto [mixed_x, mixed_p] =
        mixup(dataset.features.row(i), pseudo[j], dataset.features.row(c),
              onehot(k, dataset.noisy_labels[c]), config.beta_param, rng.next_u64());
    const std::vector<double> pred = predict_soft(model, mixed_x);
    l_u += loss_unlabeled(pred, mixed_p);
    round_preds.push_back(pred);
  }
  if (!noisy_idx.empty()) l_u /= static_cast<double>(noisy_idx.size());

  const std::vector<double> prior = uniform_prior(k);
  const double l_r = loss_reg(round_preds, prior);

  // Contrastive bookkeeping: two MixUp views of a sampled noisy-set element
  // stand in for the two augmented views of a sample.
  double l_c = 0.0;
  if (!noisy_idx.empty()) {
    const std::size_t batch =
        std::min<std::size_t>(static_cast<std::size_t>(config.contrastive_batch), noisy_idx.size());
    Matrix projections(2 * batch, dataset.dim());
    for (std::size_t b = 0; b < batch; ++b) {
      const std::size_t j = noisy_idx[rng.index(noisy_idx.size())];
      for (int view = 0; view < 2; ++view) {
        const std::size_t c = clean_idx[rng.index(clean_idx.size())];
        const auto [mixed_x, mixed_p] =
            mixup(dataset.features.row(j), uniform_prior(k), dataset.features.row(c),
                  uniform_prior(k), config.beta_param, rng.next_u64());
        for (std::size_t d = 0; d < dataset.dim(); ++d)
          projections.at(2 * b + static_cast<std::size_t>(view), d) = mixed_x[d];
      }
    }
    l_c = contrastive_loss(projections, config.kappa);
  }

  out.total = total_loss(l_x, l_u, l_r, l_c, config);
  return out;
}

}  // namespace

TrainReport run_loop(const Dataset& dataset, const LoopConfig& config,
                     const std::optional<Dataset>& eval_dataset) {
  config.validate();
  dataset.validate();
  if (!dataset.true_labels)
    throw ValidationError("run_loop: dataset needs true labels for reporting");

  // Selection must never see ground truth.
  const Dataset selection_view = dataset.without_true_labels();

  SelectConfig sc;
  sc.d_cutoff = config.d_cutoff;
  sc.em = config.em;
  // Features are static at desk scale, so the pairwise-similarity partition
  // is fixed across rounds and models.
  const Partition psdc_partition = psdc_select(selection_view, selection_view.features, sc);

  const std::uint64_t seed_a = config.model_seed_a.value_or(mix_seed(config.seed, 0xA));
  const std::uint64_t seed_b = config.model_seed_b.value_or(mix_seed(config.seed, 0xB));

  // Distinct initializations: each model starts from centroids of a seeded
  // bootstrap resample of the noisy-labeled data.
  PrototypeModel model_a = fit_prototypes_subsample(dataset.features, dataset.noisy_labels,
                                                    dataset.k, 1.0, seed_a, config.temperature);
  PrototypeModel model_b = fit_prototypes_subsample(dataset.features, dataset.noisy_labels,
                                                    dataset.k, 1.0, seed_b, config.temperature);

  TrainReport report;
  for (int round = 1; round <= config.rounds; ++round) {
    // Cross-wiring: each model is selected with the other's predictions.
    const Matrix preds_a = predict_soft_matrix(model_a, dataset.features);
    const Matrix preds_b = predict_soft_matrix(model_b, dataset.features);
    ModelRound a = advance_model(model_a, dataset, selection_view, psdc_partition, preds_b,
                                 config, round, mix_seed(seed_a, static_cast<std::uint64_t>(round)));
    ModelRound b = advance_model(model_b, dataset, selection_view, psdc_partition, preds_a,
                                 config, round, mix_seed(seed_b, static_cast<std::uint64_t>(round)));

    if (a.partition.clean_indices.empty() || b.partition.clean_indices.empty()) {
      report.aborted = true;
      report.abort_reason = "round " + std::to_string(round) + ": empty clean set";
      return report;
    }

    const SelectionReport eval_a = evaluate_partition(a.partition, dataset);
    const SelectionReport eval_b = evaluate_partition(b.partition, dataset);
    RoundRecord rec;
    rec.round = round;
    rec.method_a = a.method;
    rec.method_b = b.method;
    rec.method = a.method == b.method ? a.method : "mixed";
    rec.purity_a = eval_a.clean_purity;
    rec.purity_b = eval_b.clean_purity;
    rec.clean_purity = 0.5 * (eval_a.clean_purity + eval_b.clean_purity);
    rec.clean_recall = 0.5 * (eval_a.clean_recall + eval_b.clean_recall);
    rec.clean_size = 0.5 * static_cast<double>(a.clean_size + b.clean_size);
    rec.loss_a = a.total;
    rec.loss_b = b.total;
    rec.total_loss = 0.5 * (a.total + b.total);
    rec.pseudo_label_accuracy = 0.5 * (a.pseudo_accuracy + b.pseudo_accuracy);
    rec.agreement_a = a.agreement;
    rec.agreement_b = b.agreement;
    report.rounds.push_back(std::move(rec));
  }

  if (eval_dataset) {
    eval_dataset->validate();
    if (!eval_dataset->true_labels)
      throw ValidationError("run_loop: eval dataset needs true labels");
    if (eval_dataset->dim() != dataset.dim() || eval_dataset->k != dataset.k)
      throw ValidationError("run_loop: eval dataset shape mismatch");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < eval_dataset->size(); ++i) {
      const std::vector<double> pa = predict_soft(model_a, eval_dataset->features.row(i));
      const std::vector<double> pb = predict_soft(model_b, eval_dataset->features.row(i));
      std::vector<double> ensemble(pa.size());
      for (std::size_t c = 0; c < pa.size(); ++c) ensemble[c] = 0.5 * (pa[c] + pb[c]);
      const auto arg = std::max_element(ensemble.begin(), ensemble.end()) - ensemble.begin();
      if (static_cast<int>(arg) == (*eval_dataset->true_labels)[i]) ++hits;
    }
    report.final_accuracy =
        eval_dataset->size() == 0
            ? 1.0
            : static_cast<double>(hits) / static_cast<double>(eval_dataset->size());
  }
  return report;
}

std::string train_report_to_json(const TrainReport& report) {
  nlohmann::json j;
  j["aborted"] = report.aborted;
  j["abort_reason"] = report.abort_reason;
  j["final_accuracy"] =
      report.final_accuracy ? nlohmann::json(*report.final_accuracy) : nlohmann::json();
  auto rounds = nlohmann::json::array();
  for (const RoundRecord& r : report.rounds) {
    nlohmann::json row;
    row["round"] = r.round;
    row["method"] = r.method;
    row["method_a"] = r.method_a;
    row["method_b"] = r.method_b;
    row["clean_purity"] = r.clean_purity;
    row["clean_recall"] = r.clean_recall;
    row["clean_size"] = r.clean_size;
    row["total_loss"] = r.total_loss;
    row["pseudo_label_accuracy"] = r.pseudo_label_accuracy;
    row["purity_a"] = r.purity_a;
    row["purity_b"] = r.purity_b;
    row["loss_a"] = r.loss_a;
    row["loss_b"] = r.loss_b;
    row["agreement_a"] = r.agreement_a ? nlohmann::json(*r.agreement_a) : nlohmann::json();
    row["agreement_b"] = r.agreement_b ? nlohmann::json(*r.agreement_b) : nlohmann::json();
    rounds.push_back(std::move(row));
  }
  j["rounds"] = std::move(rounds);
  return j.dump(2) + "\n";
}

std::string train_report_to_csv(const TrainReport& report) {
  std::string out = "round,method,clean_purity,clean_recall,clean_size,total_loss\n";
  char buf[160];
  for (const RoundRecord& r : report.rounds) {
    std::snprintf(buf, sizeof buf, "%d,%s,%.17g,%.17g,%.17g,%.17g\n", r.round, r.method.c_str(),
                  r.clean_purity, r.clean_recall, r.clean_size, r.total_loss);
    out += buf;
  }
  return out;
}

}  // namespace psdc
