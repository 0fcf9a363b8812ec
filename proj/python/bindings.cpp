#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "psdc/affinity.hpp"
#include "psdc/dataset.hpp"
#include "psdc/errors.hpp"
#include "psdc/gmm.hpp"
#include "psdc/matrix.hpp"
#include "psdc/noise.hpp"
#include "psdc/selection.hpp"
#include "psdc/semiloop.hpp"
#include "psdc/theory.hpp"

namespace py = pybind11;
using namespace psdc;

namespace {

Matrix matrix_from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 2) throw ValidationError("expected a 2-D array");
  Matrix m(static_cast<std::size_t>(arr.shape(0)), static_cast<std::size_t>(arr.shape(1)));
  std::copy(arr.data(), arr.data() + arr.size(), m.data().begin());
  return m;
}

py::array_t<double> matrix_to_numpy(const Matrix& m) {
  py::array_t<double> arr({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), arr.mutable_data());
  return arr;
}

std::vector<double> vector_from_numpy(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 1) throw ValidationError("expected a 1-D array");
  return {arr.data(), arr.data() + arr.size()};
}

}  // namespace

PYBIND11_MODULE(_psdc, m) {
  m.doc() = "Noisy-label sample selection via pairwise similarity distribution clustering";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  // --- dataset ---------------------------------------------------------
  py::class_<Dataset>(m, "Dataset")
      .def(py::init([](const py::array_t<double, py::array::c_style | py::array::forcecast>& features,
                       std::vector<int> noisy_labels, std::optional<std::vector<int>> true_labels,
                       int k, std::optional<std::vector<std::string>> ids) {
             Dataset d;
             d.features = matrix_from_numpy(features);
             d.noisy_labels = std::move(noisy_labels);
             d.true_labels = std::move(true_labels);
             d.k = k;
             if (ids) {
               d.ids = std::move(*ids);
             } else {
               d.ids.resize(d.noisy_labels.size());
               for (std::size_t i = 0; i < d.ids.size(); ++i) d.ids[i] = "s" + std::to_string(i);
             }
             d.validate();
             return d;
           }),
           py::arg("features"), py::arg("noisy_labels"), py::arg("true_labels") = std::nullopt,
           py::arg("k") = 0, py::arg("ids") = std::nullopt)
      .def_property_readonly("features", [](const Dataset& d) { return matrix_to_numpy(d.features); })
      .def_readonly("noisy_labels", &Dataset::noisy_labels)
      .def_readonly("true_labels", &Dataset::true_labels)
      .def_readonly("k", &Dataset::k)
      .def_readonly("ids", &Dataset::ids)
      .def("__len__", &Dataset::size)
      .def("validate", &Dataset::validate)
      .def("without_true_labels", &Dataset::without_true_labels);

  py::class_<SyntheticSpec>(m, "SyntheticSpec")
      .def(py::init([](int k, int dim, int per_class, double separation, double sigma,
                       std::uint64_t seed) {
             return SyntheticSpec{k, dim, per_class, separation, sigma, seed};
           }),
           py::arg("k") = 2, py::arg("dim") = 2, py::arg("per_class") = 2,
           py::arg("separation") = 0.0, py::arg("sigma") = 1.0, py::arg("seed") = 0)
      .def_readwrite("k", &SyntheticSpec::k)
      .def_readwrite("dim", &SyntheticSpec::dim)
      .def_readwrite("per_class", &SyntheticSpec::per_class)
      .def_readwrite("separation", &SyntheticSpec::separation)
      .def_readwrite("sigma", &SyntheticSpec::sigma)
      .def_readwrite("seed", &SyntheticSpec::seed);

  m.def("generate_synthetic", &generate_synthetic, py::arg("spec"));
  m.def("load_dataset", &load_dataset, py::arg("path"), py::arg("expected_k") = 0);
  m.def("save_dataset", &save_dataset, py::arg("dataset"), py::arg("path"));
  m.def("dataset_to_csv", &dataset_to_csv, py::arg("dataset"));
  m.def("parse_dataset_csv", &parse_dataset_csv, py::arg("text"), py::arg("expected_k") = 0);

  // --- noise -------------------------------------------------------------
  py::enum_<NoiseType>(m, "NoiseType")
      .value("uniform", NoiseType::kUniform)
      .value("pairwise", NoiseType::kPairwise)
      .value("structured", NoiseType::kStructured);

  py::class_<TransitionMatrix>(m, "TransitionMatrix")
      .def_property_readonly("entries",
                             [](const TransitionMatrix& t) { return matrix_to_numpy(t.entries); })
      .def_readonly("noise_type", &TransitionMatrix::noise_type)
      .def_readonly("rate", &TransitionMatrix::rate)
      .def_property_readonly("k", &TransitionMatrix::k)
      .def("validate", &TransitionMatrix::validate)
      .def("diagonally_dominant", &TransitionMatrix::diagonally_dominant);

  m.def("make_transition",
        [](const std::string& noise_type, double rate, int k) {
          return make_transition(noise_type_from_name(noise_type), rate, k);
        },
        py::arg("noise_type"), py::arg("rate"), py::arg("k"));
  m.def("corrupt_labels", &corrupt_labels, py::arg("dataset"), py::arg("transition"),
        py::arg("seed"));
  m.def("transition_to_json", &transition_to_json);
  m.def("transition_from_json", &transition_from_json);

  // --- affinity ------------------------------------------------------------
  py::class_<AffinityGroup>(m, "AffinityGroup")
      .def_readonly("class_id", &AffinityGroup::class_id)
      .def_readonly("member_indices", &AffinityGroup::member_indices)
      .def_property_readonly("matrix",
                             [](const AffinityGroup& g) { return matrix_to_numpy(g.matrix); })
      .def_readonly("row_sums", &AffinityGroup::row_sums)
      .def("validate", &AffinityGroup::validate);

  m.def("group_by_label",
        [](const Dataset& d) { return group_by_label(d); });
  m.def("cosine",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& u,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& v) {
          const auto uu = vector_from_numpy(u);
          const auto vv = vector_from_numpy(v);
          return cosine(uu, vv);
        },
        py::arg("u"), py::arg("v"));
  m.def("affinity_group",
        [](const Dataset& d, int class_id, std::vector<std::size_t> members) {
          return affinity_group(d, class_id, std::move(members));
        },
        py::arg("dataset"), py::arg("class_id"), py::arg("member_indices"));

  // --- gmm -----------------------------------------------------------------
  py::class_<EmConfig>(m, "EmConfig")
      .def(py::init([](int max_iterations, double tolerance, double variance_floor,
                       std::uint64_t seed) {
             return EmConfig{max_iterations, tolerance, variance_floor, seed};
           }),
           py::arg("max_iterations") = 100, py::arg("tolerance") = 1e-6,
           py::arg("variance_floor") = 0.0, py::arg("seed") = 0)
      .def_readwrite("max_iterations", &EmConfig::max_iterations)
      .def_readwrite("tolerance", &EmConfig::tolerance)
      .def_readwrite("variance_floor", &EmConfig::variance_floor)
      .def_readwrite("seed", &EmConfig::seed);

  py::class_<Gmm1D>(m, "Gmm1D")
      .def_readonly("weight_1", &Gmm1D::weight_1)
      .def_readonly("weight_2", &Gmm1D::weight_2)
      .def_readonly("mean_1", &Gmm1D::mean_1)
      .def_readonly("mean_2", &Gmm1D::mean_2)
      .def_readonly("var_1", &Gmm1D::var_1)
      .def_readonly("var_2", &Gmm1D::var_2)
      .def_readonly("log_likelihood", &Gmm1D::log_likelihood)
      .def_readonly("iterations", &Gmm1D::iterations)
      .def_readonly("converged", &Gmm1D::converged)
      .def_readonly("degenerate", &Gmm1D::degenerate)
      .def_readonly("ll_history", &Gmm1D::ll_history);

  m.def("fit_gmm",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& values,
           const EmConfig& config) { return fit_gmm(vector_from_numpy(values), config); },
        py::arg("values"), py::arg("config") = EmConfig{});
  m.def("posterior", &posterior, py::arg("gmm"), py::arg("x"));
  m.def("higher_mean_component", &higher_mean_component, py::arg("gmm"));

  // --- selection -------------------------------------------------------------
  py::class_<ClassSelection>(m, "ClassSelection")
      .def_readonly("class_id", &ClassSelection::class_id)
      .def_readonly("clean", &ClassSelection::clean)
      .def_readonly("noisy", &ClassSelection::noisy)
      .def_readonly("gmm", &ClassSelection::gmm)
      .def_readonly("single_mode", &ClassSelection::single_mode);

  py::class_<Partition>(m, "Partition")
      .def_property_readonly("method",
                             [](const Partition& p) { return selection_method_name(p.method); })
      .def_readonly("clean_indices", &Partition::clean_indices)
      .def_readonly("noisy_indices", &Partition::noisy_indices)
      .def_readonly("per_class", &Partition::per_class)
      .def_readonly("global_gmm", &Partition::global_gmm)
      .def_readonly("agreement_ratio", &Partition::agreement_ratio)
      .def_readonly("universe", &Partition::universe)
      .def("validate", &Partition::validate);

  py::class_<ClassReportRow>(m, "ClassReportRow")
      .def_readonly("class_id", &ClassReportRow::class_id)
      .def_readonly("clean_size", &ClassReportRow::clean_size)
      .def_readonly("noisy_size", &ClassReportRow::noisy_size)
      .def_readonly("clean_purity", &ClassReportRow::clean_purity)
      .def_readonly("noisy_purity", &ClassReportRow::noisy_purity)
      .def_readonly("clean_recall", &ClassReportRow::clean_recall);

  py::class_<SelectionReport>(m, "SelectionReport")
      .def_readonly("clean_purity", &SelectionReport::clean_purity)
      .def_readonly("noisy_purity", &SelectionReport::noisy_purity)
      .def_readonly("clean_recall", &SelectionReport::clean_recall)
      .def_readonly("clean_size", &SelectionReport::clean_size)
      .def_readonly("noisy_size", &SelectionReport::noisy_size)
      .def_readonly("empty_clean", &SelectionReport::empty_clean)
      .def_readonly("empty_noisy", &SelectionReport::empty_noisy)
      .def_readonly("per_class", &SelectionReport::per_class);

  py::class_<SelectConfig>(m, "SelectConfig")
      .def(py::init([](double d_cutoff, const EmConfig& em) {
             return SelectConfig{d_cutoff, em};
           }),
           py::arg("d_cutoff") = 0.9, py::arg("em") = EmConfig{})
      .def_readwrite("d_cutoff", &SelectConfig::d_cutoff)
      .def_readwrite("em", &SelectConfig::em);

  m.def("psdc_select",
        [](const Dataset& d,
           const std::optional<py::array_t<double, py::array::c_style | py::array::forcecast>>&
               features,
           const SelectConfig& config) {
          return psdc_select(d, features ? matrix_from_numpy(*features) : d.features, config);
        },
        py::arg("dataset"), py::arg("features") = std::nullopt,
        py::arg("config") = SelectConfig{});
  m.def("jsd",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& p,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& q) {
          const auto pp = vector_from_numpy(p);
          const auto qq = vector_from_numpy(q);
          return jsd(pp, qq);
        },
        py::arg("p"), py::arg("q"));
  m.def("onehot", &onehot, py::arg("k"), py::arg("index"));
  m.def("jsd_select",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& predictions,
           const std::vector<int>& labels, const SelectConfig& config) {
          return jsd_select(matrix_from_numpy(predictions), labels, config);
        },
        py::arg("predictions"), py::arg("noisy_labels"), py::arg("config") = SelectConfig{});
  m.def("ce_select",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& predictions,
           const std::vector<int>& labels, const SelectConfig& config) {
          return ce_select(matrix_from_numpy(predictions), labels, config);
        },
        py::arg("predictions"), py::arg("noisy_labels"), py::arg("config") = SelectConfig{});
  m.def("gmm_raw_select",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& features,
           const std::vector<int>& labels, const SelectConfig& config) {
          return gmm_raw_select(matrix_from_numpy(features), labels, config);
        },
        py::arg("features"), py::arg("noisy_labels"), py::arg("config") = SelectConfig{});
  m.def("hybrid_select", &hybrid_select, py::arg("psdc_partition"), py::arg("jsd_partition"));
  m.def("kmeans_select",
        [](const Dataset& d,
           const std::optional<py::array_t<double, py::array::c_style | py::array::forcecast>>&
               features,
           const std::map<int, std::vector<std::size_t>>& anchors) {
          return kmeans_select(d, features ? matrix_from_numpy(*features) : d.features, anchors);
        },
        py::arg("dataset"), py::arg("features") = std::nullopt, py::arg("anchors"));
  m.def("pick_clean_anchors", &pick_clean_anchors, py::arg("dataset"), py::arg("per_class") = 3);
  m.def("evaluate_partition", &evaluate_partition, py::arg("partition"), py::arg("dataset"));
  m.def("partition_to_json", &partition_to_json, py::arg("partition"), py::arg("dataset"));
  m.def("partition_from_json", &partition_from_json, py::arg("text"), py::arg("dataset"));
  m.def("report_to_json", &report_to_json, py::arg("report"));

  // --- theory ---------------------------------------------------------------
  py::class_<Theorem1Report::Trial>(m, "Theorem1Trial")
      .def_readonly("mu_p", &Theorem1Report::Trial::mu_p)
      .def_readonly("mu_q", &Theorem1Report::Trial::mu_q)
      .def_readonly("ordering", &Theorem1Report::Trial::ordering)
      .def_readonly("any_submerged", &Theorem1Report::Trial::any_submerged)
      .def_readonly("vacuous", &Theorem1Report::Trial::vacuous);

  py::class_<Theorem1Report>(m, "Theorem1Report")
      .def_readonly("mu_p", &Theorem1Report::mu_p)
      .def_readonly("mu_q", &Theorem1Report::mu_q)
      .def_readonly("sigma_p", &Theorem1Report::sigma_p)
      .def_readonly("sigma_q", &Theorem1Report::sigma_q)
      .def_readonly("skewness_p", &Theorem1Report::skewness_p)
      .def_readonly("skewness_q", &Theorem1Report::skewness_q)
      .def_readonly("submerged", &Theorem1Report::submerged)
      .def_readonly("ordering_holds", &Theorem1Report::ordering_holds)
      .def_readonly("vacuous", &Theorem1Report::vacuous)
      .def_readonly("lyapunov_variance_sum", &Theorem1Report::lyapunov_variance_sum)
      .def_readonly("max_single_variance_share", &Theorem1Report::max_single_variance_share)
      .def_readonly("excluded_class_trials", &Theorem1Report::excluded_class_trials)
      .def_readonly("submerged_class_trials", &Theorem1Report::submerged_class_trials)
      .def_readonly("per_trial", &Theorem1Report::per_trial);

  py::class_<Theorem2Report>(m, "Theorem2Report")
      .def_property_readonly("noise_type",
                             [](const Theorem2Report& r) { return noise_type_name(r.noise_type); })
      .def_readonly("rate", &Theorem2Report::rate)
      .def_readonly("k", &Theorem2Report::k)
      .def_readonly("jsd_clean", &Theorem2Report::jsd_clean)
      .def_readonly("jsd_noisy", &Theorem2Report::jsd_noisy)
      .def_readonly("jsd_noisy_min", &Theorem2Report::jsd_noisy_min)
      .def_readonly("off_diagonal_gap", &Theorem2Report::off_diagonal_gap)
      .def_readonly("ordering_holds", &Theorem2Report::ordering_holds)
      .def_readonly("expected_ordering", &Theorem2Report::expected_ordering)
      .def_readonly("gap_identity_holds", &Theorem2Report::gap_identity_holds)
      .def_readonly("diagonally_dominant", &Theorem2Report::diagonally_dominant);

  m.def("oracle_softmax", &oracle_softmax, py::arg("transition"), py::arg("predicted_class"));
  m.def("jsd_closed_form", &jsd_closed_form, py::arg("transition"), py::arg("h_class"),
        py::arg("label"));
  m.def("verify_theorem2",
        [](const std::string& noise_type, const std::vector<double>& rates, int k) {
          return verify_theorem2(noise_type_from_name(noise_type), rates, k);
        },
        py::arg("noise_type"), py::arg("rates"), py::arg("k"));
  m.def("submerged_check",
        [](const std::vector<double>& clean, const std::vector<double>& noisy) {
          return submerged_check(clean, noisy);
        },
        py::arg("clean_row_sums"), py::arg("noisy_row_sums"));
  m.def("verify_theorem1", &verify_theorem1, py::arg("spec"), py::arg("noise"), py::arg("trials"),
        py::arg("seed"));
  m.def("theorem1_to_json", &theorem1_to_json);
  m.def("theorem2_to_json", &theorem2_to_json);

  // --- semiloop ----------------------------------------------------------------
  py::class_<PrototypeModel>(m, "PrototypeModel")
      .def_property_readonly("centroids",
                             [](const PrototypeModel& p) { return matrix_to_numpy(p.centroids); })
      .def_readonly("temperature", &PrototypeModel::temperature)
      .def_readonly("zero_init", &PrototypeModel::zero_init)
      .def_property_readonly("k", &PrototypeModel::k);

  py::class_<LoopConfig>(m, "LoopConfig")
      .def(py::init<>())
      .def_readwrite("rounds", &LoopConfig::rounds)
      .def_readwrite("d_cutoff", &LoopConfig::d_cutoff)
      .def_readwrite("lambda_u", &LoopConfig::lambda_u)
      .def_readwrite("lambda_r", &LoopConfig::lambda_r)
      .def_readwrite("lambda_c", &LoopConfig::lambda_c)
      .def_readwrite("kappa", &LoopConfig::kappa)
      .def_readwrite("beta_param", &LoopConfig::beta_param)
      .def_readwrite("warmup_rounds", &LoopConfig::warmup_rounds)
      .def_readwrite("temperature", &LoopConfig::temperature)
      .def_readwrite("contrastive_batch", &LoopConfig::contrastive_batch)
      .def_readwrite("seed", &LoopConfig::seed)
      .def_readwrite("model_seed_a", &LoopConfig::model_seed_a)
      .def_readwrite("model_seed_b", &LoopConfig::model_seed_b)
      .def_readwrite("em", &LoopConfig::em);

  py::class_<RoundRecord>(m, "RoundRecord")
      .def_readonly("round", &RoundRecord::round)
      .def_readonly("method", &RoundRecord::method)
      .def_readonly("method_a", &RoundRecord::method_a)
      .def_readonly("method_b", &RoundRecord::method_b)
      .def_readonly("clean_purity", &RoundRecord::clean_purity)
      .def_readonly("clean_recall", &RoundRecord::clean_recall)
      .def_readonly("clean_size", &RoundRecord::clean_size)
      .def_readonly("total_loss", &RoundRecord::total_loss)
      .def_readonly("pseudo_label_accuracy", &RoundRecord::pseudo_label_accuracy)
      .def_readonly("agreement_a", &RoundRecord::agreement_a)
      .def_readonly("agreement_b", &RoundRecord::agreement_b)
      .def_readonly("purity_a", &RoundRecord::purity_a)
      .def_readonly("purity_b", &RoundRecord::purity_b);

  py::class_<TrainReport>(m, "TrainReport")
      .def_readonly("rounds", &TrainReport::rounds)
      .def_readonly("final_accuracy", &TrainReport::final_accuracy)
      .def_readonly("aborted", &TrainReport::aborted)
      .def_readonly("abort_reason", &TrainReport::abort_reason);

  m.def("fit_prototypes",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& features,
           const std::vector<int>& labels, int k, const std::optional<std::vector<double>>& weights,
           const std::optional<PrototypeModel>& previous, double temperature) {
          return fit_prototypes(matrix_from_numpy(features), labels, k, weights,
                                previous ? &*previous : nullptr, temperature);
        },
        py::arg("features"), py::arg("labels"), py::arg("k"), py::arg("weights") = std::nullopt,
        py::arg("previous") = std::nullopt, py::arg("temperature") = 1.0);
  m.def("fit_prototypes_subsample",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& features,
           const std::vector<int>& labels, int k, double fraction, std::uint64_t seed,
           double temperature) {
          return fit_prototypes_subsample(matrix_from_numpy(features), labels, k, fraction, seed,
                                          temperature);
        },
        py::arg("features"), py::arg("labels"), py::arg("k"), py::arg("fraction"), py::arg("seed"),
        py::arg("temperature") = 1.0);
  m.def("predict_soft",
        [](const PrototypeModel& model,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& feature) {
          const auto f = vector_from_numpy(feature);
          return predict_soft(model, f);
        },
        py::arg("model"), py::arg("feature"));
  m.def("predict_soft_matrix",
        [](const PrototypeModel& model,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& features) {
          return matrix_to_numpy(predict_soft_matrix(model, matrix_from_numpy(features)));
        },
        py::arg("model"), py::arg("features"));
  m.def("mixup",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x1,
           const std::vector<double>& p1,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& x2,
           const std::vector<double>& p2, double beta_param, std::uint64_t seed) {
          const auto xx1 = vector_from_numpy(x1);
          const auto xx2 = vector_from_numpy(x2);
          return mixup(xx1, p1, xx2, p2, beta_param, seed);
        },
        py::arg("x1"), py::arg("p1"), py::arg("x2"), py::arg("p2"), py::arg("beta_param"),
        py::arg("seed"));
  m.def("loss_labeled",
        [](const std::vector<double>& pred, const std::vector<double>& target) {
          return loss_labeled(pred, target);
        },
        py::arg("pred"), py::arg("target"));
  m.def("loss_unlabeled",
        [](const std::vector<double>& pred, const std::vector<double>& target) {
          return loss_unlabeled(pred, target);
        },
        py::arg("pred"), py::arg("target"));
  m.def("loss_reg",
        [](const std::vector<std::vector<double>>& batch, const std::vector<double>& prior) {
          return loss_reg(batch, prior);
        },
        py::arg("batch_preds"), py::arg("prior"));
  m.def("uniform_prior", &uniform_prior, py::arg("k"));
  m.def("contrastive_loss",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& projections,
           double kappa) { return contrastive_loss(matrix_from_numpy(projections), kappa); },
        py::arg("projections"), py::arg("kappa"));
  m.def("total_loss", &total_loss, py::arg("l_x"), py::arg("l_u"), py::arg("l_r"), py::arg("l_c"),
        py::arg("config"));
  m.def("run_loop", &run_loop, py::arg("dataset"), py::arg("config"),
        py::arg("eval_dataset") = std::nullopt);
  m.def("train_report_to_json", &train_report_to_json);
  m.def("train_report_to_csv", &train_report_to_csv);

#ifdef PSDC_VERSION
  m.attr("__version__") = PSDC_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
