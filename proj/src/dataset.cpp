#include "psdc/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "psdc/errors.hpp"
#include "psdc/rng.hpp"

namespace psdc {

void Dataset::validate() const {
  const std::size_t n = noisy_labels.size();
  if (features.rows() != n)
    throw ValidationError("dataset: feature rows (" + std::to_string(features.rows()) +
                          ") != label count (" + std::to_string(n) + ")");
  if (ids.size() != n) throw ValidationError("dataset: id count != label count");
  if (k < 1) throw ValidationError("dataset: class count must be positive");
  if (!features.all_finite()) throw ValidationError("dataset: features contain NaN/Inf");
  for (std::size_t i = 0; i < n; ++i)
    if (noisy_labels[i] < 0 || noisy_labels[i] >= k)
      throw ValidationError("dataset: label " + std::to_string(noisy_labels[i]) +
                            " out of range [0," + std::to_string(k) + ") at row " +
                            std::to_string(i));
  if (true_labels) {
    if (true_labels->size() != n)
      throw ValidationError("dataset: true_labels length != noisy_labels length");
    for (std::size_t i = 0; i < n; ++i)
      if ((*true_labels)[i] < 0 || (*true_labels)[i] >= k)
        throw ValidationError("dataset: true label out of range at row " + std::to_string(i));
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : ids)
    if (!seen.insert(id).second) throw ValidationError("dataset: duplicate id '" + id + "'");
}

Dataset Dataset::without_true_labels() const {
  Dataset copy = *this;
  copy.true_labels.reset();
  return copy;
}

void SyntheticSpec::validate() const {
  // per_class >= 1 and sigma >= 0 are deliberately laxer than the headline
  // invariants: single-sample classes and zero-spread blobs are legitimate
  // degenerate inputs elsewhere in the toolkit.
  if (k < 2) throw ValidationError("synthetic spec: k must be >= 2");
  if (dim < 2) throw ValidationError("synthetic spec: dim must be >= 2");
  if (per_class < 1) throw ValidationError("synthetic spec: per_class must be >= 1");
  if (!(sigma >= 0.0)) throw ValidationError("synthetic spec: sigma must be >= 0");
  if (!(separation >= 0.0)) throw ValidationError("synthetic spec: separation must be >= 0");
}

Matrix synthetic_class_means(int k, int dim, double separation, double sigma) {
  const double scale = sigma > 0.0 ? sigma : 1.0;
  const double radius = separation * scale * std::numbers::sqrt2 / 2.0;
  Matrix means(static_cast<std::size_t>(k), static_cast<std::size_t>(dim), 0.0);
  for (int c = 0; c < k; ++c) {
    const int axis = c % dim;
    const int layer = c / dim;
    // Layer growth of sqrt(2) per wrap keeps same-axis means a full
    // separation*scale apart; cross-axis pairs are at least that by
    // orthogonality.
    const double r = radius * (1.0 + std::numbers::sqrt2 * layer);
    means.at(static_cast<std::size_t>(c), static_cast<std::size_t>(axis)) = r;
  }
  return means;
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const Matrix means = synthetic_class_means(spec.k, spec.dim, spec.separation, spec.sigma);
  const std::size_t n = static_cast<std::size_t>(spec.k) * static_cast<std::size_t>(spec.per_class);

  Dataset out;
  out.k = spec.k;
  out.features = Matrix(n, static_cast<std::size_t>(spec.dim));
  out.noisy_labels.resize(n);
  out.ids.resize(n);

  // One stream per class: blobs are independent of each other's sample
  // counts and can be generated concurrently.
  std::size_t row = 0;
  for (int c = 0; c < spec.k; ++c) {
    Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(c)));
    for (int s = 0; s < spec.per_class; ++s, ++row) {
      for (int d = 0; d < spec.dim; ++d)
        out.features.at(row, static_cast<std::size_t>(d)) =
            means.at(static_cast<std::size_t>(c), static_cast<std::size_t>(d)) +
            spec.sigma * rng.normal();
      out.noisy_labels[row] = c;
      char buf[32];
      std::snprintf(buf, sizeof buf, "s%06zu", row);
      out.ids[row] = buf;
    }
  }
  out.true_labels = out.noisy_labels;
  out.validate();
  return out;
}

namespace {

std::string format_feature(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  cells.push_back(cur);
  return cells;
}

int parse_label_cell(const std::string& cell, std::size_t row, const std::string& column) {
  char* end = nullptr;
  const long v = std::strtol(cell.c_str(), &end, 10);
  if (cell.empty() || end != cell.c_str() + cell.size())
    throw ParseError("row " + std::to_string(row) + ", column " + column +
                     ": expected integer label, got '" + cell + "'");
  return static_cast<int>(v);
}

double parse_feature_cell(const std::string& cell, std::size_t row, const std::string& column) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size())
    throw ParseError("row " + std::to_string(row) + ", column " + column +
                     ": expected numeric feature, got '" + cell + "'");
  return v;
}

}  // namespace

Dataset parse_dataset_csv(const std::string& text, int expected_k) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_line(line);
  if (header.size() < 3 || header[0] != "id" || header[1] != "label")
    throw ParseError("malformed header: expected 'id,label[,true_label],f0,...'");
  std::size_t feature_start = 2;
  bool has_true_column = false;
  if (header[2] == "true_label") {
    has_true_column = true;
    feature_start = 3;
  }
  const std::size_t dim = header.size() - feature_start;
  if (dim == 0) throw ParseError("malformed header: no feature columns");
  for (std::size_t d = 0; d < dim; ++d) {
    const std::string expected = "f" + std::to_string(d);
    if (header[feature_start + d] != expected)
      throw ParseError("malformed header: expected column '" + expected + "', got '" +
                       header[feature_start + d] + "'");
  }

  std::vector<std::string> ids;
  std::vector<int> labels;
  std::vector<int> true_labels;
  std::vector<bool> true_present;
  std::vector<double> values;
  std::unordered_set<std::string> seen_ids;

  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size())
      throw ParseError("row " + std::to_string(row) + ": expected " +
                       std::to_string(header.size()) + " cells, got " +
                       std::to_string(cells.size()));
    if (!seen_ids.insert(cells[0]).second)
      throw ParseError("row " + std::to_string(row) + ", column id: duplicate id '" + cells[0] +
                       "'");
    ids.push_back(cells[0]);
    labels.push_back(parse_label_cell(cells[1], row, "label"));
    if (has_true_column) {
      if (cells[2].empty()) {
        true_present.push_back(false);
        true_labels.push_back(0);
      } else {
        true_present.push_back(true);
        true_labels.push_back(parse_label_cell(cells[2], row, "true_label"));
      }
    }
    for (std::size_t d = 0; d < dim; ++d)
      values.push_back(parse_feature_cell(cells[feature_start + d], row, header[feature_start + d]));
  }

  const std::size_t n = ids.size();
  Dataset out;
  out.ids = std::move(ids);
  out.noisy_labels = std::move(labels);
  out.features = Matrix(n, dim);
  out.features.data() = std::move(values);

  if (has_true_column) {
    const bool any = std::find(true_present.begin(), true_present.end(), true) != true_present.end();
    const bool all = std::find(true_present.begin(), true_present.end(), false) == true_present.end();
    if (any && !all) {
      const auto first_missing =
          std::find(true_present.begin(), true_present.end(), false) - true_present.begin();
      throw ParseError("row " + std::to_string(first_missing + 1) +
                       ", column true_label: cell empty while other rows carry true labels");
    }
    if (all && n > 0) out.true_labels = std::move(true_labels);
  }

  int k = expected_k;
  if (k <= 0) {
    for (int v : out.noisy_labels) k = std::max(k, v + 1);
    if (out.true_labels)
      for (int v : *out.true_labels) k = std::max(k, v + 1);
  }
  out.k = std::max(k, 1);

  // Range check with row/column context before the structural validate.
  for (std::size_t i = 0; i < n; ++i) {
    if (out.noisy_labels[i] < 0 || out.noisy_labels[i] >= out.k)
      throw ParseError("row " + std::to_string(i + 1) + ", column label: value " +
                       std::to_string(out.noisy_labels[i]) + " out of range [0," +
                       std::to_string(out.k) + ")");
    if (out.true_labels && ((*out.true_labels)[i] < 0 || (*out.true_labels)[i] >= out.k))
      throw ParseError("row " + std::to_string(i + 1) + ", column true_label: value " +
                       std::to_string((*out.true_labels)[i]) + " out of range [0," +
                       std::to_string(out.k) + ")");
  }
  out.validate();
  return out;
}

std::string dataset_to_csv(const Dataset& dataset) {
  dataset.validate();
  std::string out = "id,label,true_label";
  for (std::size_t d = 0; d < dataset.dim(); ++d) out += ",f" + std::to_string(d);
  out += "\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out += dataset.ids[i];
    out += ',';
    out += std::to_string(dataset.noisy_labels[i]);
    out += ',';
    if (dataset.true_labels) out += std::to_string((*dataset.true_labels)[i]);
    for (std::size_t d = 0; d < dataset.dim(); ++d) {
      out += ',';
      out += format_feature(dataset.features.at(i, d));
    }
    out += '\n';
  }
  return out;
}

Dataset load_dataset(const std::string& path, int expected_k) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_dataset_csv(buf.str(), expected_k);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << dataset_to_csv(dataset);
}

}  // namespace psdc
