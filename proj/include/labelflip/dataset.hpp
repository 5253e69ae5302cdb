#pragma once

#include "labelflip/error.hpp"
#include "labelflip/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace labelflip {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Binary labels, each exactly -1 or +1.
using Labels = std::vector<int>;

/**
 * Feature matrix plus {-1,+1} labels. Construction validates that every label
 * is -1/+1 and every feature is finite; a Dataset is immutable afterwards
 * (attacks produce new label vectors, they never touch `features()`).
 */
class Dataset {
 public:
  Dataset() = default;

  Dataset(Matrix features, Labels labels, std::vector<std::string> feature_names = {})
      : features_(std::move(features)), labels_(std::move(labels)), names_(std::move(feature_names)) {
    if (static_cast<std::size_t>(features_.rows()) != labels_.size()) {
      throw dataset_error("feature rows (" + std::to_string(features_.rows()) + ") != label count (" +
                          std::to_string(labels_.size()) + ")");
    }
    if (!names_.empty() && static_cast<Eigen::Index>(names_.size()) != features_.cols()) {
      throw dataset_error("feature_names size does not match the number of columns");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] != -1 && labels_[i] != 1) {
        throw dataset_error("label at row " + std::to_string(i) + " is " + std::to_string(labels_[i]) +
                            ", expected -1 or +1");
      }
    }
    if (!features_.allFinite()) throw dataset_error("features contain NaN or infinite values");
  }

  const Matrix &features() const noexcept { return features_; }
  const Labels &labels() const noexcept { return labels_; }
  const std::vector<std::string> &feature_names() const noexcept { return names_; }

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(features_.cols()); }
  bool empty() const noexcept { return labels_.empty(); }

  std::size_t count(int label) const { return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label)); }
  bool has_both_classes() const { return count(1) > 0 && count(-1) > 0; }

  /// Same features, different labels.
  Dataset with_labels(Labels labels) const { return Dataset(features_, std::move(labels), names_); }

  /// Rows at `indices`, in that order.
  Dataset subset(const std::vector<std::size_t> &indices) const {
    Matrix x(static_cast<Eigen::Index>(indices.size()), features_.cols());
    Labels y(indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r) {
      x.row(static_cast<Eigen::Index>(r)) = features_.row(static_cast<Eigen::Index>(indices[r]));
      y[r] = labels_[indices[r]];
    }
    return Dataset(std::move(x), std::move(y), names_);
  }

 private:
  Matrix features_;
  Labels labels_;
  std::vector<std::string> names_;
};

struct TrainTestSplit {
  Dataset train;
  Dataset test;
  std::uint64_t seed = 0;
  std::vector<std::size_t> train_indices;  // rows of the source, ascending
  std::vector<std::size_t> test_indices;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

inline bool parse_double(std::string_view s, double &out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

/// floor(fraction * n) tolerant of products like 0.29 * 100 = 28.999999999999996.
inline std::size_t fraction_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

}  // namespace detail

/**
 * Read a comma-separated file with a header row. The column named
 * `label_column` must hold exactly two distinct values; rows equal to
 * `positive_value` become +1, the others -1. All remaining columns are
 * numeric features, kept in file order.
 */
inline Dataset load_csv(const std::filesystem::path &path, const std::string &label_column,
                        const std::string &positive_value) {
  std::ifstream in(path);
  if (!in) throw dataset_error("cannot open dataset file '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) throw dataset_error("dataset file '" + path.string() + "' is empty");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM

  const auto header = detail::split_commas(line);
  std::size_t label_idx = header.size();
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == label_column && label_idx == header.size()) {
      label_idx = c;
    } else {
      names.emplace_back(header[c]);
    }
  }
  if (label_idx == header.size()) {
    throw dataset_error("label column '" + label_column + "' not found in header of '" + path.string() + "'");
  }

  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  std::set<std::string> distinct;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_commas(line);
    if (cells.size() != header.size()) {
      throw dataset_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                          std::to_string(header.size()) + " cells, found " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(names.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_idx) continue;
      double v{};
      if (!detail::parse_double(cells[c], v) || !std::isfinite(v)) {
        throw dataset_error(path.string() + ":" + std::to_string(line_no) + ": non-numeric feature cell '" +
                            std::string(cells[c]) + "' in column '" + std::string(header[c]) + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
    raw_labels.emplace_back(cells[label_idx]);
    distinct.insert(raw_labels.back());
    if (distinct.size() > 2) {
      throw dataset_error("label column '" + label_column + "' has more than two distinct values (line " +
                          std::to_string(line_no) + ")");
    }
  }
  if (distinct.size() != 2) {
    throw dataset_error("label column '" + label_column + "' must have exactly two distinct values, found " +
                        std::to_string(distinct.size()));
  }
  if (!distinct.contains(positive_value)) {
    throw dataset_error("positive label value '" + positive_value + "' does not occur in column '" +
                        label_column + "'");
  }

  Matrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(names.size()));
  Labels y(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < names.size(); ++c) x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    y[r] = raw_labels[r] == positive_value ? 1 : -1;
  }
  return Dataset(std::move(x), std::move(y), std::move(names));
}

/// Two isotropic 2-D Gaussians centred at (-1.5, 0) (label -1) and (+1.5, 0)
/// (label +1) with standard deviation `noise`. Labels alternate by row.
inline Dataset generate_linear(std::size_t n, double noise, std::uint64_t seed) {
  if (n < 4) throw dataset_error("generate_linear needs n >= 4");
  if (!(noise >= 0.0)) throw dataset_error("noise must be >= 0");
  Rng rng(derive_seed(seed, "linear"));
  Matrix x(static_cast<Eigen::Index>(n), 2);
  Labels y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i % 2 == 0 ? 1 : -1;
    const auto r = static_cast<Eigen::Index>(i);
    x(r, 0) = 1.5 * label + noise * rng.normal();
    x(r, 1) = noise * rng.normal();
    y[i] = label;
  }
  return Dataset(std::move(x), std::move(y), {"x0", "x1"});
}

/// Points at true radius in the unit disc (label +1) or the annulus
/// 1 <= r < 2 (label -1); the observed radius carries N(0, (0.1 * noise)^2)
/// noise. Even rows are +1; the first row sits at the origin.
inline Dataset generate_circular(std::size_t n, double noise, std::uint64_t seed) {
  if (n < 4) throw dataset_error("generate_circular needs n >= 4");
  if (!(noise >= 0.0)) throw dataset_error("noise must be >= 0");
  Rng rng(derive_seed(seed, "circular"));
  Matrix x(static_cast<Eigen::Index>(n), 2);
  Labels y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i % 2 == 0 ? 1 : -1;
    double radius = label > 0 ? std::sqrt(rng.uniform()) : std::sqrt(1.0 + 3.0 * rng.uniform());
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    if (i == 0) radius = 0.0;
    const double observed = std::abs(radius + 0.1 * noise * rng.normal());
    const auto r = static_cast<Eigen::Index>(i);
    x(r, 0) = observed * std::cos(angle);
    x(r, 1) = observed * std::sin(angle);
    y[i] = label;
  }
  return Dataset(std::move(x), std::move(y), {"x0", "x1"});
}

/**
 * Random train/test partition. The train size is floor(fraction * n); if that
 * leaves either side empty one instance is moved across. With `stratified`,
 * each class contributes floor(fraction * n_c) rows and leftover slots go to
 * the classes with the largest remainders.
 */
inline TrainTestSplit split(const Dataset &data, double train_fraction, std::uint64_t seed, bool stratified) {
  const std::size_t n = data.size();
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw dataset_error("train_fraction must lie in (0, 1)");
  if (n < 2) throw dataset_error("cannot split fewer than two instances");

  std::size_t n_train = detail::fraction_count(train_fraction, n);
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

  Rng rng(derive_seed(seed, "split"));
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;

  if (!stratified) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    train_idx.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    test_idx.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  } else {
    std::vector<std::size_t> members[2];  // [0] = -1, [1] = +1
    for (std::size_t i = 0; i < n; ++i) members[data.labels()[i] > 0 ? 1 : 0].push_back(i);
    std::size_t take[2];
    double remainder[2];
    for (int c = 0; c < 2; ++c) {
      const double exact = train_fraction * static_cast<double>(members[c].size());
      take[c] = detail::fraction_count(train_fraction, members[c].size());
      remainder[c] = exact - static_cast<double>(take[c]);
    }
    while (take[0] + take[1] < n_train) {
      const int c = (remainder[1] > remainder[0] && take[1] < members[1].size()) || take[0] >= members[0].size() ? 1 : 0;
      ++take[c];
      remainder[c] = -1.0;
    }
    while (take[0] + take[1] > n_train) {  // only when the clamp shrank n_train
      const int c = take[1] > take[0] ? 1 : 0;
      --take[c];
    }
    for (int c = 0; c < 2; ++c) {
      rng.shuffle(members[c]);
      train_idx.insert(train_idx.end(), members[c].begin(), members[c].begin() + static_cast<std::ptrdiff_t>(take[c]));
      test_idx.insert(test_idx.end(), members[c].begin() + static_cast<std::ptrdiff_t>(take[c]), members[c].end());
    }
  }

  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  TrainTestSplit out{data.subset(train_idx), data.subset(test_idx), seed, std::move(train_idx), std::move(test_idx)};
  if (!out.train.has_both_classes()) throw dataset_error("train split contains a single class");
  return out;
}

/// Centre and scale every feature by the TRAIN mean and population standard
/// deviation. Zero-variance columns are left exactly as they are.
inline TrainTestSplit standardize(const TrainTestSplit &s) {
  const Matrix &train = s.train.features();
  Matrix xtr = train;
  Matrix xte = s.test.features();
  const double rows = static_cast<double>(train.rows());
  for (Eigen::Index c = 0; c < train.cols(); ++c) {
    const double mean = train.col(c).mean();
    const double var = (train.col(c).array() - mean).square().sum() / rows;
    const double sd = std::sqrt(var);
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) continue;
    xtr.col(c) = (train.col(c).array() - mean) / sd;
    xte.col(c) = (s.test.features().col(c).array() - mean) / sd;
  }
  return TrainTestSplit{Dataset(std::move(xtr), s.train.labels(), s.train.feature_names()),
                        Dataset(std::move(xte), s.test.labels(), s.test.feature_names()), s.seed, s.train_indices,
                        s.test_indices};
}

}  // namespace labelflip
