#pragma once

#include "labelflip/dataset.hpp"
#include "labelflip/error.hpp"
#include "labelflip/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace labelflip {

enum class ClassifierKind { logistic_regression, linear_svm, gaussian_nb, knn, gbdt };

inline constexpr ClassifierKind all_classifier_kinds[] = {ClassifierKind::logistic_regression, ClassifierKind::linear_svm,
                                                          ClassifierKind::gaussian_nb, ClassifierKind::knn,
                                                          ClassifierKind::gbdt};

inline std::string_view to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::logistic_regression: return "logistic_regression";
    case ClassifierKind::linear_svm: return "linear_svm";
    case ClassifierKind::gaussian_nb: return "gaussian_nb";
    case ClassifierKind::knn: return "knn";
    case ClassifierKind::gbdt: return "gbdt";
  }
  return "unknown";
}

/// Short table label (LR, SVM, NB, KNN, GBDT).
inline std::string_view short_name(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::logistic_regression: return "LR";
    case ClassifierKind::linear_svm: return "SVM";
    case ClassifierKind::gaussian_nb: return "NB";
    case ClassifierKind::knn: return "KNN";
    case ClassifierKind::gbdt: return "GBDT";
  }
  return "?";
}

inline std::optional<ClassifierKind> parse_classifier_kind(std::string_view s) {
  for (auto k : all_classifier_kinds) {
    if (s == to_string(k) || s == short_name(k)) return k;
  }
  if (s == "lr") return ClassifierKind::logistic_regression;
  if (s == "svm") return ClassifierKind::linear_svm;
  if (s == "nb") return ClassifierKind::gaussian_nb;
  if (s == "kNN") return ClassifierKind::knn;
  if (s == "lgbm" || s == "LGBM") return ClassifierKind::gbdt;
  return std::nullopt;
}

/// Hyperparameters. Only the fields relevant to `kind` are read.
struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::logistic_regression;
  double gamma = 1.0;  // loss weight in  gamma * sum V(y, f(x)) + 0.5 * |w|^2
  int k_neighbors = 5;
  GbdtParams gbdt{};
  int max_iterations = 20000;
  double tolerance = 1e-6;
};

enum class LinearLoss { logistic, hinge };

struct LinearModel {
  Vector weights;
  double intercept = 0.0;
  LinearLoss loss = LinearLoss::logistic;
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
};

struct NaiveBayesModel {
  Vector mean[2];  // [0] = class -1, [1] = class +1
  Vector variance[2];
  double log_prior[2] = {0.0, 0.0};
};

struct KnnModel {
  Dataset train;
  int k = 5;
};

class TrainedModel {
 public:
  using Body = std::variant<LinearModel, NaiveBayesModel, KnnModel, GbdtModel>;

  TrainedModel(ClassifierKind kind, Body body, std::size_t dimension)
      : kind_(kind), body_(std::move(body)), dimension_(dimension) {}

  ClassifierKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }
  const Body &body() const noexcept { return body_; }

  const LinearModel *linear() const noexcept { return std::get_if<LinearModel>(&body_); }

  /// False only for linear models whose solver hit max_iterations.
  bool converged() const noexcept {
    const auto *lin = linear();
    return lin == nullptr || lin->converged;
  }

 private:
  ClassifierKind kind_;
  Body body_;
  std::size_t dimension_;
};

// ---------------------------------------------------------------------------
// Primal solver for  gamma * sum_i V(y_i, w.x_i + b) + 0.5 * |w|^2.

namespace detail {

/// Hinge smoothed quadratically over (1 - delta, 1); delta = 0 is the plain hinge.
inline double smoothed_hinge(double margin, double delta) {
  if (margin >= 1.0) return 0.0;
  if (delta > 0.0 && margin > 1.0 - delta) return (1.0 - margin) * (1.0 - margin) / (2.0 * delta);
  return 1.0 - margin - 0.5 * delta;
}

/// d/dmargin of smoothed_hinge (a subgradient when delta = 0).
inline double smoothed_hinge_slope(double margin, double delta) {
  if (margin >= 1.0) return 0.0;
  if (delta > 0.0 && margin > 1.0 - delta) return -(1.0 - margin) / delta;
  return -1.0;
}

struct LinearProblem {
  const Matrix &x;
  const Labels &y;
  double gamma;
  LinearLoss loss;
  double delta = 0.0;  // hinge smoothing

  double value(const Vector &w, double b) const {
    const Vector z = x * w;
    double total = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double m = y[static_cast<std::size_t>(i)] * (z(i) + b);
      total += loss == LinearLoss::logistic ? softplus(-m) : smoothed_hinge(m, delta);
    }
    return gamma * total + 0.5 * w.squaredNorm();
  }

  double value_and_gradient(const Vector &w, double b, Vector &gw, double &gb) const {
    const Vector z = x * w;
    Vector coef(z.size());
    double total = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const int yi = y[static_cast<std::size_t>(i)];
      const double m = yi * (z(i) + b);
      if (loss == LinearLoss::logistic) {
        total += softplus(-m);
        coef(i) = -yi * sigmoid(-m);
      } else {
        total += smoothed_hinge(m, delta);
        coef(i) = yi * smoothed_hinge_slope(m, delta);
      }
    }
    gw = gamma * (x.transpose() * coef) + w;
    gb = gamma * coef.sum();
    return gamma * total + 0.5 * w.squaredNorm();
  }
};

struct DescentResult {
  int iterations = 0;
  bool converged = false;
};

using IterateObserver = std::function<void(const Vector &w, double b, double f)>;

/// Gradient descent with Armijo backtracking. Every accepted step strictly
/// lowers the objective; `observe` sees the start point and each iterate.
inline DescentResult gradient_descent(const LinearProblem &p, Vector &w, double &b, int max_iterations,
                                      double tolerance, double initial_step, const IterateObserver &observe) {
  Vector gw(w.size());
  double gb = 0.0;
  double f = p.value_and_gradient(w, b, gw, gb);
  if (observe) observe(w, b, f);
  const double g0 = std::sqrt(gw.squaredNorm() + gb * gb);
  const double stop = tolerance * std::max(1.0, g0);
  double step = initial_step;
  DescentResult res;
  Vector w_new(w.size());
  for (; res.iterations < max_iterations; ++res.iterations) {
    const double gnorm2 = gw.squaredNorm() + gb * gb;
    if (std::sqrt(gnorm2) <= stop) {
      res.converged = true;
      return res;
    }
    step *= 2.0;
    double f_new = 0.0;
    double b_new = 0.0;
    for (;;) {
      w_new = w - step * gw;
      b_new = b - step * gb;
      f_new = p.value(w_new, b_new);
      if (f_new <= f - 0.5 * step * gnorm2) break;
      step *= 0.5;
      if (step < 1e-18) {
        // No representable decrease left: f is stationary to machine precision.
        res.converged = true;
        return res;
      }
    }
    w = w_new;
    b = b_new;
    f = p.value_and_gradient(w, b, gw, gb);
    if (observe) observe(w, b, f);
  }
  res.converged = std::sqrt(gw.squaredNorm() + gb * gb) <= stop;
  return res;
}

inline double lipschitz_estimate(const Matrix &x, double gamma, double curvature) {
  return gamma * curvature * (x.squaredNorm() + static_cast<double>(x.rows())) + 1.0;
}

}  // namespace detail

/// Regularized objective  gamma * sum V + 0.5 |w|^2  with the exact loss.
inline double linear_objective(const Matrix &x, const Labels &y, double gamma, LinearLoss loss, const Vector &w,
                               double b) {
  return detail::LinearProblem{x, y, gamma, loss, 0.0}.value(w, b);
}

/// Analytic gradient of the logistic objective; the last entry is d/db.
inline Vector logistic_objective_gradient(const Matrix &x, const Labels &y, double gamma, const Vector &w, double b) {
  Vector gw(w.size());
  double gb = 0.0;
  detail::LinearProblem{x, y, gamma, LinearLoss::logistic, 0.0}.value_and_gradient(w, b, gw, gb);
  Vector out(w.size() + 1);
  out << gw, gb;
  return out;
}

/**
 * Fit a linear model by first-order descent in the primal. Logistic loss is
 * minimized directly. The hinge is approached through a continuation of
 * smoothed hinges (delta = 1, 0.1, 0.01, 0.001), each warm-started from the
 * last. For the hinge the returned model is the visited iterate with the
 * lowest exact objective, and `trace` records that running minimum.
 */
inline LinearModel fit_linear(const Dataset &data, LinearLoss loss, double gamma, int max_iterations, double tolerance,
                              std::vector<double> *trace = nullptr) {
  const Matrix &x = data.features();
  LinearModel m;
  m.loss = loss;
  m.weights = Vector::Zero(x.cols());
  double b = 0.0;
  if (loss == LinearLoss::logistic) {
    detail::LinearProblem p{x, data.labels(), gamma, loss, 0.0};
    detail::IterateObserver observe;
    if (trace) observe = [&](const Vector &, double, double f) { trace->push_back(f); };
    const auto r = detail::gradient_descent(p, m.weights, b, max_iterations, tolerance,
                                            1.0 / detail::lipschitz_estimate(x, gamma, 0.25), observe);
    m.converged = r.converged;
    m.iterations = r.iterations;
    m.intercept = b;
  } else {
    const detail::LinearProblem exact{x, data.labels(), gamma, loss, 0.0};
    Vector best_w = m.weights;
    double best_b = 0.0;
    double best_f = std::numeric_limits<double>::infinity();
    const detail::IterateObserver observe = [&](const Vector &w, double bias, double) {
      const double f = exact.value(w, bias);
      if (f < best_f) {
        best_f = f;
        best_w = w;
        best_b = bias;
      }
      if (trace) trace->push_back(best_f);
    };
    constexpr double deltas[] = {1.0, 0.1, 0.01, 0.001};
    const int per_stage = std::max(1, max_iterations / 4);
    m.converged = true;
    for (double delta : deltas) {
      detail::LinearProblem p{x, data.labels(), gamma, loss, delta};
      const auto r = detail::gradient_descent(p, m.weights, b, per_stage, tolerance,
                                              1.0 / detail::lipschitz_estimate(x, gamma, 1.0 / delta), observe);
      m.iterations += r.iterations;
      m.converged = m.converged && r.converged;
    }
    m.weights = best_w;
    m.intercept = best_b;
  }
  m.objective = linear_objective(x, data.labels(), gamma, loss, m.weights, m.intercept);
  return m;
}

inline NaiveBayesModel fit_naive_bayes(const Dataset &data) {
  const Matrix &x = data.features();
  const auto d = x.cols();
  NaiveBayesModel nb;
  // Smoothing: 1e-9 times the largest per-feature variance of the whole set.
  double max_var = 0.0;
  for (Eigen::Index c = 0; c < d; ++c) {
    const double mu = x.col(c).mean();
    max_var = std::max(max_var, (x.col(c).array() - mu).square().mean());
  }
  const double eps = 1e-9 * max_var;
  for (int cls = 0; cls < 2; ++cls) {
    const int label = cls == 0 ? -1 : 1;
    Vector sum = Vector::Zero(d);
    Vector sq = Vector::Zero(d);
    std::size_t count = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.labels()[i] != label) continue;
      sum += x.row(static_cast<Eigen::Index>(i)).transpose();
      ++count;
    }
    const double cnt = static_cast<double>(count);
    nb.mean[cls] = sum / cnt;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.labels()[i] != label) continue;
      sq += (x.row(static_cast<Eigen::Index>(i)).transpose() - nb.mean[cls]).array().square().matrix();
    }
    nb.variance[cls] = (sq / cnt).array() + eps;
    if (eps == 0.0) nb.variance[cls] = nb.variance[cls].cwiseMax(1e-300);
    nb.log_prior[cls] = std::log(cnt / static_cast<double>(data.size()));
  }
  return nb;
}

inline TrainedModel fit(const ClassifierSpec &spec, const Dataset &data, std::uint64_t seed = 0) {
  if (data.size() < 2 || !data.has_both_classes()) {
    throw model_error(std::string("cannot fit ") + std::string(to_string(spec.kind)) +
                      ": training data must contain both classes");
  }
  const std::size_t d = data.dimension();
  switch (spec.kind) {
    case ClassifierKind::logistic_regression:
    case ClassifierKind::linear_svm: {
      if (!(spec.gamma > 0.0)) throw model_error("gamma must be > 0");
      const auto loss = spec.kind == ClassifierKind::linear_svm ? LinearLoss::hinge : LinearLoss::logistic;
      return TrainedModel(spec.kind, fit_linear(data, loss, spec.gamma, spec.max_iterations, spec.tolerance), d);
    }
    case ClassifierKind::gaussian_nb: return TrainedModel(spec.kind, fit_naive_bayes(data), d);
    case ClassifierKind::knn:
      if (spec.k_neighbors < 1) throw model_error("k_neighbors must be >= 1");
      return TrainedModel(spec.kind, KnnModel{data, spec.k_neighbors}, d);
    case ClassifierKind::gbdt: return TrainedModel(spec.kind, train_gbdt(data, spec.gbdt, seed).model, d);
  }
  throw model_error("unknown classifier kind");
}

namespace detail {

inline double knn_score(const KnnModel &m, const Eigen::Ref<const Eigen::RowVectorXd> &q) {
  const Matrix &x = m.train.features();
  const auto n = static_cast<std::size_t>(x.rows());
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(m.k), n);
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = {(x.row(static_cast<Eigen::Index>(i)) - q).squaredNorm(), i};
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::size_t positives = 0;
  for (std::size_t j = 0; j < k; ++j) positives += m.train.labels()[dist[j].second] > 0 ? 1 : 0;
  return (static_cast<double>(positives) / static_cast<double>(k) - 0.5) * 2.0;
}

inline double nb_log_joint(const NaiveBayesModel &m, int cls, const Eigen::Ref<const Eigen::RowVectorXd> &q) {
  double lp = m.log_prior[cls];
  for (Eigen::Index c = 0; c < q.size(); ++c) {
    const double var = m.variance[cls](c);
    const double diff = q(c) - m.mean[cls](c);
    lp += -0.5 * std::log(2.0 * std::numbers::pi * var) - diff * diff / (2.0 * var);
  }
  return lp;
}

}  // namespace detail

/// Real-valued score; the sign is the prediction.
inline Vector decision_function(const TrainedModel &model, const Matrix &features) {
  if (static_cast<std::size_t>(features.cols()) != model.dimension()) {
    throw model_error("dimension mismatch: model expects " + std::to_string(model.dimension()) + " features, got " +
                      std::to_string(features.cols()));
  }
  return std::visit(
      [&](const auto &body) -> Vector {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, LinearModel>) {
          return (features * body.weights).array() + body.intercept;
        } else if constexpr (std::is_same_v<T, NaiveBayesModel>) {
          Vector s(features.rows());
          for (Eigen::Index i = 0; i < features.rows(); ++i) {
            s(i) = detail::nb_log_joint(body, 1, features.row(i)) - detail::nb_log_joint(body, 0, features.row(i));
          }
          return s;
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          Vector s(features.rows());
          for (Eigen::Index i = 0; i < features.rows(); ++i) s(i) = detail::knn_score(body, features.row(i));
          return s;
        } else {
          return predict_raw(body, features);
        }
      },
      model.body());
}

/// Score-to-label rule shared by every classifier: 0 maps to +1.
inline int label_of(double score) noexcept { return score >= 0.0 ? 1 : -1; }

inline Labels predict(const TrainedModel &model, const Matrix &features) {
  const Vector s = decision_function(model, features);
  Labels out(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) out[static_cast<std::size_t>(i)] = label_of(s(i));
  return out;
}

/// Residual of label `y` at `score`: hinge for the SVM, logistic otherwise.
inline double loss_from_score(ClassifierKind kind, int y, double score) {
  if (kind == ClassifierKind::linear_svm) return std::max(0.0, 1.0 - y * score);
  return logistic_loss(y, score);
}

inline Vector per_instance_loss(const TrainedModel &model, const Dataset &data) {
  const Vector s = decision_function(model, data.features());
  Vector out(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) out(i) = loss_from_score(model.kind(), data.labels()[static_cast<std::size_t>(i)], s(i));
  return out;
}

inline double error_rate(const Labels &predicted, const Labels &truth) {
  if (truth.empty()) throw model_error("error_rate of an empty dataset");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) wrong += predicted[i] != truth[i] ? 1 : 0;
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

inline double error_rate(const TrainedModel &model, const Dataset &data) {
  if (data.empty()) throw model_error("error_rate of an empty dataset");
  return error_rate(predict(model, data.features()), data.labels());
}

}  // namespace labelflip
