#pragma once

#include "labelflip/classifiers.hpp"
#include "labelflip/dataset.hpp"
#include "labelflip/error.hpp"
#include "labelflip/rng.hpp"
#include "labelflip/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace labelflip {

enum class Strategy { gds, ogds, sgds, linear_flip, random_flip };

inline constexpr Strategy all_strategies[] = {Strategy::gds, Strategy::ogds, Strategy::sgds, Strategy::linear_flip,
                                              Strategy::random_flip};

inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::gds: return "gds";
    case Strategy::ogds: return "ogds";
    case Strategy::sgds: return "sgds";
    case Strategy::linear_flip: return "linear";
    case Strategy::random_flip: return "random";
  }
  return "unknown";
}

inline std::optional<Strategy> parse_strategy(std::string_view s) {
  for (auto st : all_strategies) {
    if (s == to_string(st)) return st;
  }
  if (s == "linear_flip") return Strategy::linear_flip;
  if (s == "random_flip") return Strategy::random_flip;
  return std::nullopt;
}

/// Flip costs: `large` for candidates drawn from the large-gradient pool,
/// `small` for the small-gradient block. Equal values mean uniform cost.
struct CostScheme {
  double large = 1.0;
  double small = 1.0;

  bool uniform() const noexcept { return large == small; }

  std::vector<double> costs_for(const CandidateSet &c) const {
    std::vector<double> out(c.k());
    for (std::size_t i = 0; i < c.k(); ++i) out[i] = c.is_small(i) ? small : large;
    return out;
  }
};

/// How sGDS orders its greedy walk.
///  reduced: the k per-pair coefficients (eps_{i+k} - e_{i+k}) - (eps_i - e_i);
///  slots:   all 2k coefficients (eps_i - e_i), walked slot by slot.
enum class SgdsOrder { reduced, slots };

struct AttackConfig {
  double budget = 0.0;  // total flip cost; a flip count under unit cost
  CostScheme costs{};
  double a = 0.01;
  double b = 0.49;
  int t_max = 10;
  std::uint64_t seed = 0;
  ClassifierSpec surrogate{};
  Dataset validation{};
  SgdsOrder sgds_order = SgdsOrder::reduced;

  void validate() const {
    if (!(budget >= 0.0)) throw attack_error("budget must be >= 0");
    if (!(costs.large > 0.0) || !(costs.small > 0.0)) throw attack_error("flip costs must be > 0");
    if (t_max < 1) throw attack_error("t_max must be >= 1");
    if (!(a >= 0.0) || !(b >= 0.0) || a + b > 1.0 + 1e-12) throw attack_error("sampling ratios need 0 <= a, b and a + b <= 1");
  }

  /// Whole flips affordable under uniform cost.
  std::size_t flip_count() const {
    return static_cast<std::size_t>(std::floor(budget / costs.large + 1e-9));
  }
};

/// Residuals over the 2k slots: slot i is candidate i with its original
/// label, slot i + k the same candidate with the complement label.
struct ErrorVectors {
  Vector e;    // under the clean classifier
  Vector eps;  // under the previous iteration's classifier

  std::size_t k() const noexcept { return static_cast<std::size_t>(e.size()) / 2; }
};

/// Paired 0/1 selection over the 2k slots.
struct IndicatorVector {
  std::vector<std::uint8_t> q;

  std::size_t k() const noexcept { return q.size() / 2; }
  bool complement(std::size_t i) const noexcept { return q[i + k()] != 0; }

  bool paired() const noexcept {
    for (std::size_t i = 0; i < k(); ++i) {
      if (q[i] + q[i + k()] != 1) return false;
    }
    return true;
  }

  static IndicatorVector originals(std::size_t k) {
    IndicatorVector v{std::vector<std::uint8_t>(2 * k, 0)};
    std::fill(v.q.begin(), v.q.begin() + static_cast<std::ptrdiff_t>(k), 1);
    return v;
  }

  friend bool operator==(const IndicatorVector &, const IndicatorVector &) = default;
};

struct AttackResult {
  Strategy strategy = Strategy::ogds;
  double budget = 0.0;
  Labels poisoned_labels;
  std::vector<std::size_t> flipped_indices;  // ascending
  std::vector<double> val_errors;            // validation error per iteration
  std::size_t t_f = 0;                       // 0-based index of the chosen iteration
  std::size_t count_large = 0;               // flips from the large-gradient pool
  std::size_t count_small = 0;               // flips from the small-gradient pool
  double total_cost = 0.0;
  CandidateSet candidate;
  std::optional<IndicatorVector> selection;  // chosen q, for the LP-driven strategies
  std::vector<std::string> warnings;
};

// ---------------------------------------------------------------------------
// IP / LP on the 2k slots:  min sum q_i (eps_i - e_i)
//   s.t. sum_{i>k} c_i q_i <= B,  q_i + q_{i+k} = 1.

inline double selection_objective(const ErrorVectors &errs, const IndicatorVector &q) {
  double total = 0.0;
  for (std::size_t s = 0; s < q.q.size(); ++s) {
    if (q.q[s]) total += errs.eps(static_cast<Eigen::Index>(s)) - errs.e(static_cast<Eigen::Index>(s));
  }
  return total;
}

inline double selection_cost(const IndicatorVector &q, const std::vector<double> &costs) {
  double total = 0.0;
  for (std::size_t i = 0; i < q.k(); ++i) {
    if (q.complement(i)) total += costs[i];
  }
  return total;
}

namespace detail {

inline void check_shapes(const ErrorVectors &errs, const std::vector<double> &costs) {
  if (errs.e.size() != errs.eps.size() || errs.e.size() % 2 != 0) throw attack_error("error vectors must both have length 2k");
  if (costs.size() != errs.k()) throw attack_error("cost vector length must equal k");
}

/// Per-pair change in objective from choosing the complement label.
inline std::vector<double> pair_deltas(const ErrorVectors &errs) {
  const std::size_t k = errs.k();
  std::vector<double> d(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto a = static_cast<Eigen::Index>(i);
    const auto b = static_cast<Eigen::Index>(i + k);
    d[i] = (errs.eps(b) - errs.e(b)) - (errs.eps(a) - errs.e(a));
  }
  return d;
}

/// Pairs with negative delta in ascending delta/cost order (index breaks ties).
inline std::vector<std::size_t> beneficial_pairs(const std::vector<double> &delta, const std::vector<double> &costs) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (delta[i] < 0.0) idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return delta[x] / costs[x] < delta[y] / costs[y]; });
  return idx;
}

constexpr double budget_slack = 1e-9;

}  // namespace detail

/**
 * Closed-form solution of the LP relaxation. Substituting q_i = 1 - q_{i+k}
 * leaves a fractional knapsack over the pair deltas; pairs are taken in
 * ascending delta/cost order while the budget lasts. The single boundary pair
 * the LP would take fractionally is rounded down, so the result is always an
 * integral, budget-feasible labeling (and the exact optimum under uniform cost).
 */
inline IndicatorVector solve_flip_lp(const ErrorVectors &errs, const std::vector<double> &costs, double budget) {
  detail::check_shapes(errs, costs);
  const std::size_t k = errs.k();
  IndicatorVector q = IndicatorVector::originals(k);
  const auto delta = detail::pair_deltas(errs);
  double remaining = budget;
  for (auto i : detail::beneficial_pairs(delta, costs)) {
    if (costs[i] > remaining + detail::budget_slack) break;
    q.q[i] = 0;
    q.q[i + k] = 1;
    remaining -= costs[i];
  }
  return q;
}

/// Optimal objective of the LP relaxation itself (boundary pair fractional).
inline double lp_relaxation_value(const ErrorVectors &errs, const std::vector<double> &costs, double budget) {
  detail::check_shapes(errs, costs);
  const std::size_t k = errs.k();
  double value = 0.0;
  for (std::size_t i = 0; i < k; ++i) value += errs.eps(static_cast<Eigen::Index>(i)) - errs.e(static_cast<Eigen::Index>(i));
  const auto delta = detail::pair_deltas(errs);
  double remaining = std::max(0.0, budget);
  for (auto i : detail::beneficial_pairs(delta, costs)) {
    const double take = std::min(1.0, remaining / costs[i]);
    value += take * delta[i];
    remaining -= take * costs[i];
    if (take < 1.0) break;
  }
  return value;
}

/// Exhaustive IP optimum over all 2^k pairings. Test oracle; k <= 20.
inline IndicatorVector ilp_bruteforce(const ErrorVectors &errs, const std::vector<double> &costs, double budget) {
  detail::check_shapes(errs, costs);
  const std::size_t k = errs.k();
  if (k > 20) throw attack_error("ilp_bruteforce supports k <= 20");
  const auto delta = detail::pair_deltas(errs);
  std::uint32_t best_mask = 0;
  double best = 0.0;  // mask 0 (all originals) is always feasible
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    double cost = 0.0;
    double obj = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (1u << i)) {
        cost += costs[i];
        obj += delta[i];
      }
    }
    if (cost <= budget + detail::budget_slack && obj < best) {
      best = obj;
      best_mask = mask;
    }
  }
  IndicatorVector q = IndicatorVector::originals(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (best_mask & (1u << i)) {
      q.q[i] = 0;
      q.q[i + k] = 1;
    }
  }
  return q;
}

/**
 * Sorted greedy over the pairs: visit pairs in ascending reduced coefficient
 * (eps_{i+k} - e_{i+k}) - (eps_i - e_i) and flip each negative one until
 * `max_flips` is reached. Under uniform cost this picks exactly the LP optimum.
 */
inline IndicatorVector sorted_select(const ErrorVectors &errs, std::size_t max_flips) {
  const std::size_t k = errs.k();
  const auto delta = detail::pair_deltas(errs);
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return delta[x] < delta[y]; });
  IndicatorVector q = IndicatorVector::originals(k);
  std::size_t flips = 0;
  for (auto i : order) {
    if (flips >= max_flips || !(delta[i] < 0.0)) break;
    q.q[i] = 0;
    q.q[i + k] = 1;
    ++flips;
  }
  return q;
}

/**
 * Slot-level sorted greedy. Slots are visited in ascending (eps - e); a
 * complement slot whose pair is still open flips that candidate, an original
 * slot whose pair is open pins the original label. Stops after `max_flips`
 * flips; pairs never visited keep their original label.
 */
inline IndicatorVector greedy_select(const ErrorVectors &errs, std::size_t max_flips) {
  const std::size_t k = errs.k();
  const Vector obj = errs.eps - errs.e;
  std::vector<std::size_t> order(2 * k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return obj(static_cast<Eigen::Index>(x)) < obj(static_cast<Eigen::Index>(y));
  });
  IndicatorVector q{std::vector<std::uint8_t>(2 * k, 0)};
  std::vector<std::uint8_t> chosen(k, 0);
  std::size_t flips = 0;
  for (auto s : order) {
    if (flips >= max_flips) break;
    if (s >= k) {
      if (!chosen[s - k]) {
        q.q[s] = 1;
        chosen[s - k] = 1;
        ++flips;
      }
    } else if (!chosen[s]) {
      q.q[s] = 1;
      chosen[s] = 1;
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!chosen[i]) q.q[i] = 1;
  }
  return q;
}

/**
 * Walk the candidates in stored order and flip wherever the indicator is 1,
 * stopping once `max_flips` labels have been flipped.
 */
inline Labels flip(const std::vector<std::uint8_t> &indicators, const Labels &labels, const CandidateSet &candidate,
                   std::size_t max_flips) {
  if (indicators.size() != candidate.k()) throw attack_error("indicator length must equal the candidate count");
  Labels out = labels;
  std::size_t flips = 0;
  for (std::size_t i = 0; i < candidate.k() && flips < max_flips; ++i) {
    if (!indicators[i]) continue;
    out[candidate.indices[i]] = -out[candidate.indices[i]];
    ++flips;
  }
  return out;
}

namespace detail {

inline Labels materialize(const IndicatorVector &q, const Labels &labels, const CandidateSet &c) {
  Labels out = labels;
  for (std::size_t i = 0; i < c.k(); ++i) {
    if (q.complement(i)) out[c.indices[i]] = -out[c.indices[i]];
  }
  return out;
}

/// e or eps: residuals of every candidate under both of its labels.
inline Vector slot_errors(const TrainedModel &model, const Dataset &train, const CandidateSet &c) {
  const std::size_t k = c.k();
  Vector out(static_cast<Eigen::Index>(2 * k));
  if (k == 0) return out;
  const Dataset cand = train.subset(c.indices);
  const Vector score = decision_function(model, cand.features());
  for (std::size_t i = 0; i < k; ++i) {
    const int y = cand.labels()[i];
    const double s = score(static_cast<Eigen::Index>(i));
    out(static_cast<Eigen::Index>(i)) = loss_from_score(model.kind(), y, s);
    out(static_cast<Eigen::Index>(i + k)) = loss_from_score(model.kind(), -y, s);
  }
  return out;
}

/// Validation error of the surrogate refit on `labels`.
inline double refit_error(const AttackConfig &cfg, const Dataset &train, const Labels &labels, std::size_t iteration,
                          std::optional<TrainedModel> *model_out = nullptr) {
  try {
    TrainedModel m = fit(cfg.surrogate, train.with_labels(labels), cfg.seed);
    const double err = error_rate(m, cfg.validation);
    if (model_out) model_out->emplace(std::move(m));
    return err;
  } catch (const model_error &ex) {
    throw attack_error("surrogate fit failed at iteration " + std::to_string(iteration) + ": " + ex.what());
  }
}

inline std::size_t argmax_first(const std::vector<double> &v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

inline void finalize(AttackResult &r, const Labels &original) {
  r.flipped_indices.clear();
  for (std::size_t i = 0; i < original.size(); ++i) {
    if (r.poisoned_labels[i] != original[i]) r.flipped_indices.push_back(i);
  }
  std::vector<std::uint8_t> is_small(original.size(), 0);
  std::vector<std::uint8_t> in_candidate(original.size(), 0);
  for (std::size_t s = 0; s < r.candidate.k(); ++s) {
    in_candidate[r.candidate.indices[s]] = 1;
    is_small[r.candidate.indices[s]] = r.candidate.is_small(s) ? 1 : 0;
  }
  r.count_large = r.count_small = 0;
  for (auto i : r.flipped_indices) {
    if (!in_candidate[i]) continue;
    (is_small[i] ? r.count_small : r.count_large) += 1;
  }
}

inline void check_common(const Dataset &train, const AttackConfig &cfg, const GradientProfile &gradients) {
  cfg.validate();
  if (gradients.size() != train.size()) throw attack_error("gradient profile length must equal the training size");
  if (cfg.validation.empty()) throw attack_error("validation set is empty");
  if (cfg.validation.dimension() != train.dimension()) throw attack_error("validation dimension differs from training");
}

using Selector = std::function<IndicatorVector(const ErrorVectors &)>;

/// Shared OGDS / sGDS loop; only the per-iteration selection differs.
inline AttackResult lp_attack_loop(Strategy strategy, const Dataset &train, const AttackConfig &cfg,
                                   CandidateSet candidate, const Selector &select) {
  AttackResult r;
  r.strategy = strategy;
  r.budget = cfg.budget;
  r.candidate = std::move(candidate);
  const Labels &y = train.labels();
  const std::size_t k = r.candidate.k();

  std::optional<TrainedModel> model;
  const double clean_error = refit_error(cfg, train, y, 0, &model);
  if (k == 0) {
    r.warnings.emplace_back("empty candidate set; returning the clean labeling");
    r.poisoned_labels = y;
    r.val_errors = {clean_error};
    r.selection = IndicatorVector::originals(0);
    finalize(r, y);
    return r;
  }

  ErrorVectors errs{slot_errors(*model, train, r.candidate), Vector::Zero(static_cast<Eigen::Index>(2 * k))};
  std::vector<IndicatorVector> history;
  std::vector<Labels> labelings;
  for (int t = 1; t <= cfg.t_max; ++t) {
    IndicatorVector q = select(errs);
    if (!history.empty() && q == history.back()) break;  // fixed point
    Labels poisoned = materialize(q, y, r.candidate);
    r.val_errors.push_back(refit_error(cfg, train, poisoned, static_cast<std::size_t>(t), &model));
    errs.eps = slot_errors(*model, train, r.candidate);
    history.push_back(std::move(q));
    labelings.push_back(std::move(poisoned));
  }
  r.t_f = argmax_first(r.val_errors);
  r.poisoned_labels = labelings[r.t_f];
  r.total_cost = selection_cost(history[r.t_f], cfg.costs.costs_for(r.candidate));
  r.selection = std::move(history[r.t_f]);
  finalize(r, y);
  return r;
}

}  // namespace detail

/**
 * Random search over the candidate set: each of `t_max` rounds draws a fair
 * Bernoulli indicator per candidate, flips (at most the budget), refits the
 * surrogate, and keeps the labeling with the highest validation error.
 */
inline AttackResult gds(const Dataset &train, const AttackConfig &cfg, const GradientProfile &gradients) {
  detail::check_common(train, cfg, gradients);
  if (!cfg.costs.uniform()) throw attack_error("gds supports uniform costs only");
  AttackResult r;
  r.strategy = Strategy::gds;
  r.budget = cfg.budget;
  r.candidate = build_candidate_set(gradients, cfg.a, cfg.b, cfg.seed);
  const std::size_t max_flips = cfg.flip_count();
  Rng rng(derive_seed(cfg.seed, "gds"));
  std::vector<Labels> labelings;
  for (int t = 1; t <= cfg.t_max; ++t) {
    std::vector<std::uint8_t> ind(r.candidate.k());
    for (auto &v : ind) v = rng.bernoulli(0.5) ? 1 : 0;
    Labels poisoned = flip(ind, train.labels(), r.candidate, max_flips);
    r.val_errors.push_back(detail::refit_error(cfg, train, poisoned, static_cast<std::size_t>(t)));
    labelings.push_back(std::move(poisoned));
  }
  r.t_f = detail::argmax_first(r.val_errors);
  r.poisoned_labels = std::move(labelings[r.t_f]);
  detail::finalize(r, train.labels());
  r.total_cost = static_cast<double>(r.flipped_indices.size()) * cfg.costs.large;
  return r;
}

/// Iterated LP attack: each round solves the relaxation against the clean
/// residuals e and the previous round's residuals eps, then refits.
inline AttackResult ogds(const Dataset &train, const AttackConfig &cfg, const GradientProfile &gradients) {
  detail::check_common(train, cfg, gradients);
  const CandidateSet c = build_candidate_set(gradients, cfg.a, cfg.b, cfg.seed);
  const std::vector<double> costs = cfg.costs.costs_for(c);
  return detail::lp_attack_loop(Strategy::ogds, train, cfg, c,
                                [&](const ErrorVectors &errs) { return solve_flip_lp(errs, costs, cfg.budget); });
}

/// OGDS with the LP replaced by a sort of the objective coefficients
/// (see SgdsOrder). Uniform cost only.
inline AttackResult sgds(const Dataset &train, const AttackConfig &cfg, const GradientProfile &gradients) {
  detail::check_common(train, cfg, gradients);
  if (!cfg.costs.uniform()) throw attack_error("sgds requires uniform costs");
  const std::size_t max_flips = cfg.flip_count();
  const bool by_slot = cfg.sgds_order == SgdsOrder::slots;
  return detail::lp_attack_loop(Strategy::sgds, train, cfg, build_candidate_set(gradients, cfg.a, cfg.b, cfg.seed),
                                [&](const ErrorVectors &errs) {
                                  return by_slot ? greedy_select(errs, max_flips) : sorted_select(errs, max_flips);
                                });
}

/// Baseline: flip the `max_flips` training points with the smallest |g|.
inline AttackResult linear_flip_baseline(const Dataset &train, const GradientProfile &gradients, std::size_t max_flips) {
  if (gradients.size() != train.size()) throw attack_error("gradient profile length must equal the training size");
  if (max_flips > train.size()) throw attack_error("budget exceeds the training size");
  AttackResult r;
  r.strategy = Strategy::linear_flip;
  r.budget = static_cast<double>(max_flips);
  const std::size_t n = train.size();
  for (std::size_t j = 0; j < max_flips; ++j) r.candidate.indices.push_back(gradients.order[n - 1 - j]);
  r.candidate.count_small = max_flips;
  r.poisoned_labels = train.labels();
  for (auto i : r.candidate.indices) r.poisoned_labels[i] = -r.poisoned_labels[i];
  detail::finalize(r, train.labels());
  r.total_cost = static_cast<double>(max_flips);
  return r;
}

/// Baseline: flip `max_flips` distinct indices chosen uniformly at random.
/// Every training index is a candidate (all counted as large-pool).
inline AttackResult random_flip_baseline(const Dataset &train, std::size_t max_flips, std::uint64_t seed) {
  if (max_flips > train.size()) throw attack_error("budget exceeds the training size");
  AttackResult r;
  r.strategy = Strategy::random_flip;
  r.budget = static_cast<double>(max_flips);
  const std::size_t n = train.size();
  r.candidate.indices.resize(n);
  std::iota(r.candidate.indices.begin(), r.candidate.indices.end(), std::size_t{0});
  r.candidate.count_large = n;
  Rng rng(derive_seed(seed, "random_flip"));
  r.poisoned_labels = train.labels();
  for (auto i : rng.sample(r.candidate.indices, max_flips)) r.poisoned_labels[i] = -r.poisoned_labels[i];
  detail::finalize(r, train.labels());
  r.total_cost = static_cast<double>(max_flips);
  return r;
}

/// Dispatch on strategy. Baselines read `cfg.flip_count()` as their budget.
inline AttackResult run_attack(Strategy s, const Dataset &train, const AttackConfig &cfg, const GradientProfile &gradients) {
  switch (s) {
    case Strategy::gds: return gds(train, cfg, gradients);
    case Strategy::ogds: return ogds(train, cfg, gradients);
    case Strategy::sgds: return sgds(train, cfg, gradients);
    case Strategy::linear_flip: return linear_flip_baseline(train, gradients, std::min(cfg.flip_count(), train.size()));
    case Strategy::random_flip: return random_flip_baseline(train, std::min(cfg.flip_count(), train.size()), cfg.seed);
  }
  throw attack_error("unknown strategy");
}

}  // namespace labelflip
