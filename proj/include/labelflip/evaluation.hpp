#pragma once

// Experiment protocols: budget sweeps, surrogate -> victim transfer grids,
// cost-scheme comparisons and susceptibility summaries. Every grid cell gets
// its own derived seed and writes into a slot fixed by its coordinates, so
// results do not depend on the number of worker threads.

#include "labelflip/attacks.hpp"
#include "labelflip/classifiers.hpp"
#include "labelflip/dataset.hpp"
#include "labelflip/gbdt.hpp"
#include "labelflip/rng.hpp"
#include "labelflip/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace labelflip {

struct EvaluationOptions {
  GbdtParams gbdt{};
  std::uint64_t master_seed = 0;
  int jobs = 1;
  std::string dataset_name;
};

/// Run fn(0..count-1) on up to `jobs` threads. The first exception (by
/// index) is rethrown after all workers finish.
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)> &fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto &t : pool) t.join();
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Budget fraction -> whole flips, by floor.
inline std::size_t budget_count(double fraction, std::size_t n) { return detail::fraction_count(fraction, n); }

inline std::string budget_tag(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", fraction);
  return buf;
}

/// Decision scores of the clean GBDT fit, ranked by |g|.
inline GradientProfile clean_gradients(const Dataset &train, const GbdtParams &params, std::uint64_t seed) {
  return rank_by_gradient(train_gbdt(train, params, seed).gradients.g);
}

namespace detail {

inline double victim_error(const ClassifierSpec &victim, const Dataset &train, const Labels &labels, const Dataset &test,
                           std::uint64_t seed) {
  return error_rate(fit(victim, train.with_labels(labels), seed), test);
}

inline std::string spec_tag(const ClassifierSpec &s) { return std::string(to_string(s.kind)); }

}  // namespace detail

// ---------------------------------------------------------------------------

struct SweepPoint {
  double budget_fraction = 0.0;
  std::size_t budget = 0;  // flips
  double error = 0.0;      // victim test error
  std::size_t flips = 0;
  std::size_t count_large = 0;
  std::size_t count_small = 0;
};

struct SweepCurve {
  Strategy strategy{};
  std::vector<SweepPoint> points;
};

struct SweepResult {
  ClassifierSpec victim;
  std::vector<double> budgets;
  std::vector<SweepCurve> curves;
  double clean_error = 0.0;
};

/**
 * Error of `victim` (refit on the poisoned training labels, scored on
 * split.test) for every (strategy, budget). A zero budget is the clean fit.
 */
inline SweepResult budget_sweep(const TrainTestSplit &split, const std::vector<Strategy> &strategies,
                                const ClassifierSpec &victim, const std::vector<double> &budgets,
                                const AttackConfig &base, const EvaluationOptions &opts = {}) {
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (!(budgets[i] >= 0.0 && budgets[i] <= 1.0)) throw attack_error("sweep budgets must lie in [0, 1]");
    if (i > 0 && budgets[i] < budgets[i - 1]) throw attack_error("sweep budgets must be sorted ascending");
  }
  const Dataset &train = split.train;
  const std::uint64_t victim_seed = derive_seed(opts.master_seed, "victim|" + detail::spec_tag(victim));
  SweepResult out;
  out.victim = victim;
  out.budgets = budgets;
  out.clean_error = detail::victim_error(victim, train, train.labels(), split.test, victim_seed);
  const GradientProfile profile = clean_gradients(train, opts.gbdt, derive_seed(opts.master_seed, "gbdt"));

  out.curves.resize(strategies.size());
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    out.curves[s].strategy = strategies[s];
    out.curves[s].points.resize(budgets.size());
  }
  parallel_for(strategies.size() * budgets.size(), opts.jobs, [&](std::size_t cell) {
    const std::size_t s = cell / budgets.size();
    const std::size_t j = cell % budgets.size();
    SweepPoint &p = out.curves[s].points[j];
    p.budget_fraction = budgets[j];
    p.budget = budget_count(budgets[j], train.size());
    if (p.budget == 0) {
      p.error = out.clean_error;
      return;
    }
    AttackConfig cfg = base;
    cfg.validation = split.test;
    cfg.budget = static_cast<double>(p.budget) * cfg.costs.large;
    cfg.seed = derive_seed(opts.master_seed, std::string(to_string(strategies[s])) + "|" +
                                                 detail::spec_tag(base.surrogate) + "|" + budget_tag(budgets[j]));
    const AttackResult r = run_attack(strategies[s], train, cfg, profile);
    p.error = detail::victim_error(victim, train, r.poisoned_labels, split.test, victim_seed);
    p.flips = r.flipped_indices.size();
    p.count_large = r.count_large;
    p.count_small = r.count_small;
  });
  return out;
}

// ---------------------------------------------------------------------------

struct TransferMatrix {
  std::string dataset;
  std::vector<ClassifierSpec> surrogates;
  std::vector<ClassifierSpec> victims;
  double budget_fraction = 0.0;
  std::size_t budget = 0;
  std::vector<std::vector<double>> cells;  // [surrogate][victim]
  std::vector<double> clean_errors;        // per victim
  /// Per victim column, the largest off-diagonal cells (all tied maxima).
  std::vector<std::vector<bool>> highlighted;
};

inline void mark_column_maxima(TransferMatrix &m) {
  m.highlighted.assign(m.surrogates.size(), std::vector<bool>(m.victims.size(), false));
  for (std::size_t v = 0; v < m.victims.size(); ++v) {
    double best = -1.0;
    for (std::size_t s = 0; s < m.surrogates.size(); ++s) {
      if (m.surrogates[s].kind != m.victims[v].kind) best = std::max(best, m.cells[s][v]);
    }
    if (best < 0.0) continue;
    for (std::size_t s = 0; s < m.surrogates.size(); ++s) {
      if (m.surrogates[s].kind != m.victims[v].kind && m.cells[s][v] == best) m.highlighted[s][v] = true;
    }
  }
}

/// One OGDS run per surrogate; each victim is refit on that surrogate's
/// poisoned labels and scored on split.test.
inline TransferMatrix transferability_matrix(const TrainTestSplit &split, const std::vector<ClassifierSpec> &surrogates,
                                             const std::vector<ClassifierSpec> &victims, double budget_fraction,
                                             const AttackConfig &base, const EvaluationOptions &opts = {}) {
  if (!(budget_fraction >= 0.0 && budget_fraction <= 1.0)) throw attack_error("transfer budget must lie in [0, 1]");
  const Dataset &train = split.train;
  TransferMatrix m;
  m.dataset = opts.dataset_name;
  m.surrogates = surrogates;
  m.victims = victims;
  m.budget_fraction = budget_fraction;
  m.budget = budget_count(budget_fraction, train.size());
  m.cells.assign(surrogates.size(), std::vector<double>(victims.size(), 0.0));
  m.clean_errors.assign(victims.size(), 0.0);

  auto victim_seed = [&](std::size_t v) { return derive_seed(opts.master_seed, "victim|" + detail::spec_tag(victims[v])); };
  parallel_for(victims.size(), opts.jobs, [&](std::size_t v) {
    m.clean_errors[v] = detail::victim_error(victims[v], train, train.labels(), split.test, victim_seed(v));
  });

  const GradientProfile profile = clean_gradients(train, opts.gbdt, derive_seed(opts.master_seed, "gbdt"));
  std::vector<Labels> poisoned(surrogates.size(), train.labels());
  if (m.budget > 0) {
    parallel_for(surrogates.size(), opts.jobs, [&](std::size_t s) {
      AttackConfig cfg = base;
      cfg.surrogate = surrogates[s];
      cfg.validation = split.test;
      cfg.budget = static_cast<double>(m.budget) * cfg.costs.large;
      cfg.seed = derive_seed(opts.master_seed, "ogds|" + detail::spec_tag(surrogates[s]) + "|" + budget_tag(budget_fraction));
      poisoned[s] = ogds(train, cfg, profile).poisoned_labels;
    });
  }
  parallel_for(surrogates.size() * victims.size(), opts.jobs, [&](std::size_t cell) {
    const std::size_t s = cell / victims.size();
    const std::size_t v = cell % victims.size();
    m.cells[s][v] = m.budget == 0 ? m.clean_errors[v] : detail::victim_error(victims[v], train, poisoned[s], split.test, victim_seed(v));
  });
  mark_column_maxima(m);
  return m;
}

// ---------------------------------------------------------------------------

struct SusceptibilityReport {
  TransferMatrix matrix;
  std::vector<std::vector<double>> increase;  // cell - clean error
  std::vector<double> max_increase;           // per victim
  std::vector<std::size_t> ranking;           // victims, most susceptible first
};

inline SusceptibilityReport susceptibility_from(TransferMatrix m) {
  SusceptibilityReport r;
  r.increase.assign(m.surrogates.size(), std::vector<double>(m.victims.size(), 0.0));
  r.max_increase.assign(m.victims.size(), -1.0);
  for (std::size_t s = 0; s < m.surrogates.size(); ++s) {
    for (std::size_t v = 0; v < m.victims.size(); ++v) {
      r.increase[s][v] = m.cells[s][v] - m.clean_errors[v];
      r.max_increase[v] = std::max(r.max_increase[v], r.increase[s][v]);
    }
  }
  if (m.surrogates.empty()) std::fill(r.max_increase.begin(), r.max_increase.end(), 0.0);
  r.ranking.resize(m.victims.size());
  for (std::size_t v = 0; v < r.ranking.size(); ++v) r.ranking[v] = v;
  std::stable_sort(r.ranking.begin(), r.ranking.end(),
                   [&](std::size_t a, std::size_t b) { return r.max_increase[a] > r.max_increase[b]; });
  r.matrix = std::move(m);
  return r;
}

inline SusceptibilityReport susceptibility_report(const TrainTestSplit &split, const std::vector<ClassifierSpec> &surrogates,
                                                  const std::vector<ClassifierSpec> &victims, double budget_fraction,
                                                  const AttackConfig &base, const EvaluationOptions &opts = {}) {
  return susceptibility_from(transferability_matrix(split, surrogates, victims, budget_fraction, base, opts));
}

// ---------------------------------------------------------------------------

/// One cost-analysis run: OGDS under `scheme` with budget
/// floor(budget_fraction * n_train) * scale cost units.
struct CostRow {
  CostScheme scheme{};
  double budget_fraction = 0.3;
  double scale = 1.0;
};

struct CostAnalysisRow {
  std::string label;
  CostScheme scheme{};
  double budget = 0.0;
  double error = 0.0;
  std::size_t flips = 0;
  std::size_t count_a = 0;  // large-gradient flips
  std::size_t count_b = 0;  // small-gradient flips
};

inline std::string cost_label(const CostScheme &c) {
  if (c.uniform()) return "uniform";
  char buf[64];
  std::snprintf(buf, sizeof buf, "varied [%g, %g]", c.large, c.small);
  return buf;
}

/// OGDS with the surrogate itself as victim, one row per (scheme, budget).
inline std::vector<CostAnalysisRow> cost_analysis(const TrainTestSplit &split, const std::vector<CostRow> &rows,
                                                  const AttackConfig &base, const EvaluationOptions &opts = {}) {
  const Dataset &train = split.train;
  const GradientProfile profile = clean_gradients(train, opts.gbdt, derive_seed(opts.master_seed, "gbdt"));
  const std::uint64_t victim_seed = derive_seed(opts.master_seed, "victim|" + detail::spec_tag(base.surrogate));
  std::vector<CostAnalysisRow> out(rows.size());
  parallel_for(rows.size(), opts.jobs, [&](std::size_t i) {
    const CostRow &row = rows[i];
    CostAnalysisRow &o = out[i];
    o.label = cost_label(row.scheme);
    o.scheme = row.scheme;
    o.budget = static_cast<double>(budget_count(row.budget_fraction, train.size())) * row.scale;
    AttackConfig cfg = base;
    cfg.costs = row.scheme;
    cfg.budget = o.budget;
    cfg.validation = split.test;
    // Same attack seed for every row so schemes share one candidate set.
    cfg.seed = derive_seed(opts.master_seed, "ogds|" + detail::spec_tag(base.surrogate) + "|cost");
    if (o.budget <= 0.0) {
      o.error = detail::victim_error(base.surrogate, train, train.labels(), split.test, victim_seed);
      return;
    }
    const AttackResult r = ogds(train, cfg, profile);
    o.error = detail::victim_error(base.surrogate, train, r.poisoned_labels, split.test, victim_seed);
    o.flips = r.flipped_indices.size();
    o.count_a = r.count_large;
    o.count_b = r.count_small;
  });
  return out;
}

}  // namespace labelflip
