#pragma once

// CSV / JSON / plot-data serialization of attack and evaluation results.
// Numbers are printed with a fixed format so that identical runs produce
// identical bytes.

#include "labelflip/attacks.hpp"
#include "labelflip/classifiers.hpp"
#include "labelflip/evaluation.hpp"
#include "labelflip/gbdt.hpp"
#include "labelflip/sampling.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace labelflip {

using json = nlohmann::ordered_json;

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline void write_file(const std::filesystem::path &path, const std::string &content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw error("cannot write " + path.string());
  out << content;
  if (!out) throw error("failed writing " + path.string());
}

inline json spec_to_json(const ClassifierSpec &s) {
  json j;
  j["kind"] = std::string(short_name(s.kind));
  switch (s.kind) {
    case ClassifierKind::logistic_regression:
    case ClassifierKind::linear_svm:
      j["gamma"] = s.gamma;
      j["max_iterations"] = s.max_iterations;
      j["tolerance"] = s.tolerance;
      break;
    case ClassifierKind::knn: j["k"] = s.k_neighbors; break;
    case ClassifierKind::gbdt:
      j["num_trees"] = s.gbdt.num_trees;
      j["max_depth"] = s.gbdt.max_depth;
      j["learning_rate"] = s.gbdt.learning_rate;
      j["lambda"] = s.gbdt.lambda;
      j["min_split_gain"] = s.gbdt.min_split_gain;
      j["min_child_weight"] = s.gbdt.min_child_weight;
      break;
    case ClassifierKind::gaussian_nb: break;
  }
  return j;
}

// --- attacks -----------------------------------------------------------------

inline json to_json(const AttackResult &r) {
  json j;
  j["strategy"] = std::string(to_string(r.strategy));
  j["budget"] = r.budget;
  j["flipped_indices"] = r.flipped_indices;
  j["t_f"] = r.t_f;
  j["val_errors"] = r.val_errors;
  j["count_large"] = r.count_large;
  j["count_small"] = r.count_small;
  j["total_cost"] = r.total_cost;
  j["candidates"] = r.candidate.k();
  j["warnings"] = r.warnings;
  return j;
}

inline std::string poisoned_labels_csv(const Labels &original, const Labels &poisoned) {
  std::string out = "index,original,poisoned\n";
  for (std::size_t i = 0; i < original.size(); ++i) {
    out += std::to_string(i) + "," + std::to_string(original[i]) + "," + std::to_string(poisoned[i]) + "\n";
  }
  return out;
}

/// index, g, h, rank; rank 1 is the largest |g|.
inline std::string gradients_csv(const GradientPair &gp, const GradientProfile &profile) {
  std::vector<std::size_t> rank(profile.size());
  for (std::size_t pos = 0; pos < profile.order.size(); ++pos) rank[profile.order[pos]] = pos + 1;
  std::string out = "index,g,h,rank\n";
  for (std::size_t i = 0; i < rank.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out += std::to_string(i) + "," + format_number(gp.g(r)) + "," + format_number(gp.h(r)) + "," + std::to_string(rank[i]) + "\n";
  }
  return out;
}

inline json linear_model_json(const LinearModel &m, const ClassifierSpec &spec) {
  json j;
  j["kind"] = std::string(short_name(spec.kind));
  j["weights"] = std::vector<double>(m.weights.data(), m.weights.data() + m.weights.size());
  j["intercept"] = m.intercept;
  j["hyperparameters"] = spec_to_json(spec);
  j["converged"] = m.converged;
  j["iterations"] = m.iterations;
  return j;
}

// --- sweeps ------------------------------------------------------------------

inline std::string sweep_csv(const SweepResult &s) {
  std::string out = "strategy,budget_fraction,budget,error,flips,count_large,count_small\n";
  for (const auto &curve : s.curves) {
    for (const auto &p : curve.points) {
      out += std::string(to_string(curve.strategy)) + "," + format_number(p.budget_fraction) + "," + std::to_string(p.budget) +
             "," + format_number(p.error) + "," + std::to_string(p.flips) + "," + std::to_string(p.count_large) + "," +
             std::to_string(p.count_small) + "\n";
    }
  }
  return out;
}

inline json to_json(const SweepResult &s) {
  json j;
  j["victim"] = spec_to_json(s.victim);
  j["budgets"] = s.budgets;
  j["clean_error"] = s.clean_error;
  json curves = json::object();
  for (const auto &curve : s.curves) {
    json pts = json::array();
    for (const auto &p : curve.points) {
      pts.push_back({{"budget_fraction", p.budget_fraction},
                     {"budget", p.budget},
                     {"error", p.error},
                     {"flips", p.flips},
                     {"count_large", p.count_large},
                     {"count_small", p.count_small}});
    }
    curves[std::string(to_string(curve.strategy))] = std::move(pts);
  }
  j["curves"] = std::move(curves);
  return j;
}

/// Two columns: budget fraction, error.
inline std::string plot_data(const SweepCurve &curve) {
  std::string out = "# budget error (" + std::string(to_string(curve.strategy)) + ")\n";
  for (const auto &p : curve.points) out += format_number(p.budget_fraction) + " " + format_number(p.error) + "\n";
  return out;
}

// --- transfer ----------------------------------------------------------------

/// One row per cell plus a "clean" row per victim.
inline std::string transfer_csv(const SusceptibilityReport &r) {
  const TransferMatrix &m = r.matrix;
  std::string out = "surrogate,victim,budget_fraction,budget,error,increase,highlight\n";
  for (std::size_t v = 0; v < m.victims.size(); ++v) {
    out += "clean," + std::string(short_name(m.victims[v].kind)) + ",0,0," + format_number(m.clean_errors[v]) + ",0,0\n";
  }
  for (std::size_t s = 0; s < m.surrogates.size(); ++s) {
    for (std::size_t v = 0; v < m.victims.size(); ++v) {
      out += std::string(short_name(m.surrogates[s].kind)) + "," + std::string(short_name(m.victims[v].kind)) + "," +
             format_number(m.budget_fraction) + "," + std::to_string(m.budget) + "," + format_number(m.cells[s][v]) + "," +
             format_number(r.increase[s][v]) + "," + (m.highlighted[s][v] ? "1" : "0") + "\n";
    }
  }
  return out;
}

inline json to_json(const SusceptibilityReport &r) {
  const TransferMatrix &m = r.matrix;
  json j;
  j["dataset"] = m.dataset;
  j["budget_fraction"] = m.budget_fraction;
  j["budget"] = m.budget;
  json surrogates = json::array();
  for (const auto &s : m.surrogates) surrogates.push_back(spec_to_json(s));
  json victims = json::array();
  for (const auto &v : m.victims) victims.push_back(spec_to_json(v));
  j["surrogates"] = std::move(surrogates);
  j["victims"] = std::move(victims);
  j["clean_errors"] = m.clean_errors;
  j["cells"] = m.cells;
  j["increase"] = r.increase;
  j["highlighted"] = m.highlighted;
  j["max_increase"] = r.max_increase;
  json ranking = json::array();
  for (auto v : r.ranking) ranking.push_back(std::string(short_name(m.victims[v].kind)));
  j["ranking"] = std::move(ranking);
  return j;
}

// --- cost analysis -----------------------------------------------------------

inline std::string cost_csv(const std::vector<CostAnalysisRow> &rows) {
  std::string out = "scheme,cost_large,cost_small,budget,error,flips,count_a,count_b\n";
  for (const auto &r : rows) {
    out += "\"" + r.label + "\"," + format_number(r.scheme.large) + "," + format_number(r.scheme.small) + "," +
           format_number(r.budget) + "," + format_number(r.error) + "," + std::to_string(r.flips) + "," +
           std::to_string(r.count_a) + "," + std::to_string(r.count_b) + "\n";
  }
  return out;
}

inline json to_json(const std::vector<CostAnalysisRow> &rows) {
  json j = json::array();
  for (const auto &r : rows) {
    j.push_back({{"scheme", r.label},
                 {"cost_large", r.scheme.large},
                 {"cost_small", r.scheme.small},
                 {"budget", r.budget},
                 {"error", r.error},
                 {"flips", r.flips},
                 {"count_a", r.count_a},
                 {"count_b", r.count_b}});
  }
  return j;
}

}  // namespace labelflip
