#pragma once

// JSON experiment configuration and the command runners behind the CLI.
// Every field has a default; parse_config rejects unknown keys and wrong
// types with a config_error naming the field. The fully resolved config is
// written next to the outputs as manifest.json and can be fed back in.

#include "labelflip/attacks.hpp"
#include "labelflip/classifiers.hpp"
#include "labelflip/dataset.hpp"
#include "labelflip/error.hpp"
#include "labelflip/evaluation.hpp"
#include "labelflip/gbdt.hpp"
#include "labelflip/report.hpp"
#include "labelflip/rng.hpp"
#include "labelflip/sampling.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace labelflip {

enum class Command { attack, sweep, transfer, cost, gradients };

inline std::string_view to_string(Command c) {
  switch (c) {
    case Command::attack: return "attack";
    case Command::sweep: return "sweep";
    case Command::transfer: return "transfer";
    case Command::cost: return "cost";
    case Command::gradients: return "gradients";
  }
  return "unknown";
}

struct DatasetSource {
  std::string csv;  // empty selects the synthetic generator
  std::string label_column = "class";
  std::string positive_value = "1";
  std::string synthetic = "linear";  // linear | circular
  std::size_t n = 1000;
  double noise = 1.0;
};

struct ExperimentConfig {
  DatasetSource dataset{};
  double train_fraction = 0.5;
  bool stratified = false;
  bool standardize = true;
  std::uint64_t seed = 0;

  ClassifierSpec surrogate{};                 // attack, sweep, cost
  ClassifierSpec victim{};                    // sweep
  std::vector<ClassifierSpec> surrogates{{}};  // transfer
  std::vector<ClassifierSpec> victims{{}};     // transfer

  Strategy strategy = Strategy::ogds;                  // attack
  std::vector<Strategy> strategies{Strategy::ogds};    // sweep
  double budget = 0.3;                                 // attack, transfer
  std::vector<double> budgets{0.0, 0.1, 0.2, 0.3};     // sweep
  std::vector<CostRow> cost_rows{{CostScheme{1, 1}, 0.3, 1.0}, {CostScheme{1, 2}, 0.3, 2.0}};  // cost

  double a = 0.01;
  double b = 0.49;
  int t_max = 10;
  CostScheme costs{};
  GbdtParams gbdt{};
  SgdsOrder sgds_order = SgdsOrder::reduced;
  bool dump_model = false;
  std::string out = "out";
  int jobs = 1;
};

namespace detail {

using in_json = nlohmann::json;

inline std::string join_field(const std::string &prefix, const std::string &key) {
  return prefix.empty() ? key : prefix + "." + key;
}

inline void reject_unknown(const in_json &j, const std::string &prefix, std::initializer_list<std::string_view> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (auto a : allowed) ok = ok || it.key() == a;
    if (!ok) throw config_error(join_field(prefix, it.key()), "unknown field");
  }
}

inline double as_number(const in_json &v, const std::string &field) {
  if (!v.is_number()) throw config_error(field, "expected a number");
  return v.get<double>();
}

inline std::int64_t as_integer(const in_json &v, const std::string &field) {
  if (!v.is_number_integer()) throw config_error(field, "expected an integer");
  return v.get<std::int64_t>();
}

inline bool as_bool(const in_json &v, const std::string &field) {
  if (!v.is_boolean()) throw config_error(field, "expected true or false");
  return v.get<bool>();
}

inline std::string as_string(const in_json &v, const std::string &field) {
  if (!v.is_string()) throw config_error(field, "expected a string");
  return v.get<std::string>();
}

inline const in_json &as_array(const in_json &v, const std::string &field) {
  if (!v.is_array()) throw config_error(field, "expected an array");
  return v;
}

inline int as_int_range(const in_json &v, const std::string &field, std::int64_t lo, std::int64_t hi) {
  const auto x = as_integer(v, field);
  if (x < lo || x > hi) throw config_error(field, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(x);
}

inline double as_fraction(const in_json &v, const std::string &field) {
  const double x = as_number(v, field);
  if (!(x >= 0.0 && x <= 1.0)) throw config_error(field, "must lie in [0, 1]");
  return x;
}

inline void parse_gbdt(const in_json &j, const std::string &field, GbdtParams &p) {
  if (!j.is_object()) throw config_error(field, "expected an object");
  reject_unknown(j, field, {"num_trees", "max_depth", "learning_rate", "lambda", "min_split_gain", "min_child_weight"});
  if (j.contains("num_trees")) p.num_trees = as_int_range(j["num_trees"], field + ".num_trees", 1, 100000);
  if (j.contains("max_depth")) p.max_depth = as_int_range(j["max_depth"], field + ".max_depth", 1, 64);
  if (j.contains("learning_rate")) p.learning_rate = as_number(j["learning_rate"], field + ".learning_rate");
  if (j.contains("lambda")) p.lambda = as_number(j["lambda"], field + ".lambda");
  if (j.contains("min_split_gain")) p.min_split_gain = as_number(j["min_split_gain"], field + ".min_split_gain");
  if (j.contains("min_child_weight")) p.min_child_weight = as_number(j["min_child_weight"], field + ".min_child_weight");
  try {
    p.validate();
  } catch (const model_error &e) {
    throw config_error(field, e.what());
  }
}

/// "lr" or {"kind": "lr", "gamma": 0.5, ...}.
inline ClassifierSpec parse_spec(const in_json &j, const std::string &field, const GbdtParams &gbdt) {
  ClassifierSpec s;
  s.gbdt = gbdt;
  const in_json *obj = nullptr;
  std::string kind;
  if (j.is_string()) {
    kind = j.get<std::string>();
  } else if (j.is_object()) {
    obj = &j;
    if (!j.contains("kind")) throw config_error(field + ".kind", "missing");
    kind = as_string(j["kind"], field + ".kind");
  } else {
    throw config_error(field, "expected a classifier name or object");
  }
  const auto parsed = parse_classifier_kind(kind);
  if (!parsed) throw config_error(field, "unknown classifier '" + kind + "' (expected LR, SVM, NB, KNN or GBDT)");
  s.kind = *parsed;
  if (obj) {
    reject_unknown(*obj, field,
                   {"kind", "gamma", "max_iterations", "tolerance", "k", "num_trees", "max_depth", "learning_rate", "lambda",
                    "min_split_gain", "min_child_weight"});
    if (obj->contains("gamma")) {
      s.gamma = as_number((*obj)["gamma"], field + ".gamma");
      if (!(s.gamma > 0.0)) throw config_error(field + ".gamma", "must be > 0");
    }
    if (obj->contains("max_iterations")) s.max_iterations = as_int_range((*obj)["max_iterations"], field + ".max_iterations", 1, 100000000);
    if (obj->contains("tolerance")) {
      s.tolerance = as_number((*obj)["tolerance"], field + ".tolerance");
      if (!(s.tolerance > 0.0)) throw config_error(field + ".tolerance", "must be > 0");
    }
    if (obj->contains("k")) s.k_neighbors = as_int_range((*obj)["k"], field + ".k", 1, 1000000);
    in_json tree = in_json::object();
    for (auto key : {"num_trees", "max_depth", "learning_rate", "lambda", "min_split_gain", "min_child_weight"}) {
      if (obj->contains(key)) tree[key] = (*obj)[key];
    }
    parse_gbdt(tree, field, s.gbdt);
  }
  return s;
}

inline std::vector<ClassifierSpec> parse_specs(const in_json &j, const std::string &field, const GbdtParams &gbdt) {
  std::vector<ClassifierSpec> out;
  for (std::size_t i = 0; i < as_array(j, field).size(); ++i) {
    out.push_back(parse_spec(j[i], field + "[" + std::to_string(i) + "]", gbdt));
  }
  if (out.empty()) throw config_error(field, "must not be empty");
  return out;
}

inline Strategy parse_strategy_field(const in_json &j, const std::string &field) {
  const auto name = as_string(j, field);
  const auto s = parse_strategy(name);
  if (!s) throw config_error(field, "unknown strategy '" + name + "' (expected gds, ogds, sgds, linear or random)");
  return *s;
}

inline CostScheme parse_costs(const in_json &j, const std::string &field) {
  if (!j.is_object()) throw config_error(field, "expected an object");
  reject_unknown(j, field, {"large", "small"});
  CostScheme c;
  if (j.contains("large")) c.large = as_number(j["large"], field + ".large");
  if (j.contains("small")) c.small = as_number(j["small"], field + ".small");
  if (!(c.large > 0.0)) throw config_error(field + ".large", "must be > 0");
  if (!(c.small > 0.0)) throw config_error(field + ".small", "must be > 0");
  return c;
}

inline void parse_dataset(const in_json &j, DatasetSource &d) {
  if (!j.is_object()) throw config_error("dataset", "expected an object");
  reject_unknown(j, "dataset", {"csv", "label_column", "positive_value", "synthetic", "n", "noise"});
  if (j.contains("csv")) d.csv = as_string(j["csv"], "dataset.csv");
  if (j.contains("label_column")) d.label_column = as_string(j["label_column"], "dataset.label_column");
  if (j.contains("positive_value")) {
    const auto &v = j["positive_value"];
    d.positive_value = v.is_number() ? v.dump() : as_string(v, "dataset.positive_value");
  }
  if (j.contains("synthetic")) d.synthetic = as_string(j["synthetic"], "dataset.synthetic");
  if (j.contains("n")) d.n = static_cast<std::size_t>(as_int_range(j["n"], "dataset.n", 4, 10000000));
  if (j.contains("noise")) d.noise = as_number(j["noise"], "dataset.noise");
  if (!d.csv.empty()) {
    if (!std::filesystem::exists(d.csv)) throw config_error("dataset.csv", "file not found: " + d.csv);
    if (d.label_column.empty()) throw config_error("dataset.label_column", "must not be empty");
  } else {
    if (d.synthetic != "linear" && d.synthetic != "circular") {
      throw config_error("dataset.synthetic", "expected 'linear' or 'circular', got '" + d.synthetic + "'");
    }
    if (!(d.noise >= 0.0)) throw config_error("dataset.noise", "must be >= 0");
  }
}

}  // namespace detail

/// Cross-field checks; also run after command-line overrides.
inline void validate(const ExperimentConfig &c) {
  if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) throw config_error("train_fraction", "must lie in (0, 1)");
  if (!(c.a >= 0.0 && c.a <= 1.0)) throw config_error("a", "must lie in [0, 1]");
  if (!(c.b >= 0.0 && c.b <= 1.0)) throw config_error("b", "must lie in [0, 1]");
  if (c.a + c.b > 1.0 + 1e-12) throw config_error("b", "a + b must not exceed 1");
  if (c.t_max < 1) throw config_error("t_max", "must be >= 1");
  if (c.jobs < 1) throw config_error("jobs", "must be >= 1");
  if (c.out.empty()) throw config_error("out", "must not be empty");
  if (c.budgets.empty()) throw config_error("budgets", "must not be empty");
  for (std::size_t i = 1; i < c.budgets.size(); ++i) {
    if (c.budgets[i] < c.budgets[i - 1]) throw config_error("budgets", "must be sorted ascending");
  }
  if (c.strategies.empty()) throw config_error("strategies", "must not be empty");
  const bool needs_uniform = c.strategy == Strategy::gds || c.strategy == Strategy::sgds;
  if (needs_uniform && !c.costs.uniform()) throw config_error("costs", "gds and sgds require uniform costs");
  for (auto s : c.strategies) {
    if ((s == Strategy::gds || s == Strategy::sgds) && !c.costs.uniform()) {
      throw config_error("costs", "gds and sgds require uniform costs");
    }
  }
}

/// Non-fatal issues worth reporting before a run.
inline std::vector<std::string> config_warnings(const ExperimentConfig &c) {
  std::vector<std::string> out;
  if (c.a + c.b > 0.7 + 1e-12) out.push_back("a + b exceeds 0.7; candidates cover most of the training set");
  return out;
}

inline ExperimentConfig parse_config(const nlohmann::json &j) {
  using namespace detail;
  if (!j.is_object()) throw config_error("config", "top level must be a JSON object");
  reject_unknown(j, "", {"command", "dataset", "train_fraction", "stratified", "standardize", "seed", "surrogate", "victim",
                         "surrogates", "victims", "strategy", "strategies", "budget", "budgets", "cost_rows", "a", "b",
                         "t_max", "costs", "gbdt", "sgds_order", "dump_model", "out", "jobs"});
  ExperimentConfig c;
  if (j.contains("gbdt")) parse_gbdt(j["gbdt"], "gbdt", c.gbdt);
  for (auto *s : {&c.surrogate, &c.victim}) s->gbdt = c.gbdt;
  for (auto &s : c.surrogates) s.gbdt = c.gbdt;
  for (auto &s : c.victims) s.gbdt = c.gbdt;

  if (j.contains("dataset")) parse_dataset(j["dataset"], c.dataset);
  else detail::parse_dataset(in_json::object(), c.dataset);
  if (j.contains("train_fraction")) c.train_fraction = as_number(j["train_fraction"], "train_fraction");
  if (j.contains("stratified")) c.stratified = as_bool(j["stratified"], "stratified");
  if (j.contains("standardize")) c.standardize = as_bool(j["standardize"], "standardize");
  if (j.contains("seed")) {
    const auto &v = j["seed"];
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw config_error("seed", "expected a non-negative integer");
    }
    c.seed = v.get<std::uint64_t>();
  }
  if (j.contains("surrogate")) c.surrogate = parse_spec(j["surrogate"], "surrogate", c.gbdt);
  if (j.contains("victim")) c.victim = parse_spec(j["victim"], "victim", c.gbdt);
  if (j.contains("surrogates")) c.surrogates = parse_specs(j["surrogates"], "surrogates", c.gbdt);
  if (j.contains("victims")) c.victims = parse_specs(j["victims"], "victims", c.gbdt);
  if (j.contains("strategy")) c.strategy = parse_strategy_field(j["strategy"], "strategy");
  if (j.contains("strategies")) {
    c.strategies.clear();
    const auto &arr = as_array(j["strategies"], "strategies");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      c.strategies.push_back(parse_strategy_field(arr[i], "strategies[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("budget")) c.budget = as_fraction(j["budget"], "budget");
  if (j.contains("budgets")) {
    c.budgets.clear();
    const auto &arr = as_array(j["budgets"], "budgets");
    for (std::size_t i = 0; i < arr.size(); ++i) c.budgets.push_back(as_fraction(arr[i], "budgets[" + std::to_string(i) + "]"));
  }
  if (j.contains("cost_rows")) {
    c.cost_rows.clear();
    const auto &arr = as_array(j["cost_rows"], "cost_rows");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string f = "cost_rows[" + std::to_string(i) + "]";
      const auto &row = arr[i];
      if (!row.is_object()) throw config_error(f, "expected an object");
      reject_unknown(row, f, {"large", "small", "budget", "scale"});
      CostRow r;
      in_json scheme = in_json::object();
      if (row.contains("large")) scheme["large"] = row["large"];
      if (row.contains("small")) scheme["small"] = row["small"];
      r.scheme = parse_costs(scheme, f);
      if (row.contains("budget")) r.budget_fraction = as_fraction(row["budget"], f + ".budget");
      if (row.contains("scale")) {
        r.scale = as_number(row["scale"], f + ".scale");
        if (!(r.scale >= 0.0)) throw config_error(f + ".scale", "must be >= 0");
      }
      c.cost_rows.push_back(r);
    }
    if (c.cost_rows.empty()) throw config_error("cost_rows", "must not be empty");
  }
  if (j.contains("a")) c.a = as_number(j["a"], "a");
  if (j.contains("b")) c.b = as_number(j["b"], "b");
  if (j.contains("t_max")) c.t_max = as_int_range(j["t_max"], "t_max", 1, 1000000);
  if (j.contains("costs")) c.costs = parse_costs(j["costs"], "costs");
  if (j.contains("sgds_order")) {
    const auto v = as_string(j["sgds_order"], "sgds_order");
    if (v == "reduced") c.sgds_order = SgdsOrder::reduced;
    else if (v == "slots") c.sgds_order = SgdsOrder::slots;
    else throw config_error("sgds_order", "expected 'reduced' or 'slots'");
  }
  if (j.contains("dump_model")) c.dump_model = as_bool(j["dump_model"], "dump_model");
  if (j.contains("out")) c.out = as_string(j["out"], "out");
  if (j.contains("jobs")) c.jobs = as_int_range(j["jobs"], "jobs", 1, 4096);
  validate(c);
  return c;
}

inline ExperimentConfig parse_config_text(const std::string &text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw config_error("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

inline ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("config", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Fully resolved config, defaults included.
inline json config_to_json(const ExperimentConfig &c) {
  json j;
  json d;
  if (!c.dataset.csv.empty()) {
    d["csv"] = c.dataset.csv;
    d["label_column"] = c.dataset.label_column;
    d["positive_value"] = c.dataset.positive_value;
  } else {
    d["synthetic"] = c.dataset.synthetic;
    d["n"] = c.dataset.n;
    d["noise"] = c.dataset.noise;
  }
  j["dataset"] = std::move(d);
  j["train_fraction"] = c.train_fraction;
  j["stratified"] = c.stratified;
  j["standardize"] = c.standardize;
  j["seed"] = c.seed;
  j["surrogate"] = spec_to_json(c.surrogate);
  j["victim"] = spec_to_json(c.victim);
  json ss = json::array();
  for (const auto &s : c.surrogates) ss.push_back(spec_to_json(s));
  j["surrogates"] = std::move(ss);
  json vs = json::array();
  for (const auto &v : c.victims) vs.push_back(spec_to_json(v));
  j["victims"] = std::move(vs);
  j["strategy"] = std::string(to_string(c.strategy));
  json st = json::array();
  for (auto s : c.strategies) st.push_back(std::string(to_string(s)));
  j["strategies"] = std::move(st);
  j["budget"] = c.budget;
  j["budgets"] = c.budgets;
  json rows = json::array();
  for (const auto &r : c.cost_rows) {
    rows.push_back({{"large", r.scheme.large}, {"small", r.scheme.small}, {"budget", r.budget_fraction}, {"scale", r.scale}});
  }
  j["cost_rows"] = std::move(rows);
  j["a"] = c.a;
  j["b"] = c.b;
  j["t_max"] = c.t_max;
  j["costs"] = {{"large", c.costs.large}, {"small", c.costs.small}};
  j["gbdt"] = {{"num_trees", c.gbdt.num_trees},         {"max_depth", c.gbdt.max_depth},
               {"learning_rate", c.gbdt.learning_rate}, {"lambda", c.gbdt.lambda},
               {"min_split_gain", c.gbdt.min_split_gain}, {"min_child_weight", c.gbdt.min_child_weight}};
  j["sgds_order"] = c.sgds_order == SgdsOrder::slots ? "slots" : "reduced";
  j["dump_model"] = c.dump_model;
  j["out"] = c.out;
  j["jobs"] = c.jobs;
  return j;
}

// ---------------------------------------------------------------------------

struct PreparedData {
  std::string name;
  TrainTestSplit split;
};

/// Load or generate the dataset, split it and (optionally) standardize with
/// train-side statistics. Seeds derive from the master seed.
inline PreparedData prepare_data(const ExperimentConfig &c) {
  PreparedData p;
  Dataset full;
  if (!c.dataset.csv.empty()) {
    full = load_csv(c.dataset.csv, c.dataset.label_column, c.dataset.positive_value);
    p.name = std::filesystem::path(c.dataset.csv).stem().string();
  } else {
    const std::uint64_t data_seed = derive_seed(c.seed, "data");
    full = c.dataset.synthetic == "circular" ? generate_circular(c.dataset.n, c.dataset.noise, data_seed)
                                             : generate_linear(c.dataset.n, c.dataset.noise, data_seed);
    p.name = "synthetic-" + c.dataset.synthetic;
  }
  p.split = split(full, c.train_fraction, derive_seed(c.seed, "split"), c.stratified);
  if (c.standardize) p.split = standardize(p.split);
  return p;
}

inline AttackConfig base_attack_config(const ExperimentConfig &c, const ClassifierSpec &surrogate) {
  AttackConfig a;
  a.costs = c.costs;
  a.a = c.a;
  a.b = c.b;
  a.t_max = c.t_max;
  a.seed = c.seed;
  a.surrogate = surrogate;
  a.sgds_order = c.sgds_order;
  return a;
}

inline EvaluationOptions evaluation_options(const ExperimentConfig &c, const std::string &name) {
  return EvaluationOptions{c.gbdt, c.seed, c.jobs, name};
}

/// Run `cmd` and write its outputs plus manifest.json into c.out. Returns
/// the written paths, manifest last.
inline std::vector<std::filesystem::path> run_command(Command cmd, const ExperimentConfig &c) {
  validate(c);
  const std::filesystem::path out(c.out);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string &file, const std::string &content) {
    write_file(out / file, content);
    written.push_back(out / file);
  };
  const PreparedData data = prepare_data(c);
  const Dataset &train = data.split.train;
  const EvaluationOptions opts = evaluation_options(c, data.name);

  switch (cmd) {
    case Command::attack: {
      AttackConfig cfg = base_attack_config(c, c.surrogate);
      cfg.validation = data.split.test;
      cfg.budget = static_cast<double>(budget_count(c.budget, train.size())) * c.costs.large;
      cfg.seed = derive_seed(c.seed, std::string(to_string(c.strategy)) + "|" + std::string(to_string(c.surrogate.kind)) +
                                      "|" + budget_tag(c.budget));
      const GradientProfile profile = clean_gradients(train, c.gbdt, derive_seed(c.seed, "gbdt"));
      const AttackResult r = run_attack(c.strategy, train, cfg, profile);
      emit("poisoned_labels.csv", poisoned_labels_csv(train.labels(), r.poisoned_labels));
      emit("attack_result.json", to_json(r).dump(2) + "\n");
      const bool linear = c.surrogate.kind == ClassifierKind::logistic_regression || c.surrogate.kind == ClassifierKind::linear_svm;
      if (c.dump_model && linear) {
        const TrainedModel m = fit(c.surrogate, train.with_labels(r.poisoned_labels), cfg.seed);
        emit("model.json", linear_model_json(*m.linear(), c.surrogate).dump(2) + "\n");
      }
      break;
    }
    case Command::sweep: {
      AttackConfig cfg = base_attack_config(c, c.surrogate);
      const SweepResult s = budget_sweep(data.split, c.strategies, c.victim, c.budgets, cfg, opts);
      emit("sweep.csv", sweep_csv(s));
      emit("sweep.json", to_json(s).dump(2) + "\n");
      for (const auto &curve : s.curves) emit("sweep_" + std::string(to_string(curve.strategy)) + ".dat", plot_data(curve));
      break;
    }
    case Command::transfer: {
      AttackConfig cfg = base_attack_config(c, c.surrogate);
      const SusceptibilityReport r = susceptibility_report(data.split, c.surrogates, c.victims, c.budget, cfg, opts);
      emit("transfer.csv", transfer_csv(r));
      emit("transfer.json", to_json(r).dump(2) + "\n");
      break;
    }
    case Command::cost: {
      AttackConfig cfg = base_attack_config(c, c.surrogate);
      const auto rows = cost_analysis(data.split, c.cost_rows, cfg, opts);
      emit("cost.csv", cost_csv(rows));
      emit("cost.json", to_json(rows).dump(2) + "\n");
      break;
    }
    case Command::gradients: {
      const GbdtFit f = train_gbdt(train, c.gbdt, derive_seed(c.seed, "gbdt"));
      emit("gradients.csv", gradients_csv(f.gradients, rank_by_gradient(f.gradients.g)));
      break;
    }
  }
  json manifest = config_to_json(c);
  manifest["command"] = std::string(to_string(cmd));
  emit("manifest.json", manifest.dump(2) + "\n");
  return written;
}

}  // namespace labelflip
