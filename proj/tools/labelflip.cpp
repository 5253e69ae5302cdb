// labelflip: run label-flipping attacks and evaluation protocols from a JSON
// config. Exit status: 0 success, 1 config error, 2 runtime error.

#include "labelflip/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out;
  bool no_standardize = false;
};

void add_common(CLI::App *sub, Overrides &o) {
  sub->add_option("--config", o.config, "JSON experiment config (defaults apply when omitted)");
  sub->add_option("--seed", o.seed, "Master seed");
  sub->add_option("--jobs", o.jobs, "Maximum concurrent evaluation cells")->check(CLI::PositiveNumber);
  sub->add_option("--out", o.out, "Output directory");
  sub->add_flag("--no-standardize", o.no_standardize, "Skip feature standardization");
}

int run(labelflip::Command cmd, const Overrides &o) {
  using namespace labelflip;
  ExperimentConfig cfg = o.config.empty() ? parse_config_text("{}") : load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (o.out) cfg.out = *o.out;
  if (o.no_standardize) cfg.standardize = false;
  validate(cfg);
  for (const auto &w : config_warnings(cfg)) std::cerr << "warning: " << w << "\n";
  for (const auto &path : run_command(cmd, cfg)) std::cout << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Label-flipping attacks and transferability experiments"};
  app.require_subcommand(1);
  Overrides o;
  const std::pair<const char *, labelflip::Command> commands[] = {
      {"attack", labelflip::Command::attack},
      {"sweep", labelflip::Command::sweep},
      {"transfer", labelflip::Command::transfer},
      {"cost", labelflip::Command::cost},
      {"gradients", labelflip::Command::gradients},
  };
  const char *help[] = {
      "Poison the training labels once; writes poisoned_labels.csv and attack_result.json",
      "Victim error over a list of budgets per strategy; writes sweep.csv/.json and plot data",
      "Surrogate x victim error matrix with clean row and increases; writes transfer.csv/.json",
      "OGDS under uniform and varied flip costs; writes cost.csv/.json",
      "Clean GBDT gradients; writes gradients.csv (index, g, h, rank)",
  };
  std::vector<CLI::App *> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    subs.push_back(app.add_subcommand(commands[i].first, help[i]));
    add_common(subs.back(), o);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) return run(commands[i].second, o);
    }
  } catch (const labelflip::config_error &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
