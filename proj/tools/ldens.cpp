// Command-line front end: `ldens <subcommand> [flags]`.

#include "ldens/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace ldens::cli;

  CLI::App app{"Delegative ensemble pruning toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opts;
  std::string config;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::string data_dir;
  auto* config_opt = app.add_option("--config", config, "Run configuration file (key=value)");
  auto* seed_opt = app.add_option("--seed", seed, "Master seed override");
  auto* trials_opt = app.add_option("--trials", trials, "Trial count override")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", opts.out_dir, "Output directory");
  app.add_option("--jobs", opts.jobs, "Worker threads (0 = one per core)");
  app.add_option("--data-dir", data_dir, "Dataset directory (default: $LDENS_DATA_DIR or the bundled data/)");

  auto* train = app.add_subcommand("train", "Single run: trace.csv, events.csv, summary.json");

  std::string grid_file, sweep_dataset;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep to sweep.csv (resumable)");
  sweep->add_option("--grid", grid_file, "Grid file")->required();
  sweep->add_option("--dataset", sweep_dataset, "Dataset name or CSV path");

  std::vector<std::string> compare_datasets, compare_methods;
  auto* compare = app.add_subcommand("compare", "Method comparison table to comparison.csv");
  compare->add_option("--datasets", compare_datasets, "Datasets")->delimiter(',');
  compare->add_option("--methods", compare_methods, "Methods")->delimiter(',');

  std::vector<std::string> trace_mechs;
  auto* trace = app.add_subcommand("trace", "Trial-averaged per-increment traces to trace.csv");
  trace->add_option("--mechanisms", trace_mechs, "Mechanisms")->delimiter(',');

  std::string cb_n = "350", cb_nf = "10,25,50", cb_r = "0.05:0.95:0.05";
  auto* cost = app.add_subcommand("cost-bound", "Analytic delegation-cost bound grid (CSV)");
  cost->add_option("--n", cb_n, "Ensemble sizes");
  cost->add_option("--n-final", cb_nf, "Final representative counts");
  cost->add_option("--r", cb_r, "Retention rates: list or start:stop:step");

  std::string pb_n = "11,21,31,41,51", pb_m = "11,21,31,41,51";
  auto* pivotal = app.add_subcommand("pivotal-bound", "Harmful-state upper bound grid (CSV)");
  pivotal->add_option("--n", pb_n, "Voter counts");
  pivotal->add_option("--m", pb_m, "Example counts");

  auto* datasets = app.add_subcommand("datasets", "Dataset registry");
  auto* datasets_list = datasets->add_subcommand("list", "List registered datasets");
  datasets->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*config_opt) opts.config = config;
  if (*seed_opt) opts.seed = seed;
  if (*trials_opt) opts.trials = trials;
  if (!data_dir.empty()) opts.data_dir = data_dir;

  if (*train) return cmd_train(opts, std::cerr);
  if (*sweep) return cmd_sweep(opts, grid_file, sweep_dataset, std::cerr);
  if (*compare) return cmd_compare(opts, compare_datasets, compare_methods, std::cerr);
  if (*trace) return cmd_trace(opts, trace_mechs, std::cerr);
  if (*cost) return cmd_cost_bound(opts, cb_n, cb_nf, cb_r, std::cout, std::cerr);
  if (*pivotal) return cmd_pivotal_bound(opts, pb_n, pb_m, std::cout, std::cerr);
  if (*datasets_list) return cmd_datasets_list(opts, std::cout, std::cerr);
  return 2;
}
