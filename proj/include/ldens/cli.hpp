#pragma once

#include "ldens/baselines.hpp"
#include "ldens/trainer.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ldens::cli {

/// Parsed `key=value` run configuration.
struct RunConfig {
  TrainConfig train;
  std::size_t trials = 1;
  std::string dataset;
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

struct SweepGrid {
  std::vector<std::size_t> increment_sizes{25, 45, 65, 85};
  std::vector<double> delegation_rates{0.05, 0.2, 0.5, 0.85};
  std::vector<std::size_t> ensemble_sizes{50, 200, 350};
  std::vector<MechanismKind> mechanisms{MechanismKind::Max, MechanismKind::RandomBetter,
                                        MechanismKind::PropBetter, MechanismKind::PropWeighted};
  std::size_t trials = 50;

  void validate() const;
};

SweepGrid parse_sweep_grid(const std::string& text);

/// "a,b,c" or "start:stop:step" (inclusive of stop within 1e-9).
std::vector<double> parse_value_list(const std::string& text);

/// Options shared by every subcommand.
struct Options {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::filesystem::path out_dir = ".";
  unsigned jobs = 0;  // 0: one per core
  std::filesystem::path data_dir;
};

/// Dataset directory: $LDENS_DATA_DIR, else the build-time default.
std::filesystem::path default_data_dir();

// Output writers. All CSV is LF-terminated with a fixed header.
void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace);
void write_events_csv(std::ostream& os, const std::vector<DelegationEvent>& events);
nlohmann::json summary_json(const TrainReport& report, const std::string& dataset);
nlohmann::json summary_json(const BoostedEnsemble& ensemble, const Metrics& metrics, const std::string& dataset,
                            std::optional<std::int64_t> direct_reference_cost);

/// Formats a double for CSV output (shortest round-trip form).
std::string fmt(double v);

// Subcommands. Each returns the process exit code: 0 success,
// 1 runtime failure, 2 configuration error. Diagnostics go to `err`.
int cmd_train(const Options& opts, std::ostream& err);
int cmd_sweep(const Options& opts, const std::filesystem::path& grid_file, const std::string& dataset,
              std::ostream& err);
int cmd_compare(const Options& opts, const std::vector<std::string>& datasets,
                const std::vector<std::string>& methods, std::ostream& err);
int cmd_trace(const Options& opts, const std::vector<std::string>& mechanisms, std::ostream& err);
int cmd_cost_bound(const Options& opts, const std::string& ns, const std::string& n_finals,
                   const std::string& rs, std::ostream& out, std::ostream& err);
int cmd_pivotal_bound(const Options& opts, const std::string& ns, const std::string& ms, std::ostream& out,
                      std::ostream& err);
int cmd_datasets_list(const Options& opts, std::ostream& out, std::ostream& err);

/// Method names accepted by `compare`.
inline const std::vector<std::string> kCompareMethods{"PropWeighted-Acc", "PropWeighted-Cost", "Direct",
                                                      "AdaBoost-Full", "AdaBoost-Small"};

}  // namespace ldens::cli
