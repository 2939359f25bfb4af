#pragma once

#include "ldens/classifier.hpp"
#include "ldens/data.hpp"
#include "ldens/ensemble.hpp"
#include "ldens/mechanisms.hpp"
#include "ldens/parallel.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ldens {

struct TrainConfig {
  std::size_t n = 350;
  std::size_t n_final = 10;
  double r = 0.8;
  std::size_t u = 25;
  MechanismKind mechanism = MechanismKind::PropWeighted;
  bool final_full_fit = true;
  std::uint64_t seed = 0;
  double test_fraction = 0.2;
  SgdHyperparams hyper;
  /// Evaluate the whole test set after every increment for the trace.
  bool trace_test_accuracy = true;

  void validate() const;
};

/// Examples-seen accounting: each pass over k rows by one voter adds k.
struct CostLedger {
  std::vector<std::int64_t> per_voter_epochs;
  std::vector<std::int64_t> per_voter_examples;
  std::int64_t incremental_cost = 0;
  std::int64_t full_fit_cost = 0;
  std::int64_t total_cost = 0;
  std::optional<std::int64_t> direct_reference_cost;

  std::optional<double> relative_cost() const;
};

struct TraceRow {
  std::size_t t = 0;
  std::size_t active = 0;
  double test_accuracy = 0.0;
  std::size_t min_majority = 0;
};

struct TrainReport {
  std::vector<TraceRow> trace;
  std::vector<DelegationEvent> events;
  Metrics final_metrics;
  CostLedger ledger;
  TrainConfig config;
  std::size_t increments_available = 0;
  /// True once the representative count reached n_final.
  bool fully_delegated = false;
  std::vector<std::int64_t> final_weights;
};

/// Incremental train / prune / reweight over the increments of `train`,
/// then (optionally) a full fit of every remaining representative.
///
/// Per increment: every active voter partial-fits the slice and records its
/// accuracy on it; the mechanism then selects delegators. An empty
/// selection ends the loop, except under Direct, which trains on every
/// increment. Test metrics are taken after each increment's delegations.
TrainReport run_training(const TrainConfig& config, const Dataset& train, const Dataset& test);

/// Same configuration with mechanism = Direct and a final full fit.
TrainReport run_direct_baseline(const TrainConfig& config, const Dataset& train, const Dataset& test);

double measure_relative_cost(const TrainReport& report, const TrainReport& direct_report);

/// Seeds used by trial k of a master seed: its own split and voter/mechanism streams.
std::uint64_t trial_seed(std::uint64_t master, std::size_t trial);
Split trial_split(const Dataset& dataset, const TrainConfig& config, std::size_t trial);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // population
  static MeanStd of(const std::vector<double>& xs);
};

struct TraceAggregate {
  std::size_t t = 0;
  std::size_t trials = 0;  // trials that reached increment t
  double active = 0.0;
  double test_accuracy = 0.0;
  double min_majority = 0.0;
};

struct TrialSummary {
  Metrics metrics;
  std::int64_t total_cost = 0;
  std::optional<double> relative_cost;
  bool fully_delegated = false;
  std::size_t final_min_majority = 0;
};

struct TrialAggregate {
  std::vector<TrialSummary> trials;
  MeanStd accuracy;
  MeanStd f1;
  std::optional<MeanStd> relative_cost;
  std::vector<TraceAggregate> trace;
  double fully_delegated_fraction = 0.0;
};

struct TrialOptions {
  /// Also run a Direct reference on each trial's split for relative cost.
  bool with_direct_reference = true;
  unsigned jobs = 1;
};

/// Independent trials, each with its own reshuffled split and reseeded voters.
/// Results depend only on (config, trials), never on `jobs`.
TrialAggregate run_trials(const TrainConfig& config, const Dataset& dataset, std::size_t trials,
                          const TrialOptions& options = {});

TrialAggregate aggregate(std::vector<TrialSummary> summaries, const std::vector<std::vector<TraceRow>>& traces);

}  // namespace ldens
