#include "ldens/trainer.hpp"

#include "ldens/error.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace ldens {

void TrainConfig::validate() const {
  if (n < 1) throw ConfigError("n must be at least 1");
  if (n_final < 1 || n_final > n) throw ConfigError("n_final must lie in [1, n]");
  if (!(r > 0.0 && r <= 1.0)) throw ConfigError("retention rate r must lie in (0, 1]");
  if (u < 1) throw ConfigError("increment size u must be at least 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ConfigError("test_fraction must lie in (0, 1)");
  hyper.validate();
}

std::optional<double> CostLedger::relative_cost() const {
  if (!direct_reference_cost || *direct_reference_cost == 0) return std::nullopt;
  return static_cast<double>(total_cost) / static_cast<double>(*direct_reference_cost);
}

TrainReport run_training(const TrainConfig& config, const Dataset& train, const Dataset& test) {
  config.validate();
  if (train.size() == 0) throw Error("empty training set");
  const auto parts = partition_increments(train.size(), config.u);

  std::vector<LinearModel> models;
  models.reserve(config.n);
  for (std::size_t k = 0; k < config.n; ++k)
    models.push_back(init_model(train.dim(), derive_seed(config.seed, {seed_stream::kVoter, k}), config.hyper));
  EnsembleState state = make_ensemble(std::move(models));

  const MechanismSpec spec{config.mechanism, config.r, derive_seed(config.seed, {seed_stream::kMechanism})};
  Rng mech_rng(spec.rng_seed);

  TrainReport report;
  report.config = config;
  report.increments_available = parts.count();

  for (std::size_t t = 0; t < parts.count(); ++t) {
    state.increment_index = t;
    const auto& slice = parts.slices[t];
    const auto xs = train.x.middleRows(static_cast<Eigen::Index>(slice.begin), static_cast<Eigen::Index>(slice.count));
    const std::span<const int> ys(train.y.data() + slice.begin, slice.count);
    for (auto& v : state.voters) {
      if (v.weight <= 0) continue;
      partial_fit(v.model, xs, ys);
      record_accuracy(v, accuracy_on(v.model, xs, ys));
    }

    bool stop = false;
    if (config.mechanism != MechanismKind::Direct) {
      auto step = prune_step(state, spec, config.n_final, t, mech_rng);
      stop = step.selected.empty();
      report.events.insert(report.events.end(), step.events.begin(), step.events.end());
    }

    TraceRow row;
    row.t = t;
    row.active = state.representative_count();
    row.min_majority = min_majority_size(state);
    row.test_accuracy = config.trace_test_accuracy ? evaluate_metrics(state, test.x, test.y).accuracy
                                                   : std::numeric_limits<double>::quiet_NaN();
    report.trace.push_back(row);
    if (stop) break;
  }
  report.fully_delegated = state.representative_count() <= config.n_final;

  const std::size_t n = state.size();
  std::vector<std::int64_t> before(n);
  for (std::size_t i = 0; i < n; ++i) before[i] = state.voters[i].model.examples_seen;
  if (config.final_full_fit)
    for (auto& v : state.voters)
      if (v.weight > 0) full_fit(v.model, train.x, train.y);

  auto& ledger = report.ledger;
  ledger.per_voter_epochs.resize(n);
  ledger.per_voter_examples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& m = state.voters[i].model;
    ledger.per_voter_epochs[i] = m.epochs_seen;
    ledger.per_voter_examples[i] = m.examples_seen;
    ledger.incremental_cost += before[i];
    ledger.full_fit_cost += m.examples_seen - before[i];
  }
  ledger.total_cost = ledger.incremental_cost + ledger.full_fit_cost;
  if (config.mechanism == MechanismKind::Direct && config.final_full_fit)
    ledger.direct_reference_cost = ledger.total_cost;

  report.final_metrics = evaluate_metrics(state, test.x, test.y);
  for (const auto& v : state.voters) report.final_weights.push_back(v.weight);
  return report;
}

TrainReport run_direct_baseline(const TrainConfig& config, const Dataset& train, const Dataset& test) {
  TrainConfig direct = config;
  direct.mechanism = MechanismKind::Direct;
  direct.final_full_fit = true;
  return run_training(direct, train, test);
}

double measure_relative_cost(const TrainReport& report, const TrainReport& direct_report) {
  if (direct_report.ledger.total_cost == 0) throw Error("reference run has zero training cost");
  return static_cast<double>(report.ledger.total_cost) / static_cast<double>(direct_report.ledger.total_cost);
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) { return derive_seed(master, {trial}); }

Split trial_split(const Dataset& dataset, const TrainConfig& config, std::size_t trial) {
  return shuffle_split(dataset, config.test_fraction,
                       derive_seed(trial_seed(config.seed, trial), {seed_stream::kSplit}));
}

MeanStd MeanStd::of(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  const double n = static_cast<double>(xs.size());
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.stddev = std::sqrt(ss / n);
  return out;
}

TrialAggregate aggregate(std::vector<TrialSummary> summaries, const std::vector<std::vector<TraceRow>>& traces) {
  TrialAggregate agg;
  std::vector<double> acc, f1, rel;
  std::size_t full = 0;
  for (const auto& s : summaries) {
    acc.push_back(s.metrics.accuracy);
    f1.push_back(s.metrics.f1);
    if (s.relative_cost) rel.push_back(*s.relative_cost);
    full += s.fully_delegated;
  }
  agg.accuracy = MeanStd::of(acc);
  agg.f1 = MeanStd::of(f1);
  if (!summaries.empty() && rel.size() == summaries.size()) agg.relative_cost = MeanStd::of(rel);
  agg.fully_delegated_fraction =
      summaries.empty() ? 0.0 : static_cast<double>(full) / static_cast<double>(summaries.size());

  std::size_t longest = 0;
  for (const auto& tr : traces) longest = std::max(longest, tr.size());
  agg.trace.resize(longest);
  for (std::size_t t = 0; t < longest; ++t) {
    auto& row = agg.trace[t];
    row.t = t;
    for (const auto& tr : traces) {
      if (t >= tr.size()) continue;
      ++row.trials;
      row.active += static_cast<double>(tr[t].active);
      row.test_accuracy += tr[t].test_accuracy;
      row.min_majority += static_cast<double>(tr[t].min_majority);
    }
    const double k = static_cast<double>(row.trials);
    row.active /= k;
    row.test_accuracy /= k;
    row.min_majority /= k;
  }
  agg.trials = std::move(summaries);
  return agg;
}

TrialAggregate run_trials(const TrainConfig& config, const Dataset& dataset, std::size_t trials,
                          const TrialOptions& options) {
  config.validate();
  if (trials < 1) throw ConfigError("trials must be at least 1");
  std::vector<TrialSummary> summaries(trials);
  std::vector<std::vector<TraceRow>> traces(trials);

  parallel_for(trials, options.jobs, [&](std::size_t k) {
    const auto split = trial_split(dataset, config, k);
    TrainConfig cfg = config;
    cfg.seed = trial_seed(config.seed, k);
    const auto report = run_training(cfg, split.train, split.test);

    TrialSummary s;
    s.metrics = report.final_metrics;
    s.total_cost = report.ledger.total_cost;
    s.fully_delegated = report.fully_delegated;
    s.final_min_majority = report.trace.empty() ? 0 : report.trace.back().min_majority;
    if (report.ledger.direct_reference_cost) {
      s.relative_cost = 1.0;
    } else if (options.with_direct_reference) {
      cfg.trace_test_accuracy = false;
      s.relative_cost = measure_relative_cost(report, run_direct_baseline(cfg, split.train, split.test));
    }
    summaries[k] = s;
    traces[k] = report.trace;
  });
  return aggregate(std::move(summaries), traces);
}

}  // namespace ldens
