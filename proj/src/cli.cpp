#include "ldens/cli.hpp"

#include "ldens/analysis.hpp"
#include "ldens/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#ifndef LDENS_DEFAULT_DATA_DIR
#define LDENS_DEFAULT_DATA_DIR "data"
#endif

namespace ldens::cli {
namespace {

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key + ": not a number: '" + v + "'");
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key + ": not a nonnegative integer: '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  return os;
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    body();
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

RunConfig base_config(const Options& opts) {
  RunConfig rc = opts.config ? load_run_config(*opts.config) : RunConfig{};
  if (opts.seed) rc.train.seed = *opts.seed;
  if (opts.trials) rc.trials = *opts.trials;
  return rc;
}

std::filesystem::path data_dir(const Options& opts) {
  return opts.data_dir.empty() ? default_data_dir() : opts.data_dir;
}

unsigned jobs(const Options& opts) { return opts.jobs == 0 ? default_jobs() : opts.jobs; }

Dataset load_named(const Options& opts, const std::string& name) {
  if (name.empty()) throw ConfigError("no dataset given");
  return load_dataset(resolve_dataset(name, data_dir(opts)));
}

void ensure_out_dir(const Options& opts) {
  std::error_code ec;
  std::filesystem::create_directories(opts.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + opts.out_dir.string());
}

nlohmann::json config_json(const TrainConfig& c) {
  return {{"n", c.n},
          {"n_final", c.n_final},
          {"r", c.r},
          {"u", c.u},
          {"mechanism", std::string(to_string(c.mechanism))},
          {"final_full_fit", c.final_full_fit},
          {"seed", c.seed},
          {"test_fraction", c.test_fraction},
          {"lambda", c.hyper.lambda},
          {"eta0", c.hyper.eta0},
          {"max_epochs", c.hyper.max_epochs_full_fit},
          {"tol", c.hyper.tol},
          {"patience", c.hyper.patience}};
}

}  // namespace

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig rc;
  auto& t = rc.train;
  for (const auto& [k, v] : parse_key_values(text)) {
    if (k == "n") t.n = to_uint(k, v);
    else if (k == "n_final") t.n_final = to_uint(k, v);
    else if (k == "r") t.r = to_double(k, v);
    else if (k == "delegation_rate") t.r = 1.0 - to_double(k, v);
    else if (k == "u") t.u = to_uint(k, v);
    else if (k == "mechanism") t.mechanism = parse_mechanism(v);
    else if (k == "trials") rc.trials = to_uint(k, v);
    else if (k == "seed") t.seed = to_uint(k, v);
    else if (k == "dataset") rc.dataset = v;
    else if (k == "test_fraction") t.test_fraction = to_double(k, v);
    else if (k == "final_full_fit") t.final_full_fit = to_bool(k, v);
    else if (k == "lambda") t.hyper.lambda = to_double(k, v);
    else if (k == "eta0") t.hyper.eta0 = to_double(k, v);
    else if (k == "max_epochs") t.hyper.max_epochs_full_fit = static_cast<int>(to_uint(k, v));
    else if (k == "tol") t.hyper.tol = to_double(k, v);
    else if (k == "patience") t.hyper.patience = static_cast<int>(to_uint(k, v));
    else throw ConfigError("unknown config key '" + k + "'");
  }
  t.validate();
  if (rc.trials < 1) throw ConfigError("trials must be at least 1");
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(read_text(path)); }

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  const auto parts = split(text, ':');
  if (parts.size() == 3 && text.find(',') == std::string::npos) {
    const double a = to_double("range", parts[0]), b = to_double("range", parts[1]), step = to_double("range", parts[2]);
    if (!(step > 0.0) || b < a) throw ConfigError("bad range '" + text + "'");
    for (std::size_t k = 0;; ++k) {
      const double v = a + static_cast<double>(k) * step;
      if (v > b + 1e-9) break;
      out.push_back(v);
    }
  } else {
    for (const auto& p : split(text, ',')) out.push_back(to_double("list", p));
  }
  if (out.empty()) throw ConfigError("empty value list '" + text + "'");
  return out;
}

void SweepGrid::validate() const {
  if (increment_sizes.empty() || delegation_rates.empty() || ensemble_sizes.empty() || mechanisms.empty())
    throw ConfigError("sweep grid axes must be nonempty");
  for (double d : delegation_rates)
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("delegation rates must lie in (0, 1)");
  for (auto u : increment_sizes)
    if (u < 1) throw ConfigError("increment sizes must be positive");
  if (trials < 1) throw ConfigError("trials must be at least 1");
}

SweepGrid parse_sweep_grid(const std::string& text) {
  SweepGrid g;
  auto sizes = [](const std::string& k, const std::string& v) {
    std::vector<std::size_t> out;
    for (const auto& p : split(v, ',')) out.push_back(to_uint(k, p));
    return out;
  };
  for (const auto& [k, v] : parse_key_values(text)) {
    if (k == "increment_sizes") g.increment_sizes = sizes(k, v);
    else if (k == "delegation_rates") g.delegation_rates = parse_value_list(v);
    else if (k == "ensemble_sizes") g.ensemble_sizes = sizes(k, v);
    else if (k == "trials") g.trials = to_uint(k, v);
    else if (k == "mechanisms") {
      g.mechanisms.clear();
      for (const auto& p : split(v, ',')) g.mechanisms.push_back(parse_mechanism(p));
    } else
      throw ConfigError("unknown grid key '" + k + "'");
  }
  g.validate();
  return g;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("LDENS_DATA_DIR"); env && *env) return env;
  return LDENS_DEFAULT_DATA_DIR;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace) {
  os << "t,active_count,test_accuracy,min_majority_size\n";
  for (const auto& r : trace) os << r.t << ',' << r.active << ',' << fmt(r.test_accuracy) << ',' << r.min_majority << '\n';
}

void write_events_csv(std::ostream& os, const std::vector<DelegationEvent>& events) {
  os << "t,delegator,delegatee,representative,transferred_weight\n";
  for (const auto& e : events)
    os << e.t << ',' << e.delegator << ',' << e.delegatee << ',' << e.representative << ',' << e.transferred_weight
       << '\n';
}

nlohmann::json summary_json(const TrainReport& report, const std::string& dataset) {
  const auto& l = report.ledger;
  nlohmann::json ledger{{"incremental_cost", l.incremental_cost},
                        {"full_fit_cost", l.full_fit_cost},
                        {"total_cost", l.total_cost},
                        {"per_voter_epochs", l.per_voter_epochs},
                        {"per_voter_examples", l.per_voter_examples}};
  ledger["direct_reference_cost"] = l.direct_reference_cost ? nlohmann::json(*l.direct_reference_cost) : nlohmann::json();
  const auto rel = l.relative_cost();
  ledger["relative_cost"] = rel ? nlohmann::json(*rel) : nlohmann::json();
  return {{"method", std::string(to_string(report.config.mechanism))},
          {"dataset", dataset},
          {"config", config_json(report.config)},
          {"accuracy", report.final_metrics.accuracy},
          {"f1", report.final_metrics.f1},
          {"fully_delegated", report.fully_delegated},
          {"increments_run", report.trace.size()},
          {"increments_available", report.increments_available},
          {"delegations", report.events.size()},
          {"final_representatives", std::count_if(report.final_weights.begin(), report.final_weights.end(),
                                                  [](std::int64_t w) { return w > 0; })},
          {"final_weights", report.final_weights},
          {"ledger", ledger}};
}

nlohmann::json summary_json(const BoostedEnsemble& ensemble, const Metrics& metrics, const std::string& dataset,
                            std::optional<std::int64_t> direct_reference_cost) {
  nlohmann::json ledger{{"total_cost", ensemble.cost_examples}};
  ledger["direct_reference_cost"] = direct_reference_cost ? nlohmann::json(*direct_reference_cost) : nlohmann::json();
  ledger["relative_cost"] = direct_reference_cost && *direct_reference_cost > 0
                                ? nlohmann::json(static_cast<double>(ensemble.cost_examples) /
                                                 static_cast<double>(*direct_reference_cost))
                                : nlohmann::json();
  return {{"method", "adaboost_stump"},
          {"dataset", dataset},
          {"max_rounds", ensemble.max_rounds},
          {"stumps", ensemble.stumps.size()},
          {"accuracy", metrics.accuracy},
          {"f1", metrics.f1},
          {"ledger", ledger}};
}

int cmd_train(const Options& opts, std::ostream& err) {
  return guarded(err, [&] {
    if (!opts.config) throw ConfigError("train needs --config");
    const auto rc = base_config(opts);
    const auto dataset = load_named(opts, rc.dataset);
    ensure_out_dir(opts);

    const auto split = trial_split(dataset, rc.train, 0);
    TrainConfig cfg = rc.train;
    cfg.seed = trial_seed(rc.train.seed, 0);
    auto report = run_training(cfg, split.train, split.test);
    if (!report.ledger.direct_reference_cost) {
      TrainConfig ref = cfg;
      ref.trace_test_accuracy = false;
      report.ledger.direct_reference_cost = run_direct_baseline(ref, split.train, split.test).ledger.total_cost;
    }

    auto trace = open_out(opts.out_dir / "trace.csv");
    write_trace_csv(trace, report.trace);
    auto events = open_out(opts.out_dir / "events.csv");
    write_events_csv(events, report.events);
    auto summary = open_out(opts.out_dir / "summary.json");
    auto js = summary_json(report, dataset.name);
    js["train_rows"] = split.train.size();
    js["test_rows"] = split.test.size();
    js["dropped_rows"] = dataset.dropped_rows;
    summary << js.dump(2) << '\n';
  });
}

int cmd_sweep(const Options& opts, const std::filesystem::path& grid_file, const std::string& dataset_name,
              std::ostream& err) {
  return guarded(err, [&] {
    auto grid = parse_sweep_grid(read_text(grid_file));
    if (opts.trials) grid.trials = *opts.trials;
    grid.validate();
    const auto rc = base_config(opts);
    const auto dataset = load_named(opts, dataset_name.empty() ? rc.dataset : dataset_name);
    ensure_out_dir(opts);

    const auto out_path = opts.out_dir / "sweep.csv";
    const auto log_path = opts.out_dir / "sweep_trials.csv";
    const std::string header = "u,delegation_rate,n,mechanism,trials,accuracy_mean,accuracy_std,f1_mean,f1_std,fully_delegated_fraction";
    std::set<std::string> done;
    if (std::filesystem::exists(out_path)) {
      std::istringstream in(read_text(out_path));
      std::string line;
      std::getline(in, line);
      if (trim(line) != header) throw ConfigError(out_path.string() + " exists with a different header");
      while (std::getline(in, line)) {
        const auto cells = split(line, ',');
        if (cells.size() >= 4) done.insert(cells[0] + ',' + cells[1] + ',' + cells[2] + ',' + cells[3]);
      }
    } else {
      open_out(out_path) << header << '\n';
      open_out(log_path) << "u,delegation_rate,n,mechanism,trial,accuracy,f1,fully_delegated\n";
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::app);
    std::ofstream log(log_path, std::ios::binary | std::ios::app);

    std::size_t cell = 0;
    for (auto u : grid.increment_sizes)
      for (double rate : grid.delegation_rates)
        for (auto n : grid.ensemble_sizes) {
          const std::uint64_t cell_seed = derive_seed(rc.train.seed, {cell++});
          for (auto mech : grid.mechanisms) {
            const std::string key =
                std::to_string(u) + ',' + fmt(rate) + ',' + std::to_string(n) + ',' + std::string(to_string(mech));
            if (done.count(key)) continue;
            TrainConfig cfg = rc.train;
            cfg.u = u;
            cfg.r = 1.0 - rate;
            cfg.n = n;
            cfg.n_final = std::min(cfg.n_final, n);
            cfg.mechanism = mech;
            cfg.seed = cell_seed;
            cfg.trace_test_accuracy = false;
            const auto agg = run_trials(cfg, dataset, grid.trials, {false, jobs(opts)});
            for (std::size_t k = 0; k < agg.trials.size(); ++k)
              log << key << ',' << k << ',' << fmt(agg.trials[k].metrics.accuracy) << ','
                  << fmt(agg.trials[k].metrics.f1) << ',' << (agg.trials[k].fully_delegated ? 1 : 0) << '\n';
            out << key << ',' << grid.trials << ',' << fmt(agg.accuracy.mean) << ',' << fmt(agg.accuracy.stddev)
                << ',' << fmt(agg.f1.mean) << ',' << fmt(agg.f1.stddev) << ',' << fmt(agg.fully_delegated_fraction)
                << '\n';
            out.flush();
            log.flush();
          }
        }
  });
}

int cmd_compare(const Options& opts, const std::vector<std::string>& datasets,
                const std::vector<std::string>& methods_in, std::ostream& err) {
  return guarded(err, [&] {
    auto methods = methods_in.empty() ? kCompareMethods : methods_in;
    for (const auto& m : methods)
      if (std::find(kCompareMethods.begin(), kCompareMethods.end(), m) == kCompareMethods.end())
        throw ConfigError("unknown compare method '" + m + "'");
    auto rc = base_config(opts);
    if (!opts.trials && !opts.config) rc.trials = 50;
    auto names = datasets;
    if (names.empty() && !rc.dataset.empty()) names.push_back(rc.dataset);
    if (names.empty()) throw ConfigError("compare needs at least one dataset");
    ensure_out_dir(opts);

    auto os = open_out(opts.out_dir / "comparison.csv");
    os << "dataset,method,accuracy_mean,accuracy_std,f1_mean,f1_std,relative_cost_mean,relative_cost_std,trials,"
          "fully_delegated_fraction\n";

    const std::size_t trials = rc.trials;
    for (const auto& name : names) {
      const auto dataset = load_named(opts, name);
      std::map<std::string, std::vector<TrialSummary>> per_method;
      for (const auto& m : methods) per_method[m].resize(trials);

      parallel_for(trials, jobs(opts), [&](std::size_t k) {
        const auto split = trial_split(dataset, rc.train, k);
        TrainConfig base = rc.train;
        base.seed = trial_seed(rc.train.seed, k);
        base.trace_test_accuracy = false;
        base.final_full_fit = true;
        const auto direct = run_direct_baseline(base, split.train, split.test);
        const double direct_cost = static_cast<double>(direct.ledger.total_cost);

        auto delegated = [&](double rate, std::size_t u) {
          TrainConfig c = base;
          c.mechanism = MechanismKind::PropWeighted;
          c.r = 1.0 - rate;
          c.u = u;
          const auto rep = run_training(c, split.train, split.test);
          return TrialSummary{rep.final_metrics, rep.ledger.total_cost, rep.ledger.total_cost / direct_cost,
                              rep.fully_delegated, rep.trace.empty() ? 0 : rep.trace.back().min_majority};
        };
        std::optional<BoostedEnsemble> boosted;
        auto boost = [&](std::size_t rounds) {
          if (!boosted || boosted->max_rounds < rounds)
            boosted = train_adaboost(split.train.x, split.train.y, std::max(rounds, base.n));
          BoostedEnsemble e = *boosted;
          e.max_rounds = rounds;
          if (e.stumps.size() > rounds) e.stumps.resize(rounds);
          e.cost_examples = static_cast<std::int64_t>(e.stumps.size() * split.train.size());
          const auto m = classification_metrics(predict_boosted_rows(e, split.test.x), split.test.y);
          return TrialSummary{m, e.cost_examples, e.cost_examples / direct_cost, false, 0};
        };

        for (const auto& m : methods) {
          TrialSummary s;
          if (m == "Direct")
            s = {direct.final_metrics, direct.ledger.total_cost, 1.0, direct.fully_delegated,
                 direct.trace.empty() ? 0 : direct.trace.back().min_majority};
          else if (m == "PropWeighted-Acc")
            s = delegated(0.05, 65);
          else if (m == "PropWeighted-Cost")
            s = delegated(0.85, 25);
          else if (m == "AdaBoost-Full")
            s = boost(base.n);
          else
            s = boost(base.n_final);
          per_method[m][k] = s;
        }
      });

      for (const auto& m : methods) {
        const auto agg = aggregate(per_method[m], {});
        os << dataset.name << ',' << m << ',' << fmt(agg.accuracy.mean) << ',' << fmt(agg.accuracy.stddev) << ','
           << fmt(agg.f1.mean) << ',' << fmt(agg.f1.stddev) << ',' << fmt(agg.relative_cost->mean) << ','
           << fmt(agg.relative_cost->stddev) << ',' << trials << ',' << fmt(agg.fully_delegated_fraction) << '\n';
      }
    }
  });
}

int cmd_trace(const Options& opts, const std::vector<std::string>& mechanism_names, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig rc;
    rc.train.u = 25;
    rc.train.r = 0.8;
    rc.train.n = 350;
    rc.train.final_full_fit = false;
    rc.trials = 500;
    if (opts.config) rc = load_run_config(*opts.config);
    if (opts.seed) rc.train.seed = *opts.seed;
    if (opts.trials) rc.trials = *opts.trials;
    std::vector<MechanismKind> mechs;
    for (const auto& m : mechanism_names) mechs.push_back(parse_mechanism(m));
    if (mechs.empty()) mechs.assign(std::begin(kAllMechanisms), std::end(kAllMechanisms));
    const auto dataset = load_named(opts, rc.dataset);
    ensure_out_dir(opts);

    auto os = open_out(opts.out_dir / "trace.csv");
    os << "mechanism,t,trials,active_mean,test_accuracy_mean,min_majority_mean\n";
    for (auto mech : mechs) {
      TrainConfig cfg = rc.train;
      cfg.mechanism = mech;
      const auto agg = run_trials(cfg, dataset, rc.trials, {false, jobs(opts)});
      for (const auto& row : agg.trace)
        os << to_string(mech) << ',' << row.t << ',' << row.trials << ',' << fmt(row.active) << ','
           << fmt(row.test_accuracy) << ',' << fmt(row.min_majority) << '\n';
    }
  });
}

int cmd_cost_bound(const Options& opts, const std::string& ns, const std::string& n_finals, const std::string& rs,
                   std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::ostringstream csv;
    csv << "n,n_final,r,z,bound\n";
    for (double n : parse_value_list(ns))
      for (double nf : parse_value_list(n_finals))
        for (double r : parse_value_list(rs)) {
          if (!(r > 0.0 && r < 1.0) || nf < 1.0 || nf > n) throw ConfigError("cost-bound: invalid range");
          const auto p = cost_curve_point(static_cast<std::size_t>(n), static_cast<std::size_t>(nf), r);
          csv << p.n << ',' << p.n_final << ',' << fmt(p.r) << ',' << fmt(p.z) << ',' << fmt(p.bound) << '\n';
        }
    if (opts.out_dir != ".") {
      ensure_out_dir(opts);
      open_out(opts.out_dir / "cost_bound.csv") << csv.str();
    }
    out << csv.str();
  });
}

int cmd_pivotal_bound(const Options& opts, const std::string& ns, const std::string& ms, std::ostream& out,
                      std::ostream& err) {
  return guarded(err, [&] {
    std::ostringstream csv;
    csv << "n,m,numerator_digits,approx\n";
    for (double n : parse_value_list(ns))
      for (double m : parse_value_list(ms)) {
        if (n < 1 || m < 2) throw ConfigError("pivotal-bound: need n >= 1 and m >= 2");
        const auto b = pivotal_fraction(static_cast<unsigned>(n), static_cast<unsigned>(m));
        char approx[32];
        std::snprintf(approx, sizeof approx, "%.6e", b.approx);
        csv << static_cast<unsigned>(n) << ',' << static_cast<unsigned>(m) << ','
            << b.ratio.numerator.str().size() << ',' << approx << '\n';
      }
    if (opts.out_dir != ".") {
      ensure_out_dir(opts);
      open_out(opts.out_dir / "pivotal_bound.csv") << csv.str();
    }
    out << csv.str();
  });
}

int cmd_datasets_list(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto dir = data_dir(opts);
    if (!std::filesystem::is_directory(dir)) throw ConfigError("dataset directory not found: " + dir.string());
    out << "name,rows,dropped_rows,encoded_features,positives\n";
    for (const auto& e : list_datasets(dir)) {
      const auto d = load_dataset(e);
      const auto pos = std::count(d.y.begin(), d.y.end(), 1);
      out << e.name << ',' << d.size() << ',' << d.dropped_rows << ',' << d.dim() << ',' << pos << '\n';
    }
  });
}

}  // namespace ldens::cli
