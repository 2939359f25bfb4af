#include "ldens/mechanisms.hpp"

#include "ldens/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ldens {

std::string_view to_string(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::Direct: return "Direct";
    case MechanismKind::Random: return "Random";
    case MechanismKind::Max: return "Max";
    case MechanismKind::RandomBetter: return "RandomBetter";
    case MechanismKind::PropBetter: return "PropBetter";
    case MechanismKind::PropWeighted: return "PropWeighted";
  }
  return "?";
}

MechanismKind parse_mechanism(std::string_view name) {
  for (auto k : kAllMechanisms)
    if (to_string(k) == name) return k;
  throw ConfigError("unknown mechanism '" + std::string(name) + "'");
}

std::size_t removal_count(std::size_t representatives, double r, std::size_t n_final) {
  if (representatives <= n_final) return 0;
  // The epsilon keeps products like 10 * (1 - 0.8) = 1.9999999999999996 from flooring low.
  const auto proportional =
      static_cast<std::size_t>(std::floor(static_cast<double>(representatives) * (1.0 - r) + 1e-9));
  return std::min(std::max<std::size_t>(1, proportional), representatives - n_final);
}

std::vector<VoterId> select_delegators(const EnsembleState& state, const MechanismSpec& spec,
                                       std::size_t n_final, Rng& rng) {
  if (spec.kind == MechanismKind::Direct) return {};
  auto reps = state.representatives();
  const std::size_t k = removal_count(reps.size(), spec.r, n_final);
  if (k == 0) return {};

  // A uniform shuffle serves both kinds: Random keeps a prefix, Worst uses the
  // shuffled position as its tie-break key under a stable sort by q.
  std::shuffle(reps.begin(), reps.end(), rng);
  if (spec.kind != MechanismKind::Random)
    std::stable_sort(reps.begin(), reps.end(),
                     [&](VoterId a, VoterId b) { return state.voters[a].q < state.voters[b].q; });
  reps.resize(k);
  std::sort(reps.begin(), reps.end(), [&](VoterId a, VoterId b) {
    const double qa = state.voters[a].q, qb = state.voters[b].q;
    return qa != qb ? qa < qb : a < b;
  });
  return reps;
}

Distribution delegation_distribution(const EnsembleState& state, VoterId i, const MechanismSpec& spec) {
  if (spec.kind == MechanismKind::Direct) return {};
  const double qi = state.voters[i].q;

  struct Entry {
    VoterId j;
    double q;
    std::int64_t rep_weight;
  };
  std::vector<Entry> pool;
  for (const auto& v : state.voters) {
    if (v.id == i) continue;
    const VoterId rep = representative_of(state, v.id);
    if (rep == i) continue;
    if (spec.kind != MechanismKind::Random && !(v.q > qi)) continue;
    pool.push_back({v.id, v.q, state.voters[rep].weight});
  }
  if (pool.empty()) return {};

  Distribution dist;
  switch (spec.kind) {
    case MechanismKind::Random:
    case MechanismKind::RandomBetter:
      for (const auto& e : pool) dist.push_back({e.j, 1.0});
      break;
    case MechanismKind::PropBetter:
      for (const auto& e : pool) dist.push_back({e.j, e.q - qi});
      break;
    case MechanismKind::PropWeighted:
      for (const auto& e : pool) dist.push_back({e.j, (e.q - qi) / static_cast<double>(e.rep_weight)});
      break;
    case MechanismKind::Max: {
      std::int64_t min_w = std::numeric_limits<std::int64_t>::max();
      for (const auto& e : pool) min_w = std::min(min_w, e.rep_weight);
      double best_q = -std::numeric_limits<double>::infinity();
      for (const auto& e : pool)
        if (e.rep_weight == min_w) best_q = std::max(best_q, e.q);
      for (const auto& e : pool)
        if (e.rep_weight == min_w && e.q == best_q) dist.push_back({e.j, 1.0});
      break;
    }
    case MechanismKind::Direct:
      break;
  }
  double total = 0.0;
  for (const auto& c : dist) total += c.probability;
  for (auto& c : dist) c.probability /= total;
  return dist;
}

VoterId sample(const Distribution& dist, Rng& rng) {
  if (dist.empty()) throw Error("sampling from an empty distribution");
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (const auto& c : dist) {
    acc += c.probability;
    if (u < acc) return c.voter;
  }
  // Rounding left u above the cumulative sum; fall back to the last positive entry.
  for (auto it = dist.rbegin(); it != dist.rend(); ++it)
    if (it->probability > 0.0) return it->voter;
  return dist.back().voter;
}

DelegationEvent apply_delegation(EnsembleState& state, VoterId i, VoterId j, std::size_t t) {
  if (i >= state.size() || j >= state.size()) throw Error("voter index out of range");
  auto& from = state.voters[i];
  if (!from.is_representative()) throw Error("voter " + std::to_string(i) + " is not a representative");
  if (i == j) throw Error("self-delegation is not a transfer");
  const VoterId rep = representative_of(state, j);
  if (rep == i) throw Error("delegation " + std::to_string(i) + "->" + std::to_string(j) + " would create a cycle");

  DelegationEvent ev{t, i, j, rep, from.weight};
  state.voters[rep].weight += from.weight;
  from.weight = 0;
  from.delegate_to = j;
  return ev;
}

PruneResult prune_step(EnsembleState& state, const MechanismSpec& spec, std::size_t n_final,
                       std::size_t t, Rng& rng) {
  PruneResult out;
  out.selected = select_delegators(state, spec, n_final, rng);
  if (out.selected.empty()) return out;

  std::vector<Distribution> dists;
  dists.reserve(out.selected.size());
  for (auto i : out.selected) dists.push_back(delegation_distribution(state, i, spec));

  for (std::size_t k = 0; k < out.selected.size(); ++k) {
    if (state.representative_count() <= n_final) break;
    const VoterId i = out.selected[k];
    Distribution dist = std::move(dists[k]);
    std::erase_if(dist, [&](const Candidate& c) { return representative_of(state, c.voter) == i; });
    double total = 0.0;
    for (const auto& c : dist) total += c.probability;
    if (dist.empty() || !(total > 0.0)) continue;
    for (auto& c : dist) c.probability /= total;
    out.events.push_back(apply_delegation(state, i, sample(dist, rng), t));
  }
  return out;
}

}  // namespace ldens
