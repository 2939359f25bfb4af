#pragma once

#include "ldens/ensemble.hpp"
#include "ldens/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ldens {

enum class MechanismKind { Direct, Random, Max, RandomBetter, PropBetter, PropWeighted };

inline constexpr MechanismKind kAllMechanisms[] = {
    MechanismKind::Direct,     MechanismKind::Random,     MechanismKind::Max,
    MechanismKind::RandomBetter, MechanismKind::PropBetter, MechanismKind::PropWeighted};

std::string_view to_string(MechanismKind kind);
MechanismKind parse_mechanism(std::string_view name);

struct MechanismSpec {
  MechanismKind kind = MechanismKind::PropWeighted;
  /// Retention rate: the fraction of representatives that do NOT delegate per increment.
  double r = 0.8;
  std::uint64_t rng_seed = 0;
};

struct DelegationEvent {
  std::size_t t = 0;
  VoterId delegator = 0;
  VoterId delegatee = 0;
  VoterId representative = 0;  // d*(delegatee) at the moment of transfer
  std::int64_t transferred_weight = 0;
};

/// Number of representatives pruned this increment:
/// min(max(1, floor(|G| (1 - r))), |G| - n_final), or 0 once |G| <= n_final.
std::size_t removal_count(std::size_t representatives, double r, std::size_t n_final);

/// Delegators for this increment, ordered by ascending q then index.
/// Direct selects nobody; Random draws a uniform subset of representatives;
/// every other kind takes the lowest-q representatives, with q-ties broken
/// by a seeded uniform shuffle.
std::vector<VoterId> select_delegators(const EnsembleState& state, const MechanismSpec& spec,
                                       std::size_t n_final, Rng& rng);

struct Candidate {
  VoterId voter = 0;
  double probability = 0.0;
};

using Distribution = std::vector<Candidate>;

/// Probability over delegation targets for delegator i. Candidates exclude i
/// and any voter whose representative is i; the Better family and Max also
/// require q_j > q_i. Returns an empty distribution when nobody qualifies.
Distribution delegation_distribution(const EnsembleState& state, VoterId i, const MechanismSpec& spec);

VoterId sample(const Distribution& dist, Rng& rng);

/// i hands its whole weight to d*(j) and points at j.
DelegationEvent apply_delegation(EnsembleState& state, VoterId i, VoterId j, std::size_t t);

/// One pruning step: select delegators, draw every delegator's distribution
/// from the pre-delegation state, then apply transfers sequentially while
/// more than n_final representatives remain. A drawn target that would now
/// close a cycle is redrawn from the surviving candidates; a delegator left
/// with none stays a representative.
struct PruneResult {
  std::vector<VoterId> selected;
  std::vector<DelegationEvent> events;
};

PruneResult prune_step(EnsembleState& state, const MechanismSpec& spec, std::size_t n_final,
                       std::size_t t, Rng& rng);

}  // namespace ldens
