#pragma once

#include "ldens/classifier.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ldens {

using VoterId = std::size_t;

struct VoterState {
  VoterId id = 0;
  LinearModel model;
  std::int64_t weight = 1;
  VoterId delegate_to = 0;
  /// Per-increment training accuracies, recorded only while active.
  std::vector<double> acc_history;
  double q = 1.0;

  bool is_representative() const { return delegate_to == id; }
};

/// The voter population. Starts with every voter self-delegating at weight 1.
struct EnsembleState {
  std::vector<VoterState> voters;
  std::int64_t total_weight = 0;
  std::size_t increment_index = 0;

  std::size_t size() const { return voters.size(); }
  std::vector<VoterId> representatives() const;
  std::size_t representative_count() const;
};

/// One voter per model, all self-delegating with weight 1.
EnsembleState make_ensemble(std::vector<LinearModel> models);

/// Follows delegate_to links to the self-delegating end of the chain.
/// Throws if the chain does not terminate within n hops.
VoterId representative_of(const EnsembleState& state, VoterId i);

int weighted_vote(const EnsembleState& state, const Eigen::Ref<const Vector>& x);

/// Weighted vote for every row of x; each representative scores x once.
std::vector<int> weighted_vote_rows(const EnsembleState& state, const Eigen::Ref<const Matrix>& x);

/// Combines per-representative predictions (one entry per voter in `preds`
/// order, paired with weights) into the weighted-majority class; ties give 0.
int combine_votes(std::span<const std::int64_t> weights, std::span<const int> predictions);

/// Appends each active voter's accuracy on the increment and refreshes its q.
void record_increment_accuracy(EnsembleState& state, const Eigen::Ref<const Matrix>& x,
                               std::span<const int> y);

/// Appends one accuracy for voter i (must be active) and refreshes its q.
void record_accuracy(VoterState& voter, double accuracy);

/// Fewest representatives whose combined weight strictly exceeds half the total.
std::size_t min_majority_size(const EnsembleState& state);
std::size_t min_majority_size(std::vector<std::int64_t> weights);

struct Metrics {
  double accuracy = 0.0;
  double f1 = 0.0;
};

Metrics classification_metrics(std::span<const int> predicted, std::span<const int> truth);
Metrics evaluate_metrics(const EnsembleState& state, const Eigen::Ref<const Matrix>& x,
                         std::span<const int> y);

/// Brute-force consistency check: weight conservation, weight > 0 iff
/// self-delegating, acyclicity, and w_i = |{j : d*(j) = i}|. Throws on failure.
void check_invariants(const EnsembleState& state);

}  // namespace ldens
