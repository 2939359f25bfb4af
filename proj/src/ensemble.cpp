#include "ldens/ensemble.hpp"

#include "ldens/error.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>

namespace ldens {

std::vector<VoterId> EnsembleState::representatives() const {
  std::vector<VoterId> out;
  for (const auto& v : voters)
    if (v.is_representative()) out.push_back(v.id);
  return out;
}

std::size_t EnsembleState::representative_count() const {
  return static_cast<std::size_t>(
      std::count_if(voters.begin(), voters.end(), [](const VoterState& v) { return v.is_representative(); }));
}

EnsembleState make_ensemble(std::vector<LinearModel> models) {
  EnsembleState s;
  s.voters.reserve(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) {
    VoterState v;
    v.id = i;
    v.model = std::move(models[i]);
    v.delegate_to = i;
    s.voters.push_back(std::move(v));
  }
  s.total_weight = static_cast<std::int64_t>(models.size());
  return s;
}

VoterId representative_of(const EnsembleState& state, VoterId i) {
  if (i >= state.size()) throw Error("voter index out of range");
  for (std::size_t hops = 0; hops <= state.size(); ++hops) {
    const auto next = state.voters[i].delegate_to;
    if (next == i) return i;
    i = next;
  }
  throw Error("delegation cycle detected");
}

int combine_votes(std::span<const std::int64_t> weights, std::span<const int> predictions) {
  std::int64_t ones = 0;
  std::int64_t zeros = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) (predictions[k] == 1 ? ones : zeros) += weights[k];
  return ones > zeros ? 1 : 0;
}

int weighted_vote(const EnsembleState& state, const Eigen::Ref<const Vector>& x) {
  std::vector<std::int64_t> weights;
  std::vector<int> preds;
  for (const auto& v : state.voters) {
    if (v.weight <= 0) continue;
    weights.push_back(v.weight);
    preds.push_back(predict(v.model, x));
  }
  if (weights.empty()) throw Error("no active voters");
  return combine_votes(weights, preds);
}

std::vector<int> weighted_vote_rows(const EnsembleState& state, const Eigen::Ref<const Matrix>& x) {
  const auto rows = static_cast<std::size_t>(x.rows());
  std::vector<std::int64_t> margin(rows, 0);  // weight for 1 minus weight for 0
  std::vector<int> preds;
  bool any = false;
  for (const auto& v : state.voters) {
    if (v.weight <= 0) continue;
    any = true;
    predict_rows(v.model, x, preds);
    for (std::size_t r = 0; r < rows; ++r) margin[r] += preds[r] == 1 ? v.weight : -v.weight;
  }
  if (!any) throw Error("no active voters");
  std::vector<int> out(rows);
  for (std::size_t r = 0; r < rows; ++r) out[r] = margin[r] > 0 ? 1 : 0;
  return out;
}

void record_accuracy(VoterState& voter, double accuracy) {
  voter.acc_history.push_back(accuracy);
  voter.q = std::accumulate(voter.acc_history.begin(), voter.acc_history.end(), 0.0) /
            static_cast<double>(voter.acc_history.size());
}

void record_increment_accuracy(EnsembleState& state, const Eigen::Ref<const Matrix>& x,
                               std::span<const int> y) {
  for (auto& v : state.voters)
    if (v.weight > 0) record_accuracy(v, accuracy_on(v.model, x, y));
}

std::size_t min_majority_size(std::vector<std::int64_t> weights) {
  std::erase_if(weights, [](std::int64_t w) { return w <= 0; });
  if (weights.empty()) throw Error("no active voters");
  std::sort(weights.begin(), weights.end(), std::greater<>());
  const std::int64_t total = std::accumulate(weights.begin(), weights.end(), std::int64_t{0});
  std::int64_t acc = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    if (2 * acc > total) return k + 1;
  }
  return weights.size();
}

std::size_t min_majority_size(const EnsembleState& state) {
  std::vector<std::int64_t> w;
  w.reserve(state.size());
  for (const auto& v : state.voters) w.push_back(v.weight);
  return min_majority_size(std::move(w));
}

Metrics classification_metrics(std::span<const int> predicted, std::span<const int> truth) {
  if (truth.empty()) throw Error("empty test set");
  if (predicted.size() != truth.size()) throw Error("prediction/label size mismatch");
  std::size_t correct = 0, tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    correct += predicted[i] == truth[i];
    tp += predicted[i] == 1 && truth[i] == 1;
    fp += predicted[i] == 1 && truth[i] == 0;
    fn += predicted[i] == 0 && truth[i] == 1;
  }
  Metrics m;
  m.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
  const double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  m.f1 = precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
  return m;
}

Metrics evaluate_metrics(const EnsembleState& state, const Eigen::Ref<const Matrix>& x,
                         std::span<const int> y) {
  if (y.empty()) throw Error("empty test set");
  const auto pred = weighted_vote_rows(state, x);
  return classification_metrics(pred, y);
}

void check_invariants(const EnsembleState& state) {
  const std::size_t n = state.size();
  std::vector<std::int64_t> recount(n, 0);
  std::int64_t sum = 0;
  for (const auto& v : state.voters) {
    if ((v.weight > 0) != v.is_representative())
      throw Error("voter " + std::to_string(v.id) + ": weight/self-delegation mismatch");
    sum += v.weight;
    ++recount[representative_of(state, v.id)];
  }
  if (sum != state.total_weight || state.total_weight != static_cast<std::int64_t>(n))
    throw Error("weight not conserved");
  for (std::size_t i = 0; i < n; ++i)
    if (recount[i] != state.voters[i].weight)
      throw Error("voter " + std::to_string(i) + ": weight disagrees with delegation recount");
}

}  // namespace ldens
