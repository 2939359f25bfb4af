#pragma once

#include "ldens/data.hpp"
#include "ldens/trainer.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ldens {

/// h(x) = polarity if x[feature] > threshold, else -polarity.
struct Stump {
  std::size_t feature = 0;
  double threshold = 0.0;
  int polarity = 1;
  double alpha = 0.0;

  int vote(const Eigen::Ref<const Vector>& x) const;  // +1 or -1
};

struct BoostedEnsemble {
  std::vector<Stump> stumps;
  std::size_t max_rounds = 0;
  std::int64_t cost_examples = 0;
  /// Weighted training error of each accepted round.
  std::vector<double> round_errors;
  /// Sum of example weights after each round's renormalization.
  std::vector<double> weight_sums;
};

/// Weighted-error-minimizing stump over every (feature, midpoint, polarity),
/// where midpoints lie between consecutive distinct feature values.
struct StumpFit {
  Stump stump;
  double error = 0.0;
};

StumpFit best_stump(const Eigen::Ref<const Matrix>& x, std::span<const int> y, std::span<const double> weights);

/// Discrete AdaBoost over depth-1 stumps with at most `rounds` stumps.
/// Stops when a round's weighted error reaches 0.5 (that stump is dropped)
/// or 0 (that stump is kept). Each stump costs one pass over the data.
BoostedEnsemble train_adaboost(const Eigen::Ref<const Matrix>& x, std::span<const int> y, std::size_t rounds);

int predict_boosted(const BoostedEnsemble& ensemble, const Eigen::Ref<const Vector>& x);
std::vector<int> predict_boosted_rows(const BoostedEnsemble& ensemble, const Eigen::Ref<const Matrix>& x);

}  // namespace ldens
