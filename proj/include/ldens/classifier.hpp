#pragma once

#include "ldens/data.hpp"
#include "ldens/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>

namespace ldens {

struct SgdHyperparams {
  double lambda = 1e-4;
  double eta0 = 0.01;
  int max_epochs_full_fit = 1000;
  double tol = 1e-3;
  int patience = 5;

  void validate() const;
};

/// Hinge-loss linear classifier trained by plain SGD with L2 shrinkage.
///
/// Every pass over training data, whether from partial_fit or one epoch of
/// full_fit, bumps `epochs_seen`; `examples_seen` accumulates the rows of
/// each pass and is what the training-cost ledger sums.
struct LinearModel {
  Vector w;
  double b = 0.0;
  std::int64_t epochs_seen = 0;
  std::int64_t examples_seen = 0;
  std::uint64_t rng_seed = 0;
  /// Cumulative per-example update counter driving the step-size schedule.
  std::int64_t updates = 0;
  SgdHyperparams hyper;
  Rng shuffle_rng;

  std::size_t dim() const { return static_cast<std::size_t>(w.size()); }
  double decision(const Eigen::Ref<const Vector>& x) const;
};

LinearModel init_model(std::size_t dim, std::uint64_t seed, const SgdHyperparams& hyper = {});

/// One epoch over the batch in a freshly shuffled order. Returns the mean
/// hinge loss observed during the pass (each loss taken before its update).
double partial_fit(LinearModel& model, const Eigen::Ref<const Matrix>& x, std::span<const int> y);

/// Repeats epochs over (x, y) until the epoch-mean hinge loss has failed to
/// improve on the best value by `tol` for `patience` consecutive epochs, or
/// `max_epochs_full_fit` epochs have run. Continues from the current weights.
/// Returns the number of epochs executed.
int full_fit(LinearModel& model, const Eigen::Ref<const Matrix>& x, std::span<const int> y);

/// 1 if w.x + b > 0, else 0 (an exact tie predicts 0).
int predict(const LinearModel& model, const Eigen::Ref<const Vector>& x);

/// Predictions for every row of x.
void predict_rows(const LinearModel& model, const Eigen::Ref<const Matrix>& x, std::vector<int>& out);

double accuracy_on(const LinearModel& model, const Eigen::Ref<const Matrix>& x,
                   std::span<const int> y);

/// Versioned text dump of (w, b, epochs_seen) for debugging.
void write_model(std::ostream& os, const LinearModel& model);
LinearModel read_model(std::istream& is);

}  // namespace ldens
