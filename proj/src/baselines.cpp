#include "ldens/baselines.hpp"

#include "ldens/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ldens {
namespace {

using SortedColumns = std::vector<std::vector<Eigen::Index>>;

SortedColumns sort_columns(const Eigen::Ref<const Matrix>& x) {
  SortedColumns cols(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index f = 0; f < x.cols(); ++f) {
    auto& idx = cols[static_cast<std::size_t>(f)];
    idx.resize(static_cast<std::size_t>(x.rows()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return x(a, f) < x(b, f); });
  }
  return cols;
}

StumpFit search(const Eigen::Ref<const Matrix>& x, std::span<const int> y, std::span<const double> w,
                const SortedColumns& cols) {
  double pos_total = 0.0, neg_total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) (y[i] == 1 ? pos_total : neg_total) += w[i];

  StumpFit best;
  best.error = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t f = 0; f < cols.size(); ++f) {
    const auto& idx = cols[f];
    const auto fi = static_cast<Eigen::Index>(f);
    double left_pos = 0.0, left_neg = 0.0;
    for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
      const auto row = idx[k];
      (y[static_cast<std::size_t>(row)] == 1 ? left_pos : left_neg) += w[static_cast<std::size_t>(row)];
      const double lo = x(row, fi), hi = x(idx[k + 1], fi);
      if (!(hi > lo)) continue;
      // polarity +1 predicts 1 right of the threshold, 0 (i.e. -1) left of it.
      const double err_pos = left_pos + (neg_total - left_neg);
      const double err_neg = left_neg + (pos_total - left_pos);
      const int polarity = err_pos <= err_neg ? 1 : -1;
      const double err = std::min(err_pos, err_neg);
      if (err < best.error) {
        best.error = err;
        best.stump = Stump{f, lo + (hi - lo) / 2.0, polarity, 0.0};
        found = true;
      }
    }
  }
  if (!found) throw Error("no feature has two distinct values; no stump to fit");
  best.error = std::max(0.0, best.error);
  return best;
}

}  // namespace

int Stump::vote(const Eigen::Ref<const Vector>& x) const {
  return x[static_cast<Eigen::Index>(feature)] > threshold ? polarity : -polarity;
}

StumpFit best_stump(const Eigen::Ref<const Matrix>& x, std::span<const int> y, std::span<const double> weights) {
  if (x.rows() == 0 || y.size() != static_cast<std::size_t>(x.rows()) || weights.size() != y.size())
    throw Error("stump search needs matching nonempty data and weights");
  return search(x, y, weights, sort_columns(x));
}

BoostedEnsemble train_adaboost(const Eigen::Ref<const Matrix>& x, std::span<const int> y, std::size_t rounds) {
  const auto m = y.size();
  if (m == 0 || static_cast<std::size_t>(x.rows()) != m) throw Error("adaboost needs matching nonempty data");
  if (std::all_of(y.begin(), y.end(), [&](int v) { return v == y[0]; }))
    throw Error("adaboost needs examples of both classes");
  if (rounds < 1) throw Error("adaboost needs at least one round");

  const auto cols = sort_columns(x);
  std::vector<double> w(m, 1.0 / static_cast<double>(m));
  BoostedEnsemble ens;
  ens.max_rounds = rounds;

  for (std::size_t round = 0; round < rounds; ++round) {
    auto fit = search(x, y, w, cols);
    if (fit.error >= 0.5) break;
    const double eps = std::max(fit.error, 1e-10);
    fit.stump.alpha = 0.5 * std::log((1.0 - eps) / eps);
    ens.stumps.push_back(fit.stump);
    ens.round_errors.push_back(fit.error);
    ens.cost_examples += static_cast<std::int64_t>(m);

    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double label = y[i] == 1 ? 1.0 : -1.0;
      const auto h = fit.stump.vote(x.row(static_cast<Eigen::Index>(i)).transpose());
      w[i] *= std::exp(-fit.stump.alpha * label * h);
      sum += w[i];
    }
    for (auto& wi : w) wi /= sum;
    ens.weight_sums.push_back(std::accumulate(w.begin(), w.end(), 0.0));
    if (fit.error == 0.0) break;
  }
  if (ens.stumps.empty()) throw Error("no stump beats chance on this data");
  return ens;
}

int predict_boosted(const BoostedEnsemble& ensemble, const Eigen::Ref<const Vector>& x) {
  if (ensemble.stumps.empty()) throw Error("empty boosted ensemble");
  double score = 0.0;
  for (const auto& s : ensemble.stumps) score += s.alpha * s.vote(x);
  return score > 0.0 ? 1 : 0;
}

std::vector<int> predict_boosted_rows(const BoostedEnsemble& ensemble, const Eigen::Ref<const Matrix>& x) {
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) out[static_cast<std::size_t>(r)] = predict_boosted(ensemble, x.row(r).transpose());
  return out;
}

}  // namespace ldens
