#include "ldens/classifier.hpp"

#include "ldens/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

namespace ldens {
namespace {

constexpr const char* kModelMagic = "ldens-linear-model";
constexpr int kModelVersion = 1;

void check_batch(const LinearModel& model, const Eigen::Ref<const Matrix>& x, std::span<const int> y) {
  if (x.rows() == 0) throw Error("empty batch");
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw Error("feature/label row count mismatch");
  if (static_cast<std::size_t>(x.cols()) != model.dim())
    throw Error("dimension mismatch: model has " + std::to_string(model.dim()) + ", data has " +
                std::to_string(x.cols()));
}

double run_epoch(LinearModel& m, const Eigen::Ref<const Matrix>& x, std::span<const int> y) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(x.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::shuffle(order.begin(), order.end(), m.shuffle_rng);

  const double lambda = m.hyper.lambda;
  const double eta0 = m.hyper.eta0;
  double loss_sum = 0.0;
  for (auto r : order) {
    const double label = y[static_cast<std::size_t>(r)] == 1 ? 1.0 : -1.0;
    const double eta = eta0 / (1.0 + eta0 * lambda * static_cast<double>(m.updates));
    const double margin = label * (m.w.dot(x.row(r).transpose()) + m.b);
    m.w *= (1.0 - eta * lambda);
    if (margin < 1.0) {
      loss_sum += 1.0 - margin;
      m.w.noalias() += (eta * label) * x.row(r).transpose();
      m.b += eta * label;
    }
    ++m.updates;
  }
  ++m.epochs_seen;
  m.examples_seen += x.rows();
  return loss_sum / static_cast<double>(x.rows());
}

}  // namespace

void SgdHyperparams::validate() const {
  if (!(lambda >= 0.0) || !(eta0 > 0.0) || max_epochs_full_fit < 1 || !(tol >= 0.0) || patience < 1)
    throw ConfigError("invalid SGD hyperparameters");
}

double LinearModel::decision(const Eigen::Ref<const Vector>& x) const { return w.dot(x) + b; }

LinearModel init_model(std::size_t dim, std::uint64_t seed, const SgdHyperparams& hyper) {
  if (dim < 1) throw Error("model dimension must be at least 1");
  hyper.validate();
  LinearModel m;
  m.rng_seed = seed;
  m.hyper = hyper;
  Rng init(seed);
  std::uniform_real_distribution<double> u(-0.01, 0.01);
  m.w.resize(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < m.w.size(); ++i) m.w[i] = u(init);
  m.shuffle_rng.seed(mix_seed(seed));
  return m;
}

double partial_fit(LinearModel& model, const Eigen::Ref<const Matrix>& x, std::span<const int> y) {
  check_batch(model, x, y);
  return run_epoch(model, x, y);
}

int full_fit(LinearModel& model, const Eigen::Ref<const Matrix>& x, std::span<const int> y) {
  check_batch(model, x, y);
  const auto& h = model.hyper;
  double best = std::numeric_limits<double>::infinity();
  int stale = 0;
  int epochs = 0;
  while (epochs < h.max_epochs_full_fit) {
    const double loss = run_epoch(model, x, y);
    ++epochs;
    if (loss < best - h.tol)
      stale = 0;
    else
      ++stale;
    best = std::min(best, loss);
    if (stale >= h.patience) break;
  }
  return epochs;
}

int predict(const LinearModel& model, const Eigen::Ref<const Vector>& x) {
  if (static_cast<std::size_t>(x.size()) != model.dim()) throw Error("dimension mismatch in predict");
  return model.decision(x) > 0.0 ? 1 : 0;
}

void predict_rows(const LinearModel& model, const Eigen::Ref<const Matrix>& x, std::vector<int>& out) {
  if (static_cast<std::size_t>(x.cols()) != model.dim()) throw Error("dimension mismatch in predict");
  const Vector scores = x * model.w;
  out.resize(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) out[static_cast<std::size_t>(r)] = scores[r] + model.b > 0.0 ? 1 : 0;
}

double accuracy_on(const LinearModel& model, const Eigen::Ref<const Matrix>& x, std::span<const int> y) {
  if (x.rows() == 0) throw Error("accuracy on an empty set");
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw Error("feature/label row count mismatch");
  std::vector<int> pred;
  predict_rows(model, x, pred);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == y[i];
  return static_cast<double>(correct) / static_cast<double>(pred.size());
}

void write_model(std::ostream& os, const LinearModel& model) {
  os << kModelMagic << ' ' << kModelVersion << '\n'
     << std::setprecision(17) << model.w.size() << ' ' << model.b << ' ' << model.epochs_seen << '\n';
  for (Eigen::Index i = 0; i < model.w.size(); ++i) os << model.w[i] << (i + 1 == model.w.size() ? '\n' : ' ');
}

LinearModel read_model(std::istream& is) {
  std::string magic;
  int version = 0;
  Eigen::Index dim = 0;
  LinearModel m;
  if (!(is >> magic >> version) || magic != kModelMagic) throw Error("not a model dump");
  if (version != kModelVersion) throw Error("unsupported model dump version " + std::to_string(version));
  if (!(is >> dim >> m.b >> m.epochs_seen) || dim < 1) throw Error("truncated model dump");
  m.w.resize(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    if (!(is >> m.w[i])) throw Error("truncated model dump");
  return m;
}

}  // namespace ldens
