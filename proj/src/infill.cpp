#include "segopt/infill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "segopt/gbnm.hpp"
#include "segopt/stats.hpp"

namespace segopt {

int effective_best(const Surrogate& model, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("effective_best: alpha must be non-negative");
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < model.size(); ++i) {
    Eigen::VectorXd d = model.plan().row(i).transpose();
    double val = model.predict(d) + alpha * std::sqrt(model.mse(d, model.intrinsic()[i]));
    if (val < best_val) {
      best_val = val;
      best = i;
    }
  }
  return best;
}

double expected_improvement(double y_hat, double s, double y_star) {
  if (s < 0.0) throw std::invalid_argument("expected_improvement: negative deviation");
  double delta = y_star - y_hat;
  if (s == 0.0) return std::max(delta, 0.0);
  double u = delta / s;
  return std::max(delta * norm_cdf(u) + s * norm_pdf(u), 0.0);
}

double aei_given_best(const Surrogate& model, const Eigen::VectorXd& d,
                      double lambda_at_d, double y_star) {
  if (lambda_at_d < 0.0) throw std::invalid_argument("aei: negative lambda");
  // Model-side uncertainty only; the replication noise enters via the penalty.
  double s2 = model.mse(d, 0.0);
  double ei = expected_improvement(model.predict(d), std::sqrt(s2), y_star);
  if (lambda_at_d == 0.0) return ei;
  double penalty = 1.0 - std::sqrt(lambda_at_d) / std::sqrt(s2 + lambda_at_d);
  return ei * penalty;
}

double aei(const Surrogate& model, const Eigen::VectorXd& d, double lambda_at_d,
           double alpha) {
  int star = effective_best(model, alpha);
  double y_star = model.predict(model.plan().row(star).transpose());
  return aei_given_best(model, d, lambda_at_d, y_star);
}

InfillProposal maximize_aei(const Surrogate& model,
                            const std::function<double(const Eigen::VectorXd&)>& lambda_fn,
                            double alpha, const InnerOptions& options,
                            RngStream& rng) {
  const int n = model.dim();
  int star = effective_best(model, alpha);
  double y_star = model.predict(model.plan().row(star).transpose());
  auto score = [&](const Eigen::VectorXd& u) {
    return aei_given_best(model, u, lambda_fn(u), y_star);
  };

  const int n_probes = std::max(options.probes_per_dim * n, 10);
  std::vector<Eigen::VectorXd> probes(n_probes);
  std::vector<double> values(n_probes);
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_probes; ++i) {
    Eigen::VectorXd u(n);
    for (int j = 0; j < n; ++j) u[j] = rng.uniform();
    probes[i] = u;
    values[i] = score(u);
    vmin = std::min(vmin, values[i]);
    vmax = std::max(vmax, values[i]);
  }

  InfillProposal prop;
  if (vmax - vmin <= 1e-14) {
    // Degenerate surface; nothing to rank, explore blind.
    prop.point.resize(n);
    for (int j = 0; j < n; ++j) prop.point[j] = rng.uniform();
    prop.aei = score(prop.point);
    prop.flat = true;
    return prop;
  }

  std::vector<int> order(n_probes);
  for (int i = 0; i < n_probes; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] > values[b]; });

  Eigen::VectorXd best = probes[order[0]];
  double best_val = values[order[0]];
  auto neg = [&](const Eigen::VectorXd& u) { return -score(u); };
  const int starts = std::min<int>(options.starts, n_probes);
  for (int s = 0; s < starts; ++s) {
    LocalSearchResult res = nelder_mead_bounded(neg, probes[order[s]],
                                                options.local_tol, options.local_evals);
    if (-res.value > best_val) {
      best_val = -res.value;
      best = res.point;
    }
  }

  // Certification against a fresh probe set; a winning probe gets polished.
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd u(n);
    for (int j = 0; j < n; ++j) u[j] = rng.uniform();
    double val = score(u);
    if (val > best_val) {
      LocalSearchResult res = nelder_mead_bounded(neg, u, options.local_tol,
                                                  options.local_evals);
      if (-res.value > val) {
        best_val = -res.value;
        best = res.point;
      } else {
        best_val = val;
        best = u;
      }
    }
  }

  prop.point = best;
  prop.aei = best_val;
  return prop;
}

}  // namespace segopt
