#include "segopt/gbnm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace segopt {
namespace {

Eigen::VectorXd project(Eigen::VectorXd v) {
  for (int i = 0; i < v.size(); ++i) v[i] = std::clamp(v[i], 0.0, 1.0);
  return v;
}

double simplex_diameter(const std::vector<Eigen::VectorXd>& verts) {
  double d = 0.0;
  for (std::size_t i = 1; i < verts.size(); ++i)
    d = std::max(d, (verts[i] - verts[0]).lpNorm<Eigen::Infinity>());
  return d;
}

struct BudgetSpent {};

}  // namespace

LocalSearchResult nelder_mead_bounded(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& start, double tol, long long max_evals) {
  const int n = static_cast<int>(start.size());
  if (n < 1) throw std::invalid_argument("nelder_mead_bounded: empty start point");
  if (max_evals < n + 1)
    throw std::invalid_argument("nelder_mead_bounded: budget below simplex size");

  long long evals = 0;
  auto eval = [&](const Eigen::VectorXd& v) {
    ++evals;
    return f(v);
  };

  std::vector<Eigen::VectorXd> verts(n + 1);
  std::vector<double> fv(n + 1);
  verts[0] = project(start);
  fv[0] = eval(verts[0]);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v = verts[0];
    double h = v[i] + 0.1 <= 1.0 ? 0.1 : -0.1;
    v[i] += h;
    verts[i + 1] = project(v);
    fv[i + 1] = eval(verts[i + 1]);
  }

  auto order = [&]() {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    std::vector<Eigen::VectorXd> nv(n + 1);
    std::vector<double> nf(n + 1);
    for (int i = 0; i <= n; ++i) {
      nv[i] = verts[idx[i]];
      nf[i] = fv[idx[i]];
    }
    verts = std::move(nv);
    fv = std::move(nf);
  };

  order();
  while (evals < max_evals && simplex_diameter(verts) > tol) {
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += verts[i];
    centroid /= n;

    Eigen::VectorXd xr = project(centroid + (centroid - verts[n]));
    double fr = eval(xr);
    if (fr < fv[0]) {
      if (evals < max_evals) {
        Eigen::VectorXd xe = project(centroid + 2.0 * (centroid - verts[n]));
        double fe = eval(xe);
        if (fe < fr) {
          verts[n] = xe;
          fv[n] = fe;
        } else {
          verts[n] = xr;
          fv[n] = fr;
        }
      } else {
        verts[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      verts[n] = xr;
      fv[n] = fr;
    } else {
      bool outside = fr < fv[n];
      Eigen::VectorXd base = outside ? xr : verts[n];
      Eigen::VectorXd xc = project(centroid + 0.5 * (base - centroid));
      double fc = evals < max_evals ? eval(xc) : std::numeric_limits<double>::infinity();
      if (fc < std::min(fr, fv[n])) {
        verts[n] = xc;
        fv[n] = fc;
      } else if (fr < fv[n]) {
        verts[n] = xr;
        fv[n] = fr;
      } else {
        // Shrink toward the best vertex (stays inside the box).
        for (int i = 1; i <= n && evals < max_evals; ++i) {
          verts[i] = verts[0] + 0.5 * (verts[i] - verts[0]);
          fv[i] = eval(verts[i]);
        }
      }
    }
    order();
  }

  return {verts[0], fv[0], evals};
}

double parzen_density(const std::vector<Eigen::VectorXd>& history,
                      const Eigen::VectorXd& s, double beta_o) {
  if (beta_o <= 0.0) throw std::invalid_argument("parzen_density: bandwidth must be positive");
  if (history.empty()) return 0.0;
  const int n = static_cast<int>(s.size());
  const double norm = std::pow(6.283185307179586 * beta_o, -0.5 * n);
  double acc = 0.0;
  for (const auto& h : history) {
    if (h.size() != n) throw std::invalid_argument("parzen_density: dimension mismatch");
    acc += norm * std::exp(-0.5 * (s - h).squaredNorm() / beta_o);
  }
  return acc / static_cast<double>(history.size());
}

Eigen::VectorXd restart_point(const std::vector<Eigen::VectorXd>& history,
                              int dim, int n_candidates, double beta_o,
                              RngStream& rng) {
  if (dim < 1) throw std::invalid_argument("restart_point: need a positive dimension");
  if (n_candidates < 1) throw std::invalid_argument("restart_point: need candidates");
  Eigen::VectorXd best;
  double best_density = std::numeric_limits<double>::infinity();
  for (int c = 0; c < n_candidates; ++c) {
    Eigen::VectorXd u(dim);
    for (int j = 0; j < dim; ++j) u[j] = rng.uniform();
    double dens = parzen_density(history, u, beta_o);
    if (dens < best_density) {
      best_density = dens;
      best = u;
    }
  }
  return best;
}

RunReport run_gbnm(const StochasticProblem& problem, double matched_target,
                   const GbnmConfig& config, RngStream& rng) {
  const int n = problem.dim();
  if (config.nfe_budget < 2)
    throw std::invalid_argument("run_gbnm: evaluation budget too small");
  if (matched_target <= 0.0)
    throw std::invalid_argument("run_gbnm: target must be positive");

  RunReport report;
  report.seed = config.seed;
  long long nfe = 0;
  int query_idx = 0;
  Eigen::VectorXd best_point;
  double best_mean = std::numeric_limits<double>::infinity();
  RngStream query_rng = rng.child(1);
  RngStream restart_rng = rng.child(2);

  auto query = [&](const Eigen::VectorXd& u) {
    if (nfe >= config.nfe_budget) throw BudgetSpent{};
    Eigen::VectorXd d = problem.space().denormalize(u);
    RngStream s = query_rng.child(query_idx);
    SampleRecord rec = integrate_to_target(problem, d, matched_target,
                                           config.nfe_budget - nfe,
                                           config.schedule, s);
    nfe += rec.n_r;
    TraceRow row;
    row.iter = query_idx;
    row.nfe_cum = nfe;
    row.point = rec.design;
    row.n_close = 0;
    row.lambda = rec.lambda;
    row.n_r = rec.n_r;
    row.mean = rec.n_r > 0 ? rec.mean() : std::numeric_limits<double>::quiet_NaN();
    row.err_var = rec.err_var().value_or(std::numeric_limits<double>::quiet_NaN());
    row.aei = std::numeric_limits<double>::quiet_NaN();
    report.trace.push_back(row);
    ++query_idx;
    if (rec.n_r > 0 && rec.mean() < best_mean) {
      best_mean = rec.mean();
      best_point = rec.design;
    }
    if (rec.n_r == 0) throw BudgetSpent{};
    return rec.mean();
  };

  std::vector<Eigen::VectorXd> history;
  int restarts = 0;
  try {
    while (restarts < config.nr_max && nfe < config.nfe_budget) {
      RngStream s = restart_rng.child(restarts);
      Eigen::VectorXd start =
          restart_point(history, n, config.n_candidates, config.beta_o, s);
      history.push_back(start);
      LocalSearchResult local = nelder_mead_bounded(query, start, config.simplex_tol,
                                                    config.max_local_evals);
      history.push_back(local.point);
      ++restarts;
    }
  } catch (const BudgetSpent&) {
    // Budget ran dry mid-search; best-so-far stands.
  }

  if (!best_point.size())
    throw std::runtime_error("run_gbnm: budget spent before any complete query");
  report.best_design = problem.space().denormalize(best_point);
  report.best_estimate = best_mean;
  report.nfe_used = nfe;
  return report;
}

}  // namespace segopt
