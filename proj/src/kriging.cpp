#include "segopt/kriging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace segopt {
namespace {

constexpr double kLogThetaLo = -3.0;
constexpr double kLogThetaHi = 3.0;
constexpr double kExponentLo = 1.0;
constexpr double kExponentHi = 2.0;
constexpr int kProfileIterations = 5;
const double kNuggetLadder[] = {0.0, 1e-10, 1e-8, 1e-6};

bool all_two(const Eigen::VectorXd& p) {
  return (p.array() == 2.0).all();
}

// Per-dimension absolute coordinate differences, cached across the
// hyperparameter search.
std::vector<Eigen::MatrixXd> pairwise_absdiff(const Eigen::MatrixXd& plan) {
  const int m = static_cast<int>(plan.rows());
  const int n = static_cast<int>(plan.cols());
  std::vector<Eigen::MatrixXd> dist(n);
  for (int k = 0; k < n; ++k) {
    dist[k].resize(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        dist[k](i, j) = std::fabs(plan(i, k) - plan(j, k));
  }
  return dist;
}

Eigen::MatrixXd build_psi(const std::vector<Eigen::MatrixXd>& absdiff,
                          const Hyperparameters& hyper,
                          const std::vector<Eigen::MatrixXd>* sqdiff) {
  const int m = static_cast<int>(absdiff.empty() ? 0 : absdiff[0].rows());
  const int n = static_cast<int>(absdiff.size());
  Eigen::MatrixXd expo = Eigen::MatrixXd::Zero(m, m);
  if (sqdiff != nullptr) {
    for (int k = 0; k < n; ++k) expo += hyper.theta[k] * (*sqdiff)[k];
  } else {
    for (int k = 0; k < n; ++k)
      expo += hyper.theta[k] * absdiff[k].array().pow(hyper.p[k]).matrix();
  }
  return (-expo).array().exp();
}

struct Profiled {
  bool ok = false;
  double mu = 0.0;
  double sigma2 = 0.0;
  double loglik = -std::numeric_limits<double>::infinity();
  double nugget = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt;
};

// Generalized-least-squares trend and process variance at fixed correlation
// structure. The noise diagonal rescales with sigma2, so sigma2 is resolved
// by a short fixed-point iteration and the returned factorization is the one
// built from the final iterate.
Profiled profile(const Eigen::MatrixXd& psi, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& intrinsic) {
  const int m = static_cast<int>(y.size());
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
  const bool noise_free = intrinsic.maxCoeff() == 0.0;
  const double floor = 1e-12 * (1.0 + y.squaredNorm() / m);

  Profiled out;
  for (double nugget : kNuggetLadder) {
    double sigma2 = std::max((y.array() - y.mean()).square().sum() / m, floor);
    bool ok = true;
    double mu = 0.0;
    double quad = 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt;
    const int steps = noise_free ? 1 : kProfileIterations;
    // One extra pass so the stored factorization matches the final sigma2.
    for (int it = 0; it <= steps && ok; ++it) {
      Eigen::MatrixXd a = psi;
      a.diagonal().array() += nugget;
      if (!noise_free) a.diagonal() += intrinsic / sigma2;
      llt.compute(a);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      Eigen::VectorXd ainv_y = llt.solve(y);
      Eigen::VectorXd ainv_1 = llt.solve(ones);
      double denom = ones.dot(ainv_1);
      if (!std::isfinite(denom) || denom <= 0.0) {
        ok = false;
        break;
      }
      mu = ones.dot(ainv_y) / denom;
      quad = y.dot(ainv_y) - 2.0 * mu * ones.dot(ainv_y) + mu * mu * denom;
      if (it == steps) break;
      double next = std::max(quad / m, floor);
      if (!std::isfinite(next)) {
        ok = false;
        break;
      }
      if (!noise_free && std::abs(next - sigma2) <= 1e-9 * sigma2)
        it = steps - 1;  // converged; jump to the closing pass
      sigma2 = next;
    }
    if (!ok) continue;
    double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    // Full likelihood at the returned iterate, not the stationary shorthand.
    // When the iteration has converged, quad / sigma2 equals m and the two
    // agree up to a constant; when it has not, the shorthand can report an
    // enormous bogus value for a near-singular correlation matrix.
    out.ok = true;
    out.mu = mu;
    out.sigma2 = sigma2;
    out.loglik = -0.5 * (m * std::log(sigma2) + logdet + quad / sigma2);
    out.nugget = nugget;
    out.llt = std::move(llt);
    return out;
  }
  return out;
}

void check_inputs(const Eigen::MatrixXd& plan, const Eigen::VectorXd& y,
                  const Eigen::VectorXd& intrinsic) {
  if (plan.rows() < 2) throw std::invalid_argument("kriging: need at least two points");
  if (plan.cols() < 1) throw std::invalid_argument("kriging: empty design dimension");
  if (y.size() != plan.rows() || intrinsic.size() != plan.rows())
    throw std::invalid_argument("kriging: plan, y and intrinsic sizes disagree");
  if (!y.allFinite() || !plan.allFinite())
    throw std::invalid_argument("kriging: non-finite inputs");
  if (intrinsic.minCoeff() < 0.0)
    throw std::invalid_argument("kriging: negative intrinsic variance");
}

}  // namespace

double correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   const Hyperparameters& hyper) {
  double expo = 0.0;
  for (int k = 0; k < a.size(); ++k) {
    double diff = std::fabs(a[k] - b[k]);
    expo += hyper.theta[k] * (hyper.p[k] == 2.0 ? diff * diff : std::pow(diff, hyper.p[k]));
  }
  return std::exp(-expo);
}

Surrogate::Surrogate(Eigen::MatrixXd plan, Eigen::VectorXd y,
                     Eigen::VectorXd intrinsic, Hyperparameters hyper)
    : plan_(std::move(plan)), y_(std::move(y)), intrinsic_(std::move(intrinsic)),
      hyper_(std::move(hyper)) {
  check_inputs(plan_, y_, intrinsic_);
  if (hyper_.theta.size() != plan_.cols())
    throw std::invalid_argument("kriging: theta size mismatch");
  if (hyper_.p.size() == 0) hyper_.p = Eigen::VectorXd::Constant(plan_.cols(), 2.0);
  if (hyper_.p.size() != plan_.cols())
    throw std::invalid_argument("kriging: p size mismatch");

  auto absdiff = pairwise_absdiff(plan_);
  std::vector<Eigen::MatrixXd> sq;
  const std::vector<Eigen::MatrixXd>* sqptr = nullptr;
  if (all_two(hyper_.p)) {
    sq.reserve(absdiff.size());
    for (auto& d : absdiff) sq.push_back(d.array().square().matrix());
    sqptr = &sq;
  }
  Eigen::MatrixXd psi = build_psi(absdiff, hyper_, sqptr);
  Profiled prof = profile(psi, y_, intrinsic_);
  if (!prof.ok) throw FitError("kriging: correlation matrix not factorizable");

  mu_hat_ = prof.mu;
  sigma2_hat_ = prof.sigma2;
  nugget_ = prof.nugget;
  loglik_ = prof.loglik;
  llt_ = std::move(prof.llt);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(size());
  alpha_ = llt_.solve(y_ - mu_hat_ * ones);
  ainv_one_ = llt_.solve(ones);
  one_ainv_one_ = ones.dot(ainv_one_);
}

Eigen::VectorXd Surrogate::corr_vector(const Eigen::VectorXd& d) const {
  Eigen::VectorXd r(size());
  for (int i = 0; i < size(); ++i)
    r[i] = correlation(d, plan_.row(i).transpose(), hyper_);
  return r;
}

double Surrogate::predict(const Eigen::VectorXd& d) const {
  if (d.size() != plan_.cols()) throw std::invalid_argument("predict: dimension mismatch");
  return mu_hat_ + corr_vector(d).dot(alpha_);
}

double Surrogate::mse(const Eigen::VectorXd& d, double lambda_at_d) const {
  if (d.size() != plan_.cols()) throw std::invalid_argument("mse: dimension mismatch");
  if (lambda_at_d < 0.0) throw std::invalid_argument("mse: negative lambda");
  Eigen::VectorXd r = corr_vector(d);
  Eigen::VectorXd ainv_r = llt_.solve(r);
  double u = 1.0 - ainv_one_.dot(r);
  double val = sigma2_hat_ * (1.0 - r.dot(ainv_r) + u * u / one_ainv_one_) + lambda_at_d;
  return std::max(val, 0.0);
}

double profile_loglik(const Eigen::MatrixXd& plan, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& intrinsic,
                      const Hyperparameters& hyper) {
  check_inputs(plan, y, intrinsic);
  Hyperparameters h = hyper;
  if (h.p.size() == 0) h.p = Eigen::VectorXd::Constant(plan.cols(), 2.0);
  auto absdiff = pairwise_absdiff(plan);
  std::vector<Eigen::MatrixXd> sq;
  const std::vector<Eigen::MatrixXd>* sqptr = nullptr;
  if (all_two(h.p)) {
    sq.reserve(absdiff.size());
    for (auto& d : absdiff) sq.push_back(d.array().square().matrix());
    sqptr = &sq;
  }
  return profile(build_psi(absdiff, h, sqptr), y, intrinsic).loglik;
}

Surrogate fit(const Eigen::MatrixXd& plan, const Eigen::VectorXd& y,
              const Eigen::VectorXd& intrinsic, const FitOptions& options,
              RngStream& rng) {
  check_inputs(plan, y, intrinsic);
  const int n = static_cast<int>(plan.cols());
  const int k = options.fit_p ? 2 * n : n;  // search dims: log10(theta) [+ p]

  auto absdiff = pairwise_absdiff(plan);
  std::vector<Eigen::MatrixXd> sq;
  sq.reserve(absdiff.size());
  for (auto& d : absdiff) sq.push_back(d.array().square().matrix());

  Eigen::VectorXd lo(k), hi(k);
  lo.head(n).setConstant(kLogThetaLo);
  hi.head(n).setConstant(kLogThetaHi);
  if (options.fit_p) {
    lo.tail(n).setConstant(kExponentLo);
    hi.tail(n).setConstant(kExponentHi);
  }

  auto unpack = [&](const Eigen::VectorXd& x) {
    Hyperparameters h;
    h.theta.resize(n);
    for (int i = 0; i < n; ++i) h.theta[i] = std::pow(10.0, x[i]);
    h.p = options.fit_p ? x.tail(n).eval() : Eigen::VectorXd::Constant(n, 2.0);
    return h;
  };
  auto objective = [&](const Eigen::VectorXd& x) {
    Hyperparameters h = unpack(x);
    const std::vector<Eigen::MatrixXd>* sqptr = all_two(h.p) ? &sq : nullptr;
    return profile(build_psi(absdiff, h, sqptr), y, intrinsic).loglik;
  };

  // Particle swarm (constriction form) maximizing the concentrated
  // log-likelihood.
  const int np = std::max(options.particles, 2);
  const int ni = std::max(options.iterations, 1);
  const double chi = 0.7298, c1 = 1.49618, c2 = 1.49618;
  Eigen::MatrixXd x(np, k), v = Eigen::MatrixXd::Zero(np, k), pbest(np, k);
  Eigen::VectorXd pval(np);
  Eigen::VectorXd gbest(k);
  double gval = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < k; ++j) x(i, j) = rng.uniform(lo[j], hi[j]);
    pbest.row(i) = x.row(i);
    pval[i] = objective(x.row(i).transpose());
    if (pval[i] > gval) {
      gval = pval[i];
      gbest = x.row(i).transpose();
    }
  }
  for (int it = 0; it < ni; ++it) {
    for (int i = 0; i < np; ++i) {
      for (int j = 0; j < k; ++j) {
        double r1 = rng.uniform(), r2 = rng.uniform();
        v(i, j) = chi * (v(i, j) + c1 * r1 * (pbest(i, j) - x(i, j)) +
                         c2 * r2 * (gbest[j] - x(i, j)));
        x(i, j) += v(i, j);
        if (x(i, j) < lo[j]) {
          x(i, j) = lo[j];
          v(i, j) = 0.0;
        } else if (x(i, j) > hi[j]) {
          x(i, j) = hi[j];
          v(i, j) = 0.0;
        }
      }
      double val = objective(x.row(i).transpose());
      if (val > pval[i]) {
        pval[i] = val;
        pbest.row(i) = x.row(i);
      }
      if (val > gval) {
        gval = val;
        gbest = x.row(i).transpose();
      }
    }
  }

  // Coordinate pattern-search polish of the swarm incumbent.
  double step = 0.25;
  for (int sweep = 0; sweep < options.polish_sweeps && step > 1e-4; ++sweep) {
    bool improved = false;
    for (int j = 0; j < k; ++j) {
      for (double sgn : {1.0, -1.0}) {
        Eigen::VectorXd cand = gbest;
        cand[j] = std::clamp(cand[j] + sgn * step * (hi[j] - lo[j]) / 6.0, lo[j], hi[j]);
        if (cand[j] == gbest[j]) continue;
        double val = objective(cand);
        if (val > gval) {
          gval = val;
          gbest = cand;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  if (!std::isfinite(gval))
    throw FitError("kriging: likelihood search found no factorizable model");
  return Surrogate(plan, y, intrinsic, unpack(gbest));
}

Surrogate fit_with(const Eigen::MatrixXd& plan, const Eigen::VectorXd& y,
                   const Eigen::VectorXd& intrinsic, const Hyperparameters& hyper) {
  return Surrogate(plan, y, intrinsic, hyper);
}

nlohmann::json to_json(const Surrogate& model) {
  nlohmann::json j;
  j["size"] = model.size();
  j["dim"] = model.dim();
  std::vector<std::vector<double>> plan(model.size());
  for (int i = 0; i < model.size(); ++i) {
    plan[i].assign(model.plan().row(i).begin(), model.plan().row(i).end());
  }
  j["plan"] = plan;
  j["y"] = std::vector<double>(model.y().begin(), model.y().end());
  j["intrinsic"] = std::vector<double>(model.intrinsic().begin(), model.intrinsic().end());
  j["theta"] = std::vector<double>(model.hyper().theta.begin(), model.hyper().theta.end());
  j["p"] = std::vector<double>(model.hyper().p.begin(), model.hyper().p.end());
  j["mu"] = model.mu_hat();
  j["sigma2"] = model.sigma2_hat();
  j["nugget"] = model.nugget();
  j["log_likelihood"] = model.log_likelihood();
  return j;
}

}  // namespace segopt
