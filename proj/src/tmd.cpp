#include "segopt/tmd.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "segopt/stats.hpp"

namespace segopt {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr int kStories = 10;
constexpr double kStoryStiffnessMean = 650.0e6;
constexpr double kStoryMassMean = 360.0e3;
constexpr double kStoryDampingMean = 6.20e6;
constexpr double kTmdMassMean = 108.0e3;
constexpr double kStiffnessUpper = 4000.0e3;  // 4000 kN/m in N/m
constexpr double kDampingUpper = 1000.0e3;    // 1000 kN.s/m in N.s/m

void check_realization(const StructureRealization& r) {
  if (r.stories() < 1 || r.story_c.size() != r.stories() ||
      r.story_k.size() != r.stories())
    throw std::invalid_argument("StructureRealization: inconsistent story arrays");
  if (r.story_m.minCoeff() <= 0.0 || r.story_c.minCoeff() <= 0.0 ||
      r.story_k.minCoeff() <= 0.0 || r.tmd_m <= 0.0 || r.tmd_c <= 0.0 ||
      r.tmd_k <= 0.0)
    throw std::invalid_argument("StructureRealization: parameters must be positive");
}

// Tridiagonal chain pattern shared by damping and stiffness: story i couples
// to its neighbors, the damper hangs off the top story.
Eigen::MatrixXd assemble_chain(const Eigen::VectorXd& story, double tmd) {
  const int n = static_cast<int>(story.size());
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int i = 0; i < n; ++i) {
    double next = i + 1 < n ? story[i + 1] : tmd;
    mat(i, i) = story[i] + next;
    mat(i, i + 1) = -next;
    mat(i + 1, i) = -next;
  }
  mat(n, n) = tmd;
  return mat;
}

}  // namespace

Barrier parse_barrier(const std::string& tag) {
  if (tag == "h300") return Barrier::kH300;
  if (tag == "h400") return Barrier::kH400;
  if (tag == "h500") return Barrier::kH500;
  throw std::invalid_argument("parse_barrier: expected h300, h400 or h500, got '" + tag + "'");
}

double barrier_height(Barrier barrier) {
  const double h = 30.0;
  switch (barrier) {
    case Barrier::kH300: return h / 300.0;
    case Barrier::kH400: return h / 400.0;
    case Barrier::kH500: return h / 500.0;
  }
  throw std::logic_error("barrier_height: unreachable");
}

Eigen::MatrixXd assemble_mass(const StructureRealization& r) {
  check_realization(r);
  Eigen::VectorXd diag(r.stories() + 1);
  diag.head(r.stories()) = r.story_m;
  diag[r.stories()] = r.tmd_m;
  return diag.asDiagonal();
}

Eigen::MatrixXd assemble_damping(const StructureRealization& r) {
  check_realization(r);
  return assemble_chain(r.story_c, r.tmd_c);
}

Eigen::MatrixXd assemble_stiffness(const StructureRealization& r) {
  check_realization(r);
  return assemble_chain(r.story_k, r.tmd_k);
}

double kanai_tajimi_psd(double omega, const ExcitationSpec& spec) {
  double wf2 = spec.omega_f * spec.omega_f;
  double w2 = omega * omega;
  double damp = 4.0 * wf2 * spec.xi_f * spec.xi_f * w2;
  double num = wf2 * wf2 + damp;
  double den = (w2 - wf2) * (w2 - wf2) + damp;
  return spec.s0 * num / den;
}

Eigen::MatrixXd solve_continuous_lyapunov(const Eigen::MatrixXd& a,
                                          const Eigen::MatrixXd& q) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || q.rows() != n || q.cols() != n)
    throw std::invalid_argument("solve_continuous_lyapunov: dimension mismatch");

  Eigen::ComplexSchur<Eigen::MatrixXd> schur(a);
  if (schur.info() != Eigen::Success)
    throw std::runtime_error("solve_continuous_lyapunov: Schur decomposition failed");
  const Eigen::MatrixXcd& t = schur.matrixT();
  const Eigen::MatrixXcd& u = schur.matrixU();

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(t(i, i) + std::conj(t(j, j))) < 1e-12 * (1.0 + std::abs(t(i, i))))
        throw std::runtime_error("solve_continuous_lyapunov: eigenvalue pair sums to zero");

  Eigen::MatrixXcd c = -u.adjoint() * q * u;
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
  // T Y + Y T^H = C with T upper triangular: columns resolve back to front.
  for (int j = n - 1; j >= 0; --j) {
    Eigen::VectorXcd rhs = c.col(j);
    for (int k = j + 1; k < n; ++k) rhs -= std::conj(t(j, k)) * y.col(k);
    Eigen::MatrixXcd tj = t;
    tj.diagonal().array() += std::conj(t(j, j));
    y.col(j) = tj.triangularView<Eigen::Upper>().solve(rhs);
  }
  Eigen::MatrixXd x = (u * y * u.adjoint()).real();
  return 0.5 * (x + x.transpose());
}

ResponseStats response_stats(const StructureRealization& r, const ExcitationSpec& spec) {
  check_realization(r);
  const int nd = r.stories() + 1;  // structural DOFs
  const int ns = 2 * nd + 2;       // plus filter displacement/velocity

  Eigen::MatrixXd minv_c(nd, nd), minv_k(nd, nd);
  {
    Eigen::VectorXd minv(nd);
    minv.head(r.stories()) = r.story_m.cwiseInverse();
    minv[r.stories()] = 1.0 / r.tmd_m;
    minv_c = minv.asDiagonal() * assemble_damping(r);
    minv_k = minv.asDiagonal() * assemble_stiffness(r);
  }

  // State x = (z, zdot, xf, xfdot). The filter obeys
  // xf'' + 2 xi_f w_f xf' + w_f^2 xf = -w and the structure is forced by the
  // absolute ground acceleration -(2 xi_f w_f xf' + w_f^2 xf).
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(ns, ns);
  a.block(0, nd, nd, nd).setIdentity();
  a.block(nd, 0, nd, nd) = -minv_k;
  a.block(nd, nd, nd, nd) = -minv_c;
  const double wf2 = spec.omega_f * spec.omega_f;
  const double two_xiwf = 2.0 * spec.xi_f * spec.omega_f;
  a.block(nd, 2 * nd, nd, 1).setConstant(wf2);
  a.block(nd, 2 * nd + 1, nd, 1).setConstant(two_xiwf);
  a(2 * nd, 2 * nd + 1) = 1.0;
  a(2 * nd + 1, 2 * nd) = -wf2;
  a(2 * nd + 1, 2 * nd + 1) = -two_xiwf;

  ResponseStats out;
  {
    Eigen::EigenSolver<Eigen::MatrixXd> eig(a, false);
    if (eig.info() != Eigen::Success) return out;
    if (eig.eigenvalues().real().maxCoeff() >= -1e-12) return out;
  }

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(ns, ns);
  w(2 * nd + 1, 2 * nd + 1) = kTwoPi * spec.s0;
  Eigen::MatrixXd q = solve_continuous_lyapunov(a, w);

  const int top = r.stories() - 1;  // top floor, not the damper
  double var_z = q(top, top);
  double var_v = q(nd + top, nd + top);
  if (var_z <= 0.0 || var_v <= 0.0) return out;
  out.stable = true;
  out.sigma_z = std::sqrt(var_z);
  out.sigma_zdot = std::sqrt(var_v);
  return out;
}

double upcrossing_rate(double sigma_z, double sigma_zdot, double b) {
  if (sigma_z <= 0.0 || sigma_zdot <= 0.0)
    throw std::invalid_argument("upcrossing_rate: deviations must be positive");
  return (sigma_zdot / sigma_z) / kTwoPi * std::exp(-b * b / (2.0 * sigma_z * sigma_z));
}

double event_failure_probability(double rate, double t_event) {
  if (rate < 0.0 || t_event < 0.0)
    throw std::invalid_argument("event_failure_probability: negative argument");
  return 1.0 - std::exp(-2.0 * t_event * rate);
}

double failure_probability(double p_event, double nu, double t_design) {
  if (p_event < 0.0 || p_event > 1.0)
    throw std::invalid_argument("failure_probability: p_event outside [0, 1]");
  if (nu < 0.0 || t_design < 0.0)
    throw std::invalid_argument("failure_probability: negative argument");
  return 1.0 - std::exp(-nu * t_design * p_event);
}

double reliability_index(double p_f) {
  double clamped = std::clamp(p_f, 1e-15, 1.0 - 1e-15);
  return -norm_ppf(clamped);
}

double tmd_phi(const Eigen::VectorXd& d, const Eigen::VectorXd& x,
               const ExcitationSpec& exc, const ReliabilitySpec& rel) {
  if (d.size() != 2) throw std::invalid_argument("tmd_phi: design must be (k_d, c_d)");
  if (x.size() != 3 * kStories && x.size() != 3 * kStories + 1)
    throw std::invalid_argument("tmd_phi: expected 30 or 31 variates");

  StructureRealization r;
  r.story_k = x.segment(0, kStories);
  r.story_m = x.segment(kStories, kStories);
  r.story_c = x.segment(2 * kStories, kStories);
  r.tmd_m = x.size() > 3 * kStories ? x[3 * kStories] : kTmdMassMean;
  // Exact zeros make the damper block singular; keep a sliver of the range.
  r.tmd_k = std::clamp(d[0], 1e-6 * kStiffnessUpper, kStiffnessUpper);
  r.tmd_c = std::clamp(d[1], 1e-6 * kDampingUpper, kDampingUpper);

  ResponseStats stats = response_stats(r, exc);
  if (!stats.stable) return 10.0;  // beta = -10 penalty

  double rate = upcrossing_rate(stats.sigma_z, stats.sigma_zdot, rel.barrier);
  double p_event = event_failure_probability(rate, rel.t_event);
  double p_f = failure_probability(p_event, rel.nu, rel.t_design);
  return -reliability_index(p_f);
}

StochasticProblem make_tmd_problem(Barrier barrier, bool random_tmd_mass) {
  DesignSpace space{Eigen::VectorXd::Zero(2),
                    (Eigen::VectorXd(2) << kStiffnessUpper, kDampingUpper).finished()};

  RandomSpec spec;
  auto add_gamma = [&spec](int count, double mean, double cov) {
    for (int i = 0; i < count; ++i)
      spec.push_back({Marginal::kGamma, mean, cov});
  };
  add_gamma(kStories, kStoryStiffnessMean, 0.15);
  add_gamma(kStories, kStoryMassMean, 0.05);
  add_gamma(kStories, kStoryDampingMean, 0.25);
  if (random_tmd_mass) add_gamma(1, kTmdMassMean, 0.05);

  ReliabilitySpec rel;
  rel.barrier = barrier_height(barrier);
  ExcitationSpec exc;
  return StochasticProblem(
      "tmd", space, std::move(spec),
      [exc, rel](const Eigen::VectorXd& d, const Eigen::VectorXd& x) {
        return tmd_phi(d, x, exc, rel);
      },
      nullptr, 3 * kStories);
}

}  // namespace segopt
