#include "segopt/sampling.hpp"

#include <numeric>
#include <stdexcept>

namespace segopt {

DesignSpace::DesignSpace(Eigen::VectorXd lo, Eigen::VectorXd up)
    : lower(std::move(lo)), upper(std::move(up)) {
  if (lower.size() != upper.size() || lower.size() == 0)
    throw std::invalid_argument("DesignSpace: bound vectors must match and be non-empty");
  for (int i = 0; i < lower.size(); ++i)
    if (!(lower[i] < upper[i]))
      throw std::invalid_argument("DesignSpace: lower bound must be below upper bound");
}

bool DesignSpace::contains(const Eigen::VectorXd& d) const {
  if (d.size() != lower.size()) return false;
  for (int i = 0; i < d.size(); ++i)
    if (d[i] < lower[i] || d[i] > upper[i]) return false;
  return true;
}

Eigen::VectorXd DesignSpace::normalize(const Eigen::VectorXd& d) const {
  if (!contains(d)) throw std::invalid_argument("normalize: point outside design space");
  return (d - lower).cwiseQuotient(upper - lower);
}

Eigen::VectorXd DesignSpace::denormalize(const Eigen::VectorXd& u) const {
  if (u.size() != lower.size()) throw std::invalid_argument("denormalize: dimension mismatch");
  for (int i = 0; i < u.size(); ++i)
    if (u[i] < 0.0 || u[i] > 1.0)
      throw std::invalid_argument("denormalize: point outside unit hypercube");
  return lower + u.cwiseProduct(upper - lower);
}

void validate(const RandomSpec& spec) {
  if (spec.empty()) throw std::invalid_argument("RandomSpec: empty");
  for (const auto& m : spec) {
    if (m.dispersion < 0.0) throw std::invalid_argument("RandomSpec: negative dispersion");
    if (m.family == Marginal::kGamma && (m.mean <= 0.0 || m.dispersion <= 0.0))
      throw std::invalid_argument("RandomSpec: gamma marginal needs positive mean and cov");
  }
}

Eigen::VectorXd draw(const RandomSpec& spec, RngStream& rng) {
  Eigen::VectorXd x(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto& m = spec[i];
    switch (m.family) {
      case Marginal::kNormal:
        x[i] = m.dispersion == 0.0 ? m.mean : rng.normal(m.mean, m.dispersion);
        break;
      case Marginal::kGamma: {
        double cov2 = m.dispersion * m.dispersion;
        x[i] = rng.gamma(1.0 / cov2, m.mean * cov2);
        break;
      }
    }
  }
  return x;
}

Eigen::MatrixXd lhs_plan(int n_points, int n_dims, RngStream& rng) {
  if (n_points < 1 || n_dims < 1)
    throw std::invalid_argument("lhs_plan: need at least one point and one dimension");
  Eigen::MatrixXd plan(n_points, n_dims);
  std::vector<int> perm(n_points);
  for (int j = 0; j < n_dims; ++j) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n_points - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.next_below(static_cast<std::uint64_t>(i) + 1)]);
    for (int i = 0; i < n_points; ++i)
      plan(i, j) = (perm[i] + rng.uniform_open()) / n_points;
  }
  return plan;
}

}  // namespace segopt
