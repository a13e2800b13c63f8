#include "segopt/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace segopt {

int count_close(const Eigen::MatrixXd& plan, const Eigen::VectorXd& q, double r_hc) {
  if (plan.cols() != q.size()) throw std::invalid_argument("count_close: dimension mismatch");
  if (r_hc <= 0.0) throw std::invalid_argument("count_close: radius must be positive");
  int count = 0;
  for (int i = 0; i < plan.rows(); ++i)
    if ((plan.row(i).transpose() - q).lpNorm<Eigen::Infinity>() <= r_hc) ++count;
  return count;
}

double decay_exponent(int n, int n_close, const AdaptiveConfig& config) {
  if (n < 1 || n_close < 0) throw std::invalid_argument("decay_exponent: bad arguments");
  return config.a1 + config.a2 * n + config.a3 * n_close -
         config.a4 * static_cast<double>(n_close) * n;
}

double adaptive_target(int n, int n_close, const AdaptiveConfig& config) {
  double value = config.sigma2_target * std::exp(-decay_exponent(n, n_close, config));
  return std::clamp(value, config.sigma2_min, config.sigma2_target);
}

double lambda_for(PointStatus /*status*/, int n_close, int n,
                  const AdaptiveConfig& config) {
  if (n_close == 0) return config.sigma2_target;
  return adaptive_target(n, n_close, config);
}

}  // namespace segopt
