#include "segopt/mci.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace segopt {

long long BatchSchedule::next_total(long long n_r) const {
  if (n_r < initial) return initial;
  long long grown = static_cast<long long>(std::ceil(n_r * growth));
  return std::max(grown, n_r + 1);
}

void SampleRecord::add(double value) {
  sum += value;
  sum_sq += value * value;
  ++n_r;
}

double SampleRecord::mean() const {
  if (n_r < 1) throw std::logic_error("SampleRecord::mean: no replications");
  return sum / static_cast<double>(n_r);
}

std::optional<double> SampleRecord::err_var() const {
  if (n_r < 2) return std::nullopt;
  double m = mean();
  double ss = sum_sq - static_cast<double>(n_r) * m * m;
  ss = std::max(ss, 0.0);  // guard against cancellation
  return ss / (static_cast<double>(n_r) * static_cast<double>(n_r - 1));
}

double estimate_mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("estimate_mean: empty sample");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double estimate_err_var(const std::vector<double>& values) {
  const auto n = static_cast<long long>(values.size());
  if (n < 2) throw std::invalid_argument("estimate_err_var: need at least two values");
  double m = estimate_mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return ss / (static_cast<double>(n) * static_cast<double>(n - 1));
}

SampleRecord integrate_to_target(const StochasticProblem& problem,
                                 const Eigen::VectorXd& d, double target,
                                 long long budget, const BatchSchedule& schedule,
                                 RngStream& rng, const SampleRecord* resume) {
  if (target <= 0.0) throw std::invalid_argument("integrate_to_target: target must be positive");
  Eigen::VectorXd u = problem.space().normalize(d);

  SampleRecord rec;
  if (resume != nullptr) {
    if (resume->design.size() != u.size() ||
        (resume->design - u).lpNorm<Eigen::Infinity>() > 1e-9)
      throw std::invalid_argument("integrate_to_target: resume record is for another design");
    rec = *resume;
    rec.lambda = std::min(rec.lambda, target);
    rec.budget_exhausted = false;
  } else {
    rec.design = u;
    rec.lambda = target;
  }

  auto met = [&]() {
    auto ev = rec.err_var();
    return ev.has_value() && *ev <= target;
  };

  long long remaining = std::max<long long>(budget, 0);
  while (!met() && remaining > 0) {
    long long batch = std::min(schedule.next_total(rec.n_r) - rec.n_r, remaining);
    for (long long i = 0; i < batch; ++i) {
      Eigen::VectorXd x = draw(problem.random(), rng);
      rec.add(problem.eval_phi(d, x));
    }
    remaining -= batch;
  }
  if (!met()) rec.budget_exhausted = true;
  return rec;
}

SampleRecord merge(const SampleRecord& existing, const Eigen::VectorXd& design,
                   const std::vector<double>& additional, double new_target) {
  if (existing.design.size() != design.size() ||
      (existing.design - design).lpNorm<Eigen::Infinity>() > 1e-9)
    throw std::invalid_argument("merge: design does not match the record");
  SampleRecord rec = existing;
  for (double v : additional) rec.add(v);
  rec.lambda = std::min(rec.lambda, new_target);
  return rec;
}

}  // namespace segopt
