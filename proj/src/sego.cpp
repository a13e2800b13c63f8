#include "segopt/sego.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace segopt {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDuplicateTol = 1e-9;

int find_duplicate(const std::vector<SampleRecord>& records,
                   const Eigen::VectorXd& q) {
  for (std::size_t i = 0; i < records.size(); ++i)
    if ((records[i].design - q).lpNorm<Eigen::Infinity>() <= kDuplicateTol)
      return static_cast<int>(i);
  return -1;
}

Eigen::MatrixXd designs_of(const std::vector<SampleRecord>& records) {
  Eigen::MatrixXd plan(records.size(), records[0].design.size());
  for (std::size_t i = 0; i < records.size(); ++i)
    plan.row(i) = records[i].design.transpose();
  return plan;
}

Surrogate fit_records(const std::vector<SampleRecord>& records,
                      const FitOptions& options, RngStream rng) {
  Eigen::MatrixXd plan = designs_of(records);
  Eigen::VectorXd y(records.size()), lam(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    y[i] = records[i].mean();
    lam[i] = records[i].lambda;
  }
  return fit(plan, y, lam, options, rng);
}

}  // namespace

RunReport run(const StochasticProblem& problem, const SegoConfig& config,
              RngStream& rng, SegoArtifacts* artifacts) {
  const int n = problem.dim();
  const long long n_s = static_cast<long long>(config.n_s_factor) * n;
  if (n_s < 2) throw std::invalid_argument("run: initial plan needs at least two points");
  if (config.nfe_budget <= n_s)
    throw std::invalid_argument("run: evaluation budget must exceed the initial plan size");
  if (config.mode == TargetMode::kConstant && config.constant_target <= 0.0)
    throw std::invalid_argument("run: constant target must be positive");

  const bool constant_mode = config.mode == TargetMode::kConstant;
  const double plan_lambda =
      constant_mode ? config.constant_target : config.adaptive.sigma2_target;

  RngStream plan_rng = rng.child(1);
  RngStream eval_root = rng.child(2);
  RngStream model_root = rng.child(3);

  RunReport report;
  report.seed = config.seed;
  std::vector<SampleRecord> records;
  records.reserve(n_s + 64);
  long long nfe = 0;

  // Initial plan: single evaluation per point, labeled with the full target.
  Eigen::MatrixXd plan_u = lhs_plan(static_cast<int>(n_s), n, plan_rng);
  for (long long i = 0; i < n_s; ++i) {
    Eigen::VectorXd u = plan_u.row(i).transpose();
    Eigen::VectorXd d = problem.space().denormalize(u);
    RngStream point_rng = eval_root.child(i);
    Eigen::VectorXd x = draw(problem.random(), point_rng);
    double value = problem.eval_phi(d, x);
    ++nfe;

    SampleRecord rec;
    rec.design = u;
    rec.add(value);
    rec.lambda = plan_lambda;
    records.push_back(rec);

    TraceRow row;
    row.iter = 0;
    row.nfe_cum = nfe;
    row.point = u;
    row.n_close = 0;
    row.lambda = plan_lambda;
    row.n_r = 1;
    row.mean = value;
    row.err_var = kNaN;
    row.aei = kNaN;
    report.trace.push_back(row);
  }

  auto lambda_unsampled = [&](const Eigen::VectorXd&) { return plan_lambda; };

  int infill = 0;
  Surrogate model;
  while (nfe < config.nfe_budget) {
    ++infill;
    InfillProposal proposal;
    bool fit_ok = true;
    try {
      RngStream fit_rng = model_root.child(2 * infill);
      RngStream inner_rng = model_root.child(2 * infill + 1);
      model = fit_records(records, config.fit, fit_rng);
      proposal = maximize_aei(model, lambda_unsampled, config.alpha,
                              config.inner, inner_rng);
    } catch (const FitError&) {
      // Degenerate data even under the nugget ladder; explore blind.
      fit_ok = false;
      RngStream fallback = model_root.child(2 * infill + 1);
      proposal.point.resize(n);
      for (int j = 0; j < n; ++j) proposal.point[j] = fallback.uniform();
      proposal.aei = kNaN;
      proposal.flat = true;
    }

    Eigen::MatrixXd current_plan = designs_of(records);
    int n_close = count_close(current_plan, proposal.point, config.adaptive.r_hc);
    int dup = find_duplicate(records, proposal.point);
    double target =
        constant_mode
            ? config.constant_target
            : lambda_for(dup >= 0 ? PointStatus::kInPlan : PointStatus::kNewInfill,
                         n_close, n, config.adaptive);

    RngStream infill_rng = eval_root.child(n_s + infill);
    long long before = 0;
    SampleRecord rec;
    if (dup >= 0) {
      before = records[dup].n_r;
      Eigen::VectorXd d = problem.space().denormalize(records[dup].design);
      rec = integrate_to_target(problem, d, target, config.nfe_budget - nfe,
                                config.adaptive.schedule, infill_rng, &records[dup]);
      if (rec.n_r == before) {
        // Already at target, yet the acquisition insists on this point. Buy
        // one more batch of certainty here instead of standing still.
        long long batch =
            std::min(config.adaptive.schedule.next_total(rec.n_r) - rec.n_r,
                     config.nfe_budget - nfe);
        std::vector<double> extra;
        extra.reserve(static_cast<std::size_t>(batch));
        for (long long t = 0; t < batch; ++t) {
          Eigen::VectorXd x = draw(problem.random(), infill_rng);
          extra.push_back(problem.eval_phi(d, x));
        }
        rec = merge(rec, rec.design, extra, target);
      }
      records[dup] = rec;
    } else {
      Eigen::VectorXd d = problem.space().denormalize(proposal.point);
      rec = integrate_to_target(problem, d, target, config.nfe_budget - nfe,
                                config.adaptive.schedule, infill_rng);
      records.push_back(rec);
    }
    nfe += rec.n_r - before;

    TraceRow row;
    row.iter = infill;
    row.nfe_cum = nfe;
    row.point = rec.design;
    row.n_close = n_close;
    row.lambda = rec.lambda;
    row.n_r = rec.n_r;
    row.mean = rec.n_r > 0 ? rec.mean() : kNaN;
    row.err_var = rec.err_var().value_or(kNaN);
    row.aei = fit_ok ? proposal.aei : kNaN;
    report.trace.push_back(row);
  }

  // Closing fit over everything observed, then the risk-weighted incumbent.
  int best_idx;
  try {
    RngStream final_rng = model_root.child(0);
    model = fit_records(records, config.fit, final_rng);
    best_idx = effective_best(model, config.alpha);
  } catch (const FitError&) {
    best_idx = 0;
    for (std::size_t i = 1; i < records.size(); ++i)
      if (records[i].mean() < records[best_idx].mean()) best_idx = static_cast<int>(i);
  }

  report.best_design = problem.space().denormalize(records[best_idx].design);
  report.best_estimate = records[best_idx].mean();
  report.nfe_used = nfe;
  if (artifacts != nullptr) {
    artifacts->records = records;
    artifacts->final_model = model;
    artifacts->best_index = best_idx;
  }
  return report;
}

}  // namespace segopt
