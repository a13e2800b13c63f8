#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "segopt/adaptive.hpp"
#include "segopt/experiment.hpp"
#include "segopt/gbnm.hpp"
#include "segopt/infill.hpp"
#include "segopt/kriging.hpp"
#include "segopt/mci.hpp"
#include "segopt/problems.hpp"
#include "segopt/rng.hpp"
#include "segopt/sampling.hpp"
#include "segopt/sego.hpp"
#include "segopt/stats.hpp"
#include "segopt/tmd.hpp"

namespace py = pybind11;
using namespace segopt;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Surrogate-based optimization of noise-corrupted objectives";

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("child", &RngStream::child, py::arg("salt"))
      .def("uniform", py::overload_cast<>(&RngStream::uniform))
      .def("uniform_open", &RngStream::uniform_open)
      .def("normal", py::overload_cast<>(&RngStream::normal))
      .def("normal", py::overload_cast<double, double>(&RngStream::normal),
           py::arg("mean"), py::arg("stddev"))
      .def("gamma", &RngStream::gamma, py::arg("shape"), py::arg("scale"))
      .def_property_readonly("seed", &RngStream::seed);

  py::class_<DesignSpace>(m, "DesignSpace")
      .def(py::init<Eigen::VectorXd, Eigen::VectorXd>(), py::arg("lower"),
           py::arg("upper"))
      .def_readonly("lower", &DesignSpace::lower)
      .def_readonly("upper", &DesignSpace::upper)
      .def("dim", &DesignSpace::dim)
      .def("contains", &DesignSpace::contains)
      .def("normalize", &DesignSpace::normalize)
      .def("denormalize", &DesignSpace::denormalize);

  py::enum_<Marginal>(m, "Marginal")
      .value("NORMAL", Marginal::kNormal)
      .value("GAMMA", Marginal::kGamma);

  py::class_<MarginalSpec>(m, "MarginalSpec")
      .def(py::init([](Marginal family, double mean, double dispersion) {
             return MarginalSpec{family, mean, dispersion};
           }),
           py::arg("family"), py::arg("mean"), py::arg("dispersion"))
      .def_readwrite("family", &MarginalSpec::family)
      .def_readwrite("mean", &MarginalSpec::mean)
      .def_readwrite("dispersion", &MarginalSpec::dispersion);

  m.def("draw", &draw, py::arg("spec"), py::arg("rng"));
  m.def("lhs_plan", &lhs_plan, py::arg("n_points"), py::arg("n_dims"),
        py::arg("rng"));

  py::class_<StochasticProblem>(m, "StochasticProblem")
      .def_property_readonly("name", &StochasticProblem::name)
      .def("dim", &StochasticProblem::dim)
      .def("n_x", &StochasticProblem::n_x)
      .def_property_readonly("space", &StochasticProblem::space)
      .def("eval_phi", &StochasticProblem::eval_phi, py::arg("d"), py::arg("x"))
      .def("has_exact_mean", &StochasticProblem::has_exact_mean)
      .def("exact_mean", &StochasticProblem::exact_mean, py::arg("d"))
      .def("evals", &StochasticProblem::evals)
      .def("reset_evals", &StochasticProblem::reset_evals);

  m.def("make_problem", &make_problem, py::arg("name"),
        py::arg("sigma_x") = std::numeric_limits<double>::quiet_NaN(),
        py::arg("barrier") = "h400");

  py::class_<BatchSchedule>(m, "BatchSchedule")
      .def(py::init<>())
      .def_readwrite("initial", &BatchSchedule::initial)
      .def_readwrite("growth", &BatchSchedule::growth)
      .def("next_total", &BatchSchedule::next_total, py::arg("n_r"));

  py::class_<SampleRecord>(m, "SampleRecord")
      .def(py::init<>())
      .def_readwrite("design", &SampleRecord::design)
      .def_readonly("sum", &SampleRecord::sum)
      .def_readonly("sum_sq", &SampleRecord::sum_sq)
      .def_readonly("n_r", &SampleRecord::n_r)
      .def_readonly("lambda_", &SampleRecord::lambda)
      .def_readonly("budget_exhausted", &SampleRecord::budget_exhausted)
      .def("mean", &SampleRecord::mean)
      .def("err_var", &SampleRecord::err_var);

  m.def("estimate_mean", &estimate_mean, py::arg("values"));
  m.def("estimate_err_var", &estimate_err_var, py::arg("values"));
  m.def(
      "integrate_to_target",
      [](const StochasticProblem& problem, const Eigen::VectorXd& d,
         double target, long long budget, const BatchSchedule& schedule,
         RngStream& rng, std::optional<SampleRecord> resume) {
        return integrate_to_target(problem, d, target, budget, schedule, rng,
                                   resume ? &*resume : nullptr);
      },
      py::arg("problem"), py::arg("d"), py::arg("target"), py::arg("budget"),
      py::arg("schedule"), py::arg("rng"), py::arg("resume") = py::none());

  m.def("norm_pdf", &norm_pdf);
  m.def("norm_cdf", &norm_cdf);
  m.def("norm_ppf", &norm_ppf);

  py::class_<Hyperparameters>(m, "Hyperparameters")
      .def(py::init<>())
      .def_readwrite("theta", &Hyperparameters::theta)
      .def_readwrite("p", &Hyperparameters::p);

  py::class_<FitOptions>(m, "FitOptions")
      .def(py::init<>())
      .def_readwrite("particles", &FitOptions::particles)
      .def_readwrite("iterations", &FitOptions::iterations)
      .def_readwrite("fit_p", &FitOptions::fit_p)
      .def_readwrite("polish_sweeps", &FitOptions::polish_sweeps);

  py::class_<Surrogate>(m, "Surrogate")
      .def(py::init<Eigen::MatrixXd, Eigen::VectorXd, Eigen::VectorXd,
                    Hyperparameters>(),
           py::arg("plan"), py::arg("y"), py::arg("intrinsic"), py::arg("hyper"))
      .def("predict", &Surrogate::predict, py::arg("d"))
      .def("mse", &Surrogate::mse, py::arg("d"), py::arg("lambda_at_d"))
      .def("size", &Surrogate::size)
      .def("dim", &Surrogate::dim)
      .def_property_readonly("plan", &Surrogate::plan)
      .def_property_readonly("y", &Surrogate::y)
      .def_property_readonly("intrinsic", &Surrogate::intrinsic)
      .def_property_readonly("hyper", &Surrogate::hyper)
      .def_property_readonly("mu_hat", &Surrogate::mu_hat)
      .def_property_readonly("sigma2_hat", &Surrogate::sigma2_hat)
      .def_property_readonly("nugget", &Surrogate::nugget)
      .def_property_readonly("log_likelihood", &Surrogate::log_likelihood);

  m.def("correlation", &correlation, py::arg("a"), py::arg("b"),
        py::arg("hyper"));
  m.def("profile_loglik", &profile_loglik, py::arg("plan"), py::arg("y"),
        py::arg("intrinsic"), py::arg("hyper"));
  m.def("fit", &fit, py::arg("plan"), py::arg("y"), py::arg("intrinsic"),
        py::arg("options"), py::arg("rng"));
  m.def("fit_with", &fit_with, py::arg("plan"), py::arg("y"),
        py::arg("intrinsic"), py::arg("hyper"));

  py::class_<InnerOptions>(m, "InnerOptions")
      .def(py::init<>())
      .def_readwrite("probes_per_dim", &InnerOptions::probes_per_dim)
      .def_readwrite("starts", &InnerOptions::starts)
      .def_readwrite("local_evals", &InnerOptions::local_evals)
      .def_readwrite("local_tol", &InnerOptions::local_tol);

  py::class_<InfillProposal>(m, "InfillProposal")
      .def_readonly("point", &InfillProposal::point)
      .def_readonly("aei", &InfillProposal::aei)
      .def_readonly("flat", &InfillProposal::flat);

  m.def("effective_best", &effective_best, py::arg("model"), py::arg("alpha"));
  m.def("expected_improvement", &expected_improvement, py::arg("y_hat"),
        py::arg("s"), py::arg("y_star"));
  m.def("aei",
        py::overload_cast<const Surrogate&, const Eigen::VectorXd&, double,
                          double>(&aei),
        py::arg("model"), py::arg("d"), py::arg("lambda_at_d"), py::arg("alpha"));
  m.def("maximize_aei", &maximize_aei, py::arg("model"), py::arg("lambda_fn"),
        py::arg("alpha"), py::arg("options"), py::arg("rng"));

  py::class_<AdaptiveConfig>(m, "AdaptiveConfig")
      .def(py::init<>())
      .def_readwrite("sigma2_target", &AdaptiveConfig::sigma2_target)
      .def_readwrite("sigma2_min", &AdaptiveConfig::sigma2_min)
      .def_readwrite("r_hc", &AdaptiveConfig::r_hc)
      .def_readwrite("a1", &AdaptiveConfig::a1)
      .def_readwrite("a2", &AdaptiveConfig::a2)
      .def_readwrite("a3", &AdaptiveConfig::a3)
      .def_readwrite("a4", &AdaptiveConfig::a4)
      .def_readwrite("schedule", &AdaptiveConfig::schedule);

  py::enum_<PointStatus>(m, "PointStatus")
      .value("IN_PLAN", PointStatus::kInPlan)
      .value("NEW_INFILL", PointStatus::kNewInfill);

  m.def("count_close", &count_close, py::arg("plan"), py::arg("q"),
        py::arg("r_hc"));
  m.def("decay_exponent", &decay_exponent, py::arg("n"), py::arg("n_close"),
        py::arg("config"));
  m.def("adaptive_target", &adaptive_target, py::arg("n"), py::arg("n_close"),
        py::arg("config"));
  m.def("lambda_for", &lambda_for, py::arg("status"), py::arg("n_close"),
        py::arg("n"), py::arg("config"));

  py::enum_<TargetMode>(m, "TargetMode")
      .value("ADAPTIVE", TargetMode::kAdaptive)
      .value("CONSTANT", TargetMode::kConstant);

  py::class_<SegoConfig>(m, "SegoConfig")
      .def(py::init<>())
      .def_readwrite("n_s_factor", &SegoConfig::n_s_factor)
      .def_readwrite("nfe_budget", &SegoConfig::nfe_budget)
      .def_readwrite("alpha", &SegoConfig::alpha)
      .def_readwrite("mode", &SegoConfig::mode)
      .def_readwrite("constant_target", &SegoConfig::constant_target)
      .def_readwrite("adaptive", &SegoConfig::adaptive)
      .def_readwrite("fit", &SegoConfig::fit)
      .def_readwrite("inner", &SegoConfig::inner)
      .def_readwrite("seed", &SegoConfig::seed);

  py::class_<TraceRow>(m, "TraceRow")
      .def_readonly("iter", &TraceRow::iter)
      .def_readonly("nfe_cum", &TraceRow::nfe_cum)
      .def_readonly("point", &TraceRow::point)
      .def_readonly("n_close", &TraceRow::n_close)
      .def_readonly("lambda_", &TraceRow::lambda)
      .def_readonly("n_r", &TraceRow::n_r)
      .def_readonly("mean", &TraceRow::mean)
      .def_readonly("err_var", &TraceRow::err_var)
      .def_readonly("aei", &TraceRow::aei);

  py::class_<RunReport>(m, "RunReport")
      .def_readonly("best_design", &RunReport::best_design)
      .def_readonly("best_estimate", &RunReport::best_estimate)
      .def_readonly("nfe_used", &RunReport::nfe_used)
      .def_readonly("trace", &RunReport::trace)
      .def_readonly("seed", &RunReport::seed);

  m.def(
      "run_sego",
      [](const StochasticProblem& problem, const SegoConfig& config,
         RngStream& rng) { return run(problem, config, rng); },
      py::arg("problem"), py::arg("config"), py::arg("rng"));

  py::class_<LocalSearchResult>(m, "LocalSearchResult")
      .def_readonly("point", &LocalSearchResult::point)
      .def_readonly("value", &LocalSearchResult::value)
      .def_readonly("evals", &LocalSearchResult::evals);

  m.def("nelder_mead_bounded", &nelder_mead_bounded, py::arg("f"),
        py::arg("start"), py::arg("tol"), py::arg("max_evals"));
  m.def("parzen_density", &parzen_density, py::arg("history"), py::arg("s"),
        py::arg("beta_o"));
  m.def("restart_point", &restart_point, py::arg("history"), py::arg("dim"),
        py::arg("n_candidates"), py::arg("beta_o"), py::arg("rng"));

  py::class_<GbnmConfig>(m, "GbnmConfig")
      .def(py::init<>())
      .def_readwrite("nfe_budget", &GbnmConfig::nfe_budget)
      .def_readwrite("beta_o", &GbnmConfig::beta_o)
      .def_readwrite("n_candidates", &GbnmConfig::n_candidates)
      .def_readwrite("nr_max", &GbnmConfig::nr_max)
      .def_readwrite("simplex_tol", &GbnmConfig::simplex_tol)
      .def_readwrite("max_local_evals", &GbnmConfig::max_local_evals)
      .def_readwrite("schedule", &GbnmConfig::schedule)
      .def_readwrite("seed", &GbnmConfig::seed);

  m.def("run_gbnm", &run_gbnm, py::arg("problem"), py::arg("matched_target"),
        py::arg("config"), py::arg("rng"));

  py::class_<StructureRealization>(m, "StructureRealization")
      .def(py::init<>())
      .def_readwrite("story_m", &StructureRealization::story_m)
      .def_readwrite("story_c", &StructureRealization::story_c)
      .def_readwrite("story_k", &StructureRealization::story_k)
      .def_readwrite("tmd_m", &StructureRealization::tmd_m)
      .def_readwrite("tmd_c", &StructureRealization::tmd_c)
      .def_readwrite("tmd_k", &StructureRealization::tmd_k)
      .def("stories", &StructureRealization::stories);

  py::class_<ExcitationSpec>(m, "ExcitationSpec")
      .def(py::init<>())
      .def_readwrite("s0", &ExcitationSpec::s0)
      .def_readwrite("omega_f", &ExcitationSpec::omega_f)
      .def_readwrite("xi_f", &ExcitationSpec::xi_f);

  py::class_<ReliabilitySpec>(m, "ReliabilitySpec")
      .def(py::init<>())
      .def_readwrite("barrier", &ReliabilitySpec::barrier)
      .def_readwrite("t_design", &ReliabilitySpec::t_design)
      .def_readwrite("nu", &ReliabilitySpec::nu)
      .def_readwrite("t_event", &ReliabilitySpec::t_event);

  py::class_<ResponseStats>(m, "ResponseStats")
      .def_readonly("stable", &ResponseStats::stable)
      .def_readonly("sigma_z", &ResponseStats::sigma_z)
      .def_readonly("sigma_zdot", &ResponseStats::sigma_zdot);

  m.def("kanai_tajimi_psd", &kanai_tajimi_psd, py::arg("omega"), py::arg("spec"));
  m.def("solve_continuous_lyapunov", &solve_continuous_lyapunov, py::arg("a"),
        py::arg("q"));
  m.def("response_stats", &response_stats, py::arg("realization"),
        py::arg("spec"));
  m.def("upcrossing_rate", &upcrossing_rate, py::arg("sigma_z"),
        py::arg("sigma_zdot"), py::arg("b"));
  m.def("event_failure_probability", &event_failure_probability,
        py::arg("rate"), py::arg("t_event"));
  m.def("failure_probability", &failure_probability, py::arg("p_event"),
        py::arg("nu"), py::arg("t_design"));
  m.def("reliability_index", &reliability_index, py::arg("p_f"));
  m.def("tmd_phi", &tmd_phi, py::arg("d"), py::arg("x"), py::arg("exc"),
        py::arg("rel"));

  m.def("percentile", &percentile, py::arg("values"), py::arg("q"));
  m.def(
      "run_experiment_json",
      [](const std::string& config_json) {
        ExperimentConfig config =
            config_from_json(nlohmann::json::parse(config_json));
        auto summaries = run_experiment(config);
        nlohmann::json out;
        for (const auto& [name, sum] : summaries) {
          out[name] = {{"bests", sum.bests},
                       {"nfe", sum.nfe},
                       {"mean", sum.mean},
                       {"p5", sum.p5},
                       {"p95", sum.p95},
                       {"mean_nfe", sum.mean_nfe}};
        }
        return out.dump();
      },
      py::arg("config_json"),
      "Runs a JSON experiment config and returns the per-method summaries as "
      "JSON text.");
}
