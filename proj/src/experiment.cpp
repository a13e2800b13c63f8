#include "segopt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace segopt {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_methods(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    std::string tok = s.substr(pos, next - pos);
    if (!tok.empty()) out.push_back(tok);
    pos = next + 1;
  }
  return out;
}

void check_method(const std::string& m) {
  if (m != "sego-adaptive" && m != "sego-constant" && m != "gbnm")
    throw std::invalid_argument("unknown method '" + m + "'");
}

StochasticProblem build_problem(const ExperimentConfig& config) {
  return make_problem(config.problem, config.sigma_x, config.barrier);
}

void check_keys(const nlohmann::json& j, const char* where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw std::invalid_argument(std::string(where) + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) { known = true; break; }
    if (!known)
      throw std::invalid_argument(std::string("unknown key '") + key + "' in " + where);
  }
}

}  // namespace

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile: empty sample");
  if (q < 0.0 || q > 100.0) throw std::invalid_argument("percentile: q outside [0, 100]");
  std::sort(values.begin(), values.end());
  double h = (static_cast<double>(values.size()) - 1.0) * q / 100.0;
  auto lo = static_cast<std::size_t>(std::floor(h));
  auto hi = std::min(lo + 1, values.size() - 1);
  double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  check_keys(j, "config",
             {"name", "problem", "sigma_x", "barrier", "method", "nfe_budget",
              "runs", "base_seed", "out_dir", "sego", "gbnm"});
  ExperimentConfig c;
  c.name = j.value("name", c.name);
  c.problem = j.value("problem", c.problem);
  c.sigma_x = j.value("sigma_x", c.sigma_x);
  c.barrier = j.value("barrier", c.barrier);
  if (j.contains("method")) {
    if (j["method"].is_array())
      c.methods = j["method"].get<std::vector<std::string>>();
    else
      c.methods = split_methods(j["method"].get<std::string>());
  }
  c.nfe_budget = j.value("nfe_budget", c.nfe_budget);
  c.runs = j.value("runs", c.runs);
  c.base_seed = j.value("base_seed", c.base_seed);
  c.out_dir = j.value("out_dir", c.out_dir);

  if (j.contains("sego")) {
    const auto& s = j["sego"];
    check_keys(s, "config.sego",
               {"n_s_factor", "alpha", "constant_target", "adaptive", "fit", "inner"});
    c.sego.n_s_factor = s.value("n_s_factor", c.sego.n_s_factor);
    c.sego.alpha = s.value("alpha", c.sego.alpha);
    c.sego.constant_target = s.value("constant_target", c.sego.constant_target);
    if (s.contains("adaptive")) {
      const auto& a = s["adaptive"];
      check_keys(a, "config.sego.adaptive",
                 {"sigma2_target", "sigma2_min", "r_hc", "a1", "a2", "a3", "a4",
                  "batch_initial", "batch_growth"});
      auto& ac = c.sego.adaptive;
      ac.sigma2_target = a.value("sigma2_target", ac.sigma2_target);
      ac.sigma2_min = a.value("sigma2_min", ac.sigma2_min);
      ac.r_hc = a.value("r_hc", ac.r_hc);
      ac.a1 = a.value("a1", ac.a1);
      ac.a2 = a.value("a2", ac.a2);
      ac.a3 = a.value("a3", ac.a3);
      ac.a4 = a.value("a4", ac.a4);
      ac.schedule.initial = a.value("batch_initial", ac.schedule.initial);
      ac.schedule.growth = a.value("batch_growth", ac.schedule.growth);
    }
    if (s.contains("fit")) {
      const auto& f = s["fit"];
      check_keys(f, "config.sego.fit",
                 {"particles", "iterations", "fit_p", "polish_sweeps"});
      c.sego.fit.particles = f.value("particles", c.sego.fit.particles);
      c.sego.fit.iterations = f.value("iterations", c.sego.fit.iterations);
      c.sego.fit.fit_p = f.value("fit_p", c.sego.fit.fit_p);
      c.sego.fit.polish_sweeps = f.value("polish_sweeps", c.sego.fit.polish_sweeps);
    }
    if (s.contains("inner")) {
      const auto& i = s["inner"];
      check_keys(i, "config.sego.inner",
                 {"probes_per_dim", "starts", "local_evals", "local_tol"});
      c.sego.inner.probes_per_dim = i.value("probes_per_dim", c.sego.inner.probes_per_dim);
      c.sego.inner.starts = i.value("starts", c.sego.inner.starts);
      c.sego.inner.local_evals = i.value("local_evals", c.sego.inner.local_evals);
      c.sego.inner.local_tol = i.value("local_tol", c.sego.inner.local_tol);
    }
  }
  if (j.contains("gbnm")) {
    const auto& g = j["gbnm"];
    check_keys(g, "config.gbnm",
               {"beta_o", "n_candidates", "nr_max", "simplex_tol",
                "max_local_evals", "batch_initial", "batch_growth",
                "matched_target"});
    c.gbnm.beta_o = g.value("beta_o", c.gbnm.beta_o);
    c.gbnm.n_candidates = g.value("n_candidates", c.gbnm.n_candidates);
    c.gbnm.nr_max = g.value("nr_max", c.gbnm.nr_max);
    c.gbnm.simplex_tol = g.value("simplex_tol", c.gbnm.simplex_tol);
    c.gbnm.max_local_evals = g.value("max_local_evals", c.gbnm.max_local_evals);
    c.gbnm.schedule.initial = g.value("batch_initial", c.gbnm.schedule.initial);
    c.gbnm.schedule.growth = g.value("batch_growth", c.gbnm.schedule.growth);
    c.gbnm_matched_target = g.value("matched_target", c.gbnm_matched_target);
  }
  for (const auto& m : c.methods) check_method(m);
  return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["problem"] = c.problem;
  if (!std::isnan(c.sigma_x)) j["sigma_x"] = c.sigma_x;
  j["barrier"] = c.barrier;
  j["method"] = c.methods;
  j["nfe_budget"] = c.nfe_budget;
  j["runs"] = c.runs;
  j["base_seed"] = c.base_seed;
  j["out_dir"] = c.out_dir;
  j["sego"] = {
      {"n_s_factor", c.sego.n_s_factor},
      {"alpha", c.sego.alpha},
      {"constant_target", c.sego.constant_target},
      {"adaptive",
       {{"sigma2_target", c.sego.adaptive.sigma2_target},
        {"sigma2_min", c.sego.adaptive.sigma2_min},
        {"r_hc", c.sego.adaptive.r_hc},
        {"a1", c.sego.adaptive.a1},
        {"a2", c.sego.adaptive.a2},
        {"a3", c.sego.adaptive.a3},
        {"a4", c.sego.adaptive.a4},
        {"batch_initial", c.sego.adaptive.schedule.initial},
        {"batch_growth", c.sego.adaptive.schedule.growth}}},
      {"fit",
       {{"particles", c.sego.fit.particles},
        {"iterations", c.sego.fit.iterations},
        {"fit_p", c.sego.fit.fit_p},
        {"polish_sweeps", c.sego.fit.polish_sweeps}}},
      {"inner",
       {{"probes_per_dim", c.sego.inner.probes_per_dim},
        {"starts", c.sego.inner.starts},
        {"local_evals", c.sego.inner.local_evals},
        {"local_tol", c.sego.inner.local_tol}}}};
  j["gbnm"] = {{"beta_o", c.gbnm.beta_o},
               {"n_candidates", c.gbnm.n_candidates},
               {"nr_max", c.gbnm.nr_max},
               {"simplex_tol", c.gbnm.simplex_tol},
               {"max_local_evals", c.gbnm.max_local_evals},
               {"batch_initial", c.gbnm.schedule.initial},
               {"batch_growth", c.gbnm.schedule.growth},
               {"matched_target", c.gbnm_matched_target}};
  return j;
}

RunReport run_method(const ExperimentConfig& config, const std::string& method,
                     int run_index) {
  check_method(method);
  StochasticProblem problem = build_problem(config);
  std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(run_index);
  RngStream rng(seed);
  if (method == "gbnm") {
    GbnmConfig g = config.gbnm;
    g.nfe_budget = config.nfe_budget;
    g.seed = seed;
    return run_gbnm(problem, config.gbnm_matched_target, g, rng);
  }
  SegoConfig s = config.sego;
  s.nfe_budget = config.nfe_budget;
  s.seed = seed;
  s.mode = method == "sego-constant" ? TargetMode::kConstant : TargetMode::kAdaptive;
  return run(problem, s, rng);
}

void write_trace_csv(const std::filesystem::path& path, const RunReport& report,
                     const StochasticProblem& problem) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  const int n = problem.dim();
  out << "iter,nfe_cum";
  for (int j = 0; j < n; ++j) out << ",d" << (j + 1);
  out << ",n_r,lambda,mean,err_var,aei\n";
  for (const auto& row : report.trace) {
    Eigen::VectorXd d = problem.space().denormalize(row.point);
    out << row.iter << ',' << row.nfe_cum;
    for (int j = 0; j < n; ++j) out << ',' << fmt(d[j]);
    out << ',' << row.n_r << ',' << fmt(row.lambda) << ',' << fmt(row.mean) << ','
        << fmt(row.err_var) << ',' << fmt(row.aei) << '\n';
  }
}

std::map<std::string, MethodSummary> run_experiment(const ExperimentConfig& config) {
  if (config.runs < 1) throw std::invalid_argument("run_experiment: need at least one run");
  if (config.methods.empty()) throw std::invalid_argument("run_experiment: no methods");
  for (const auto& m : config.methods) check_method(m);

  struct Task {
    std::string method;
    int run = 0;
  };
  std::vector<Task> tasks;
  for (const auto& m : config.methods)
    for (int i = 0; i < config.runs; ++i) tasks.push_back({m, i});

  std::vector<RunReport> reports(tasks.size());
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t t = cursor.fetch_add(1);
      if (t >= tasks.size()) return;
      try {
        reports[t] = run_method(config, tasks[t].method, tasks[t].run);
      } catch (const std::exception& e) {
        errors[t] = e.what();
      }
    }
  };
  unsigned n_threads = std::min<unsigned>(std::thread::hardware_concurrency(),
                                          static_cast<unsigned>(tasks.size()));
  n_threads = std::max(n_threads, 1u);
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (std::size_t t = 0; t < tasks.size(); ++t)
    if (!errors[t].empty())
      std::fprintf(stderr, "warning: run %d (%s) failed: %s\n", tasks[t].run,
                   tasks[t].method.c_str(), errors[t].c_str());

  StochasticProblem problem = build_problem(config);
  const bool multi = config.methods.size() > 1;
  std::map<std::string, MethodSummary> summaries;
  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    const std::string& method = config.methods[m];
    std::filesystem::path dir = std::filesystem::path(config.out_dir) /
                                (multi ? config.name + "_" + method : config.name);
    std::filesystem::create_directories(dir);

    MethodSummary sum;
    sum.method = method;
    nlohmann::json per_run = nlohmann::json::array();
    for (int i = 0; i < config.runs; ++i) {
      std::size_t t = m * static_cast<std::size_t>(config.runs) + i;
      nlohmann::json r;
      r["run"] = i;
      if (!errors[t].empty()) {
        r["error"] = errors[t];
        per_run.push_back(r);
        continue;
      }
      const RunReport& rep = reports[t];
      write_trace_csv(dir / ("run_" + std::to_string(i) + ".csv"), rep, problem);
      sum.bests.push_back(rep.best_estimate);
      sum.nfe.push_back(rep.nfe_used);
      r["seed"] = rep.seed;
      r["best_design"] =
          std::vector<double>(rep.best_design.begin(), rep.best_design.end());
      r["best_estimate"] = rep.best_estimate;
      r["nfe_used"] = rep.nfe_used;
      per_run.push_back(r);
    }
    if (sum.bests.empty())
      throw std::runtime_error("every run of method '" + method + "' failed");
    sum.mean = estimate_mean(sum.bests);
    sum.p5 = percentile(sum.bests, 5.0);
    sum.p95 = percentile(sum.bests, 95.0);
    double acc = 0.0;
    for (long long v : sum.nfe) acc += static_cast<double>(v);
    sum.mean_nfe = acc / static_cast<double>(sum.nfe.size());

    nlohmann::json j;
    j["experiment"] = config.name;
    j["method"] = method;
    j["config"] = config_to_json(config);
    j["per_run"] = per_run;
    j["best_mean"] = sum.mean;
    j["best_p5"] = sum.p5;
    j["best_p95"] = sum.p95;
    j["mean_nfe"] = sum.mean_nfe;
    j["quantiles"] = "linear interpolation at rank (n-1)*q/100";
    std::ofstream out(dir / "summary.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot open summary.json under " + dir.string());
    out << j.dump(2) << '\n';
    summaries[method] = std::move(sum);
  }
  return summaries;
}

}  // namespace segopt
