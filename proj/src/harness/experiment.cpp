#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "vip/harness.hpp"

namespace vip {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json vec_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

std::optional<Vector> try_oracle(const ProblemInstance& p) {
  if (p.limit_case()) return std::nullopt;
  try {
    return oracle_solve(p, 1e-12);
  } catch (const Error&) {
    return std::nullopt;
  }
}

int exit_for(RunStatus s) {
  switch (s) {
    case RunStatus::Converged:
      return exit_code::kConverged;
    case RunStatus::MaxIter:
      return exit_code::kBudget;
    case RunStatus::Diverged:
      return exit_code::kDiverged;
  }
  return exit_code::kBudget;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot write file");
  out << text;
}

struct ImplicitRow {
  double t = 0.0;
  double err_norm = 0.0;
  Vector x_t;
  double vip_res = 0.0;
  double fix_res = 0.0;
};

}  // namespace

json to_json(const SummaryReport& s) {
  json j{{"mode", s.mode},
         {"status", s.status},
         {"iterations", s.iterations},
         {"conditions", to_json(s.conditions)},
         {"wall_time_s", s.wall_time_s},
         {"problem_hash", hex(s.problem_hash)},
         {"exit_code", s.exit_code},
         {"files", s.files}};
  j["final_vip_residual"] = s.final_vip_residual ? json(*s.final_vip_residual) : json(nullptr);
  j["final_fix_residual"] = s.final_fix_residual ? json(*s.final_fix_residual) : json(nullptr);
  j["distance_to_oracle"] = s.distance_to_oracle ? json(*s.distance_to_oracle) : json(nullptr);
  j["final_iterate"] = s.final_iterate.size() ? vec_json(s.final_iterate) : json(nullptr);
  return j;
}

void write_trace_csv(const IterationTrace& trace, std::uint64_t hash, std::ostream& out) {
  out << "# problem_hash=" << hex(hash) << '\n';
  out << "n,alpha,beta,err_norm,step_norm,fix_residual,dist_ref\n";
  for (const auto& r : trace.records) {
    out << r.n << ',' << fmt17(r.alpha) << ',' << fmt17(r.beta) << ',' << fmt17(r.err_norm) << ','
        << fmt17(r.step_norm) << ',' << fmt17(r.fix_residual) << ',';
    if (r.dist_ref) out << fmt17(*r.dist_ref);
    out << '\n';
  }
}

SummaryReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const auto& p = cfg.problem;
  const auto hash = problem_hash(cfg);
  const std::filesystem::path dir(cfg.output);

  SummaryReport s;
  s.mode = std::string(to_string(cfg.mode));
  s.problem_hash = hash;
  ConditionOptions copts;
  copts.literal_h2_alpha_ratio = cfg.literal_h2;
  s.conditions = check_conditions(cfg.schedules.alpha, cfg.schedules.beta, cfg.schedules.error, copts);

  auto emit = [&](const std::string& name, const std::string& text) {
    if (!opts.write_files) return;
    std::filesystem::create_directories(dir);
    write_text(dir / name, text);
    s.files.push_back(name);
  };

  auto finish = [&]() {
    s.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (opts.write_files) {
      s.files.push_back("summary.json");
      std::filesystem::create_directories(dir);
      write_text(dir / "summary.json", to_json(s).dump(2) + "\n");
    }
    return s;
  };

  if (cfg.mode == Mode::Validate) {
    s.status = s.conditions.applicable ? "applicable" : "not_applicable";
    s.exit_code = s.conditions.applicable ? exit_code::kConverged : exit_code::kNotApplicable;
    return finish();
  }
  if (opts.strict && !s.conditions.applicable) {
    s.status = "not_applicable";
    s.exit_code = exit_code::kNotApplicable;
    return finish();
  }

  switch (cfg.mode) {
    case Mode::Hpa: {
      const std::optional<Vector> oracle = try_oracle(p);
      SolverConfig sc = cfg.solver_config();
      sc.record_iterates = false;
      if (!sc.reference) sc.reference = oracle;
      const IterationTrace trace = run_hpa(sc);
      std::ostringstream csv;
      write_trace_csv(trace, hash, csv);
      emit("trace.csv", csv.str());
      s.status = std::string(to_string(trace.status));
      s.iterations = trace.iterations();
      s.final_iterate = trace.final_iterate;
      s.final_fix_residual = trace.final_fix_residual;
      s.final_vip_residual = vip_residual(p, trace.final_iterate, default_oracle_step(p));
      if (oracle) s.distance_to_oracle = (trace.final_iterate - *oracle).norm();
      s.exit_code = exit_for(trace.status);
      break;
    }
    case Mode::Oracle: {
      try {
        const Vector q = oracle_solve(p, cfg.stop_tol);
        s.status = "converged";
        s.final_iterate = q;
        s.final_vip_residual = vip_residual(p, q, default_oracle_step(p));
        s.final_fix_residual = fix_residual(p.T(), q);
        s.distance_to_oracle = 0.0;
      } catch (const ConvergenceError& e) {
        s.status = "max_iter";
        s.final_iterate = e.last_iterate();
        s.exit_code = exit_code::kBudget;
      }
      break;
    }
    case Mode::ImplicitSweep: {
      const std::optional<Vector> ref = cfg.reference ? cfg.reference : try_oracle(p);
      auto solve_one = [&](std::size_t i) {
        ImplicitRow row;
        row.t = cfg.sweep_t[i];
        row.err_norm = cfg.implicit_error.coefficient * std::pow(row.t, cfg.implicit_error.power);
        const Vector e = row.err_norm == 0.0
                             ? Vector::Zero(p.dim())
                             : Vector(row.err_norm * direction_at(cfg.implicit_direction, i, p.dim()));
        row.x_t = implicit_solve(p, row.t, e, cfg.implicit_tol);
        row.vip_res = vip_residual(p, row.x_t, default_oracle_step(p));
        row.fix_res = fix_residual(p.T(), row.x_t);
        return row;
      };
      std::vector<ImplicitRow> rows;
      try {
        if (cfg.parallel) {
          std::vector<std::future<ImplicitRow>> jobs;
          for (std::size_t i = 0; i < cfg.sweep_t.size(); ++i) {
            jobs.push_back(std::async(std::launch::async, solve_one, i));
          }
          for (auto& j : jobs) rows.push_back(j.get());
        } else {
          for (std::size_t i = 0; i < cfg.sweep_t.size(); ++i) rows.push_back(solve_one(i));
        }
      } catch (const ConvergenceError& e) {
        s.status = "max_iter";
        s.final_iterate = e.last_iterate();
        s.exit_code = exit_code::kBudget;
        break;
      }
      std::ostringstream csv;
      csv << "# problem_hash=" << hex(hash) << '\n' << "t,err_norm,dist_ref,vip_residual,fix_residual\n";
      for (const auto& r : rows) {
        csv << fmt17(r.t) << ',' << fmt17(r.err_norm) << ',';
        if (ref) csv << fmt17((r.x_t - *ref).norm());
        csv << ',' << fmt17(r.vip_res) << ',' << fmt17(r.fix_res) << '\n';
      }
      emit("implicit.csv", csv.str());
      s.status = "converged";
      s.iterations = rows.size();
      s.final_iterate = rows.back().x_t;
      s.final_vip_residual = rows.back().vip_res;
      s.final_fix_residual = rows.back().fix_res;
      if (ref) s.distance_to_oracle = (rows.back().x_t - *ref).norm();
      break;
    }
    case Mode::RegularizationSweep: {
      const auto records = regularization_path(cfg.solver_config(), cfg.sweep_eps, cfg.parallel);
      std::ostringstream csv;
      csv << "# problem_hash=" << hex(hash) << '\n'
          << "epsilon,norm_q_eps,vip_eps_residual,dist_ref,iterations,status";
      for (Eigen::Index i = 0; i < p.dim(); ++i) csv << ",q" << i;
      csv << '\n';
      RunStatus worst = RunStatus::Converged;
      for (const auto& r : records) {
        csv << fmt17(r.epsilon) << ',' << fmt17(r.norm_q_eps) << ',' << fmt17(r.vip_eps_residual) << ',';
        if (cfg.reference) csv << fmt17((r.q_eps - *cfg.reference).norm());
        csv << ',' << r.iterations << ',' << to_string(r.status);
        for (Eigen::Index i = 0; i < p.dim(); ++i) csv << ',' << fmt17(r.q_eps[i]);
        csv << '\n';
        if (r.status == RunStatus::Diverged) {
          worst = RunStatus::Diverged;
        } else if (r.status == RunStatus::MaxIter && worst == RunStatus::Converged) {
          worst = RunStatus::MaxIter;
        }
      }
      emit("regularization.csv", csv.str());
      const auto& last = records.back();
      s.status = std::string(to_string(worst));
      s.iterations = last.iterations;
      s.final_iterate = last.q_eps;
      s.final_vip_residual = last.vip_eps_residual;
      s.final_fix_residual = fix_residual(p.T(), last.q_eps);
      if (cfg.reference) s.distance_to_oracle = (last.q_eps - *cfg.reference).norm();
      s.exit_code = exit_for(worst);
      break;
    }
    case Mode::Validate:
      break;
  }
  return finish();
}

}  // namespace vip
