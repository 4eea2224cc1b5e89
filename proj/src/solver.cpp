#include "vip/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>

namespace vip {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

// Iterations a contraction with coefficient `rate` needs to shrink an
// initial step `first_step` to the a-posteriori threshold `threshold`.
std::size_t contraction_budget(double rate, double first_step, double threshold) {
  if (first_step <= threshold) return 1;
  const double k = std::log(threshold / first_step) / std::log(rate);
  if (!std::isfinite(k) || k > 1e12) return static_cast<std::size_t>(1e12);
  return static_cast<std::size_t>(std::ceil(k)) + 2;
}

}  // namespace

double delta0_star(const ProblemInstance& p) {
  const double gap = p.eta() - p.alpha();
  if (!(gap > 0.0)) {
    throw DomainError(
        "delta0_star: alpha == eta (limit case); use the regularization path");
  }
  return 2.0 * gap / (p.kappa() * p.kappa());
}

double sigma0(const ProblemInstance& p, double delta0) {
  const double star = delta0_star(p);
  require(delta0 > 0.0 && delta0 < star, "sigma0: delta0 out of range (0, delta0_star)");
  return p.eta() - p.alpha() - p.kappa() * p.kappa() * delta0 / 2.0;
}

double default_delta0(const ProblemInstance& p) { return delta0_star(p) / 2.0; }

Vector st_apply(const ProblemInstance& p, double t, const Vector& x) {
  require(t > 0.0 && t < delta0_star(p), "st_apply: t out of range (0, delta0_star)");
  const Vector tx = apply_T(p.T(), x);
  return t * apply_f(p.f(), x) + tx - t * apply_F(p.F(), tx);
}

Vector hpa_step(const ProblemInstance& p, double alpha_n, double beta_n, const Vector& e_n,
                const Vector& x_n) {
  require(beta_n >= 0.0 && beta_n <= 1.0, "hpa_step: beta_n out of range [0, 1]");
  require(alpha_n > 0.0 && alpha_n <= 1.0, "hpa_step: alpha_n out of range (0, 1]");
  require_dim(e_n, p.dim(), "hpa_step");
  if (beta_n == 1.0) return x_n;
  const Vector inner_point = project(p.Q(), st_apply(p, alpha_n, x_n) + e_n);
  return beta_n * x_n + (1.0 - beta_n) * inner_point;
}

// --- explicit iteration -------------------------------------------------------

double effective_delta0(const SolverConfig& cfg) {
  return cfg.delta0 ? *cfg.delta0 : default_delta0(cfg.problem);
}

void validate(const SolverConfig& cfg) {
  const auto& p = cfg.problem;
  require_dim(cfg.x0, p.dim(), "solver config x0");
  require(cfg.stop_tol > 0.0, "solver config: stop_tol must be positive");
  require(contains(p.Q(), cfg.x0, 1e-10), "solver config: x0 does not lie in Q");
  const double star = delta0_star(p);
  const double d0 = effective_delta0(cfg);
  require(d0 > 0.0 && d0 < star, "delta0 out of range (0, delta0_star)");
  if (cfg.reference) require_dim(*cfg.reference, p.dim(), "solver config reference");
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged:
      return "converged";
    case RunStatus::MaxIter:
      return "max_iter";
    case RunStatus::Diverged:
      return "diverged";
  }
  return "max_iter";
}

IterationTrace run_hpa(const SolverConfig& cfg) {
  validate(cfg);
  const auto& p = cfg.problem;
  const auto& sch = cfg.schedules;
  const double d0 = effective_delta0(cfg);

  IterationTrace trace;
  trace.delta0 = d0;
  trace.conditions = check_conditions(sch.alpha, sch.beta, sch.error, cfg.conditions);
  trace.records.reserve(std::min<std::size_t>(cfg.max_iter, 1u << 20));

  auto dist_ref = [&](const Vector& x) -> std::optional<double> {
    if (!cfg.reference) return std::nullopt;
    return (x - *cfg.reference).norm();
  };

  Vector x = cfg.x0;
  double fix_res = fix_residual(p.T(), x);
  for (std::size_t n = 0; n < cfg.max_iter; ++n) {
    const double raw_alpha = alpha_at(sch.alpha, n);
    const double a = std::min(raw_alpha, d0);
    const double b = beta_at(sch.beta, n);
    const Vector e = error_at(sch.error, sch.alpha, n, p.dim());

    Vector next = hpa_step(p, a, b, e, x);
    if (!all_finite(next)) {
      trace.status = RunStatus::Diverged;
      break;
    }
    const double step = (next - x).norm();
    const double next_fix_res = fix_residual(p.T(), next);

    IterationRecord rec;
    rec.n = n;
    if (cfg.record_iterates) rec.x = x;
    rec.alpha = a;
    rec.beta = b;
    rec.err_norm = e.norm();
    rec.step_norm = step;
    rec.fix_residual = fix_res;
    rec.dist_ref = dist_ref(x);
    rec.clamped = a < raw_alpha;
    if (rec.clamped) ++trace.clamped_steps;
    trace.records.push_back(std::move(rec));

    x = std::move(next);
    fix_res = next_fix_res;
    if (step <= cfg.stop_tol * a && fix_res <= cfg.stop_tol) {
      trace.status = RunStatus::Converged;
      break;
    }
  }
  IterationRecord terminal;
  terminal.n = trace.records.size();
  terminal.x = x;
  terminal.fix_residual = fix_res;
  terminal.dist_ref = dist_ref(x);
  trace.records.push_back(std::move(terminal));

  trace.final_iterate = x;
  trace.final_fix_residual = fix_res;
  trace.final_dist_ref = dist_ref(x);
  return trace;
}

// --- implicit scheme ----------------------------------------------------------

Vector implicit_solve(const ProblemInstance& p, double t, const Vector& e, double tol,
                      const ImplicitOptions& opts) {
  require(tol > 0.0, "implicit_solve: tol must be positive");
  require_dim(e, p.dim(), "implicit_solve");
  const double d0 = opts.delta0 ? *opts.delta0 : t;
  require(t > 0.0 && t <= d0, "implicit_solve: t out of range (0, delta0]");
  const double rate = 1.0 - t * sigma0(p, d0);

  auto map = [&](const Vector& x) { return project(p.Q(), st_apply(p, t, x) + e); };

  Vector x = project(p.Q(), opts.x_init ? *opts.x_init : Vector::Zero(p.dim()));
  Vector next = map(x);
  const double first_step = (next - x).norm();
  // ||x_k - x_t|| <= rate / (1 - rate) * ||x_k - x_{k-1}||
  const double threshold = tol * (1.0 - rate) / rate;
  const std::size_t budget = contraction_budget(rate, first_step, threshold);

  double step = first_step;
  for (std::size_t k = 1; k <= budget; ++k) {
    if (!all_finite(next)) {
      throw ConvergenceError("implicit_solve: non-finite iterate", x);
    }
    if (step <= threshold) return next;
    x = std::move(next);
    next = map(x);
    step = (next - x).norm();
  }
  throw ConvergenceError(
      "implicit_solve: iteration budget exceeded (mis-certified constants?)", next);
}

// --- oracle -------------------------------------------------------------------

double default_oracle_step(const ProblemInstance& p) {
  const double lg = p.kappa() + p.alpha();
  return (p.eta() - p.alpha()) / (lg * lg);
}

Vector oracle_solve(const ProblemInstance& p, double lambda, double tol,
                    std::optional<Vector> q_init) {
  require(tol > 0.0, "oracle_solve: tol must be positive");
  const double m = p.eta() - p.alpha();
  const double lg = p.kappa() + p.alpha();
  require(m > 0.0, "oracle_solve: g = F - f is not strongly monotone (limit case)");
  require(lambda > 0.0 && lambda < 2.0 * m / (lg * lg), "oracle_solve: lambda out of range");
  const double rate = std::sqrt(std::max(0.0, 1.0 - 2.0 * lambda * m + lambda * lambda * lg * lg));

  const ConvexSet& c = p.C();
  auto map = [&](const Vector& q) { return project(c, q - lambda * apply_g(p, q)); };

  Vector q = project(c, q_init ? *q_init : Vector::Zero(p.dim()));
  Vector next = map(q);
  double step = (next - q).norm();
  if (rate == 0.0) return next;
  const double threshold = tol * (1.0 - rate) / rate;
  const std::size_t budget = contraction_budget(rate, step, threshold);
  for (std::size_t k = 1; k <= budget; ++k) {
    if (!all_finite(next)) throw ConvergenceError("oracle_solve: non-finite iterate", q);
    if (step <= threshold) return next;
    q = std::move(next);
    next = map(q);
    const double prev = step;
    step = (next - q).norm();
    if (step > prev * (1.0 + 1e-9) && step > 1e3 * std::numeric_limits<double>::epsilon() *
                                                   std::max(1.0, next.norm())) {
      throw ConvergenceError(
          "oracle_solve: step grew; lambda too large or constants mis-certified", next);
    }
  }
  throw ConvergenceError("oracle_solve: iteration budget exceeded", next);
}

Vector oracle_solve(const ProblemInstance& p, double tol) {
  return oracle_solve(p, default_oracle_step(p), tol);
}

double vip_residual(const ProblemInstance& p, const Vector& q, double lambda) {
  require(lambda > 0.0, "vip_residual: lambda must be positive");
  return (q - project(p.C(), q - lambda * apply_g(p, q))).norm();
}

// --- regularization -------------------------------------------------------------

RegularizationRecord regularized_run(const SolverConfig& cfg, double eps) {
  require(cfg.problem.limit_case(), "regularized_run: problem is not flagged limit_case");
  require(eps > 0.0 && std::isfinite(eps), "regularized_run: eps must be positive");

  SolverConfig reg{cfg.problem.regularized(eps), cfg.schedules, cfg.x0, cfg.max_iter,
                   cfg.stop_tol, std::nullopt, cfg.reference, cfg.conditions,
                   false};
  const IterationTrace trace = run_hpa(reg);

  RegularizationRecord rec;
  rec.epsilon = eps;
  rec.q_eps = trace.final_iterate;
  rec.norm_q_eps = rec.q_eps.norm();
  rec.vip_eps_residual =
      vip_residual(reg.problem, rec.q_eps, default_oracle_step(reg.problem));
  rec.status = trace.status;
  rec.iterations = trace.iterations();
  return rec;
}

std::vector<RegularizationRecord> regularization_path(const SolverConfig& cfg,
                                                      const std::vector<double>& eps,
                                                      bool parallel) {
  require(!eps.empty(), "regularization_path: empty eps list");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    require(eps[i] > 0.0, "regularization_path: eps must be positive");
    if (i > 0) require(eps[i] < eps[i - 1], "regularization_path: eps must strictly decrease");
  }
  std::vector<RegularizationRecord> out;
  out.reserve(eps.size());
  if (!parallel) {
    for (double e : eps) out.push_back(regularized_run(cfg, e));
    return out;
  }
  std::vector<std::future<RegularizationRecord>> jobs;
  jobs.reserve(eps.size());
  for (double e : eps) {
    jobs.push_back(std::async(std::launch::async, [&cfg, e] { return regularized_run(cfg, e); }));
  }
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

// --- classical special cases ------------------------------------------------------

ClassicalScheme halpern_scheme(const NonexpansiveMap& t, const Vector& u) {
  return {ProblemInstance(ConvexSet::whole(t.dim()), t, LipschitzMap::constant(u),
                          StrongMonotoneMap::identity(t.dim())),
          BetaSchedule::constant(0.0)};
}

ClassicalScheme viscosity_scheme(const NonexpansiveMap& t, const LipschitzMap& f) {
  return {ProblemInstance(ConvexSet::whole(t.dim()), t, f,
                          StrongMonotoneMap::identity(t.dim())),
          BetaSchedule::constant(0.0)};
}

ClassicalScheme linear_operator_scheme(const NonexpansiveMap& t, const Vector& u,
                                       const Matrix& a) {
  return {ProblemInstance(ConvexSet::whole(t.dim()), t, LipschitzMap::constant(u),
                          StrongMonotoneMap::affine_spd(a, Vector::Zero(t.dim()))),
          BetaSchedule::constant(0.0)};
}

ClassicalScheme steepest_descent_scheme(const NonexpansiveMap& t, const StrongMonotoneMap& F) {
  return {ProblemInstance(ConvexSet::whole(t.dim()), t, LipschitzMap::zero(t.dim()), F),
          BetaSchedule::constant(0.0)};
}

ClassicalScheme general_viscosity_scheme(const NonexpansiveMap& t, const LipschitzMap& f,
                                         const StrongMonotoneMap& F) {
  return {ProblemInstance(ConvexSet::whole(t.dim()), t, f, F), BetaSchedule::constant(0.0)};
}

ClassicalScheme projected_viscosity_scheme(const ConvexSet& q, const NonexpansiveMap& t,
                                           const LipschitzMap& f, const StrongMonotoneMap& F) {
  return {ProblemInstance(q, t, f, F), BetaSchedule::constant(0.0)};
}

}  // namespace vip
