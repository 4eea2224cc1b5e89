#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "vip/core.hpp"
#include "vip/operators.hpp"
#include "vip/schedules.hpp"
#include "vip/sets.hpp"

namespace vip {

// --- constants of the contraction S_t ----------------------------------------

/// 2 (eta - alpha) / kappa^2. Throws DomainError for limit-case instances
/// (alpha == eta), which must go through the regularization path.
double delta0_star(const ProblemInstance& p);

/// eta - alpha - kappa^2 delta0 / 2, for delta0 in (0, delta0_star).
double sigma0(const ProblemInstance& p, double delta0);

/// Default delta0 = delta0_star / 2.
double default_delta0(const ProblemInstance& p);

/// S_t(x) = t f(x) + (I - t F) T x. A (1 - t sigma0)-contraction on Q for
/// t in (0, delta0].
Vector st_apply(const ProblemInstance& p, double t, const Vector& x);

/// One step of the perturbed hybrid iteration:
///   beta x + (1 - beta) P_Q(S_alpha(x) + e).
Vector hpa_step(const ProblemInstance& p, double alpha_n, double beta_n, const Vector& e_n,
                const Vector& x_n);

// --- explicit iteration ---------------------------------------------------------

struct Schedules {
  AlphaSchedule alpha;
  BetaSchedule beta;
  ErrorSchedule error;
};

struct SolverConfig {
  ProblemInstance problem;
  Schedules schedules;
  Vector x0;
  std::size_t max_iter = 100000;
  double stop_tol = 1e-8;
  /// Upper clamp for alpha_n; defaults to delta0_star / 2.
  std::optional<double> delta0;
  /// Point the trace measures distances to.
  std::optional<Vector> reference;
  ConditionOptions conditions;
  bool record_iterates = true;
};

/// Throws DomainError unless x0 lies in Q, delta0 lies in (0, delta0_star)
/// and stop_tol > 0.
void validate(const SolverConfig& cfg);

/// delta0 in effect for a configuration.
double effective_delta0(const SolverConfig& cfg);

enum class RunStatus { Converged, MaxIter, Diverged };

std::string_view to_string(RunStatus s);

struct IterationRecord {
  std::size_t n = 0;
  /// x_n; empty when the config disables iterate recording.
  Vector x;
  double alpha = 0.0;  ///< alpha_n after clamping
  double beta = 0.0;
  double err_norm = 0.0;
  double step_norm = 0.0;     ///< ||x_{n+1} - x_n||
  double fix_residual = 0.0;  ///< ||x_n - T x_n||
  std::optional<double> dist_ref;
  bool clamped = false;
};

struct IterationTrace {
  /// One record per step taken, followed by a terminal record for the final
  /// iterate (step, alpha, beta and error fields zero).
  std::vector<IterationRecord> records;
  Vector final_iterate;
  double final_fix_residual = 0.0;
  std::optional<double> final_dist_ref;
  RunStatus status = RunStatus::MaxIter;
  std::size_t clamped_steps = 0;
  double delta0 = 0.0;
  ConditionReport conditions;

  std::size_t iterations() const noexcept { return records.empty() ? 0 : records.size() - 1; }
};

/// Runs the perturbed hybrid iteration from cfg.x0. alpha_n is clamped to
/// delta0. Stops when ||x_{n+1} - x_n|| <= stop_tol * alpha_n and
/// ||x_{n+1} - T x_{n+1}|| <= stop_tol, or after max_iter steps. A
/// non-finite iterate ends the run with status Diverged and the last finite
/// iterate as final. Runs regardless of whether the conditions hold; the
/// verdict is reported in the trace.
IterationTrace run_hpa(const SolverConfig& cfg);

// --- implicit scheme --------------------------------------------------------------

struct ImplicitOptions {
  /// Defaults to project(Q, 0).
  std::optional<Vector> x_init;
  /// Defaults to t, which gives the tightest contraction certificate.
  std::optional<double> delta0;
};

/// The unique x_t = P_Q(S_t(x_t) + e), computed by Banach iteration to within
/// tol of the exact fixed point. Throws ConvergenceError if the a-priori
/// iteration budget is exceeded.
Vector implicit_solve(const ProblemInstance& p, double t, const Vector& e, double tol,
                      const ImplicitOptions& opts = {});

// --- oracle -----------------------------------------------------------------------

/// (eta - alpha) / (kappa + alpha)^2
double default_oracle_step(const ProblemInstance& p);

/// Projected-gradient fixed point q = P_C(q - lambda g(q)) with g = F - f,
/// accurate to tol. Independent of the S_t machinery. Requires
/// 0 < lambda < 2 (eta - alpha) / (kappa + alpha)^2.
Vector oracle_solve(const ProblemInstance& p, double lambda, double tol,
                    std::optional<Vector> q_init = std::nullopt);
Vector oracle_solve(const ProblemInstance& p, double tol);

/// Natural-map residual ||q - P_C(q - lambda g(q))||.
double vip_residual(const ProblemInstance& p, const Vector& q, double lambda);

// --- regularization (limit case) -------------------------------------------------

struct RegularizationRecord {
  double epsilon = 0.0;
  Vector q_eps;
  double norm_q_eps = 0.0;
  double vip_eps_residual = 0.0;
  RunStatus status = RunStatus::MaxIter;
  std::size_t iterations = 0;
};

/// Runs the iteration on F + eps I for a limit-case instance. The problem
/// inside cfg must be flagged limit_case; cfg.delta0 is ignored in favour of
/// the default for the regularized instance.
RegularizationRecord regularized_run(const SolverConfig& cfg, double eps);

/// regularized_run over a strictly decreasing list of positive eps. Runs in
/// parallel when `parallel` is set; results keep the input order.
std::vector<RegularizationRecord> regularization_path(const SolverConfig& cfg,
                                                      const std::vector<double>& eps,
                                                      bool parallel = false);

// --- classical special cases -------------------------------------------------------

/// A problem together with the averaging weights that reduce the hybrid
/// iteration to a classical scheme (all use beta_n = 0).
struct ClassicalScheme {
  ProblemInstance problem;
  BetaSchedule beta;
};

/// x_{n+1} = a_n u + (1 - a_n) T x_n on the whole space.
ClassicalScheme halpern_scheme(const NonexpansiveMap& t, const Vector& u);
/// x_{n+1} = a_n f(x_n) + (1 - a_n) T x_n, f a contraction.
ClassicalScheme viscosity_scheme(const NonexpansiveMap& t, const LipschitzMap& f);
/// x_{n+1} = a_n u + (I - a_n A) T x_n, A symmetric positive definite.
ClassicalScheme linear_operator_scheme(const NonexpansiveMap& t, const Vector& u,
                                       const Matrix& a);
/// x_{n+1} = (I - a_n F) T x_n (hybrid steepest descent).
ClassicalScheme steepest_descent_scheme(const NonexpansiveMap& t, const StrongMonotoneMap& F);
/// x_{n+1} = a_n f(x_n) + (I - a_n F) T x_n.
ClassicalScheme general_viscosity_scheme(const NonexpansiveMap& t, const LipschitzMap& f,
                                         const StrongMonotoneMap& F);
/// x_{n+1} = P_Q(a_n f(x_n) + (I - a_n F) T x_n).
ClassicalScheme projected_viscosity_scheme(const ConvexSet& q, const NonexpansiveMap& t,
                                           const LipschitzMap& f, const StrongMonotoneMap& F);

}  // namespace vip
