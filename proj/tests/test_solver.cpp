#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "vip/solver.hpp"

using namespace vip;
using vip::testing::vec;

namespace {

// eta = F.eta, alpha = ||M||, kappa = F.kappa on the whole line/plane.
ProblemInstance constants_instance(double eta, double alpha, double kappa) {
  Matrix a = Matrix::Zero(2, 2);
  a.diagonal() << eta, kappa;
  return ProblemInstance(ConvexSet::whole(2), NonexpansiveMap::identity(2),
                         LipschitzMap::affine(alpha * Matrix::Identity(2, 2), vec({0, 0})),
                         StrongMonotoneMap::affine_spd(a, vec({0, 0})));
}

ProblemInstance halpern_instance() {
  return ProblemInstance(ConvexSet::whole(2), NonexpansiveMap::projection(ConvexSet::ball(vec({0, 0}), 1.0)),
                         LipschitzMap::constant(vec({2, 0})), StrongMonotoneMap::identity(2));
}

ProblemInstance box12_instance(Eigen::Index d) {
  return ProblemInstance(ConvexSet::box(Vector::Constant(d, 1.0), Vector::Constant(d, 2.0)),
                         NonexpansiveMap::identity(d), LipschitzMap::zero(d), StrongMonotoneMap::identity(d));
}

Schedules harmonic(double beta) {
  return {AlphaSchedule::power_law(1.0, 1.0), BetaSchedule::constant(beta), ErrorSchedule::zero()};
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("delta0_star examples") {
    CHECK(delta0_star(constants_instance(1.0, 0.5, 1.0)) == doctest::Approx(1.0));
    CHECK(delta0_star(constants_instance(1.0, 0.0, 1.0)) == doctest::Approx(2.0));
    CHECK(delta0_star(constants_instance(2.0, 1.0, 2.0)) == doctest::Approx(0.5));
    const ProblemInstance limit(ConvexSet::whole(2), NonexpansiveMap::identity(2),
                                LipschitzMap::affine(Matrix::Identity(2, 2), vec({0, 0})),
                                StrongMonotoneMap::identity(2), true);
    CHECK_THROWS_WITH_AS(delta0_star(limit), doctest::Contains("regularization"), DomainError);
  }

  TEST_CASE("sigma0 examples") {
    CHECK(sigma0(constants_instance(1.0, 0.5, 1.0), 0.5) == doctest::Approx(0.25));
    CHECK(sigma0(constants_instance(1.0, 0.0, 1.0), 1.0) == doctest::Approx(0.5));
    const auto p = constants_instance(1.0, 0.5, 1.0);
    CHECK(sigma0(p, 1.0 - 1e-9) > 0.0);
    CHECK_THROWS_AS(sigma0(p, 1.0), DomainError);
    CHECK_THROWS_AS(sigma0(p, 0.0), DomainError);
  }

  TEST_CASE("st_apply examples") {
    const ProblemInstance p(ConvexSet::whole(2), NonexpansiveMap::identity(2), LipschitzMap::zero(2),
                            StrongMonotoneMap::identity(2));
    CHECK((st_apply(p, 0.5, vec({2, 0})) - vec({1, 0})).norm() < 1e-15);
    const ProblemInstance h(ConvexSet::whole(2), NonexpansiveMap::identity(2),
                            LipschitzMap::constant(vec({3, 3})), StrongMonotoneMap::identity(2));
    CHECK((st_apply(h, 1.0, vec({-7, 11})) - vec({3, 3})).norm() < 1e-14);
    CHECK((st_apply(h, 0.25, vec({1, 1})) - vec({1.5, 1.5})).norm() < 1e-15);
    CHECK_THROWS_AS(st_apply(h, 0.0, vec({1, 1})), DomainError);
    CHECK_THROWS_AS(st_apply(h, 2.0, vec({1, 1})), DomainError);
  }

  TEST_CASE("hpa_step examples") {
    const ProblemInstance h(ConvexSet::whole(2), NonexpansiveMap::identity(2),
                            LipschitzMap::constant(vec({1, 0})), StrongMonotoneMap::identity(2));
    CHECK(hpa_step(h, 0.3, 1.0, vec({5, 5}), vec({7, 8})) == vec({7, 8}));
    CHECK((hpa_step(h, 1.0, 0.0, vec({0, 0}), vec({0, 0})) - vec({1, 0})).norm() < 1e-15);
    CHECK(hpa_step(box12_instance(1), 0.5, 0.0, vec({0}), vec({1}))[0] == 1.0);
    CHECK_THROWS_AS(hpa_step(h, 0.5, 1.5, vec({0, 0}), vec({0, 0})), DomainError);
  }

  TEST_CASE("S_t is a (1 - t sigma0)-contraction") {
    for (Eigen::Index d = 2; d <= 6; d += 2) {
      const auto p = vip::testing::random_affine_instance(d, 40 + static_cast<std::uint64_t>(d));
      const double d0 = default_delta0(p);
      const double s0 = sigma0(p, d0);
      Rng rng(d);
      for (double frac : {0.1, 0.5, 1.0}) {
        const double t = frac * d0;
        for (int k = 0; k < 2000; ++k) {
          const Vector x = rng.vector(d, 5.0), y = rng.vector(d, 5.0);
          CHECK((st_apply(p, t, x) - st_apply(p, t, y)).norm() <= (1.0 - t * s0) * (x - y).norm() + 1e-10);
        }
      }
    }
  }

  TEST_CASE("run_hpa: Halpern instance converges to P_C(u)") {
    SolverConfig cfg{halpern_instance(), harmonic(0.5), vec({-3, 2})};
    cfg.max_iter = 200000;
    cfg.stop_tol = 2e-5;
    cfg.reference = vec({1, 0});
    const auto tr = run_hpa(cfg);
    CHECK(tr.status == RunStatus::Converged);
    CHECK(*tr.final_dist_ref <= 1e-4);
    CHECK(tr.records.size() <= cfg.max_iter + 1);
    CHECK(tr.conditions.applicable);
  }

  TEST_CASE("run_hpa: box instance converges to (1, 1) with invariants") {
    SolverConfig cfg{box12_instance(2), harmonic(0.5), vec({2, 1.5})};
    cfg.stop_tol = 1e-8;
    cfg.reference = vec({1, 1});
    const auto tr = run_hpa(cfg);
    CHECK(tr.status == RunStatus::Converged);
    CHECK(*tr.final_dist_ref <= 1e-6);
    for (const auto& r : tr.records) CHECK(contains(cfg.problem.Q(), r.x, 1e-8));
  }

  TEST_CASE("trace invariants on the Halpern instance") {
    const auto p = halpern_instance();
    SolverConfig cfg{p, {AlphaSchedule::power_law(1.0, 1.0), BetaSchedule::constant(0.5),
                         ErrorSchedule::relatively_small(1.0, ErrorSchedule::random_direction(9))},
                     vec({-3, 2})};
    cfg.max_iter = 200000;
    cfg.stop_tol = 2e-5;
    const auto tr = run_hpa(cfg);
    REQUIRE(tr.status == RunStatus::Converged);
    CHECK(tr.records.size() <= cfg.max_iter + 1);
    CHECK(tr.final_fix_residual <= cfg.stop_tol);

    // Boundedness around q = (1, 0) in Fix(T).
    const Vector q = vec({1, 0});
    const double s0 = sigma0(p, tr.delta0);
    double err_sum = 0.0;
    for (const auto& r : tr.records) err_sum += r.err_norm;
    const double bound = std::max((cfg.x0 - q).norm(), (apply_f(p.f(), q) - apply_F(p.F(), q)).norm() / s0) * 1.01 +
                         err_sum;
    double tail_max = 0.0;
    const std::size_t tail_from = tr.records.size() - tr.records.size() / 10;
    for (std::size_t i = 0; i < tr.records.size(); ++i) {
      const auto& r = tr.records[i];
      CHECK(r.fix_residual >= 0.0);
      CHECK((r.x - q).norm() <= bound);
      if (i >= tail_from) tail_max = std::max(tail_max, r.fix_residual);
    }
    CHECK(tail_max <= 10.0 * cfg.stop_tol);
  }

  TEST_CASE("alpha clamping is recorded") {
    const auto p = constants_instance(1.0, 0.5, 1.0);  // default delta0 = 0.5
    SolverConfig cfg{p, harmonic(0.0), vec({1, 1})};
    cfg.max_iter = 5;
    const auto tr = run_hpa(cfg);
    CHECK(tr.delta0 == doctest::Approx(0.5));
    CHECK(tr.records[0].clamped);
    CHECK(tr.records[0].alpha == doctest::Approx(0.5));
    CHECK_FALSE(tr.records[2].clamped);
    CHECK(tr.clamped_steps == 1);
    CHECK(tr.status == RunStatus::MaxIter);
    CHECK(tr.iterations() == 5);
  }

  TEST_CASE("invalid solver configs") {
    SolverConfig cfg{box12_instance(2), harmonic(0.5), vec({0, 0})};
    CHECK_THROWS_WITH_AS(run_hpa(cfg), doctest::Contains("x0"), DomainError);
    cfg.x0 = vec({1, 1});
    cfg.delta0 = delta0_star(cfg.problem);
    CHECK_THROWS_WITH_AS(run_hpa(cfg), doctest::Contains("delta0 out of range"), DomainError);
    cfg.delta0.reset();
    cfg.stop_tol = 0.0;
    CHECK_THROWS_AS(run_hpa(cfg), DomainError);
  }

  TEST_CASE("non-finite iterates end the run as diverged") {
    const ProblemInstance p(ConvexSet::whole(2), NonexpansiveMap::identity(2), LipschitzMap::zero(2),
                            StrongMonotoneMap::identity(2));
    SolverConfig cfg{p,
                     {AlphaSchedule::constant(1e-3), BetaSchedule::constant(0.5),
                      ErrorSchedule::custom({1e307}, TailRule::Hold, ErrorSchedule::fixed_direction(vec({1, 0})))},
                     vec({0, 0})};
    cfg.max_iter = 1000;
    const auto tr = run_hpa(cfg);
    CHECK(tr.status == RunStatus::Diverged);
    CHECK(all_finite(tr.final_iterate));
    CHECK(tr.iterations() < 1000);
  }

  TEST_CASE("implicit_solve examples") {
    const auto p = box12_instance(1);
    for (double t : {0.1, 0.5, 0.9}) {
      CHECK(implicit_solve(p, t, vec({0}), 1e-12)[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
    const auto r = vip::testing::random_affine_instance(5, 77);
    const double t = 0.5 * default_delta0(r);
    const Vector e = Vector::Constant(5, 1e-3);
    const Vector a = implicit_solve(r, t, e, 1e-10, {.x_init = Vector::Constant(5, 10.0)});
    const Vector b = implicit_solve(r, t, e, 1e-10, {.x_init = Vector::Constant(5, -10.0)});
    CHECK((a - b).norm() <= 2e-10);
    CHECK_THROWS_AS(implicit_solve(r, t, e, 0.0), DomainError);
    CHECK_THROWS_AS(implicit_solve(r, t, vec({1}), 1e-10), DimensionError);
  }

  TEST_CASE("implicit and explicit schemes agree") {
    const auto p = vip::testing::random_affine_instance(4, 5);
    const double t = default_delta0(p);
    SolverConfig cfg{p, {AlphaSchedule::constant(std::min(t, 1.0)), BetaSchedule::constant(0.0), ErrorSchedule::zero()},
                     Vector::Zero(4)};
    cfg.delta0 = std::min(t, 1.0);
    cfg.stop_tol = 1e-12;
    const auto tr = run_hpa(cfg);
    REQUIRE(tr.status == RunStatus::Converged);
    const Vector xt = implicit_solve(p, *cfg.delta0, Vector::Zero(4), 1e-12);
    CHECK((tr.final_iterate - xt).norm() <= 1e-12 / sigma0(p, *cfg.delta0) + 1e-12);
  }

  TEST_CASE("oracle examples") {
    const auto ball = NonexpansiveMap::projection(ConvexSet::ball(vec({0, 0}), 1.0));
    const ProblemInstance zero(ConvexSet::whole(2), ball, LipschitzMap::zero(2), StrongMonotoneMap::identity(2));
    CHECK(oracle_solve(zero, 1e-12).norm() <= 1e-12);
    const auto h = halpern_instance();
    const Vector q = oracle_solve(h, 1e-12);
    CHECK((q - vec({1, 0})).norm() <= 1e-11);
    CHECK(vip_residual(h, q, default_oracle_step(h)) <= 2e-12);
    CHECK_THROWS_AS(oracle_solve(h, 2.5, 1e-10), DomainError);
  }

  TEST_CASE("oracle on an affine fixed-point set matches the KKT solution") {
    Rng rng(31);
    const Eigen::Index d = 4;
    const Matrix a = vip::testing::random_spd(d, 1.0, 3.0, rng);
    const Vector u = rng.vector(d, 2.0);
    const Vector n = rng.unit_vector(d);
    const double c = 0.7;
    const ProblemInstance p(ConvexSet::whole(d), NonexpansiveMap::projection(ConvexSet::hyperplane(n, c)),
                            LipschitzMap::constant(u), StrongMonotoneMap::affine_spd(a, Vector::Zero(d)));
    Matrix kkt = Matrix::Zero(d + 1, d + 1);
    kkt.topLeftCorner(d, d) = a;
    kkt.topRightCorner(d, 1) = n;
    kkt.bottomLeftCorner(1, d) = n.transpose();
    Vector rhs(d + 1);
    rhs << u, c;
    const Vector sol = kkt.fullPivLu().solve(rhs);
    const Vector q = oracle_solve(p, 1e-12);
    CHECK((q - sol.head(d)).norm() <= 1e-10);
  }

  TEST_CASE("vip_residual examples") {
    const auto h = halpern_instance();
    const double lam = default_oracle_step(h);
    CHECK(vip_residual(h, vec({1, 0}), lam) <= 1e-10);
    const ProblemInstance ball(ConvexSet::whole(2), NonexpansiveMap::projection(ConvexSet::ball(vec({0, 0}), 1.0)),
                               LipschitzMap::zero(2), StrongMonotoneMap::identity(2));
    CHECK(vip_residual(ball, vec({10, 0}), default_oracle_step(ball)) >= 0.1);
  }

  TEST_CASE("regularized runs on the limit-case box instances") {
    auto shifted = vip::testing::shipped("limit_shifted").solver_config();
    auto plain = vip::testing::shipped("limit_unshifted").solver_config();
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      // Minimizer of eps/2 |q|^2 - <(1, 0), q> over [0, 1]^2.
      const Vector grid_min = vec({std::min(1.0, 1.0 / eps), 0.0});
      const auto r = regularized_run(shifted, eps);
      CHECK((r.q_eps - grid_min).norm() <= 1e-3);
      CHECK(std::abs(r.norm_q_eps - 1.0) <= 1e-3);
      const auto z = regularized_run(plain, eps);
      CHECK(z.q_eps.norm() <= 1e-6);
    }
    CHECK_THROWS_AS(regularized_run(shifted, 0.0), DomainError);
    SolverConfig strict{halpern_instance(), harmonic(0.5), vec({0, 0})};
    CHECK_THROWS_AS(regularized_run(strict, 0.1), DomainError);
  }

  TEST_CASE("regularization path") {
    const auto cfg = vip::testing::shipped("limit_shifted").solver_config();
    const std::vector<double> eps{1e-1, 1e-2, 1e-3};
    const auto seq = regularization_path(cfg, eps, false);
    const auto par = regularization_path(cfg, eps, true);
    REQUIRE(seq.size() == 3);
    double prev = INFINITY;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      CHECK(seq[i].epsilon == eps[i]);
      CHECK(seq[i].q_eps == par[i].q_eps);
      const double dist = (seq[i].q_eps - vec({1, 0})).norm();
      CHECK(dist <= prev + 1e-6);
      prev = dist;
    }
    CHECK_THROWS_AS(regularization_path(cfg, {1e-2, 1e-1}), DomainError);
    CHECK_THROWS_AS(regularization_path(cfg, {}), DomainError);
  }

  TEST_CASE("classical schemes are special cases") {
    const auto t = NonexpansiveMap::projection(ConvexSet::ball(vec({0, 0}), 1.0));
    const Vector x0 = vec({0.5, 0.5});
    auto run = [&](const ClassicalScheme& s) {
      SolverConfig cfg{s.problem, {AlphaSchedule::power_law(1.0, 1.0), s.beta, ErrorSchedule::zero()}, x0};
      cfg.max_iter = 3;
      return run_hpa(cfg);
    };
    // Halpern: x1 = a0 u + (1 - a0) T x0 with the clamped a0 = delta0.
    const Vector u = vec({2, 0});
    const auto h = run(halpern_scheme(t, u));
    const double a0 = h.records[0].alpha;
    CHECK((h.records[1].x - (a0 * u + (1 - a0) * apply_T(t, x0))).norm() < 1e-15);

    const auto f = LipschitzMap::affine(0.3 * Matrix::Identity(2, 2), vec({0.1, 0}));
    const auto v = run(viscosity_scheme(t, f));
    const double b0 = v.records[0].alpha;
    CHECK((v.records[1].x - (b0 * apply_f(f, x0) + (1 - b0) * apply_T(t, x0))).norm() < 1e-15);

    Matrix a(2, 2);
    a << 2.0, 0.5, 0.5, 1.0;
    const auto l = run(linear_operator_scheme(t, u, a));
    const double c0 = l.records[0].alpha;
    const Vector tx = apply_T(t, x0);
    CHECK((l.records[1].x - (c0 * u + tx - c0 * a * tx)).norm() < 1e-14);

    const auto F = StrongMonotoneMap::affine_spd(a, vec({0, 0}));
    const auto sd = run(steepest_descent_scheme(t, F));
    CHECK((sd.records[1].x - (tx - sd.records[0].alpha * a * tx)).norm() < 1e-14);

    const auto gv = run(general_viscosity_scheme(t, f, F));
    const double g0 = gv.records[0].alpha;
    CHECK((gv.records[1].x - (g0 * apply_f(f, x0) + tx - g0 * a * tx)).norm() < 1e-14);

    const auto box = ConvexSet::box(vec({-1, -1}), vec({1, 1}));
    const auto pv = run(projected_viscosity_scheme(box, t, f, F));
    const double p0 = pv.records[0].alpha;
    CHECK((pv.records[1].x - project(box, p0 * apply_f(f, x0) + tx - p0 * a * tx)).norm() < 1e-14);
  }
}
