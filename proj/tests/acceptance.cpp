// Acceptance suite: one PASS/FAIL line per criterion; nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "support.hpp"
#include "vip/harness.hpp"

using namespace vip;
using vip::testing::shipped;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome contraction_suite() {
  Outcome o;
  std::size_t violations = 0, checked = 0;
  double worst = -INFINITY;
  const Eigen::Index dims[] = {2, 4, 6, 8, 10};
  for (std::size_t i = 0; i < 5; ++i) {
    const auto p = vip::testing::random_affine_instance(dims[i], 1000 + i);
    const double d0 = default_delta0(p);
    const double s0 = sigma0(p, d0);
    auto sampler = uniform_pair_sampler(p.dim(), 2000 + i, 5.0);
    for (double frac : {0.1, 0.5, 1.0}) {
      const double t = frac * d0;
      for (int k = 0; k < 10000; ++k) {
        const auto [x, y] = sampler();
        const double lhs = (st_apply(p, t, x) - st_apply(p, t, y)).norm();
        const double rhs = (1.0 - t * s0) * (x - y).norm();
        worst = std::max(worst, lhs - rhs);
        ++checked;
        if (lhs > rhs + 1e-10) ++violations;
      }
    }
  }
  o.pass = violations == 0;
  o.detail = std::to_string(checked) + " pairs, " + std::to_string(violations) + " violations, max excess " +
             fmt("%.2e", worst);
  return o;
}

Outcome implicit_reproduction() {
  Outcome o;
  const auto cfg = shipped("quadratic10_implicit");
  const auto& p = cfg.problem;
  const Vector q = oracle_solve(p, 1e-13);
  const double tol = 1e-10;
  double prev = INFINITY;
  std::string dists;
  for (std::size_t i = 0; i < 4; ++i) {
    const double t = std::pow(10.0, -double(i + 1));
    const Vector e = t * t * direction_at(cfg.implicit_direction, i, p.dim());
    const Vector a = implicit_solve(p, t, e, tol, {.x_init = Vector::Constant(p.dim(), 3.0)});
    const Vector b = implicit_solve(p, t, e, tol, {.x_init = Vector::Constant(p.dim(), -3.0)});
    const double d = (a - q).norm();
    dists += fmt("%.2e ", d);
    if (!(d < prev)) o.pass = false;
    if ((a - b).norm() > 2 * tol) o.pass = false;
    prev = d;
  }
  if (prev > 1e-3) o.pass = false;
  o.detail = "dist to oracle: " + dists;
  return o;
}

SummaryReport hpa(const std::string& name) { return run_experiment(shipped(name), {.write_files = false}); }

Outcome unperturbed() {
  const auto s = hpa("quadratic10");
  Outcome o;
  o.pass = s.status == "converged" && s.iterations <= 200000 && *s.distance_to_oracle <= 1e-4;
  o.detail = s.status + " at n=" + std::to_string(s.iterations) + ", dist " + fmt("%.2e", *s.distance_to_oracle);
  return o;
}

Outcome perturbed() {
  const auto r = hpa("quadratic10_relsmall");
  const auto m = hpa("quadratic10_summable");
  Outcome o;
  o.pass = *r.distance_to_oracle <= 1e-3 && *m.distance_to_oracle <= 1e-3;
  o.detail = "relatively small " + fmt("%.2e", *r.distance_to_oracle) + ", summable " +
             fmt("%.2e", *m.distance_to_oracle);
  return o;
}

Outcome halpern() {
  const auto s = hpa("halpern");
  const double d = (s.final_iterate - vip::testing::vec({1, 0})).norm();
  return {d <= 1e-4, "|x - (1,0)| = " + fmt("%.2e", d)};
}

Outcome necessity() {
  const auto pc = shipped("halpern");
  const auto gc = shipped("halpern_geometric");
  const Vector q = vip::testing::vec({1, 0});
  const double start = (gc.x0 - q).norm();
  const auto p = run_experiment(pc, {.write_files = false});
  const auto g = run_experiment(gc, {.write_files = false});
  const double dp = (p.final_iterate - q).norm(), dg = (g.final_iterate - q).norm();
  Outcome o;
  o.pass = start >= 1.0 && pc.x0 == gc.x0 && dg >= 0.1 && dp <= 1e-3 && !g.conditions.applicable;
  o.detail = "start " + fmt("%.2f", start) + ", geometric " + fmt("%.3f", dg) + ", power law " + fmt("%.2e", dp);
  return o;
}

Outcome regularization() {
  Outcome o;
  const auto shifted = shipped("limit_shifted");
  const auto plain = shipped("limit_unshifted");
  const auto rs = regularization_path(shifted.solver_config(), {1e-1, 1e-2, 1e-3}, true);
  const auto ru = regularization_path(plain.solver_config(), {1e-1, 1e-2, 1e-3}, true);
  double ws = 0.0, wu = 0.0;
  for (const auto& r : rs) ws = std::max(ws, (r.q_eps - vip::testing::vec({1, 0})).norm());
  for (const auto& r : ru) wu = std::max(wu, r.q_eps.norm());
  o.pass = ws <= 1e-3 && wu <= 1e-6;
  o.detail = "shifted max dist " + fmt("%.2e", ws) + ", unshifted max |q| " + fmt("%.2e", wu);
  return o;
}

Outcome oracle_cross() {
  Outcome o;
  std::size_t instances = 0, runs = 0;
  double worst_oracle = 0.0, worst_run = 0.0;
  for (const auto& entry : std::filesystem::directory_iterator(VIP_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    const auto cfg = load_config(entry.path());
    const auto& p = cfg.problem;
    if (p.limit_case()) continue;
    const double tol = 1e-10;
    const Vector q = oracle_solve(p, tol);
    const double r = vip_residual(p, q, default_oracle_step(p));
    ++instances;
    worst_oracle = std::max(worst_oracle, r / tol);
    if (r > 2 * tol) {
      o.pass = false;
      o.detail += entry.path().stem().string() + " oracle residual " + fmt("%.2e", r) + "; ";
    }
    if (cfg.mode != Mode::Hpa) continue;
    const auto s = run_experiment(cfg, {.write_files = false});
    if (!s.conditions.applicable) continue;
    ++runs;
    worst_run = std::max(worst_run, *s.final_vip_residual / cfg.stop_tol);
    if (*s.final_vip_residual > 10 * cfg.stop_tol) {
      o.pass = false;
      o.detail += entry.path().stem().string() + " run residual " + fmt("%.2e", *s.final_vip_residual) + "; ";
    }
  }
  o.detail += std::to_string(instances) + " oracle instances (max residual/tol " + fmt("%.2f", worst_oracle) + "), " +
              std::to_string(runs) + " runs (max residual/stop_tol " + fmt("%.2f", worst_run) + ")";
  return o;
}

Outcome projection_suite() {
  Outcome o;
  Rng rng(4242);
  const Eigen::Index d = 3;
  const Vector normal = Vector::LinSpaced(d, 1.0, 2.0);
  Vector e0 = Vector::Zero(d), e1 = Vector::Zero(d);
  e0[0] = 1.0;
  e1[1] = 1.0;
  const ConvexSet sets[] = {
      ConvexSet::box(Vector::Constant(d, -1.0), Vector::Constant(d, 0.5)),
      ConvexSet::ball(Vector::Constant(d, 0.3), 1.2),
      ConvexSet::halfspace(normal, 0.7),
      ConvexSet::hyperplane(normal, -0.4),
      ConvexSet::affine(Vector::Constant(d, 0.5), {e0, e1}),
      ConvexSet::whole(d),
      ConvexSet::intersection({ConvexSet::box(Vector::Constant(d, 0.0), Vector::Constant(d, 2.0)),
                               ConvexSet::ball(Vector::Zero(d), 1.0)}),
  };
  std::size_t violations = 0, points = 0;
  for (const auto& s : sets) {
    // Dykstra is accurate to its tolerance only.
    const double acc = s.is_intersection() ? 2.0 * ConvexSet::kDefaultDykstraTol : 0.0;
    for (int k = 0; k < 10000; ++k) {
      const Vector x = rng.vector(d, 4.0), y = rng.vector(d, 4.0);
      const Vector px = project(s, x), py = project(s, y);
      ++points;
      bool bad = (project(s, px) - px).norm() > 1e-12 + acc;
      bad |= (px - py).norm() > (x - y).norm() * (1.0 + 1e-12) + 2 * acc;
      bad |= (x - px).dot(py - px) > 1e-10 + acc * (x - px).norm();
      if (bad) ++violations;
    }
  }
  o.pass = violations == 0;
  o.detail = std::to_string(points) + " points over 7 variants, " + std::to_string(violations) + " violations";
  return o;
}

Outcome reproducibility() {
  Outcome o;
  const auto root = std::filesystem::temp_directory_path() / "vip_acceptance_repro";
  std::size_t compared = 0;
  for (const std::string name : {"quadratic10_relsmall", "quadratic10_summable", "rotation", "polyhedral3"}) {
    std::string traces[2];
    for (int r = 0; r < 2; ++r) {
      const auto dir = root / (name + "_" + std::to_string(r));
      std::filesystem::remove_all(dir);
      run_experiment(load_config(vip::testing::config_path(name), {.output = dir.string()}));
      traces[r] = slurp(dir / "trace.csv");
    }
    ++compared;
    if (traces[0].empty() || traces[0] != traces[1]) {
      o.pass = false;
      o.detail += name + " differs; ";
    }
  }
  std::filesystem::remove_all(root);
  o.detail += std::to_string(compared) + " configs run twice, traces byte-identical";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: no runtime bound
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "contraction of S_t on random affine instances", 5.0, contraction_suite},
      {2, "implicit scheme approaches the oracle solution", 10.0, implicit_reproduction},
      {3, "unperturbed explicit iteration on the 10-dim quadratic", 10.0, unperturbed},
      {4, "robustness to relatively small and summable errors", 0.0, perturbed},
      {5, "Halpern instance converges to P_C(u) = (1,0)", 0.0, halpern},
      {6, "non-summable step sizes are necessary", 0.0, necessity},
      {7, "regularization path in the limit case", 0.0, regularization},
      {8, "oracle cross-validation on shipped instances", 0.0, oracle_cross},
      {9, "projection property suite", 0.0, projection_suite},
      {10, "bit-reproducible traces", 0.0, reproducibility},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += "; over runtime budget " + fmt("%.0fs", c.budget_s);
    }
    if (!o.pass) ++failures;
    std::printf("%s  criterion %2d: %s [%s] (%.2fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs);
  }
  std::printf("%d of %zu criteria passed\n", int(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
