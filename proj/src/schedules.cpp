#include "vip/schedules.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

#include "vip/random.hpp"

namespace vip {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void validate_table(const std::vector<double>& values, double lo, double hi,
                    const char* where) {
  require(!values.empty(), std::string(where) + ": empty table");
  for (double v : values) {
    require(std::isfinite(v) && v >= lo && v <= hi,
            std::string(where) + ": table value out of range");
  }
}

Verdict both(Verdict a, Verdict b) {
  if (a == Verdict::Fails || b == Verdict::Fails) return Verdict::Fails;
  if (a == Verdict::Holds && b == Verdict::Holds) return Verdict::Holds;
  return Verdict::Undecidable;
}

Verdict either(Verdict a, Verdict b) {
  if (a == Verdict::Holds || b == Verdict::Holds) return Verdict::Holds;
  if (a == Verdict::Fails && b == Verdict::Fails) return Verdict::Fails;
  return Verdict::Undecidable;
}

Verdict verdict(bool b) { return b ? Verdict::Holds : Verdict::Fails; }

constexpr Verdict kU = Verdict::Undecidable;

}  // namespace

double CustomTable::at(std::size_t n) const {
  if (n < values.size()) return values[n];
  const double last = values.back();
  switch (tail) {
    case TailRule::Hold:
      return last;
    case TailRule::Harmonic:
      return last * static_cast<double>(values.size()) / static_cast<double>(n + 1);
  }
  return last;
}

// --- alpha --------------------------------------------------------------------

AlphaSchedule AlphaSchedule::power_law(double a, double theta) {
  require(a > 0.0 && std::isfinite(a), "alpha power law: a must be positive");
  require(theta > 0.0 && theta <= 1.0, "alpha power law: theta must lie in (0, 1]");
  return AlphaSchedule(PowerLawAlpha{a, theta});
}

AlphaSchedule AlphaSchedule::geometric(double a, double rho) {
  require(a > 0.0 && std::isfinite(a), "alpha geometric: a must be positive");
  require(rho > 0.0 && rho < 1.0, "alpha geometric: rho must lie in (0, 1)");
  return AlphaSchedule(GeometricAlpha{a, rho});
}

AlphaSchedule AlphaSchedule::constant(double a) {
  require(a > 0.0 && a <= 1.0, "alpha constant: a must lie in (0, 1]");
  return AlphaSchedule(ConstantAlpha{a});
}

AlphaSchedule AlphaSchedule::custom(std::vector<double> values, TailRule tail) {
  validate_table(values, DBL_MIN, 1.0, "alpha custom");
  return AlphaSchedule(CustomTable{std::move(values), tail});
}

double alpha_at(const AlphaSchedule& s, std::size_t n) {
  const double nn = static_cast<double>(n);
  const double raw = std::visit(
      overloaded{
          [&](const PowerLawAlpha& p) { return p.a / std::pow(nn + 1.0, p.theta); },
          [&](const GeometricAlpha& g) { return g.a * std::pow(g.rho, nn); },
          [&](const ConstantAlpha& c) { return c.a; },
          [&](const CustomTable& t) { return t.at(n); },
      },
      s.variant());
  return std::clamp(raw, DBL_MIN, 1.0);
}

// --- beta ---------------------------------------------------------------------

BetaSchedule BetaSchedule::constant(double b) {
  require(b >= 0.0 && b <= 1.0, "beta constant: b must lie in [0, 1]");
  return BetaSchedule(ConstantBeta{b});
}

BetaSchedule BetaSchedule::power_decay(double b, double gamma) {
  require(b >= 0.0 && b <= 1.0, "beta power decay: b must lie in [0, 1]");
  require(gamma > 0.0 && std::isfinite(gamma), "beta power decay: gamma must be positive");
  return BetaSchedule(PowerDecayBeta{b, gamma});
}

BetaSchedule BetaSchedule::custom(std::vector<double> values, TailRule tail) {
  validate_table(values, 0.0, 1.0, "beta custom");
  return BetaSchedule(CustomTable{std::move(values), tail});
}

double beta_at(const BetaSchedule& s, std::size_t n) {
  const double nn = static_cast<double>(n);
  return std::visit(
      overloaded{
          [&](const ConstantBeta& c) { return c.b; },
          [&](const PowerDecayBeta& p) { return p.b / std::pow(nn + 1.0, p.gamma); },
          [&](const CustomTable& t) { return t.at(n); },
      },
      s.variant());
}

// --- errors -------------------------------------------------------------------

ErrorSchedule ErrorSchedule::zero() {
  return ErrorSchedule(ZeroError{}, RandomDirection{0});
}

ErrorSchedule ErrorSchedule::summable(double c, double rho, DirectionRule dir) {
  require(c >= 0.0 && std::isfinite(c), "error summable: c must be nonnegative");
  require(rho > 0.0 && rho < 1.0, "error summable: rho must lie in (0, 1)");
  return ErrorSchedule(SummableError{c, rho}, std::move(dir));
}

ErrorSchedule ErrorSchedule::relatively_small(double c, DirectionRule dir) {
  require(c >= 0.0 && std::isfinite(c), "error relatively small: c must be nonnegative");
  return ErrorSchedule(RelativelySmallError{c}, std::move(dir));
}

ErrorSchedule ErrorSchedule::custom(std::vector<double> norms, TailRule tail,
                                    DirectionRule dir) {
  validate_table(norms, 0.0, DBL_MAX, "error custom");
  return ErrorSchedule(CustomTable{std::move(norms), tail}, std::move(dir));
}

DirectionRule ErrorSchedule::fixed_direction(Vector v) {
  const double n = v.norm();
  require(n > 0.0 && std::isfinite(n), "error direction: vector must be nonzero");
  return FixedDirection{v / n};
}

DirectionRule ErrorSchedule::random_direction(std::uint64_t seed) {
  return RandomDirection{seed};
}

double error_norm_at(const ErrorSchedule& e, const AlphaSchedule& alpha, std::size_t n) {
  const double nn = static_cast<double>(n);
  return std::visit(
      overloaded{
          [&](const ZeroError&) { return 0.0; },
          [&](const SummableError& s) { return s.c * std::pow(s.rho, nn); },
          [&](const RelativelySmallError& r) { return r.c * alpha_at(alpha, n) / (nn + 1.0); },
          [&](const CustomTable& t) { return t.at(n); },
      },
      e.variant());
}

Vector direction_at(const DirectionRule& rule, std::size_t n, Eigen::Index dim) {
  return std::visit(overloaded{
                        [&](const FixedDirection& f) -> Vector {
                          require_dim(f.unit, dim, "error direction");
                          return f.unit;
                        },
                        [&](const RandomDirection& r) -> Vector {
                          Rng rng(mix_seed(r.seed, n));
                          return rng.unit_vector(dim);
                        },
                    },
                    rule);
}

Vector error_at(const ErrorSchedule& e, const AlphaSchedule& alpha, std::size_t n,
                Eigen::Index dim) {
  const double size = error_norm_at(e, alpha, n);
  if (size == 0.0) return Vector::Zero(dim);
  return size * direction_at(e.direction(), n, dim);
}

// --- conditions -----------------------------------------------------------------

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "holds";
    case Verdict::Fails:
      return "fails";
    case Verdict::Undecidable:
      return "undecidable";
  }
  return "undecidable";
}

namespace {

struct AlphaFacts {
  Verdict to_zero;        // (C1)
  Verdict divergent_sum;  // (C2)
  Verdict ratio_to_zero;  // (a_{n+1}-a_n)/a_n -> 0
  Verdict ratio_to_one;   // (a_{n+1}-a_n)/a_n -> 1
  Verdict bounded_variation;
};

AlphaFacts alpha_facts(const AlphaSchedule& s) {
  using V = Verdict;
  return std::visit(
      overloaded{
          // Monotone decreasing to 0: bounded variation; ratio -> 0; sum
          // diverges since theta <= 1.
          [](const PowerLawAlpha&) { return AlphaFacts{V::Holds, V::Holds, V::Holds, V::Fails, V::Holds}; },
          // Ratio is the constant rho - 1, in (-1, 0).
          [](const GeometricAlpha&) { return AlphaFacts{V::Holds, V::Fails, V::Fails, V::Fails, V::Holds}; },
          [](const ConstantAlpha&) { return AlphaFacts{V::Fails, V::Holds, V::Holds, V::Fails, V::Holds}; },
          [](const CustomTable&) { return AlphaFacts{kU, kU, kU, kU, kU}; },
      },
      s.variant());
}

struct BetaFacts {
  Verdict h1;
  Verdict limsup_below_one;
  Verdict slowly_varying;  // (b_{n+1}-b_n)/a_n -> 0 or sum |b_{n+1}-b_n| < inf
};

BetaFacts beta_facts(const BetaSchedule& s) {
  using V = Verdict;
  return std::visit(
      overloaded{
          [](const ConstantBeta& c) {
            return BetaFacts{verdict(c.b > 0.0 && c.b < 1.0), verdict(c.b < 1.0), V::Holds};
          },
          // Decays to 0: liminf is 0, limsup is 0, monotone so bounded variation.
          [](const PowerDecayBeta&) { return BetaFacts{V::Fails, V::Holds, V::Holds}; },
          [](const CustomTable&) { return BetaFacts{kU, kU, kU}; },
      },
      s.variant());
}

struct ErrorFacts {
  Verdict summable;
  Verdict relatively_small;
};

ErrorFacts error_facts(const ErrorSchedule& e, const AlphaSchedule& alpha) {
  using V = Verdict;
  return std::visit(
      overloaded{
          [](const ZeroError&) { return ErrorFacts{V::Holds, V::Holds}; },
          [&](const SummableError& s) {
            if (s.c == 0.0) return ErrorFacts{V::Holds, V::Holds};
            // c rho^n / alpha_n
            const Verdict rel = std::visit(
                overloaded{
                    [](const PowerLawAlpha&) { return V::Holds; },
                    [&](const GeometricAlpha& g) { return verdict(s.rho < g.rho); },
                    [](const ConstantAlpha&) { return V::Holds; },
                    [](const CustomTable&) { return kU; },
                },
                alpha.variant());
            return ErrorFacts{V::Holds, rel};
          },
          [&](const RelativelySmallError& r) {
            if (r.c == 0.0) return ErrorFacts{V::Holds, V::Holds};
            // sum c alpha_n / (n + 1)
            const Verdict sum = std::visit(
                overloaded{
                    [](const PowerLawAlpha&) { return V::Holds; },
                    [](const GeometricAlpha&) { return V::Holds; },
                    [](const ConstantAlpha&) { return V::Fails; },
                    [](const CustomTable&) { return kU; },
                },
                alpha.variant());
            return ErrorFacts{sum, V::Holds};
          },
          [](const CustomTable&) { return ErrorFacts{kU, kU}; },
      },
      e.variant());
}

}  // namespace

ConditionReport check_conditions(const AlphaSchedule& alpha, const BetaSchedule& beta,
                                 const ErrorSchedule& e, const ConditionOptions& opts) {
  const AlphaFacts a = alpha_facts(alpha);
  const BetaFacts b = beta_facts(beta);
  const ErrorFacts ef = error_facts(e, alpha);

  ConditionReport r;
  r.c1 = a.to_zero;
  r.c2 = a.divergent_sum;
  r.c5 = either(a.ratio_to_zero, a.bounded_variation);
  const Verdict alpha_clause =
      either(opts.literal_h2_alpha_ratio ? a.ratio_to_one : a.ratio_to_zero,
             a.bounded_variation);
  r.h1 = b.h1;
  r.h2 = both(both(b.limsup_below_one, b.slowly_varying), alpha_clause);
  r.e_summable = ef.summable;
  r.e_relatively_small = ef.relatively_small;

  const Verdict overall = both(both(both(r.c1, r.c2), either(r.h1, r.h2)),
                               either(r.e_summable, r.e_relatively_small));
  r.applicable = overall == Verdict::Holds;
  return r;
}

}  // namespace vip
