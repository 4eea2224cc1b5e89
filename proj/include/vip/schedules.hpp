#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "vip/core.hpp"

namespace vip {

/// How a custom table continues past its last entry.
enum class TailRule {
  Hold,      ///< repeat the last value
  Harmonic,  ///< last * N / (n + 1), N the table length
};

struct CustomTable {
  std::vector<double> values;
  TailRule tail = TailRule::Hold;

  double at(std::size_t n) const;
};

// --- alpha_n ----------------------------------------------------------------

/// a / (n + 1)^theta
struct PowerLawAlpha {
  double a;
  double theta;
};
/// a * rho^n
struct GeometricAlpha {
  double a;
  double rho;
};
struct ConstantAlpha {
  double a;
};

class AlphaSchedule {
 public:
  using Variant = std::variant<PowerLawAlpha, GeometricAlpha, ConstantAlpha, CustomTable>;

  static AlphaSchedule power_law(double a, double theta);
  static AlphaSchedule geometric(double a, double rho);
  static AlphaSchedule constant(double a);
  static AlphaSchedule custom(std::vector<double> values, TailRule tail);

  const Variant& variant() const noexcept { return v_; }

 private:
  explicit AlphaSchedule(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// n-th step size, clamped into [DBL_MIN, 1] so that it stays in (0, 1].
double alpha_at(const AlphaSchedule& s, std::size_t n);

// --- beta_n -----------------------------------------------------------------

struct ConstantBeta {
  double b;
};
/// b / (n + 1)^gamma
struct PowerDecayBeta {
  double b;
  double gamma;
};

class BetaSchedule {
 public:
  using Variant = std::variant<ConstantBeta, PowerDecayBeta, CustomTable>;

  static BetaSchedule constant(double b);
  static BetaSchedule power_decay(double b, double gamma);
  static BetaSchedule custom(std::vector<double> values, TailRule tail);

  const Variant& variant() const noexcept { return v_; }

 private:
  explicit BetaSchedule(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// n-th averaging weight in [0, 1].
double beta_at(const BetaSchedule& s, std::size_t n);

// --- e_n --------------------------------------------------------------------

struct ZeroError {};
/// ||e_n|| = c * rho^n
struct SummableError {
  double c;
  double rho;
};
/// ||e_n|| = c * alpha_n / (n + 1)
struct RelativelySmallError {
  double c;
};

struct FixedDirection {
  Vector unit;
};
/// Per-step unit vector drawn from a stream seeded by mix_seed(seed, n).
struct RandomDirection {
  std::uint64_t seed;
};
using DirectionRule = std::variant<FixedDirection, RandomDirection>;

class ErrorSchedule {
 public:
  using Variant = std::variant<ZeroError, SummableError, RelativelySmallError, CustomTable>;

  static ErrorSchedule zero();
  static ErrorSchedule summable(double c, double rho, DirectionRule dir);
  static ErrorSchedule relatively_small(double c, DirectionRule dir);
  /// Table of norms.
  static ErrorSchedule custom(std::vector<double> norms, TailRule tail, DirectionRule dir);

  /// Normalizes the vector; throws on zero.
  static DirectionRule fixed_direction(Vector v);
  static DirectionRule random_direction(std::uint64_t seed);

  const Variant& variant() const noexcept { return v_; }
  const DirectionRule& direction() const noexcept { return dir_; }

 private:
  ErrorSchedule(Variant v, DirectionRule dir) : v_(std::move(v)), dir_(std::move(dir)) {}
  Variant v_;
  DirectionRule dir_;
};

/// Prescribed ||e_n||; `alpha` is needed by the relatively-small law.
double error_norm_at(const ErrorSchedule& e, const AlphaSchedule& alpha, std::size_t n);

/// e_n in R^dim with norm error_norm_at(e, alpha, n).
Vector error_at(const ErrorSchedule& e, const AlphaSchedule& alpha, std::size_t n,
                Eigen::Index dim);

/// Unit vector of the direction rule at step n.
Vector direction_at(const DirectionRule& rule, std::size_t n, Eigen::Index dim);

// --- convergence conditions ---------------------------------------------------

enum class Verdict { Holds, Fails, Undecidable };

std::string_view to_string(Verdict v);

struct ConditionReport {
  Verdict c1 = Verdict::Undecidable;  ///< alpha_n -> 0
  Verdict c2 = Verdict::Undecidable;  ///< sum alpha_n = inf
  Verdict c5 = Verdict::Undecidable;  ///< (a_{n+1}-a_n)/a_n -> 0 or sum |a_{n+1}-a_n| < inf
  Verdict h1 = Verdict::Undecidable;  ///< 0 < liminf beta_n <= limsup beta_n < 1
  Verdict h2 = Verdict::Undecidable;  ///< limsup beta_n < 1 with slowly varying beta and alpha
  Verdict e_summable = Verdict::Undecidable;
  Verdict e_relatively_small = Verdict::Undecidable;
  bool applicable = false;
};

struct ConditionOptions {
  /// Read the alpha clause of (h2) literally as (a_{n+1}-a_n)/a_n -> 1
  /// instead of -> 0. Off by default.
  bool literal_h2_alpha_ratio = false;
};

/// Decides every condition analytically from the schedule variants. Custom
/// tables are always Undecidable; `applicable` is true only when the
/// convergence hypotheses hold for certain.
ConditionReport check_conditions(const AlphaSchedule& alpha, const BetaSchedule& beta,
                                 const ErrorSchedule& e, const ConditionOptions& opts = {});

}  // namespace vip
