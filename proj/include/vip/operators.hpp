#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "vip/core.hpp"
#include "vip/sets.hpp"

namespace vip {

// ---------------------------------------------------------------------------
// Nonexpansive maps T with a known fixed-point set.

class NonexpansiveMap;

struct IdentityMap {
  Eigen::Index dim;
};
struct SetProjection {
  ConvexSet set;
};
/// P_{sets.back()} o ... o P_{sets.front()}; the first set is applied first.
struct ProjectionComposition {
  std::vector<ConvexSet> sets;
};
/// x -> (1 - weight) x + weight * base(x)
struct AveragedMap {
  std::shared_ptr<const NonexpansiveMap> base;
  double weight;
};
/// Counter-clockwise rotation of the plane.
struct Rotation2D {
  double angle;
};

class NonexpansiveMap {
 public:
  using Variant = std::variant<IdentityMap, SetProjection, ProjectionComposition,
                               AveragedMap, Rotation2D>;

  static NonexpansiveMap identity(Eigen::Index dim);
  static NonexpansiveMap projection(ConvexSet set);
  /// The member sets must have a nonempty common intersection; the fixed-point
  /// set is then that intersection.
  static NonexpansiveMap composition(std::vector<ConvexSet> sets);
  static NonexpansiveMap averaged(NonexpansiveMap base, double weight);
  static NonexpansiveMap rotation2d(double angle);

  Eigen::Index dim() const noexcept { return fix_set_.dim(); }
  const Variant& variant() const noexcept { return v_; }
  /// Fix(T) as a projectable set.
  const ConvexSet& fix_set() const noexcept { return fix_set_; }

 private:
  NonexpansiveMap(Variant v, ConvexSet fix) : v_(std::move(v)), fix_set_(std::move(fix)) {}

  Variant v_;
  ConvexSet fix_set_;
};

Vector apply_T(const NonexpansiveMap& t, const Vector& x);

/// ||x - T x||
double fix_residual(const NonexpansiveMap& t, const Vector& x);

// ---------------------------------------------------------------------------
// Lipschitz maps f with certified coefficient alpha.

struct ZeroMap {
  Eigen::Index dim;
};
struct ConstantMap {
  Vector value;
};
/// x -> M x + b
struct AffineMap {
  Matrix matrix;
  Vector shift;
};

class LipschitzMap {
 public:
  using Variant = std::variant<ZeroMap, ConstantMap, AffineMap>;

  static LipschitzMap zero(Eigen::Index dim);
  static LipschitzMap constant(Vector u);
  static LipschitzMap affine(Matrix m, Vector b);

  Eigen::Index dim() const noexcept { return dim_; }
  const Variant& variant() const noexcept { return v_; }
  /// Certified Lipschitz coefficient (spectral norm of M for affine maps).
  double alpha() const noexcept { return alpha_; }

 private:
  LipschitzMap(Variant v, Eigen::Index dim, double alpha)
      : v_(std::move(v)), dim_(dim), alpha_(alpha) {}

  Variant v_;
  Eigen::Index dim_;
  double alpha_;
};

Vector apply_f(const LipschitzMap& f, const Vector& x);

// ---------------------------------------------------------------------------
// Strongly monotone Lipschitz maps F with certified eta and kappa.

struct IdentityOperator {
  Eigen::Index dim;
};
/// x -> A x + c with A symmetric positive definite.
struct AffineSPD {
  Matrix matrix;
  Vector shift;
};
/// x -> eta x + c
struct ScaledIdentityShift {
  double eta;
  Vector shift;
};

class StrongMonotoneMap {
 public:
  using Variant = std::variant<IdentityOperator, AffineSPD, ScaledIdentityShift>;

  static StrongMonotoneMap identity(Eigen::Index dim);
  static StrongMonotoneMap affine_spd(Matrix a, Vector c);
  static StrongMonotoneMap scaled_identity(double eta, Vector c);

  /// F + eps I, which is (eta + eps)-strongly monotone and
  /// (kappa + eps)-Lipschitz.
  StrongMonotoneMap tikhonov(double eps) const;

  Eigen::Index dim() const noexcept { return dim_; }
  const Variant& variant() const noexcept { return v_; }
  double eta() const noexcept { return eta_; }
  double kappa() const noexcept { return kappa_; }

 private:
  StrongMonotoneMap(Variant v, Eigen::Index dim, double eta, double kappa)
      : v_(std::move(v)), dim_(dim), eta_(eta), kappa_(kappa) {}

  Variant v_;
  Eigen::Index dim_;
  double eta_;
  double kappa_;
};

Vector apply_F(const StrongMonotoneMap& F, const Vector& x);

/// Spectral norm of an arbitrary square matrix.
double spectral_norm(const Matrix& m);
/// Smallest eigenvalue of the symmetric part (m + m^T) / 2.
double min_symmetric_eigenvalue(const Matrix& m);

// ---------------------------------------------------------------------------
// Empirical cross-check of certified constants.

/// Produces pairs (x, y) to probe a map with.
using PairSampler = std::function<std::pair<Vector, Vector>()>;

/// Pairs with coordinates uniform in [-scale, scale).
PairSampler uniform_pair_sampler(Eigen::Index dim, std::uint64_t seed,
                                 double scale = 1.0);

struct CertificationReport {
  double max_ratio_lipschitz = 0.0;
  /// Only for strongly monotone maps.
  std::optional<double> min_ratio_monotone;
  std::size_t pairs_used = 0;
};

/// Largest observed ||Px - Py|| / ||x - y|| (and for F the smallest
/// <Fx - Fy, x - y> / ||x - y||^2). Identical pairs are skipped; throws
/// DomainError when every pair is degenerate.
CertificationReport certify_constants(const LipschitzMap& f, const PairSampler& sampler,
                                      std::size_t n_samples);
CertificationReport certify_constants(const StrongMonotoneMap& F,
                                      const PairSampler& sampler, std::size_t n_samples);
CertificationReport certify_constants(const NonexpansiveMap& T,
                                      const PairSampler& sampler, std::size_t n_samples);

// ---------------------------------------------------------------------------

/// The data (Q, T, f, F) of a variational inequality over Fix(T).
class ProblemInstance {
 public:
  /// Validates dimensions and alpha < eta. With limit_case the equality
  /// alpha == eta is permitted (alpha > eta never is).
  ProblemInstance(ConvexSet q, NonexpansiveMap t, LipschitzMap f, StrongMonotoneMap F,
                  bool limit_case = false);

  const ConvexSet& Q() const noexcept { return q_; }
  const NonexpansiveMap& T() const noexcept { return t_; }
  const LipschitzMap& f() const noexcept { return f_; }
  const StrongMonotoneMap& F() const noexcept { return F_; }
  /// C = Fix(T) within Q.
  const ConvexSet& C() const noexcept { return c_; }

  double alpha() const noexcept { return f_.alpha(); }
  double eta() const noexcept { return F_.eta(); }
  double kappa() const noexcept { return F_.kappa(); }
  bool limit_case() const noexcept { return limit_case_; }
  Eigen::Index dim() const noexcept { return q_.dim(); }

  /// Same instance with F replaced by F + eps I (no longer a limit case).
  ProblemInstance regularized(double eps) const;

 private:
  ConvexSet q_;
  NonexpansiveMap t_;
  LipschitzMap f_;
  StrongMonotoneMap F_;
  ConvexSet c_;
  bool limit_case_;
};

/// g(x) = F(x) - f(x)
Vector apply_g(const ProblemInstance& p, const Vector& x);

/// Checks T(Q) subset of Q on `n_probe` points of Q (random points projected
/// onto Q). Returns the first offending probe point, if any.
std::optional<Vector> find_invariance_violation(const ProblemInstance& p,
                                                std::size_t n_probe, std::uint64_t seed,
                                                double scale = 10.0, double tol = 1e-8);

}  // namespace vip
