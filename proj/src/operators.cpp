#include "vip/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
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

void require_square(const Matrix& m, const Vector& shift, const char* where) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw DimensionError(std::string(where) + ": matrix must be square and nonempty");
  }
  require_dim(shift, m.rows(), where);
  if (!m.allFinite() || !all_finite(shift)) {
    throw DomainError(std::string(where) + ": non-finite coefficients");
  }
}

}  // namespace

double spectral_norm(const Matrix& m) {
  const Matrix gram = m.transpose() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double min_symmetric_eigenvalue(const Matrix& m) {
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// --- NonexpansiveMap ------------------------------------------------------

NonexpansiveMap NonexpansiveMap::identity(Eigen::Index dim) {
  return NonexpansiveMap(IdentityMap{dim}, ConvexSet::whole(dim));
}

NonexpansiveMap NonexpansiveMap::projection(ConvexSet set) {
  ConvexSet fix = set;
  return NonexpansiveMap(SetProjection{std::move(set)}, std::move(fix));
}

NonexpansiveMap NonexpansiveMap::composition(std::vector<ConvexSet> sets) {
  if (sets.empty()) throw DomainError("composition: no sets");
  ConvexSet fix = sets.size() == 1 ? sets.front() : ConvexSet::intersection(sets);
  return NonexpansiveMap(ProjectionComposition{std::move(sets)}, std::move(fix));
}

NonexpansiveMap NonexpansiveMap::averaged(NonexpansiveMap base, double weight) {
  if (!(weight > 0.0 && weight < 1.0)) {
    throw DomainError("averaged: weight must lie in (0, 1)");
  }
  ConvexSet fix = base.fix_set();
  return NonexpansiveMap(
      AveragedMap{std::make_shared<const NonexpansiveMap>(std::move(base)), weight},
      std::move(fix));
}

NonexpansiveMap NonexpansiveMap::rotation2d(double angle) {
  if (!std::isfinite(angle)) throw DomainError("rotation2d: angle must be finite");
  const bool trivial = std::abs(std::remainder(angle, 2.0 * std::numbers::pi)) <= 1e-12;
  ConvexSet fix = trivial ? ConvexSet::whole(2) : ConvexSet::point(Vector::Zero(2));
  return NonexpansiveMap(Rotation2D{angle}, std::move(fix));
}

Vector apply_T(const NonexpansiveMap& t, const Vector& x) {
  require_dim(x, t.dim(), "apply_T");
  return std::visit(
      overloaded{
          [&](const IdentityMap&) -> Vector { return x; },
          [&](const SetProjection& p) -> Vector { return project(p.set, x); },
          [&](const ProjectionComposition& c) -> Vector {
            Vector y = x;
            for (const auto& s : c.sets) y = project(s, y);
            return y;
          },
          [&](const AveragedMap& a) -> Vector {
            return (1.0 - a.weight) * x + a.weight * apply_T(*a.base, x);
          },
          [&](const Rotation2D& r) -> Vector {
            const double c = std::cos(r.angle);
            const double s = std::sin(r.angle);
            Vector y(2);
            y << c * x[0] - s * x[1], s * x[0] + c * x[1];
            return y;
          },
      },
      t.variant());
}

double fix_residual(const NonexpansiveMap& t, const Vector& x) {
  return (x - apply_T(t, x)).norm();
}

// --- LipschitzMap ---------------------------------------------------------

LipschitzMap LipschitzMap::zero(Eigen::Index dim) {
  if (dim < 1) throw DimensionError("zero map: dimension must be positive");
  return LipschitzMap(ZeroMap{dim}, dim, 0.0);
}

LipschitzMap LipschitzMap::constant(Vector u) {
  if (u.size() == 0) throw DimensionError("constant map: empty value");
  if (!all_finite(u)) throw DomainError("constant map: non-finite value");
  const auto d = u.size();
  return LipschitzMap(ConstantMap{std::move(u)}, d, 0.0);
}

LipschitzMap LipschitzMap::affine(Matrix m, Vector b) {
  require_square(m, b, "affine map");
  const auto d = m.rows();
  const double alpha = spectral_norm(m);
  return LipschitzMap(AffineMap{std::move(m), std::move(b)}, d, alpha);
}

Vector apply_f(const LipschitzMap& f, const Vector& x) {
  require_dim(x, f.dim(), "apply_f");
  return std::visit(overloaded{
                        [&](const ZeroMap& z) -> Vector { return Vector::Zero(z.dim); },
                        [&](const ConstantMap& c) -> Vector { return c.value; },
                        [&](const AffineMap& a) -> Vector { return a.matrix * x + a.shift; },
                    },
                    f.variant());
}

// --- StrongMonotoneMap ----------------------------------------------------

StrongMonotoneMap StrongMonotoneMap::identity(Eigen::Index dim) {
  if (dim < 1) throw DimensionError("identity operator: dimension must be positive");
  return StrongMonotoneMap(IdentityOperator{dim}, dim, 1.0, 1.0);
}

StrongMonotoneMap StrongMonotoneMap::affine_spd(Matrix a, Vector c) {
  require_square(a, c, "affine_spd");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("affine_spd: matrix is not symmetric");
  }
  const double eta = min_symmetric_eigenvalue(a);
  if (!(eta > 0.0)) throw DomainError("affine_spd: matrix is not positive definite");
  const double kappa = spectral_norm(a);
  const auto d = a.rows();
  return StrongMonotoneMap(AffineSPD{std::move(a), std::move(c)}, d, eta, kappa);
}

StrongMonotoneMap StrongMonotoneMap::scaled_identity(double eta, Vector c) {
  if (c.size() == 0) throw DimensionError("scaled_identity: empty shift");
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw DomainError("scaled_identity: eta must be positive");
  }
  const auto d = c.size();
  return StrongMonotoneMap(ScaledIdentityShift{eta, std::move(c)}, d, eta, eta);
}

StrongMonotoneMap StrongMonotoneMap::tikhonov(double eps) const {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw DomainError("tikhonov: eps must be positive");
  }
  Variant shifted = std::visit(
      overloaded{
          [&](const IdentityOperator& i) -> Variant {
            return ScaledIdentityShift{1.0 + eps, Vector::Zero(i.dim)};
          },
          [&](const AffineSPD& a) -> Variant {
            return AffineSPD{a.matrix + eps * Matrix::Identity(dim_, dim_), a.shift};
          },
          [&](const ScaledIdentityShift& s) -> Variant {
            return ScaledIdentityShift{s.eta + eps, s.shift};
          },
      },
      v_);
  return StrongMonotoneMap(std::move(shifted), dim_, eta_ + eps, kappa_ + eps);
}

Vector apply_F(const StrongMonotoneMap& F, const Vector& x) {
  require_dim(x, F.dim(), "apply_F");
  return std::visit(
      overloaded{
          [&](const IdentityOperator&) -> Vector { return x; },
          [&](const AffineSPD& a) -> Vector { return a.matrix * x + a.shift; },
          [&](const ScaledIdentityShift& s) -> Vector { return s.eta * x + s.shift; },
      },
      F.variant());
}

// --- certification --------------------------------------------------------

PairSampler uniform_pair_sampler(Eigen::Index dim, std::uint64_t seed, double scale) {
  auto rng = std::make_shared<Rng>(seed);
  return [rng, dim, scale]() {
    Vector x = rng->vector(dim, scale);
    Vector y = rng->vector(dim, scale);
    return std::make_pair(std::move(x), std::move(y));
  };
}

namespace {

template <class Apply>
CertificationReport certify(const Apply& apply, bool monotone, const PairSampler& sampler,
                            std::size_t n_samples) {
  if (n_samples < 1) throw DomainError("certify_constants: n_samples must be >= 1");
  CertificationReport report;
  double min_mono = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_samples; ++k) {
    const auto [x, y] = sampler();
    const Vector dx = x - y;
    const double d2 = dx.squaredNorm();
    if (d2 == 0.0) continue;
    const Vector dv = apply(x) - apply(y);
    report.max_ratio_lipschitz =
        std::max(report.max_ratio_lipschitz, dv.norm() / std::sqrt(d2));
    if (monotone) min_mono = std::min(min_mono, dv.dot(dx) / d2);
    ++report.pairs_used;
  }
  if (report.pairs_used == 0) {
    throw DomainError("certify_constants: every sampled pair was degenerate");
  }
  if (monotone) report.min_ratio_monotone = min_mono;
  return report;
}

}  // namespace

CertificationReport certify_constants(const LipschitzMap& f, const PairSampler& sampler,
                                      std::size_t n_samples) {
  return certify([&](const Vector& x) { return apply_f(f, x); }, false, sampler, n_samples);
}

CertificationReport certify_constants(const StrongMonotoneMap& F,
                                      const PairSampler& sampler, std::size_t n_samples) {
  return certify([&](const Vector& x) { return apply_F(F, x); }, true, sampler, n_samples);
}

CertificationReport certify_constants(const NonexpansiveMap& T,
                                      const PairSampler& sampler, std::size_t n_samples) {
  return certify([&](const Vector& x) { return apply_T(T, x); }, false, sampler, n_samples);
}

// --- ProblemInstance ------------------------------------------------------

namespace {

ConvexSet fixed_points_in(const ConvexSet& q, const NonexpansiveMap& t) {
  if (t.dim() != q.dim()) throw DimensionError("problem: T and Q differ in dimension");
  const ConvexSet& fix = t.fix_set();
  if (std::holds_alternative<WholeSpace>(q.variant())) return fix;
  if (std::holds_alternative<WholeSpace>(fix.variant())) return q;
  return ConvexSet::intersection({fix, q});
}

}  // namespace

ProblemInstance::ProblemInstance(ConvexSet q, NonexpansiveMap t, LipschitzMap f,
                                 StrongMonotoneMap F, bool limit_case)
    : q_(std::move(q)),
      t_(std::move(t)),
      f_(std::move(f)),
      F_(std::move(F)),
      c_(fixed_points_in(q_, t_)),
      limit_case_(limit_case) {
  const auto d = q_.dim();
  if (t_.dim() != d || f_.dim() != d || F_.dim() != d) {
    throw DimensionError("problem: Q, T, f and F must share one dimension");
  }
  const double a = alpha();
  const double e = eta();
  if (limit_case_) {
    if (a > e + 1e-12 * std::max(1.0, e)) {
      throw DomainError("problem: limit case requires alpha <= eta");
    }
  } else if (!(a < e)) {
    throw DomainError(
        "problem: alpha must be strictly below eta; flag the instance as a limit case "
        "and use the regularization path when alpha == eta");
  }
}

ProblemInstance ProblemInstance::regularized(double eps) const {
  return ProblemInstance(q_, t_, f_, F_.tikhonov(eps), false);
}

Vector apply_g(const ProblemInstance& p, const Vector& x) {
  return apply_F(p.F(), x) - apply_f(p.f(), x);
}

std::optional<Vector> find_invariance_violation(const ProblemInstance& p,
                                                std::size_t n_probe, std::uint64_t seed,
                                                double scale, double tol) {
  Rng rng(seed);
  for (std::size_t k = 0; k < n_probe; ++k) {
    const Vector x = project(p.Q(), rng.vector(p.dim(), scale));
    if (!contains(p.Q(), apply_T(p.T(), x), tol)) return x;
  }
  return std::nullopt;
}

}  // namespace vip
