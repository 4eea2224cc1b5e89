#include "vip/sets.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vip {

namespace {

constexpr double kOrthonormalTol = 1e-10;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_nonzero_normal(const Vector& normal, const char* where) {
  if (normal.size() == 0) throw DimensionError(std::string(where) + ": empty normal");
  if (!all_finite(normal) || normal.squaredNorm() == 0.0) {
    throw DomainError(std::string(where) + ": zero normal vector");
  }
}

}  // namespace

ConvexSet ConvexSet::box(Vector lower, Vector upper) {
  require_same_dim(lower, upper, "box");
  if (lower.size() == 0) throw DimensionError("box: dimension must be positive");
  if ((lower.array() > upper.array()).any()) {
    throw DomainError("box: lower bound exceeds upper bound");
  }
  const auto d = lower.size();
  return ConvexSet(Box{std::move(lower), std::move(upper)}, d);
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  if (center.size() == 0) throw DimensionError("ball: dimension must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw DomainError("ball: radius must be positive");
  }
  const auto d = center.size();
  return ConvexSet(Ball{std::move(center), radius}, d);
}

ConvexSet ConvexSet::halfspace(Vector normal, double offset) {
  require_nonzero_normal(normal, "halfspace");
  const auto d = normal.size();
  return ConvexSet(Halfspace{std::move(normal), offset}, d);
}

ConvexSet ConvexSet::hyperplane(Vector normal, double offset) {
  require_nonzero_normal(normal, "hyperplane");
  const auto d = normal.size();
  return ConvexSet(Hyperplane{std::move(normal), offset}, d);
}

ConvexSet ConvexSet::affine(Vector basepoint, const std::vector<Vector>& basis) {
  const auto d = basepoint.size();
  if (d == 0) throw DimensionError("affine: dimension must be positive");
  Matrix u(d, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    require_dim(basis[j], d, "affine basis");
    u.col(static_cast<Eigen::Index>(j)) = basis[j];
  }
  if (u.cols() > 0) {
    const Matrix gram = u.transpose() * u;
    const Matrix eye = Matrix::Identity(u.cols(), u.cols());
    if ((gram - eye).cwiseAbs().maxCoeff() > kOrthonormalTol) {
      throw DomainError("affine: basis vectors are not orthonormal");
    }
  }
  return ConvexSet(AffineSubspace{std::move(basepoint), std::move(u)}, d);
}

ConvexSet ConvexSet::point(Vector p) { return affine(std::move(p), {}); }

ConvexSet ConvexSet::whole(Eigen::Index dim) {
  if (dim < 1) throw DimensionError("whole space: dimension must be positive");
  return ConvexSet(WholeSpace{dim}, dim);
}

ConvexSet ConvexSet::intersection(std::vector<ConvexSet> members, double tol,
                                  std::size_t max_iter) {
  if (members.empty()) throw DomainError("intersection: no members");
  if (!(tol > 0.0)) throw DomainError("intersection: tol must be positive");
  const auto d = members.front().dim();
  for (const auto& m : members) {
    if (m.dim() != d) throw DimensionError("intersection: members differ in dimension");
  }
  return ConvexSet(Intersection{std::move(members), tol, max_iter}, d);
}

Vector project(const ConvexSet& set, const Vector& x) {
  require_dim(x, set.dim(), "project");
  return std::visit(
      overloaded{
          [&](const Box& b) -> Vector {
            return x.cwiseMax(b.lower).cwiseMin(b.upper);
          },
          [&](const Ball& b) -> Vector {
            const Vector diff = x - b.center;
            const double r = diff.norm();
            if (r <= b.radius) return x;
            return b.center + (b.radius / r) * diff;
          },
          [&](const Halfspace& h) -> Vector {
            const double excess = h.normal.dot(x) - h.offset;
            if (excess <= 0.0) return x;
            return x - (excess / h.normal.squaredNorm()) * h.normal;
          },
          [&](const Hyperplane& h) -> Vector {
            const double excess = h.normal.dot(x) - h.offset;
            return x - (excess / h.normal.squaredNorm()) * h.normal;
          },
          [&](const AffineSubspace& a) -> Vector {
            if (a.basis.cols() == 0) return a.basepoint;
            return a.basepoint + a.basis * (a.basis.transpose() * (x - a.basepoint));
          },
          [&](const WholeSpace&) -> Vector { return x; },
          [&](const Intersection& i) -> Vector {
            return dykstra_project(set, x, i.tol, i.max_iter);
          },
      },
      set.variant());
}

Vector dykstra_project(const ConvexSet& set, const Vector& x, double tol,
                       std::size_t max_iter) {
  const auto* inter = std::get_if<Intersection>(&set.variant());
  if (inter == nullptr) throw DomainError("dykstra_project: set is not an intersection");
  if (!(tol > 0.0)) throw DomainError("dykstra_project: tol must be positive");
  require_dim(x, set.dim(), "dykstra_project");

  const auto& members = inter->members;
  if (members.size() == 1) return project(members.front(), x);

  std::vector<Vector> corrections(members.size(), Vector::Zero(x.size()));
  Vector y = x;
  for (std::size_t cycle = 0; cycle < max_iter; ++cycle) {
    const Vector cycle_start = y;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const Vector shifted = y + corrections[i];
      Vector z = project(members[i], shifted);
      corrections[i] = shifted - z;
      y = std::move(z);
    }
    if ((y - cycle_start).norm() <= tol / 10.0) return y;
  }
  throw ConvergenceError("dykstra_project: no convergence within " +
                             std::to_string(max_iter) + " cycles",
                         y);
}

bool contains(const ConvexSet& set, const Vector& x, double tol) {
  if (tol < 0.0) throw DomainError("contains: tol must be nonnegative");
  require_dim(x, set.dim(), "contains");
  if (const auto* inter = std::get_if<Intersection>(&set.variant())) {
    // Distance to the intersection dominates the distance to each member.
    for (const auto& m : inter->members) {
      if (!contains(m, x, tol)) return false;
    }
  }
  return (x - project(set, x)).norm() <= tol;
}

}  // namespace vip
