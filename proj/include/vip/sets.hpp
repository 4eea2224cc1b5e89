#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "vip/core.hpp"

namespace vip {

class ConvexSet;

/// Componentwise bounds lower <= x <= upper.
struct Box {
  Vector lower;
  Vector upper;
};

/// Closed Euclidean ball.
struct Ball {
  Vector center;
  double radius;
};

/// {x : <normal, x> <= offset}
struct Halfspace {
  Vector normal;
  double offset;
};

/// {x : <normal, x> = offset}
struct Hyperplane {
  Vector normal;
  double offset;
};

/// basepoint + span(basis). The basis is stored column-wise and is
/// orthonormal; zero columns describe the single point {basepoint}.
struct AffineSubspace {
  Vector basepoint;
  Matrix basis;
};

struct WholeSpace {
  Eigen::Index dim;
};

/// Intersection of the members, projected by cyclic Dykstra in member order.
/// Nonemptiness is the caller's responsibility.
struct Intersection {
  std::vector<ConvexSet> members;
  double tol;
  std::size_t max_iter;
};

/// A closed convex subset of R^d with an exact (or, for intersections,
/// tolerance-controlled) metric projection.
class ConvexSet {
 public:
  using Variant = std::variant<Box, Ball, Halfspace, Hyperplane, AffineSubspace,
                               WholeSpace, Intersection>;

  static constexpr double kDefaultDykstraTol = 1e-11;
  static constexpr std::size_t kDefaultDykstraMaxIter = 200000;

  static ConvexSet box(Vector lower, Vector upper);
  static ConvexSet ball(Vector center, double radius);
  static ConvexSet halfspace(Vector normal, double offset);
  static ConvexSet hyperplane(Vector normal, double offset);
  static ConvexSet affine(Vector basepoint, const std::vector<Vector>& basis);
  static ConvexSet point(Vector p);
  static ConvexSet whole(Eigen::Index dim);
  static ConvexSet intersection(std::vector<ConvexSet> members,
                                double tol = kDefaultDykstraTol,
                                std::size_t max_iter = kDefaultDykstraMaxIter);

  Eigen::Index dim() const noexcept { return dim_; }
  const Variant& variant() const noexcept { return v_; }
  bool is_intersection() const noexcept {
    return std::holds_alternative<Intersection>(v_);
  }

 private:
  ConvexSet(Variant v, Eigen::Index dim) : v_(std::move(v)), dim_(dim) {}

  Variant v_;
  Eigen::Index dim_;
};

/// Nearest point of `set` to `x`. Intersections are routed through
/// dykstra_project with the tolerance stored in the set.
Vector project(const ConvexSet& set, const Vector& x);

/// Cyclic Dykstra projection onto an intersection. Stops once the change
/// over a full cycle is at most tol/10; throws ConvergenceError (carrying
/// the last iterate) when max_iter cycles do not suffice.
Vector dykstra_project(const ConvexSet& set, const Vector& x, double tol,
                       std::size_t max_iter);

/// ||x - project(set, x)|| <= tol.
bool contains(const ConvexSet& set, const Vector& x, double tol);

}  // namespace vip
