#pragma once

#include <cstddef>
#include <string_view>

#include <Eigen/Dense>

#include "vip/error.hpp"

namespace vip {

/// Point of the ambient space R^d with the standard dot product.
using Vector = Eigen::VectorXd;
/// Dense d x d matrix.
using Matrix = Eigen::MatrixXd;

/// Throws DimensionError unless both operands have the same dimension.
void require_same_dim(const Vector& x, const Vector& y, std::string_view where);
void require_dim(const Vector& x, Eigen::Index dim, std::string_view where);

double inner(const Vector& x, const Vector& y);
double norm(const Vector& x);
double distance(const Vector& x, const Vector& y);

/// True when every coordinate is finite.
bool all_finite(const Vector& x);

}  // namespace vip
