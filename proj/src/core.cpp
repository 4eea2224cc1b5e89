#include "vip/core.hpp"

#include <cmath>
#include <string>

namespace vip {

void require_same_dim(const Vector& x, const Vector& y, std::string_view where) {
  if (x.size() != y.size()) {
    throw DimensionError(std::string(where) + ": dimension mismatch (" +
                         std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
  }
}

void require_dim(const Vector& x, Eigen::Index dim, std::string_view where) {
  if (x.size() != dim) {
    throw DimensionError(std::string(where) + ": expected dimension " +
                         std::to_string(dim) + ", got " +
                         std::to_string(x.size()));
  }
}

double inner(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "inner");
  return x.dot(y);
}

double norm(const Vector& x) { return x.norm(); }

double distance(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "distance");
  return (x - y).norm();
}

bool all_finite(const Vector& x) { return x.allFinite(); }

}  // namespace vip
