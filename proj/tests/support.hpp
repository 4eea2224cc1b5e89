#pragma once

#include <filesystem>
#include <string>

#include "vip/harness.hpp"
#include "vip/random.hpp"

namespace vip::testing {

inline std::filesystem::path config_path(const std::string& name) {
  return std::filesystem::path(VIP_CONFIG_DIR) / (name + ".json");
}

inline ExperimentConfig shipped(const std::string& name) { return load_config(config_path(name)); }

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

/// Random symmetric matrix with eigenvalues spread uniformly in [lo, hi].
inline Matrix random_spd(Eigen::Index d, double lo, double hi, Rng& rng) {
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = rng.uniform(-1.0, 1.0);
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ();
  Vector lam(d);
  for (Eigen::Index i = 0; i < d; ++i) lam[i] = d == 1 ? lo : lo + (hi - lo) * double(i) / double(d - 1);
  Matrix a = q * lam.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

inline Matrix random_matrix(Eigen::Index d, double scale, Rng& rng) {
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rng.uniform(-scale, scale);
  return m;
}

/// Affine instance of dimension d: F = A x + c with spectrum in [1, 3],
/// f = M x + b with ||M|| = 0.4, T = P_Ball(0, 2), Q = whole space.
inline ProblemInstance random_affine_instance(Eigen::Index d, std::uint64_t seed) {
  Rng rng(seed);
  const Matrix a = random_spd(d, 1.0, 3.0, rng);
  Matrix m = random_matrix(d, 1.0, rng);
  m *= 0.4 / spectral_norm(m);
  return ProblemInstance(ConvexSet::whole(d), NonexpansiveMap::projection(ConvexSet::ball(Vector::Zero(d), 2.0)),
                         LipschitzMap::affine(m, rng.vector(d)),
                         StrongMonotoneMap::affine_spd(a, rng.vector(d)));
}

}  // namespace vip::testing
