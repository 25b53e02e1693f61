#pragma once

#include <random>

#include "tbh/fock_register.hpp"
#include "tbh/linalg.hpp"

namespace tbh::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Vector random_vector(Eigen::Index n) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(g(rng()), g(rng()));
  return v / v.norm();
}

/// Haar-ish unitary from the QR factor of a Gaussian matrix.
inline Matrix random_unitary(Eigen::Index n) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(g(rng()), g(rng()));
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ();
}

/// Random density matrix of rank `rank`.
inline Matrix random_density(Eigen::Index n, int rank) {
  Matrix rho = Matrix::Zero(n, n);
  for (int k = 0; k < rank; ++k) {
    const Vector v = random_vector(n);
    rho += uniform(0.1, 1.0) * v * v.adjoint();
  }
  return rho / rho.trace();
}

inline double min_eigenvalue(const Matrix& m) { return hermitian_eigenvalues(m)[0]; }

}  // namespace tbh::test
