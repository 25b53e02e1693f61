#pragma once

#include <complex>

#include <Eigen/Dense>

namespace tbh {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// exp(G) for an anti-Hermitian G. The sparsity graph of G is split into
/// connected blocks and each block is diagonalised as a Hermitian matrix, so
/// the result is unitary to machine precision.
Matrix expm_antihermitian(const Matrix& generator);

/// Principal square root of a Hermitian positive semidefinite matrix.
/// Negative eigenvalues within roundoff are clamped to zero.
Matrix sqrt_psd(const Matrix& m);

/// Largest |M - M^dagger| entry.
double hermiticity_defect(const Matrix& m);

/// Eigenvalues of a Hermitian matrix in ascending order.
RealVector hermitian_eigenvalues(const Matrix& m);

/// Annihilation operator on {|0>..|cutoff>}.
Matrix annihilation(int cutoff);

}  // namespace tbh
