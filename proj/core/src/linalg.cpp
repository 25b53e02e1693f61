#include "tbh/linalg.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "tbh/errors.hpp"

namespace tbh {

namespace {

int find_root(std::vector<int>& parent, int i) {
  while (parent[static_cast<std::size_t>(i)] != i) {
    parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
    i = parent[static_cast<std::size_t>(i)];
  }
  return i;
}

}  // namespace

Matrix expm_antihermitian(const Matrix& g) {
  if (g.rows() != g.cols()) throw DimensionError("generator must be square");
  const int n = static_cast<int>(g.rows());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (g(i, j) != cplx(0) || g(j, i) != cplx(0)) {
        int a = find_root(parent, i), b = find_root(parent, j);
        if (a != b) parent[static_cast<std::size_t>(a)] = b;
      }

  std::vector<std::vector<int>> blocks(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) blocks[static_cast<std::size_t>(find_root(parent, i))].push_back(i);

  Matrix result = Matrix::Zero(n, n);
  for (const auto& block : blocks) {
    if (block.empty()) continue;
    const auto m = static_cast<Eigen::Index>(block.size());
    Matrix h(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b) h(a, b) = cplx(0, 1) * g(block[a], block[b]);
    // i G is Hermitian; symmetrise to remove roundoff before the eigensolve.
    h = (0.5 * (h + h.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector phases(m);
    for (Eigen::Index k = 0; k < m; ++k) phases[k] = std::exp(cplx(0, -es.eigenvalues()[k]));
    Matrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b) result(block[a], block[b]) = u(a, b);
  }
  return result;
}

Matrix sqrt_psd(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix must be square");
  Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  RealVector s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix must be square");
  if (m.size() == 0) return 0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

RealVector hermitian_eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix must be square");
  Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Matrix annihilation(int cutoff) {
  if (cutoff < 0) throw RangeError("cutoff must be nonnegative");
  Matrix a = Matrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

}  // namespace tbh
