#include "tbh/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tbh/errors.hpp"

namespace tbh {

namespace {

// Both registers padded to common cutoffs, `b` reordered to `a`'s modes.
std::pair<FockRegister, FockRegister> aligned(const FockRegister& a, const FockRegister& b) {
  if (a.mode_count() != b.mode_count()) throw ModeError("registers cover different modes");
  const FockRegister bo = reorder(b, a.modes());
  std::vector<int> cut(a.cutoffs());
  for (std::size_t i = 0; i < cut.size(); ++i) cut[i] = std::max(cut[i], bo.cutoffs()[i]);
  return {embed(a, cut), embed(bo, cut)};
}

}  // namespace

double fidelity(const FockRegister& rho, const FockRegister& target) {
  if (!target.is_pure()) throw RangeError("fidelity target must be pure");
  const auto [r, phi] = aligned(rho, target);
  if (r.is_pure()) return std::norm(phi.data().dot(r.data()));
  const auto d = static_cast<Eigen::Index>(r.dimension());
  const Eigen::Map<const Matrix> m(r.data().data(), d, d);
  // row-major storage maps to the transpose
  return std::real(phi.data().dot(m.transpose() * phi.data()));
}

double purity(const FockRegister& rho) {
  const double tr = rho.trace();
  if (!(tr > 0.0)) throw DegenerateOutcome("purity of a zero state", tr);
  if (rho.is_pure()) return 1.0;
  const Matrix m = rho.density_matrix();
  return std::real((m * m).trace()) / (tr * tr);
}

double state_overlap(const FockRegister& a, const FockRegister& b) {
  const auto [x, y] = aligned(a, b);
  if (x.is_pure() && y.is_pure())
    return std::norm(x.data().dot(y.data())) / (x.data().squaredNorm() * y.data().squaredNorm());
  const Matrix mx = x.density_matrix(), my = y.density_matrix();
  const double xy = std::real((mx * my).trace());
  return xy / std::sqrt(std::real((mx * mx).trace()) * std::real((my * my).trace()));
}

FockRegister timebin_projector(double sign) {
  Vector v = Vector::Zero(4);
  v[2] = 1.0 / std::numbers::sqrt2;   // |1_e 0_l>
  v[1] = sign / std::numbers::sqrt2;  // |0_e 1_l>
  return FockRegister::pure({early("A"), late("A")}, {1, 1}, v);
}

Projection project_dv(const FockRegister& rho, const FockRegister& dv_state, double floor) {
  if (!dv_state.is_pure()) throw RangeError("projector state must be pure");
  std::vector<ModeLabel> rest;
  for (const auto& m : rho.modes())
    if (!dv_state.has_mode(m)) rest.push_back(m);
  if (rest.size() != 1 || rho.mode_count() != dv_state.mode_count() + 1)
    throw ModeError("projection must leave exactly one mode");

  std::vector<ModeLabel> order(dv_state.modes());
  order.push_back(rest.front());
  FockRegister r = reorder(rho, order);
  std::vector<int> cut(r.cutoffs());
  for (std::size_t i = 0; i < dv_state.mode_count(); ++i)
    cut[i] = std::max(cut[i], dv_state.cutoffs()[i]);
  r = embed(r, cut);
  const FockRegister phi = embed(dv_state, std::vector<int>(cut.begin(), cut.end() - 1));

  const auto ds = static_cast<Eigen::Index>(phi.dimension());
  const auto dr = static_cast<Eigen::Index>(cut.back() + 1);
  const Matrix m = r.density_matrix();
  Matrix sigma = Matrix::Zero(dr, dr);
  const Vector& f = phi.data();
  for (Eigen::Index i = 0; i < ds; ++i) {
    if (f[i] == cplx{}) continue;
    for (Eigen::Index j = 0; j < ds; ++j) {
      if (f[j] == cplx{}) continue;
      sigma += std::conj(f[i]) * f[j] * m.block(i * dr, j * dr, dr, dr);
    }
  }
  const double p = std::real(sigma.trace());
  if (!(p > floor)) throw DegenerateOutcome("projection probability below floor", p);
  sigma /= p;
  return {FockRegister::mixed({rest.front()}, {cut.back()}, sigma), p};
}

PhaseSpaceGrid PhaseSpaceGrid::around(double alpha_f, int points) {
  const double half = std::abs(alpha_f) + 4.0;
  PhaseSpaceGrid g{-half, half, -half, half, points, points};
  g.validate();
  return g;
}

void PhaseSpaceGrid::validate() const {
  if (n_x < 3 || n_p < 3 || n_x % 2 == 0 || n_p % 2 == 0)
    throw RangeError("grid sizes must be odd and at least 3");
  if (!(x_max > x_min) || !(p_max > p_min)) throw RangeError("grid ranges must be increasing");
}

double PhaseSpaceGrid::x(int i) const { return x_min + i * dx(); }
double PhaseSpaceGrid::p(int j) const { return p_min + j * dp(); }

double WignerField::min() const { return *std::min_element(values.begin(), values.end()); }
double WignerField::max() const { return *std::max_element(values.begin(), values.end()); }

double WignerField::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.dx() * grid.dp();
}

std::vector<double> position_wavefunctions(int cutoff, double x) {
  // Hermite functions phi_n(y) at y = sqrt(2) x, scaled by 2^{1/4}.
  std::vector<double> out(cutoff + 1);
  const double y = std::numbers::sqrt2 * x;
  out[0] = std::pow(2.0 / std::numbers::pi, 0.25) * std::exp(-x * x);
  if (cutoff >= 1) out[1] = std::numbers::sqrt2 * y * out[0];
  for (int n = 1; n < cutoff; ++n)
    out[n + 1] = std::sqrt(2.0 / (n + 1)) * y * out[n] - std::sqrt(double(n) / (n + 1)) * out[n - 1];
  return out;
}

WignerField wigner(const FockRegister& rho, const PhaseSpaceGrid& grid, double norm_tolerance) {
  if (rho.mode_count() != 1) throw ModeError("Wigner function needs a single mode");
  grid.validate();
  const int cutoff = rho.cutoffs().front();
  const Matrix m = rho.density_matrix() / rho.trace();

  constexpr int n_u = 1024;
  const double u_half = 2.0 * std::max(std::abs(grid.x_min), std::abs(grid.x_max));
  const double du = 2.0 * u_half / (n_u - 1);
  Eigen::MatrixXd plus(n_u, cutoff + 1), minus(n_u, cutoff + 1);
  Eigen::VectorXd weight(n_u);
  for (int k = 0; k < n_u; ++k) weight[k] = (k == 0 || k == n_u - 1) ? 0.5 * du : du;

  // e^{-2ipu} for every (u, p) pair
  Matrix phase(grid.n_p, n_u);
  for (int j = 0; j < grid.n_p; ++j)
    for (int k = 0; k < n_u; ++k) {
      const double u = -u_half + k * du;
      phase(j, k) = std::polar(weight[k] / std::numbers::pi, -2.0 * grid.p(j) * u);
    }

  WignerField field{grid, std::vector<double>(static_cast<std::size_t>(grid.n_x) * grid.n_p)};
  for (int i = 0; i < grid.n_x; ++i) {
    const double x = grid.x(i);
    for (int k = 0; k < n_u; ++k) {
      const double u = -u_half + k * du;
      const auto a = position_wavefunctions(cutoff, x + 0.5 * u);
      const auto b = position_wavefunctions(cutoff, x - 0.5 * u);
      for (int n = 0; n <= cutoff; ++n) {
        plus(k, n) = a[n];
        minus(k, n) = b[n];
      }
    }
    // kernel(u) = sum_mn rho_mn psi_m(x + u/2) psi_n(x - u/2)
    const Matrix pr = plus.cast<cplx>() * m;
    const Vector kernel = pr.cwiseProduct(minus.cast<cplx>()).rowwise().sum();
    const Vector w = phase * kernel;
    for (int j = 0; j < grid.n_p; ++j)
      field.values[static_cast<std::size_t>(i) * grid.n_p + j] = std::real(w[j]);
  }
  const double norm = field.integral();
  if (std::abs(norm - 1.0) > norm_tolerance)
    throw RangeError("Wigner grid too coarse or narrow: integral " + std::to_string(norm));
  return field;
}

double wigner_negativity(const FockRegister& rho, const PhaseSpaceGrid& grid) {
  return std::max(0.0, -wigner(rho, grid).min());
}

double npt(const FockRegister& rho, const std::vector<ModeLabel>& transposed) {
  std::vector<ModeLabel> order(transposed);
  for (const auto& m : rho.modes())
    if (std::find(transposed.begin(), transposed.end(), m) == transposed.end()) order.push_back(m);
  const FockRegister r = reorder(rho, order);
  Matrix m = r.density_matrix();
  const double tr = std::real(m.trace());
  if (!(tr > 0.0)) throw DegenerateOutcome("partial transpose of a zero state", tr);
  m /= tr;
  if (hermiticity_defect(m) > 1e-9) throw RangeError("density matrix is not Hermitian");

  Eigen::Index dt = 1;
  for (std::size_t i = 0; i < transposed.size(); ++i) dt *= r.cutoffs()[i] + 1;
  const Eigen::Index dr = m.rows() / dt;
  Matrix pt(m.rows(), m.cols());
  for (Eigen::Index a = 0; a < dt; ++a)
    for (Eigen::Index b = 0; b < dt; ++b) pt.block(b * dr, a * dr, dr, dr) = m.block(a * dr, b * dr, dr, dr);
  const RealVector ev = hermitian_eigenvalues(pt);
  double neg = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] < 0.0) neg -= ev[i];
  return std::clamp(2.0 * neg, 0.0, 1.0 + 1e-6);
}

}  // namespace tbh
