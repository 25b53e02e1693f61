#pragma once

#include <vector>

#include "tbh/fock_register.hpp"

namespace tbh {

/// <phi|rho|phi>. Registers must share modes; cutoffs are padded to the
/// larger of the two.
double fidelity(const FockRegister& rho, const FockRegister& target);

double purity(const FockRegister& rho);

/// Tr(rho sigma) / sqrt(Tr rho^2 Tr sigma^2); 1 iff the normalised states agree.
double state_overlap(const FockRegister& a, const FockRegister& b);

/// Conditional CV state after projecting the DV modes onto a pure state.
struct Projection {
  FockRegister state;   // normalised, single mode
  double probability = 0.0;
};

/// `dv_state` is a pure register over some of rho's modes; the remaining
/// single mode is returned. Throws DegenerateOutcome below `floor`.
Projection project_dv(const FockRegister& rho, const FockRegister& dv_state, double floor = 1e-300);

/// (|1>_{A,e} + sign |1>_{A,l}) / sqrt 2 over (A.e, A.l).
FockRegister timebin_projector(double sign = 1.0);

/// Quadrature grid with x = (a + a^dagger)/2, p = (a - a^dagger)/(2i).
struct PhaseSpaceGrid {
  double x_min = -6.0, x_max = 6.0;
  double p_min = -6.0, p_max = 6.0;
  int n_x = 101, n_p = 101;

  /// Square grid covering +-(|alpha_f| + 4).
  static PhaseSpaceGrid around(double alpha_f, int points = 101);
  void validate() const;
  double x(int i) const;
  double p(int j) const;
  double dx() const { return (x_max - x_min) / (n_x - 1); }
  double dp() const { return (p_max - p_min) / (n_p - 1); }
};

struct WignerField {
  PhaseSpaceGrid grid;
  std::vector<double> values;  // row-major, x index slowest

  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.n_p + j]; }
  double min() const;
  double max() const;
  /// Riemann sum of W over the grid.
  double integral() const;
};

/// W(x, p) = (1/pi) Int <x + u/2|rho|x - u/2> e^{-2ipu} du on a single-mode
/// register. Throws RangeError if the grid misses the normalisation by more
/// than `norm_tolerance`.
WignerField wigner(const FockRegister& rho, const PhaseSpaceGrid& grid, double norm_tolerance = 1e-3);

/// max(0, -min W) on the given grid.
double wigner_negativity(const FockRegister& rho, const PhaseSpaceGrid& grid);

/// Position wavefunctions <x|n> for n <= cutoff under the x = (a + a^dagger)/2 convention.
std::vector<double> position_wavefunctions(int cutoff, double x);

/// 2 * sum of |negative eigenvalues| of the partial transpose over
/// `transposed` modes, clamped to [0, 1 + 1e-6].
double npt(const FockRegister& rho, const std::vector<ModeLabel>& transposed);

}  // namespace tbh
