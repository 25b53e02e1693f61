#pragma once

#include <complex>

namespace tbh {

/// P(n > n_max) for a Poisson distribution of the given mean.
double poisson_tail(double mean, int n_max);

/// Chooses per-mode Fock cutoffs.
///
/// For a mode carrying coherent amplitude beta and at most `excitation` extra
/// created photons the cutoff is
///   max(ceil(|beta|^2 + 6|beta|) + base_cutoff, smallest n with Poisson tail < eps_trunc)
/// plus the excitation order.
struct TruncationPolicy {
  int base_cutoff = 4;
  double eps_trunc = 1e-10;

  int cutoff_for(std::complex<double> beta, int excitation = 0) const;
  int cutoff_for(double abs_beta, int excitation = 0) const;
};

}  // namespace tbh
