#pragma once

#include <string>
#include <vector>

#include "tbh/branch_state.hpp"
#include "tbh/fock_register.hpp"
#include "tbh/linalg.hpp"

namespace tbh {

/// Photon-number components of the time-bin pair source.
enum class DVComponent {
  vacuum,       // |0>
  pair,         // (|1>_{1e}|1>_{2e} + |1>_{1l}|1>_{2l}) / sqrt 2
  double_pair,  // a (|2,2>_e + |2,2>_l)/sqrt 2 + b |1,1,1,1>
};

enum class DVKind { ideal_pair, vacuum, truncated_multipair, spdc };

/// Weights of a two-source combination truncated at two photons per mode.
struct MultipairWeights {
  double p0 = 1.0;
  double p1 = 0.0;
  double p2 = 0.0;
  /// Amplitudes of the two terms of the double-pair state; both zero when
  /// p2 = 0 (the state is then undefined).
  double pair_pair_amplitude = 0.0;
  double quad_amplitude = 0.0;

  bool has_double_pair() const noexcept { return p2 > 0.0; }
};

/// p0 = (p0m)^2, p1 = 2 p0m p1m, p2 = 2 p0m p2m + (p1m)^2 for two identical
/// per-bin sources with photon-number weights p_k^m.
MultipairWeights combine_two_sources(double p0m, double p1m, double p2m);

/// Thermal SPDC weights p_k^m = (1 - l2) l2^k combined over both bins.
MultipairWeights spdc_multipair(double lambda2);

struct DVSourceSpec {
  DVKind kind = DVKind::ideal_pair;
  double p0 = 0.0;
  double p1 = 1.0;
  double p_eps = 0.0;
  double lambda2 = 0.0;
  double pair_pair_amplitude = 0.816496580927726;  // sqrt(2/3)
  double quad_amplitude = 0.5773502691896258;      // sqrt(1/3)

  static DVSourceSpec ideal_pair();
  static DVSourceSpec vacuum();
  /// Explicit weights with the SPDC double-pair composition.
  static DVSourceSpec multipair(double p0, double p1, double p_eps);
  static DVSourceSpec spdc(double lambda2);

  void validate() const;
};

struct WeightedComponent {
  DVComponent component;
  double weight;
  double pair_pair_amplitude = 0.0;
  double quad_amplitude = 0.0;
};

/// Components with their weights (zero-weight components omitted).
std::vector<WeightedComponent> components(const DVSourceSpec& spec);

enum class CVKind { cat_plus, squeezed_vacuum };

struct CVSourceSpec {
  CVKind kind = CVKind::cat_plus;
  double alpha = 2.0;
  double zeta = 0.0;

  static CVSourceSpec cat(double alpha);
  static CVSourceSpec squeezed(double zeta);
  void validate() const;
};

/// N = sqrt 2 sqrt(1 + exp(-2 alpha^2)).
double cat_normalization(double alpha);

/// (|alpha> + |-alpha>)/N on {|0>..|cutoff>}; odd amplitudes are exactly 0.
Vector cat_plus(double alpha, int cutoff, double eps_trunc = 1e-10);

/// S(zeta)|0> from its closed form: c_2n = (-tanh z / 2)^n sqrt((2n)!)/n! / sqrt(cosh z).
Vector squeezed_vacuum(double zeta, int cutoff, double eps_trunc = 1e-10);
/// Smallest even cutoff whose squeezed-vacuum norm deficit is below eps.
int squeezed_cutoff(double zeta, double eps_trunc);

/// Modes (s1,e), (s1,l), (s2,e), (s2,l) in that order.
std::vector<ModeLabel> pair_modes(const std::string& s1 = "1", const std::string& s2 = "2");

/// (|1>_{1e}|1>_{2e} + |1>_{1l}|1>_{2l}) / sqrt 2.
FockRegister timebin_pair(const std::string& s1 = "1", const std::string& s2 = "2");

/// One DV component over pair_modes(s1, s2).
FockRegister dv_component_register(const WeightedComponent& c, const std::string& s1 = "1",
                                   const std::string& s2 = "2");
BranchState dv_component_branches(const WeightedComponent& c, const std::string& s1 = "1",
                                  const std::string& s2 = "2",
                                  std::size_t branch_limit = default_branch_limit);

/// Even cat as two coherent branches on one mode.
BranchState cat_branches(double alpha, const ModeLabel& label,
                         std::size_t branch_limit = default_branch_limit);

}  // namespace tbh
