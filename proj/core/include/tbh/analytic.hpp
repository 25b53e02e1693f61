#pragma once

#include <optional>
#include <utility>

#include "tbh/fock_register.hpp"

namespace tbh::analytic {

/// Scalar parameters of the generation scheme.
struct OperatingPoint {
  double alpha = 2.0;
  double r = 0.053;
  double eta = 0.95;
  std::optional<double> zeta;
  std::optional<double> lambda2;
  std::optional<double> z_km;

  double t() const;
  double r_alpha() const { return r * alpha; }
  double alpha_f() const { return t() * alpha; }

  /// Point with BS1 chosen so that r * alpha equals `r_alpha`.
  static OperatingPoint from_r_alpha(double alpha, double r_alpha, double eta = 0.95);
  void validate() const;
};

/// Heralding probability with photon-number-resolving detectors.
double p_ideal(const OperatingPoint& pt);
/// Fidelity and probability of the two-detector on-off herald.
double fidelity1(const OperatingPoint& pt);
double p1(const OperatingPoint& pt);
/// Off-diagonal factor of the on-off heralded state, 1 at r alpha = 0.
double coherence1(const OperatingPoint& pt);
/// Heralding probability of the double-pair input.
double p2(const OperatingPoint& pt);

/// Mixture ratio p_eps P2 / (p1 P1) for an SPDC source at pt.lambda2.
double ratio_spdc(const OperatingPoint& pt);
/// Small r alpha asymptote of ratio_spdc, lambda2 / |r alpha|^2.
double ratio_spdc_asymptote(const OperatingPoint& pt);
double fidelity_multipair(const OperatingPoint& pt);

struct SeriesResult {
  double value = 0.0;
  double tail_bound = 0.0;
  int terms = 0;
};

/// Herald probability of the vacuum DV input with a squeezed vacuum in the
/// CV port. Throws ConvergenceError when the tail cannot be certified.
SeriesResult p0_squeezed_series(double zeta, double r, double alpha, double eta, double tol = 1e-18);
double p0_squeezed(double zeta, double r, double alpha, double eta, double tol = 1e-18);

/// Balanced beam-splitter coefficient C_{k,l,x}: the amplitude for x photons
/// in the first output from |k, l>, times sqrt(2)^(k + l).
double bs_coefficient(int k, int l, int x);

/// Terminating 2F1(-n, b; c; w) for integer n >= 0.
double hypergeometric_terminating(int n, double b, double c, double w);

/// Overall fidelity with vacuum and multipair admixtures. Uses
/// P0 = p0_squeezed(pt.zeta) unless `p0_override` is given.
double fidelity_squeezed(const OperatingPoint& pt, std::optional<double> p0_override = {});
/// Overall heralding probability p0 P0 + p1 P1 + p_eps P2.
double probability_squeezed(const OperatingPoint& pt, std::optional<double> p0_override = {});

struct Window {
  double lower = 0.0;
  double upper = 0.0;
  bool empty() const { return lower >= upper; }
};
/// Range |r alpha|^6 / r^4 << p1 << |r alpha|^2.
Window p1_window(const OperatingPoint& pt);

enum class Encoding { timebin, polarization, singlerail };

struct RemoteChannel {
  Encoding encoding = Encoding::timebin;
  double lc_km = 0.0;            // polarization correlation length
  double beta_db_per_km = 0.2;   // fibre attenuation
};

/// Fidelity of the remotely prepared odd cat with its target.
double remote_fidelity(const RemoteChannel& channel, double z_km, double alpha_f);

/// Closed-form hybrid state after CV loss (amplitude reflection r_cv).
struct CVLossRecord {
  double diagonal_weight = 0.5;
  double coherence = 1.0;   // factor on the off-diagonal blocks
  double amplitude = 0.0;   // surviving coherent amplitude
};
/// Closed-form hybrid state after DV loss: weight of the intact state and
/// of the vacuum-DV mixture of |+-alpha_f>.
struct DVLossRecord {
  double intact_weight = 1.0;
  double vacuum_weight = 0.0;
};
CVLossRecord cv_loss_record(double alpha_f, double r_cv);
DVLossRecord dv_loss_record(double r_dv);

/// Dense versions over hybrid_modes() with the given B cutoff.
FockRegister cv_loss_state(double alpha_f, double r_cv, int b_cutoff);
FockRegister dv_loss_state(double alpha_f, double r_dv, int b_cutoff);
/// Closed-form state heralded by the two-detector on-off strategy.
FockRegister heralded_state1(const OperatingPoint& pt, int b_cutoff);

}  // namespace tbh::analytic
