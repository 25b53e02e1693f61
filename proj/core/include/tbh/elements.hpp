#pragma once

#include <vector>

#include "tbh/fock_register.hpp"
#include "tbh/linalg.hpp"
#include "tbh/mode.hpp"

namespace tbh {

enum class ElementKind { beam_splitter, displacement, squeeze, loss, depolarize };

/// An optical element or channel together with the modes it acts on.
///
/// Beam splitter amplitudes follow out1 = t in1 - r in2, out2 = r in1 + t in2,
/// i.e. a1^dag -> t b1^dag + r b2^dag and a2^dag -> -r b1^dag + t b2^dag.
struct ElementSpec {
  ElementKind kind = ElementKind::beam_splitter;
  double r = 0.0;
  double t = 1.0;
  cplx beta = 0.0;
  double zeta = 0.0;
  double transmission = 1.0;  // intensity transmission of a loss channel
  double z_km = 0.0;
  double lc_km = 1.0;
  std::vector<ModeLabel> targets;

  /// Copy of this element bound to the given modes.
  ElementSpec on(std::vector<ModeLabel> modes) const;
  bool is_unitary() const noexcept {
    return kind != ElementKind::loss && kind != ElementKind::depolarize;
  }
  /// Number of modes the element acts on.
  std::size_t arity() const noexcept {
    return kind == ElementKind::beam_splitter || kind == ElementKind::depolarize ? 2 : 1;
  }
};

ElementSpec beam_splitter(double r, double t);
ElementSpec balanced_beam_splitter();
ElementSpec displacement(cplx beta);
/// Real squeezing parameter only; a complex value throws RangeError.
ElementSpec squeeze(cplx zeta);
ElementSpec loss_channel(double transmission);
ElementSpec depolarize_channel(double z_km, double lc_km);

/// Linear attenuation coefficient (1/km) for a loss quoted in dB/km.
double attenuation_per_km(double db_per_km);
/// Intensity transmission 10^(-db_per_km z / 10) of a fiber of length z.
double fiber_transmission(double z_km, double db_per_km = 0.2);
/// sigma^2 = 2 / L_C of the birefringence random walk.
double depolarization_sigma2(double lc_km);

/// Exact beam-splitter map from inputs with cutoffs (in1, in2) to outputs
/// with cutoffs (out1, out2). Rows index (n_out1, n_out2) row-major, columns
/// index (n_in1, n_in2). Computed on complete photon-number sectors, so it is
/// exact whenever out1, out2 >= in1 + in2.
Matrix beam_splitter_map(double r, double t, int in1, int in2, int out1, int out2);

/// D(beta) on {|0>..|cutoff>}, exponentiated on a padded space and cropped.
Matrix displacement_matrix(cplx beta, int cutoff, int padding = 40);
/// S(zeta) = exp((zeta a^2 - zeta a^dag^2)/2) for real zeta, padded and cropped.
Matrix squeeze_matrix(double zeta, int cutoff, int padding = 60);

/// Kraus operators of the pure-loss channel with intensity transmission T.
std::vector<Matrix> loss_kraus(double transmission, int cutoff);

/// Applies an element to a register. Beam splitters widen both output
/// cutoffs to in1 + in2 so that no amplitude is lost; channels return a mixed
/// register. Depolarization pads both polarization modes the same way.
FockRegister apply_element(const FockRegister& state, const ElementSpec& element);

}  // namespace tbh
