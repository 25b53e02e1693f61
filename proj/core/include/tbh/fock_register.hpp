#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "tbh/linalg.hpp"
#include "tbh/mode.hpp"

namespace tbh {

enum class StateKind { pure, mixed };

/// Dense multimode state over truncated Fock spaces.
///
/// Mode i has basis {|0>, ..., |cutoff_i>}. Amplitudes are stored row-major
/// with the first mode most significant. A mixed register stores its density
/// matrix as a row-major (D x D) array, i.e. a tensor whose first n axes are
/// the ket indices and whose last n axes are the bra indices.
class FockRegister {
 public:
  FockRegister() = default;

  static FockRegister pure(std::vector<ModeLabel> modes, std::vector<int> cutoffs,
                           Vector amplitudes);
  static FockRegister mixed(std::vector<ModeLabel> modes, std::vector<int> cutoffs,
                            const Matrix& density);
  static FockRegister vacuum(std::vector<ModeLabel> modes, std::vector<int> cutoffs);
  static FockRegister fock(std::vector<ModeLabel> modes, std::vector<int> cutoffs,
                           const std::vector<int>& occupation);
  /// Single-mode pure register from an amplitude list; cutoff = size - 1.
  static FockRegister single_mode(ModeLabel label, Vector amplitudes);

  const std::vector<ModeLabel>& modes() const noexcept { return modes_; }
  const std::vector<int>& cutoffs() const noexcept { return cutoffs_; }
  std::vector<int> dims() const;
  StateKind kind() const noexcept { return kind_; }
  bool is_pure() const noexcept { return kind_ == StateKind::pure; }
  std::size_t mode_count() const noexcept { return modes_.size(); }

  /// Hilbert-space dimension (product of cutoff + 1).
  std::size_t dimension() const noexcept { return dimension_; }

  bool has_mode(const ModeLabel& label) const;
  /// Position of a mode; throws ModeError when absent.
  std::size_t position(const ModeLabel& label) const;
  int cutoff(const ModeLabel& label) const { return cutoffs_[position(label)]; }

  /// Raw storage: amplitudes (pure) or row-major density entries (mixed).
  const Vector& data() const noexcept { return data_; }

  /// Density matrix, |psi><psi| for pure registers.
  Matrix density_matrix() const;

  /// Amplitude (pure) for a full occupation list in register order.
  cplx amplitude(std::span<const int> occupation) const;

  /// <psi|psi> for pure, Tr(rho) for mixed.
  double trace() const;

  FockRegister normalized() const;
  FockRegister to_mixed() const;
  FockRegister scaled(double factor) const;

 private:
  friend struct RegisterAccess;
  FockRegister(std::vector<ModeLabel> modes, std::vector<int> cutoffs, StateKind kind,
               Vector data);

  std::vector<ModeLabel> modes_;
  std::vector<int> cutoffs_;
  StateKind kind_ = StateKind::pure;
  std::size_t dimension_ = 1;
  Vector data_;
};

/// Amplitudes e^{-|b|^2/2} b^k / sqrt(k!) for k <= cutoff. Throws
/// TruncationError carrying the norm deficit when it exceeds eps_trunc.
Vector coherent_state(cplx beta, int cutoff, double eps_trunc = 1e-10);

/// Tensor product; the result is mixed if either factor is.
FockRegister tensor_product(const FockRegister& a, const FockRegister& b);

/// Applies `op` to the listed modes (first target most significant in op's
/// index). Other modes keep their order.
FockRegister apply_operator(const FockRegister& state, const Matrix& op,
                            const std::vector<ModeLabel>& targets);

/// A new mode produced by a map, with its cutoff.
struct ModeSlot {
  ModeLabel label;
  int cutoff;
};

/// Applies a (possibly rectangular) linear map M from the input modes to a
/// new set of output modes: psi -> M psi, rho -> M rho M^dagger. Outputs are
/// placed where the first input mode was.
FockRegister apply_map(const FockRegister& state, const Matrix& map,
                       const std::vector<ModeLabel>& inputs,
                       const std::vector<ModeSlot>& outputs);

/// Reduced density matrix on `keep` (kept modes retain register order).
FockRegister partial_trace(const FockRegister& state, const std::vector<ModeLabel>& keep);

/// <a|b>; conjugate-linear in `a`.
cplx inner_product(const FockRegister& a, const FockRegister& b);

FockRegister rename_mode(const FockRegister& state, const ModeLabel& from, const ModeLabel& to);

/// Permutes modes into the given order (must be a permutation of the modes).
FockRegister reorder(const FockRegister& state, const std::vector<ModeLabel>& order);

/// Changes one mode's cutoff; growing pads with zeros. The returned weight is
/// the squared norm (or trace) that truncation removed.
std::pair<FockRegister, double> resize_mode(const FockRegister& state, const ModeLabel& label,
                                            int new_cutoff);

/// Photon-number distribution of one mode (unnormalised).
std::vector<double> marginal_distribution(const FockRegister& state, const ModeLabel& label);

/// Pads every mode so the cutoffs match `cutoffs` (which must not be smaller).
FockRegister embed(const FockRegister& state, const std::vector<int>& cutoffs);

/// Label of the environment mode that holds a compressed purification.
ModeLabel environment_label();

/// Moves `modes` of a pure register into its environment mode, then
/// compresses the environment to the numerical Schmidt rank. The reduced
/// state on the remaining modes is unchanged up to weights below
/// `rel_tolerance` times the trace.
FockRegister trace_into_environment(const FockRegister& state, const std::vector<ModeLabel>& modes,
                                    double rel_tolerance = 1e-16);

}  // namespace tbh
