#pragma once

#include "tbh/fock_register.hpp"
#include "tbh/linalg.hpp"

namespace tbh {

enum class POVMKind { identity, fock, off, on, dense };

/// One measurement operator on a single mode, independent of the cutoff.
/// All kinds except `dense` are diagonal in the Fock basis.
class POVMElement {
 public:
  POVMElement() = default;

  static POVMElement identity();
  /// Projector |n><n|.
  static POVMElement fock(int n);
  /// No click: sum_k (1 - eta)^k |k><k|.
  static POVMElement off(double eta);
  /// Click: identity minus off(eta).
  static POVMElement on(double eta);
  /// Arbitrary Hermitian PSD operator on a fixed truncated space.
  static POVMElement dense(const Matrix& m);

  POVMKind kind() const noexcept { return kind_; }
  int photon_number() const noexcept { return n_; }
  double efficiency() const noexcept { return eta_; }
  bool is_identity() const noexcept { return kind_ == POVMKind::identity; }
  bool is_diagonal() const noexcept { return kind_ != POVMKind::dense; }

  /// Diagonal weights on {|0>..|cutoff>} (diagonal kinds only).
  RealVector weights(int cutoff) const;
  /// Matrix on {|0>..|cutoff>}. Dense elements must match the cutoff.
  Matrix matrix(int cutoff) const;

 private:
  POVMKind kind_ = POVMKind::identity;
  int n_ = 0;
  double eta_ = 1.0;
  Matrix dense_;
};

struct OnOffPair {
  POVMElement off;
  POVMElement on;
};

/// The two-outcome on/off detector of efficiency eta.
OnOffPair onoff_povm(double eta);

/// Normalised conditional state on the kept modes and its probability.
struct HeraldOutcome {
  FockRegister state;
  double probability = 0.0;
};

}  // namespace tbh
