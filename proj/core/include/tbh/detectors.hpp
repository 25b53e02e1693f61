#pragma once

#include <map>
#include <vector>

#include "tbh/branch_state.hpp"
#include "tbh/fock_register.hpp"
#include "tbh/mode.hpp"
#include "tbh/povm.hpp"
#include "tbh/truncation.hpp"

namespace tbh {

inline constexpr double default_probability_floor = 1e-300;

/// Composite heralding rule: one POVM element per measured mode plus the
/// modes that are kept. Every heralding mode is listed explicitly, identity
/// included.
struct HeraldStrategy {
  std::map<ModeLabel, POVMElement> assignments;
  std::vector<ModeLabel> kept;

  /// Assignments completed with identity for every other non-kept mode of
  /// `modes`. Throws ModeError if an assigned or kept mode is missing, or a
  /// kept mode carries an assignment.
  std::map<ModeLabel, POVMElement> resolve(const std::vector<ModeLabel>& modes) const;
};

/// The eight detector modes (C..F) x (e, l).
std::vector<ModeLabel> heralding_modes();
/// A(e), A(l), B.
std::vector<ModeLabel> hybrid_modes();

/// |1><1| on (E,l) and (F,e), |0><0| on the other six detector modes.
HeraldStrategy ideal_herald();
/// on(eta) on (E,l) and (F,e), identity on the other six detector modes.
HeraldStrategy simple_herald(double eta);
/// Keeps every mode; measures nothing.
HeraldStrategy identity_herald(std::vector<ModeLabel> kept);

/// Tr[Pi rho] and Tr_measured[Pi rho] / Tr[Pi rho]. Throws DegenerateOutcome
/// when the probability does not exceed `floor`.
HeraldOutcome herald(const FockRegister& state, const HeraldStrategy& strategy,
                     double floor = default_probability_floor);
HeraldOutcome herald(const BranchState& state, const HeraldStrategy& strategy,
                     const TruncationPolicy& policy = {}, double floor = default_probability_floor);

/// Applies sqrt(Pi) of one POVM element to a register mode.
FockRegister apply_povm_root(const FockRegister& state, const ModeLabel& label, const POVMElement& e);

}  // namespace tbh
