#pragma once

#include <cstddef>
#include <vector>

#include "tbh/branch_state.hpp"
#include "tbh/detectors.hpp"
#include "tbh/fock_register.hpp"
#include "tbh/scheme.hpp"

namespace tbh::detail {

/// Before step `before_step`, restrict the state to total photon number
/// `total` over `modes` (absent modes count as vacuum).
struct SectorConstraint {
  std::size_t before_step = 0;
  std::vector<ModeLabel> modes;
  int total = 0;
};

struct DenseNetwork {
  std::vector<FockRegister> sources;  // pure, disjoint modes
  std::vector<NetworkStep> steps;
  std::vector<SectorConstraint> sectors;
};

/// Streams the network through a pure register: absent inputs are vacuum,
/// outputs are shrunk to their numerical support, measured modes are folded
/// in as soon as they are final, and discarded modes go into a compressed
/// purification. Returns Tr_measured[Pi rho] on the strategy's kept modes.
ConditionalOperator run_streaming(const DenseNetwork& net, const HeraldStrategy& strategy,
                                  const DenseOptions& options);

/// The full output register with every final mode present, in `order`.
FockRegister run_unitary(const DenseNetwork& net, const std::vector<ModeLabel>& order,
                         const DenseOptions& options);

/// Zeroes every amplitude whose photon count over `modes` differs from `total`.
FockRegister project_sector(const FockRegister& state, const std::vector<ModeLabel>& modes, int total);

}  // namespace tbh::detail
