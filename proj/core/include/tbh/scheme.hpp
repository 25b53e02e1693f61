#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "tbh/branch_state.hpp"
#include "tbh/detectors.hpp"
#include "tbh/fock_register.hpp"
#include "tbh/sources.hpp"
#include "tbh/truncation.hpp"

namespace tbh {

enum class HeraldKind { ideal, simple };
enum class EngineKind { dense, branch, automatic };

std::string to_string(HeraldKind kind);
std::string to_string(EngineKind kind);
std::string to_string(DVKind kind);
std::string to_string(CVKind kind);

/// Numerical settings of the dense engine.
struct DenseOptions {
  /// Weight allowed to fall off each mode when an output is shrunk, and the
  /// tail tolerance used to size source registers.
  double eps_trunc = 1e-13;
  /// Relative eigenvalue cut when compressing the purification.
  double env_tolerance = 1e-15;
  /// Largest pure-state amplitude count the engine may hold.
  std::size_t max_elements = std::size_t{1} << 27;
};

/// Full description of one evaluation of the generation network.
struct NetworkConfig {
  double alpha = 2.0;  // amplitude of the cat and scale of the injected light
  double r = 0.053;    // BS1 field reflection
  double eta = 0.95;   // detector efficiency (simple herald)
  DVSourceSpec dv = DVSourceSpec::ideal_pair();
  CVSourceSpec cv = CVSourceSpec::cat(2.0);
  HeraldKind herald = HeraldKind::simple;
  EngineKind engine = EngineKind::automatic;

  TruncationPolicy branch_policy{4, 1e-12};
  std::size_t branch_limit = default_branch_limit;
  DenseOptions dense;
  double probability_floor = default_probability_floor;

  double t() const;
  double r_alpha() const { return r * alpha; }
  /// Amplitude of the CV qubit, t * alpha.
  double alpha_f() const { return t() * alpha; }

  /// Config with a cat of amplitude alpha and BS1 set so that r alpha = r_alpha.
  static NetworkConfig with_r_alpha(double alpha, double r_alpha, double eta = 0.95,
                                    HeraldKind herald = HeraldKind::simple);
  void validate() const;
};

/// One step of the optical network. Beam splitters map (in1, in2) to
/// (out1, out2) with the library convention; renames relabel in1 as out1.
struct NetworkStep {
  enum class Kind { beam_splitter, rename };
  Kind kind = Kind::beam_splitter;
  double r = 0.0;
  double t = 1.0;
  ModeLabel in1, in2, out1, out2;
};

/// All inputs except the DV pair (A, 2), the CV mode 3 and the injected
/// coherent mode 4 are vacuum.
std::vector<NetworkStep> network_steps(const NetworkConfig& cfg);
/// Modes at the end of the network: A(e), A(l), B and the eight detector modes.
std::vector<ModeLabel> network_outputs();

HeraldStrategy strategy_for(const NetworkConfig& cfg);

/// Pre-detection state for one DV component.
BranchState pre_detection_branches(const NetworkConfig& cfg, const WeightedComponent& component);
FockRegister pre_detection_register(const NetworkConfig& cfg, const WeightedComponent& component);

using EngineState = std::variant<BranchState, FockRegister>;
/// Pre-detection state of a single-component source with the configured
/// engine (automatic prefers the branch form).
EngineState pre_detection_state(const NetworkConfig& cfg);

struct ComponentResult {
  DVComponent component;
  double weight = 0.0;
  /// Heralding probability of the component on its own.
  double probability = 0.0;
};

struct RunResult {
  HeraldOutcome outcome;
  double alpha_f = 0.0;
  EngineKind engine_used = EngineKind::branch;
  std::size_t branch_count = 0;
  std::vector<ComponentResult> components;
};

/// Runs the network, heralds, and mixes the DV components with their weights.
RunResult run(const NetworkConfig& cfg);

/// Unnormalised conditional operator for one component.
ConditionalOperator run_component(const NetworkConfig& cfg, const WeightedComponent& component,
                                  EngineKind* engine_used = nullptr, std::size_t* branch_count = nullptr);

/// Weighted mixture of unnormalised conditional operators over common cutoffs.
HeraldOutcome mix_components(const std::vector<ConditionalOperator>& ops,
                             const std::vector<double>& weights,
                             double floor = default_probability_floor);

struct ComponentProbabilities {
  double p0 = 0.0, p1 = 0.0, p_eps = 0.0;     // source weights
  double P0 = 0.0, P1 = 0.0, P_eps = 0.0;     // per-component heralding probabilities
  double combined = 0.0;                      // p0 P0 + p1 P1 + p_eps P_eps
};

ComponentProbabilities heralded_component_probabilities(const NetworkConfig& cfg);

/// (|1>_{A,e}|alpha_f> - |1>_{A,l}|-alpha_f>)/sqrt 2 over hybrid_modes() with
/// the given B cutoff.
FockRegister target_state(double alpha_f, int b_cutoff);
/// Target embedded into the cutoffs of a heralded register.
FockRegister target_state_like(double alpha_f, const FockRegister& like);

}  // namespace tbh
