#include "tbh/scheme.hpp"

#include <algorithm>
#include <cmath>

#include "dense_pipeline.hpp"
#include "tbh/errors.hpp"

namespace tbh {

std::string to_string(HeraldKind kind) { return kind == HeraldKind::ideal ? "ideal" : "simple"; }

std::string to_string(EngineKind kind) {
  switch (kind) {
    case EngineKind::dense: return "dense";
    case EngineKind::branch: return "branch";
    case EngineKind::automatic: return "auto";
  }
  return "auto";
}

std::string to_string(DVKind kind) {
  switch (kind) {
    case DVKind::ideal_pair: return "pair";
    case DVKind::vacuum: return "vacuum";
    case DVKind::truncated_multipair: return "multipair";
    case DVKind::spdc: return "spdc";
  }
  return "pair";
}

std::string to_string(CVKind kind) { return kind == CVKind::cat_plus ? "cat" : "squeezed"; }

double NetworkConfig::t() const { return std::sqrt(std::max(0.0, 1.0 - r * r)); }

NetworkConfig NetworkConfig::with_r_alpha(double alpha, double r_alpha, double eta, HeraldKind herald) {
  if (!(alpha > 0.0)) throw RangeError("alpha must be positive to fix r from r*alpha");
  NetworkConfig cfg;
  cfg.alpha = alpha;
  cfg.r = r_alpha / alpha;
  cfg.eta = eta;
  cfg.cv = CVSourceSpec::cat(alpha);
  cfg.herald = herald;
  cfg.validate();
  return cfg;
}

void NetworkConfig::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw RangeError("alpha must be nonnegative");
  if (!(r >= 0.0 && r < 1.0)) throw RangeError("BS1 reflection must lie in [0, 1)");
  if (!(eta >= 0.0 && eta <= 1.0)) throw RangeError("eta must lie in [0, 1]");
  dv.validate();
  cv.validate();
  if (branch_limit == 0) throw RangeError("branch limit must be positive");
}

namespace {

constexpr TimeBin bins[] = {TimeBin::early, TimeBin::late};

NetworkStep bs(double r, double t, ModeLabel in1, ModeLabel in2, ModeLabel out1, ModeLabel out2) {
  return {NetworkStep::Kind::beam_splitter, r, t, std::move(in1), std::move(in2), std::move(out1), std::move(out2)};
}

NetworkStep rename_step(ModeLabel from, ModeLabel to) {
  NetworkStep s;
  s.kind = NetworkStep::Kind::rename;
  s.in1 = std::move(from);
  s.out1 = std::move(to);
  return s;
}

// Index of the first per-bin step (BS3) for each bin.
std::size_t bin_start(TimeBin b) { return b == TimeBin::early ? 4 : 8; }

}  // namespace

std::vector<NetworkStep> network_steps(const NetworkConfig& cfg) {
  const double h = std::sqrt(0.5);
  std::vector<NetworkStep> steps;
  steps.push_back(bs(cfg.r, cfg.t(), mode("v1"), mode("3"), mode("5"), mode("B")));
  steps.push_back(bs(h, h, mode("5"), mode("4"), mode("6"), mode("7")));
  // The long arm of the interferometer is the late bin.
  steps.push_back(rename_step(mode("6"), late("6")));
  steps.push_back(rename_step(mode("7"), early("7")));
  for (TimeBin b : bins) {
    steps.push_back(bs(h, h, in_bin("7", b), in_bin("6", b), in_bin("9", b), in_bin("8", b)));
    steps.push_back(bs(h, h, in_bin("2", b), in_bin("v4", b), in_bin("10", b), in_bin("11", b)));
    steps.push_back(bs(h, h, in_bin("10", b), in_bin("8", b), in_bin("C", b), in_bin("D", b)));
    steps.push_back(bs(h, h, in_bin("11", b), in_bin("9", b), in_bin("E", b), in_bin("F", b)));
  }
  return steps;
}

std::vector<ModeLabel> network_outputs() {
  std::vector<ModeLabel> out = hybrid_modes();
  for (const auto& m : heralding_modes()) out.push_back(m);
  return out;
}

HeraldStrategy strategy_for(const NetworkConfig& cfg) {
  return cfg.herald == HeraldKind::ideal ? ideal_herald() : simple_herald(cfg.eta);
}

namespace {

void check_branch_capable(const NetworkConfig& cfg) {
  if (cfg.cv.kind == CVKind::squeezed_vacuum)
    throw CapabilityError("a squeezed vacuum has no finite branch representation; use the dense engine");
}

BranchState rename_pair(BranchState s, const NetworkStep& st) {
  // Go through temporaries so that swapped labels cannot collide.
  const ModeLabel t1{"~t1", TimeBin::none}, t2{"~t2", TimeBin::none};
  s = s.renamed(st.in1, t1).renamed(st.in2, t2);
  return s.renamed(t1, st.out1).renamed(t2, st.out2);
}

detail::DenseNetwork dense_network(const NetworkConfig& cfg, const WeightedComponent& component,
                                   const HeraldStrategy* strategy) {
  detail::DenseNetwork net;
  net.sources.push_back(dv_component_register(component, "A", "2"));
  const double eps = cfg.dense.eps_trunc;
  const TruncationPolicy tight{0, eps};
  if (cfg.cv.kind == CVKind::cat_plus) {
    const int c = tight.cutoff_for(cfg.cv.alpha);
    net.sources.push_back(FockRegister::single_mode(mode("3"), cat_plus(cfg.cv.alpha, c, 10 * eps)));
  } else {
    const int c = squeezed_cutoff(cfg.cv.zeta, eps);
    net.sources.push_back(FockRegister::single_mode(mode("3"), squeezed_vacuum(cfg.cv.zeta, c, 10 * eps)));
  }
  const double ra = cfg.r_alpha();
  net.sources.push_back(
      FockRegister::single_mode(mode("4"), coherent_state(ra, tight.cutoff_for(ra), 10 * eps)));
  net.steps = network_steps(cfg);

  // Photon-number projectors on all four detectors of a bin fix the number
  // of photons entering that bin's detection stage.
  if (strategy != nullptr) {
    for (TimeBin b : bins) {
      int total = 0;
      bool all_fock = true;
      for (const char* d : {"C", "D", "E", "F"}) {
        auto it = strategy->assignments.find(in_bin(d, b));
        if (it == strategy->assignments.end() || it->second.kind() != POVMKind::fock) {
          all_fock = false;
          break;
        }
        total += it->second.photon_number();
      }
      if (all_fock)
        net.sectors.push_back({bin_start(b), {in_bin("7", b), in_bin("6", b), in_bin("2", b)}, total});
    }
  }
  return net;
}

Matrix embedded_density(const FockRegister& r, const std::vector<int>& cutoffs) {
  return embed(r, cutoffs).density_matrix();
}

}  // namespace

BranchState pre_detection_branches(const NetworkConfig& cfg, const WeightedComponent& component) {
  cfg.validate();
  check_branch_capable(cfg);
  const std::size_t limit = cfg.branch_limit;
  BranchState s = dv_component_branches(component, "A", "2", limit);
  s = tensor_product(s, cat_branches(cfg.cv.alpha, mode("3"), limit));
  s = tensor_product(s, BranchState::product({mode("4")}, {ModeFactor{cfg.r_alpha(), {1.0}}}, 1.0, limit));
  for (const auto& st : network_steps(cfg)) {
    if (st.kind == NetworkStep::Kind::rename) {
      if (!s.has_mode(st.in1)) s = s.with_vacuum_mode(st.in1);
      s = s.renamed(st.in1, st.out1);
      continue;
    }
    if (!s.has_mode(st.in1)) s = s.with_vacuum_mode(st.in1);
    if (!s.has_mode(st.in2)) s = s.with_vacuum_mode(st.in2);
    s = apply_beam_splitter(s, st.r, st.t, st.in1, st.in2);
    s = rename_pair(std::move(s), st);
  }
  for (const auto& m : network_outputs())
    if (!s.has_mode(m)) s = s.with_vacuum_mode(m);
  return s;
}

FockRegister pre_detection_register(const NetworkConfig& cfg, const WeightedComponent& component) {
  cfg.validate();
  return detail::run_unitary(dense_network(cfg, component, nullptr), network_outputs(), cfg.dense);
}

EngineState pre_detection_state(const NetworkConfig& cfg) {
  const auto comps = components(cfg.dv);
  if (comps.size() != 1)
    throw CapabilityError("a mixed DV source has no single pre-detection state; evaluate its components");
  if (cfg.engine == EngineKind::dense || (cfg.engine == EngineKind::automatic && cfg.cv.kind == CVKind::squeezed_vacuum))
    return pre_detection_register(cfg, comps.front());
  return pre_detection_branches(cfg, comps.front());
}

ConditionalOperator run_component(const NetworkConfig& cfg, const WeightedComponent& component,
                                  EngineKind* engine_used, std::size_t* branch_count) {
  cfg.validate();
  const HeraldStrategy strategy = strategy_for(cfg);
  auto run_dense = [&] {
    if (engine_used) *engine_used = EngineKind::dense;
    if (branch_count) *branch_count = 0;
    return detail::run_streaming(dense_network(cfg, component, &strategy), strategy, cfg.dense);
  };
  auto run_branch = [&] {
    BranchState s = pre_detection_branches(cfg, component);
    if (engine_used) *engine_used = EngineKind::branch;
    if (branch_count) *branch_count = s.size();
    return expectation(s, strategy.resolve(s.modes()), strategy.kept, cfg.branch_policy);
  };
  switch (cfg.engine) {
    case EngineKind::dense: return run_dense();
    case EngineKind::branch: return run_branch();
    case EngineKind::automatic:
      if (cfg.cv.kind == CVKind::squeezed_vacuum) return run_dense();
      try {
        return run_branch();
      } catch (const BranchLimitError&) {
        return run_dense();
      }
  }
  throw CapabilityError("unknown engine");
}

RunResult run(const NetworkConfig& cfg) {
  cfg.validate();
  RunResult result;
  result.alpha_f = cfg.alpha_f();
  std::vector<ConditionalOperator> ops;
  bool any_dense = false;
  for (const auto& c : components(cfg.dv)) {
    EngineKind used = EngineKind::branch;
    std::size_t count = 0;
    ops.push_back(run_component(cfg, c, &used, &count));
    any_dense = any_dense || used == EngineKind::dense;
    result.branch_count = std::max(result.branch_count, count);
    result.components.push_back({c.component, c.weight, ops.back().probability});
  }
  result.engine_used = any_dense ? EngineKind::dense : EngineKind::branch;

  std::vector<double> weights;
  for (const auto& c : result.components) weights.push_back(c.weight);
  result.outcome = mix_components(ops, weights, cfg.probability_floor);
  return result;
}

HeraldOutcome mix_components(const std::vector<ConditionalOperator>& ops,
                            const std::vector<double>& weights, double floor) {
  if (ops.empty() || ops.size() != weights.size()) throw DimensionError("one weight per component required");
  // Components differ in photon number on A, so their cross terms carry no
  // probability; the heralded state is the weighted mixture.
  std::vector<int> cut(ops.front().state.cutoffs());
  for (const auto& op : ops)
    for (std::size_t k = 0; k < cut.size(); ++k) cut[k] = std::max(cut[k], op.state.cutoffs()[k]);
  Matrix rho = Matrix::Zero(0, 0);
  double p = 0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const Matrix m = weights[i] * embedded_density(ops[i].state, cut);
    rho = rho.size() == 0 ? m : Matrix(rho + m);
    p += weights[i] * ops[i].probability;
  }
  if (!(p > floor)) throw DegenerateOutcome("heralding probability below the floor", p);
  rho /= p;
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return {FockRegister::mixed(ops.front().state.modes(), cut, rho), p};
}

ComponentProbabilities heralded_component_probabilities(const NetworkConfig& cfg) {
  cfg.validate();
  ComponentProbabilities out;
  const auto comps = components(cfg.dv);
  for (const auto& c : comps) {
    if (c.component == DVComponent::vacuum) out.p0 = c.weight;
    if (c.component == DVComponent::pair) out.p1 = c.weight;
    if (c.component == DVComponent::double_pair) out.p_eps = c.weight;
  }
  out.P0 = run_component(cfg, {DVComponent::vacuum, 1.0}).probability;
  out.P1 = run_component(cfg, {DVComponent::pair, 1.0}).probability;
  out.P_eps = run_component(cfg, {DVComponent::double_pair, 1.0, cfg.dv.pair_pair_amplitude, cfg.dv.quad_amplitude})
                  .probability;
  out.combined = out.p0 * out.P0 + out.p1 * out.P1 + out.p_eps * out.P_eps;
  return out;
}

FockRegister target_state(double alpha_f, int b_cutoff) {
  return target_state_like(alpha_f, FockRegister::vacuum(hybrid_modes(), {1, 1, b_cutoff}));
}

FockRegister target_state_like(double alpha_f, const FockRegister& like) {
  const int ce = std::max(1, like.cutoff(early("A")));
  const int cl = std::max(1, like.cutoff(late("A")));
  const int cb = like.cutoff(mode("B"));
  // The truncated target is renormalised, so allow any tail here.
  const Vector plus = coherent_state(alpha_f, cb, 1.0);
  const Vector minus = coherent_state(-alpha_f, cb, 1.0);
  const auto db = static_cast<Eigen::Index>(cb + 1);
  Vector v = Vector::Zero((ce + 1) * (cl + 1) * db);
  auto at = [&](int ne, int nl) { return (static_cast<Eigen::Index>(ne) * (cl + 1) + nl) * db; };
  v.segment(at(1, 0), db) = plus * std::sqrt(0.5);
  v.segment(at(0, 1), db) = -minus * std::sqrt(0.5);
  v.normalize();
  return FockRegister::pure(hybrid_modes(), {ce, cl, cb}, v);
}

}  // namespace tbh
