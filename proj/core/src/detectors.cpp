#include "tbh/detectors.hpp"

#include <algorithm>

#include "tbh/errors.hpp"

namespace tbh {

std::map<ModeLabel, POVMElement> HeraldStrategy::resolve(const std::vector<ModeLabel>& modes) const {
  require_unique(kept);
  auto present = [&](const ModeLabel& l) { return std::find(modes.begin(), modes.end(), l) != modes.end(); };
  for (const auto& k : kept) {
    if (!present(k)) throw ModeError("kept mode " + to_string(k) + " is missing from the state");
    if (assignments.count(k)) throw ModeError("kept mode " + to_string(k) + " carries a POVM element");
  }
  std::map<ModeLabel, POVMElement> full;
  for (const auto& [label, element] : assignments) {
    if (!present(label)) throw ModeError("heralding mode " + to_string(label) + " is missing from the state");
    full.emplace(label, element);
  }
  for (const auto& m : modes)
    if (!full.count(m) && std::find(kept.begin(), kept.end(), m) == kept.end())
      full.emplace(m, POVMElement::identity());
  return full;
}

std::vector<ModeLabel> heralding_modes() {
  std::vector<ModeLabel> out;
  for (const char* s : {"C", "D", "E", "F"}) {
    out.push_back(early(s));
    out.push_back(late(s));
  }
  return out;
}

std::vector<ModeLabel> hybrid_modes() { return {early("A"), late("A"), mode("B")}; }

HeraldStrategy ideal_herald() {
  HeraldStrategy s;
  for (const auto& m : heralding_modes()) s.assignments[m] = POVMElement::fock(0);
  s.assignments[late("E")] = POVMElement::fock(1);
  s.assignments[early("F")] = POVMElement::fock(1);
  s.kept = hybrid_modes();
  return s;
}

HeraldStrategy simple_herald(double eta) {
  HeraldStrategy s;
  for (const auto& m : heralding_modes()) s.assignments[m] = POVMElement::identity();
  s.assignments[late("E")] = POVMElement::on(eta);
  s.assignments[early("F")] = POVMElement::on(eta);
  s.kept = hybrid_modes();
  return s;
}

HeraldStrategy identity_herald(std::vector<ModeLabel> kept) {
  HeraldStrategy s;
  s.kept = std::move(kept);
  return s;
}

FockRegister apply_povm_root(const FockRegister& state, const ModeLabel& label, const POVMElement& e) {
  if (e.is_identity()) return state;
  const int cutoff = state.cutoff(label);
  if (e.is_diagonal()) {
    const RealVector w = e.weights(cutoff).cwiseMax(0.0).cwiseSqrt();
    return apply_operator(state, w.cast<cplx>().asDiagonal().toDenseMatrix(), {label});
  }
  return apply_operator(state, sqrt_psd(e.matrix(cutoff)), {label});
}

namespace {

HeraldOutcome finish(FockRegister unnormalized, double floor) {
  const double p = unnormalized.trace();
  if (!(p > floor)) throw DegenerateOutcome("heralding probability below the floor", p);
  Matrix rho = unnormalized.density_matrix() / p;
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return {FockRegister::mixed(unnormalized.modes(), unnormalized.cutoffs(), rho), p};
}

}  // namespace

HeraldOutcome herald(const FockRegister& state, const HeraldStrategy& strategy, double floor) {
  const auto povm = strategy.resolve(state.modes());
  FockRegister s = state;
  for (const auto& [label, element] : povm) s = apply_povm_root(s, label, element);
  // Kept modes in the strategy's order.
  FockRegister reduced = partial_trace(s, strategy.kept);
  reduced = reorder(reduced, strategy.kept);
  return finish(std::move(reduced), floor);
}

HeraldOutcome herald(const BranchState& state, const HeraldStrategy& strategy,
                     const TruncationPolicy& policy, double floor) {
  const auto povm = strategy.resolve(state.modes());
  ConditionalOperator op = expectation(state, povm, strategy.kept, policy);
  return finish(std::move(op.state), floor);
}

}  // namespace tbh
