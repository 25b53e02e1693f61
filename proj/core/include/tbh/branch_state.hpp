#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "tbh/fock_register.hpp"
#include "tbh/linalg.hpp"
#include "tbh/mode.hpp"
#include "tbh/povm.hpp"
#include "tbh/truncation.hpp"

namespace tbh {

/// P(a^dag)|beta>: a polynomial in the creation operator acting on a
/// coherent state. poly[k] multiplies (a^dag)^k.
struct ModeFactor {
  cplx beta = 0.0;
  std::vector<cplx> poly{1.0};

  int degree() const noexcept { return static_cast<int>(poly.size()) - 1; }
};

/// coefficient * prod_m P_m(a_m^dag)|beta_m>, one factor per register mode.
struct Branch {
  cplx coefficient = 1.0;
  std::vector<ModeFactor> factors;
};

inline constexpr std::size_t default_branch_limit = 64;
inline constexpr int max_excitation_degree = 4;

/// Superposition of product branches over a fixed mode list.
///
/// Branches are kept canonical: every polynomial is trimmed and scaled to a
/// unit leading coefficient, and branches with identical factors are merged.
class BranchState {
 public:
  explicit BranchState(std::vector<ModeLabel> modes = {},
                       std::size_t branch_limit = default_branch_limit);

  /// A single product branch.
  static BranchState product(std::vector<ModeLabel> modes, std::vector<ModeFactor> factors,
                             cplx coefficient = 1.0, std::size_t branch_limit = default_branch_limit);

  const std::vector<ModeLabel>& modes() const noexcept { return modes_; }
  const std::vector<Branch>& branches() const noexcept { return branches_; }
  std::size_t size() const noexcept { return branches_.size(); }
  std::size_t branch_limit() const noexcept { return limit_; }
  bool has_mode(const ModeLabel& label) const;
  std::size_t position(const ModeLabel& label) const;

  /// Adds (and merges) a branch. Throws BranchLimitError past the limit.
  void add(Branch branch);

  BranchState scaled(cplx factor) const;
  /// Appends a mode in the vacuum state to every branch.
  BranchState with_vacuum_mode(const ModeLabel& label) const;
  BranchState renamed(const ModeLabel& from, const ModeLabel& to) const;
  /// Replaces the limit; throws if the current size already exceeds it.
  BranchState with_limit(std::size_t limit) const;

 private:
  std::vector<ModeLabel> modes_;
  std::vector<Branch> branches_;
  std::size_t limit_;
};

BranchState tensor_product(const BranchState& a, const BranchState& b);

/// Sum of two states over the same modes (merged branch lists).
BranchState superpose(const BranchState& a, const BranchState& b);

/// Beam splitter on (in1, in2) with the library convention; the outputs keep
/// the input labels. Displacements transform linearly and creation operators
/// are substituted, then regrouped into product branches.
BranchState apply_beam_splitter(const BranchState& s, double r, double t,
                                const ModeLabel& in1, const ModeLabel& in2);

/// D(beta) on one mode: P(a^dag)|g> -> exp(i Im(beta g*)) P(a^dag - beta*)|g + beta>.
BranchState apply_displacement(const BranchState& s, cplx beta, const ModeLabel& target);

/// Local Fock cutoff used for a mode: the largest policy cutoff over branches.
int local_cutoff(const BranchState& s, const ModeLabel& label, const TruncationPolicy& policy);

/// Fock amplitudes of P(a^dag)|beta> on {|0>..|cutoff>}. Throws
/// TruncationError if the coherent tail beyond the cutoff exceeds eps.
Vector local_vector(const ModeFactor& f, int cutoff, double eps_trunc);

/// <a|b> over identical mode lists.
cplx inner_product(const BranchState& a, const BranchState& b, const TruncationPolicy& policy = {});

/// Unnormalised conditional operator Tr_measured[Pi rho] on the kept modes.
struct ConditionalOperator {
  FockRegister state;  // mixed, over `keep` in the order given
  double probability = 0.0;
};

/// Measures every mode not in `keep` with its POVM element (identity when
/// absent from `povm`) and returns the conditional operator on `keep`.
ConditionalOperator expectation(const BranchState& s, const std::map<ModeLabel, POVMElement>& povm,
                                const std::vector<ModeLabel>& keep,
                                const TruncationPolicy& policy = {});

/// Dense expansion. Throws MemoryBudgetError past `max_elements` amplitudes.
FockRegister to_dense(const BranchState& s, const TruncationPolicy& policy = {},
                      std::size_t max_elements = std::size_t{1} << 26);

}  // namespace tbh
