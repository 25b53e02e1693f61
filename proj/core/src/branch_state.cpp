#include "tbh/branch_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tbh/errors.hpp"

namespace tbh {

namespace {

constexpr double merge_tol = 1e-12;

// Trims the polynomial and moves its leading coefficient into `scale`.
// Returns false for the zero polynomial.
bool canonicalize(ModeFactor& f, cplx& scale) {
  double biggest = 0;
  for (const cplx& c : f.poly) biggest = std::max(biggest, std::abs(c));
  if (biggest == 0) return false;
  while (f.poly.size() > 1 && std::abs(f.poly.back()) <= 1e-14 * biggest) f.poly.pop_back();
  const cplx lead = f.poly.back();
  for (cplx& c : f.poly) c /= lead;
  f.poly.back() = 1.0;
  scale *= lead;
  return true;
}

bool same_factor(const ModeFactor& a, const ModeFactor& b) {
  if (a.poly.size() != b.poly.size()) return false;
  if (std::abs(a.beta - b.beta) > merge_tol * (1 + std::abs(a.beta))) return false;
  for (std::size_t k = 0; k < a.poly.size(); ++k)
    if (std::abs(a.poly[k] - b.poly[k]) > merge_tol * (1 + std::abs(a.poly[k]))) return false;
  return true;
}

bool same_factors(const Branch& a, const Branch& b) {
  for (std::size_t m = 0; m < a.factors.size(); ++m)
    if (!same_factor(a.factors[m], b.factors[m])) return false;
  return true;
}

cplx ipow(cplx x, int n) {
  cplx r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

// Coefficients of (u x + v y)^n as a row indexed by the power of y.
std::vector<cplx> binomial_row(cplx u, cplx v, int n) {
  std::vector<cplx> row(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    const double binom = std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
    row[static_cast<std::size_t>(k)] = binom * ipow(u, n - k) * ipow(v, k);
  }
  return row;
}

// Bivariate polynomial P(u1 x + v1 y) as q[a][b] (a = power of x).
std::vector<std::vector<cplx>> substitute(const std::vector<cplx>& p, cplx u, cplx v, int size) {
  std::vector<std::vector<cplx>> q(static_cast<std::size_t>(size), std::vector<cplx>(static_cast<std::size_t>(size), 0.0));
  for (int n = 0; n < static_cast<int>(p.size()); ++n) {
    if (p[static_cast<std::size_t>(n)] == cplx(0)) continue;
    const auto row = binomial_row(u, v, n);
    for (int k = 0; k <= n; ++k) q[static_cast<std::size_t>(n - k)][static_cast<std::size_t>(k)] += p[static_cast<std::size_t>(n)] * row[static_cast<std::size_t>(k)];
  }
  return q;
}

}  // namespace

BranchState::BranchState(std::vector<ModeLabel> modes, std::size_t branch_limit)
    : modes_(std::move(modes)), limit_(branch_limit) {
  require_unique(modes_);
  if (limit_ == 0) throw RangeError("branch limit must be positive");
}

BranchState BranchState::product(std::vector<ModeLabel> modes, std::vector<ModeFactor> factors,
                                 cplx coefficient, std::size_t branch_limit) {
  if (modes.size() != factors.size()) throw DimensionError("one factor per mode required");
  BranchState s(std::move(modes), branch_limit);
  s.add(Branch{coefficient, std::move(factors)});
  return s;
}

bool BranchState::has_mode(const ModeLabel& label) const {
  return std::find(modes_.begin(), modes_.end(), label) != modes_.end();
}

std::size_t BranchState::position(const ModeLabel& label) const {
  auto it = std::find(modes_.begin(), modes_.end(), label);
  if (it == modes_.end()) throw ModeError("unknown mode " + to_string(label));
  return static_cast<std::size_t>(it - modes_.begin());
}

void BranchState::add(Branch branch) {
  if (branch.factors.size() != modes_.size()) throw DimensionError("branch has the wrong number of factors");
  if (branch.coefficient == cplx(0)) return;
  for (auto& f : branch.factors) {
    if (f.poly.empty()) throw DimensionError("empty excitation polynomial");
    if (!canonicalize(f, branch.coefficient)) return;
    if (f.degree() > max_excitation_degree)
      throw CapabilityError("excitation degree " + std::to_string(f.degree()) + " exceeds the supported order");
  }
  for (auto it = branches_.begin(); it != branches_.end(); ++it) {
    if (!same_factors(*it, branch)) continue;
    const cplx sum = it->coefficient + branch.coefficient;
    if (std::abs(sum) <= 1e-13 * (std::abs(it->coefficient) + std::abs(branch.coefficient)))
      branches_.erase(it);
    else
      it->coefficient = sum;
    return;
  }
  if (branches_.size() >= limit_)
    throw BranchLimitError("branch count would exceed the limit of " + std::to_string(limit_));
  branches_.push_back(std::move(branch));
}

BranchState BranchState::scaled(cplx factor) const {
  BranchState out(*this);
  for (auto& b : out.branches_) b.coefficient *= factor;
  return out;
}

BranchState BranchState::with_vacuum_mode(const ModeLabel& label) const {
  std::vector<ModeLabel> modes(modes_);
  modes.push_back(label);
  BranchState out(std::move(modes), limit_);
  for (const auto& b : branches_) {
    Branch nb = b;
    nb.factors.push_back(ModeFactor{});
    out.branches_.push_back(std::move(nb));
  }
  return out;
}

BranchState BranchState::renamed(const ModeLabel& from, const ModeLabel& to) const {
  BranchState out(*this);
  out.modes_[position(from)] = to;
  require_unique(out.modes_);
  return out;
}

BranchState BranchState::with_limit(std::size_t limit) const {
  if (branches_.size() > limit) throw BranchLimitError("state already exceeds the requested limit");
  BranchState out(*this);
  out.limit_ = limit;
  return out;
}

BranchState tensor_product(const BranchState& a, const BranchState& b) {
  std::vector<ModeLabel> modes(a.modes());
  modes.insert(modes.end(), b.modes().begin(), b.modes().end());
  BranchState out(std::move(modes), std::max(a.branch_limit(), b.branch_limit()));
  for (const auto& x : a.branches())
    for (const auto& y : b.branches()) {
      Branch nb{x.coefficient * y.coefficient, x.factors};
      nb.factors.insert(nb.factors.end(), y.factors.begin(), y.factors.end());
      out.add(std::move(nb));
    }
  return out;
}

BranchState superpose(const BranchState& a, const BranchState& b) {
  if (a.modes() != b.modes()) throw ModeError("superposition needs identical mode lists");
  BranchState out(a);
  for (const auto& y : b.branches()) out.add(y);
  return out;
}

BranchState apply_beam_splitter(const BranchState& s, double r, double t, const ModeLabel& in1,
                                const ModeLabel& in2) {
  if (!std::isfinite(r) || !std::isfinite(t) || std::abs(r * r + t * t - 1.0) > 1e-12)
    throw RangeError("beam splitter needs r^2 + t^2 = 1");
  const std::size_t p1 = s.position(in1), p2 = s.position(in2);
  if (p1 == p2) throw ModeError("beam splitter needs two distinct modes");
  BranchState out(s.modes(), s.branch_limit());
  for (const auto& b : s.branches()) {
    const ModeFactor& f1 = b.factors[p1];
    const ModeFactor& f2 = b.factors[p2];
    const cplx beta1 = t * f1.beta - r * f2.beta;
    const cplx beta2 = r * f1.beta + t * f2.beta;
    const int size = f1.degree() + f2.degree() + 1;
    // a1^dag -> t x + r y, a2^dag -> -r x + t y.
    const auto q1 = substitute(f1.poly, t, r, size);
    const auto q2 = substitute(f2.poly, -r, t, size);
    std::vector<std::vector<cplx>> q(static_cast<std::size_t>(size), std::vector<cplx>(static_cast<std::size_t>(size), 0.0));
    for (int a1 = 0; a1 < size; ++a1)
      for (int b1 = 0; a1 + b1 < size; ++b1) {
        const cplx x = q1[static_cast<std::size_t>(a1)][static_cast<std::size_t>(b1)];
        if (x == cplx(0)) continue;
        for (int a2 = 0; a1 + a2 < size; ++a2)
          for (int b2 = 0; a1 + a2 + b1 + b2 < size; ++b2)
            q[static_cast<std::size_t>(a1 + a2)][static_cast<std::size_t>(b1 + b2)] +=
                x * q2[static_cast<std::size_t>(a2)][static_cast<std::size_t>(b2)];
      }
    // Group by the power of the second output to obtain product branches.
    for (int pb = 0; pb < size; ++pb) {
      ModeFactor g1{beta1, std::vector<cplx>(static_cast<std::size_t>(size), 0.0)};
      bool any = false;
      for (int pa = 0; pa < size; ++pa) {
        g1.poly[static_cast<std::size_t>(pa)] = q[static_cast<std::size_t>(pa)][static_cast<std::size_t>(pb)];
        any = any || g1.poly[static_cast<std::size_t>(pa)] != cplx(0);
      }
      if (!any) continue;
      ModeFactor g2{beta2, std::vector<cplx>(static_cast<std::size_t>(pb) + 1, 0.0)};
      g2.poly.back() = 1.0;
      Branch nb = b;
      nb.factors[p1] = std::move(g1);
      nb.factors[p2] = std::move(g2);
      out.add(std::move(nb));
    }
  }
  return out;
}

BranchState apply_displacement(const BranchState& s, cplx beta, const ModeLabel& target) {
  const std::size_t p = s.position(target);
  BranchState out(s.modes(), s.branch_limit());
  for (const auto& b : s.branches()) {
    Branch nb = b;
    ModeFactor& f = nb.factors[p];
    // P(a^dag - beta*) expanded in powers of a^dag.
    std::vector<cplx> poly(f.poly.size(), 0.0);
    for (int n = 0; n <= f.degree(); ++n) {
      const auto row = binomial_row(1.0, -std::conj(beta), n);
      for (int k = 0; k <= n; ++k) poly[static_cast<std::size_t>(n - k)] += f.poly[static_cast<std::size_t>(n)] * row[static_cast<std::size_t>(k)];
    }
    nb.coefficient *= std::exp(cplx(0, (beta * std::conj(f.beta)).imag()));
    f.poly = std::move(poly);
    f.beta += beta;
    out.add(std::move(nb));
  }
  return out;
}

int local_cutoff(const BranchState& s, const ModeLabel& label, const TruncationPolicy& policy) {
  const std::size_t p = s.position(label);
  int cutoff = 0;
  for (const auto& b : s.branches()) {
    const auto& f = b.factors[p];
    // undisplaced factors are exact at their polynomial degree
    cutoff = std::max(cutoff, f.beta == cplx{} ? f.degree() : policy.cutoff_for(std::abs(f.beta), f.degree()));
  }
  return cutoff;
}

Vector local_vector(const ModeFactor& f, int cutoff, double eps_trunc) {
  if (cutoff < f.degree()) throw RangeError("local cutoff below the excitation degree");
  const double tail = poisson_tail(std::norm(f.beta), cutoff - f.degree());
  if (tail > eps_trunc)
    throw TruncationError("local cutoff " + std::to_string(cutoff) + " too small for a displaced excitation", tail);
  Vector c(cutoff + 1);
  c[0] = std::exp(-0.5 * std::norm(f.beta));
  for (int k = 1; k <= cutoff; ++k) c[k] = c[k - 1] * f.beta / std::sqrt(static_cast<double>(k));
  Vector v = Vector::Zero(cutoff + 1);
  for (int k = 0; k <= f.degree(); ++k) {
    const cplx pk = f.poly[static_cast<std::size_t>(k)];
    if (pk == cplx(0)) continue;
    // (a^dag)^k |m> = sqrt((m+k)!/m!) |m+k>.
    for (int m = 0; m + k <= cutoff; ++m) {
      const double ladder = std::exp(0.5 * (std::lgamma(m + k + 1.0) - std::lgamma(m + 1.0)));
      v[m + k] += pk * ladder * c[m];
    }
  }
  return v;
}

namespace {

// Columns are the local vectors of every branch on one mode.
Matrix local_columns(const BranchState& s, std::size_t p, int cutoff, double eps) {
  Matrix f(cutoff + 1, static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i)
    f.col(static_cast<Eigen::Index>(i)) = local_vector(s.branches()[i].factors[p], cutoff, eps);
  return f;
}

}  // namespace

cplx inner_product(const BranchState& a, const BranchState& b, const TruncationPolicy& policy) {
  if (a.modes() != b.modes()) throw ModeError("inner product needs identical mode lists");
  const auto na = static_cast<Eigen::Index>(a.size()), nb = static_cast<Eigen::Index>(b.size());
  Matrix w(na, nb);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < nb; ++j)
      w(i, j) = std::conj(a.branches()[static_cast<std::size_t>(i)].coefficient) * b.branches()[static_cast<std::size_t>(j)].coefficient;
  for (std::size_t p = 0; p < a.modes().size(); ++p) {
    const int cut = std::max(local_cutoff(a, a.modes()[p], policy), local_cutoff(b, b.modes()[p], policy));
    const Matrix fa = local_columns(a, p, cut, policy.eps_trunc);
    const Matrix fb = local_columns(b, p, cut, policy.eps_trunc);
    w = w.cwiseProduct(fa.adjoint() * fb);
  }
  return w.sum();
}

ConditionalOperator expectation(const BranchState& s, const std::map<ModeLabel, POVMElement>& povm,
                                const std::vector<ModeLabel>& keep, const TruncationPolicy& policy) {
  require_unique(keep);
  for (const auto& [label, element] : povm) {
    if (!s.has_mode(label)) throw ModeError("POVM assigned to unknown mode " + to_string(label));
    if (std::find(keep.begin(), keep.end(), label) != keep.end())
      throw ModeError("kept mode " + to_string(label) + " carries a POVM element");
  }
  for (const auto& k : keep) (void)s.position(k);

  const auto n = static_cast<Eigen::Index>(s.size());
  std::vector<int> keep_cut;
  std::vector<Matrix> keep_cols;
  for (const auto& k : keep) {
    keep_cut.push_back(local_cutoff(s, k, policy));
    keep_cols.push_back(local_columns(s, s.position(k), keep_cut.back(), policy.eps_trunc));
  }
  if (n == 0) {
    std::size_t dim = 1;
    for (int c : keep_cut) dim *= static_cast<std::size_t>(c) + 1;
    const auto d = static_cast<Eigen::Index>(dim);
    return {FockRegister::mixed(keep, keep_cut, Matrix::Zero(d, d)), 0.0};
  }

  // W(i, j) = c_i c_j^* prod_m <f_j|Pi_m|f_i>.
  Vector c(n);
  for (Eigen::Index i = 0; i < n; ++i) c[i] = s.branches()[static_cast<std::size_t>(i)].coefficient;
  Matrix w = c * c.adjoint();
  for (std::size_t p = 0; p < s.modes().size(); ++p) {
    const ModeLabel& label = s.modes()[p];
    if (std::find(keep.begin(), keep.end(), label) != keep.end()) continue;
    const int cut = local_cutoff(s, label, policy);
    const Matrix f = local_columns(s, p, cut, policy.eps_trunc);
    auto it = povm.find(label);
    const Matrix g = (it == povm.end() || it->second.is_identity())
                         ? Matrix(f.adjoint() * f)
                         : Matrix(f.adjoint() * it->second.matrix(cut) * f);
    w = w.cwiseProduct(g.transpose());
  }

  // rho = V W V^dagger with V holding the kept-mode product vectors.
  std::size_t dim = 1;
  for (int cc : keep_cut) dim *= static_cast<std::size_t>(cc) + 1;
  Matrix v(static_cast<Eigen::Index>(dim), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector acc = Vector::Ones(1);
    for (const Matrix& cols : keep_cols) {
      Vector next(acc.size() * cols.rows());
      for (Eigen::Index a = 0; a < acc.size(); ++a) next.segment(a * cols.rows(), cols.rows()) = acc[a] * cols.col(i);
      acc = std::move(next);
    }
    v.col(i) = acc;
  }
  Matrix rho = v * w * v.adjoint();
  rho = (0.5 * (rho + rho.adjoint())).eval();
  const double prob = rho.trace().real();
  return {FockRegister::mixed(keep, keep_cut, rho), prob};
}

FockRegister to_dense(const BranchState& s, const TruncationPolicy& policy, std::size_t max_elements) {
  std::vector<int> cut;
  std::size_t dim = 1;
  for (const auto& m : s.modes()) {
    cut.push_back(local_cutoff(s, m, policy));
    dim *= static_cast<std::size_t>(cut.back()) + 1;
    if (dim > max_elements)
      throw MemoryBudgetError("dense expansion needs more than " + std::to_string(max_elements) + " amplitudes");
  }
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& b : s.branches()) {
    Vector acc = Vector::Constant(1, b.coefficient);
    for (std::size_t p = 0; p < s.modes().size(); ++p) {
      const Vector f = local_vector(b.factors[p], cut[p], policy.eps_trunc);
      Vector next(acc.size() * f.size());
      for (Eigen::Index a = 0; a < acc.size(); ++a) next.segment(a * f.size(), f.size()) = acc[a] * f;
      acc = std::move(next);
    }
    psi += acc;
  }
  return FockRegister::pure(s.modes(), cut, std::move(psi));
}

}  // namespace tbh
