#include "tbh/fock_register.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tbh/errors.hpp"
#include "tensor.hpp"

namespace tbh {

using detail::Tensor;

struct RegisterAccess {
  static FockRegister make(std::vector<ModeLabel> modes, std::vector<int> cutoffs, StateKind kind,
                           Vector data) {
    return FockRegister(std::move(modes), std::move(cutoffs), kind, std::move(data));
  }
};

namespace {

std::vector<int> dims_of(const std::vector<int>& cutoffs) {
  std::vector<int> d(cutoffs);
  for (int& x : d) x += 1;
  return d;
}

Tensor as_tensor(const FockRegister& s) {
  Tensor t;
  t.dims = s.dims();
  if (!s.is_pure()) {
    const auto n = t.dims.size();
    for (std::size_t k = 0; k < n; ++k) t.dims.push_back(t.dims[k]);
  }
  t.data = s.data();
  return t;
}

Matrix row_major_to_matrix(const Vector& data, Eigen::Index d) {
  using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMat>(data.data(), d, d);
}

Vector matrix_to_row_major(const Matrix& m) {
  using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMat r = m;
  return Eigen::Map<const Vector>(r.data(), r.size());
}

std::vector<int> positions_of(const FockRegister& s, const std::vector<ModeLabel>& labels) {
  std::vector<int> pos;
  pos.reserve(labels.size());
  for (const auto& l : labels) pos.push_back(static_cast<int>(s.position(l)));
  return pos;
}

}  // namespace

FockRegister::FockRegister(std::vector<ModeLabel> modes, std::vector<int> cutoffs, StateKind kind,
                           Vector data)
    : modes_(std::move(modes)), cutoffs_(std::move(cutoffs)), kind_(kind), data_(std::move(data)) {
  if (modes_.size() != cutoffs_.size()) throw DimensionError("one cutoff per mode required");
  require_unique(modes_);
  dimension_ = 1;
  for (int c : cutoffs_) {
    if (c < 0) throw RangeError("cutoff must be nonnegative");
    dimension_ *= static_cast<std::size_t>(c) + 1;
  }
  const std::size_t expected = kind_ == StateKind::pure ? dimension_ : dimension_ * dimension_;
  if (static_cast<std::size_t>(data_.size()) != expected)
    throw DimensionError("state data has " + std::to_string(data_.size()) + " entries, expected " +
                         std::to_string(expected));
}

FockRegister FockRegister::pure(std::vector<ModeLabel> modes, std::vector<int> cutoffs,
                                Vector amplitudes) {
  return FockRegister(std::move(modes), std::move(cutoffs), StateKind::pure, std::move(amplitudes));
}

FockRegister FockRegister::mixed(std::vector<ModeLabel> modes, std::vector<int> cutoffs,
                                 const Matrix& density) {
  if (density.rows() != density.cols()) throw DimensionError("density matrix must be square");
  return FockRegister(std::move(modes), std::move(cutoffs), StateKind::mixed,
                      matrix_to_row_major(density));
}

FockRegister FockRegister::vacuum(std::vector<ModeLabel> modes, std::vector<int> cutoffs) {
  return fock(std::move(modes), std::move(cutoffs), std::vector<int>{});
}

FockRegister FockRegister::fock(std::vector<ModeLabel> modes, std::vector<int> cutoffs,
                                const std::vector<int>& occupation) {
  if (!occupation.empty() && occupation.size() != modes.size())
    throw DimensionError("one occupation per mode required");
  std::size_t dim = 1, index = 0;
  for (std::size_t k = 0; k < cutoffs.size(); ++k) {
    const int n = occupation.empty() ? 0 : occupation[k];
    if (n < 0 || n > cutoffs[k]) throw RangeError("occupation outside the truncated space");
    index = index * (static_cast<std::size_t>(cutoffs[k]) + 1) + static_cast<std::size_t>(n);
    dim *= static_cast<std::size_t>(cutoffs[k]) + 1;
  }
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return pure(std::move(modes), std::move(cutoffs), std::move(v));
}

FockRegister FockRegister::single_mode(ModeLabel label, Vector amplitudes) {
  if (amplitudes.size() == 0) throw DimensionError("empty amplitude list");
  const int cutoff = static_cast<int>(amplitudes.size()) - 1;
  return pure({std::move(label)}, {cutoff}, std::move(amplitudes));
}

std::vector<int> FockRegister::dims() const { return dims_of(cutoffs_); }

bool FockRegister::has_mode(const ModeLabel& label) const {
  return std::find(modes_.begin(), modes_.end(), label) != modes_.end();
}

std::size_t FockRegister::position(const ModeLabel& label) const {
  auto it = std::find(modes_.begin(), modes_.end(), label);
  if (it == modes_.end()) throw ModeError("unknown mode " + to_string(label));
  return static_cast<std::size_t>(it - modes_.begin());
}

Matrix FockRegister::density_matrix() const {
  if (is_pure()) return data_ * data_.adjoint();
  return row_major_to_matrix(data_, static_cast<Eigen::Index>(dimension_));
}

cplx FockRegister::amplitude(std::span<const int> occupation) const {
  if (!is_pure()) throw CapabilityError("amplitude requires a pure register");
  if (occupation.size() != modes_.size()) throw DimensionError("one occupation per mode required");
  std::size_t index = 0;
  for (std::size_t k = 0; k < occupation.size(); ++k) {
    if (occupation[k] < 0 || occupation[k] > cutoffs_[k]) return 0.0;
    index = index * (static_cast<std::size_t>(cutoffs_[k]) + 1) + static_cast<std::size_t>(occupation[k]);
  }
  return data_[static_cast<Eigen::Index>(index)];
}

double FockRegister::trace() const {
  if (is_pure()) return data_.squaredNorm();
  double t = 0;
  const auto d = static_cast<Eigen::Index>(dimension_);
  for (Eigen::Index i = 0; i < d; ++i) t += data_[i * d + i].real();
  return t;
}

FockRegister FockRegister::normalized() const {
  const double t = trace();
  if (!(t > 0)) throw DegenerateOutcome("cannot normalise a zero state", t);
  return scaled(is_pure() ? 1.0 / std::sqrt(t) : 1.0 / t);
}

FockRegister FockRegister::to_mixed() const {
  if (!is_pure()) return *this;
  return mixed(modes_, cutoffs_, density_matrix());
}

FockRegister FockRegister::scaled(double factor) const {
  return FockRegister(modes_, cutoffs_, kind_, data_ * factor);
}

Vector coherent_state(cplx beta, int cutoff, double eps_trunc) {
  if (cutoff < 0) throw RangeError("cutoff must be nonnegative");
  Vector c(cutoff + 1);
  c[0] = std::exp(-0.5 * std::norm(beta));
  for (int k = 1; k <= cutoff; ++k) c[k] = c[k - 1] * beta / std::sqrt(static_cast<double>(k));
  const double deficit = 1.0 - c.squaredNorm();
  if (deficit > eps_trunc)
    throw TruncationError("cutoff " + std::to_string(cutoff) + " too small for coherent amplitude",
                          deficit);
  return c;
}

FockRegister tensor_product(const FockRegister& a, const FockRegister& b) {
  std::vector<ModeLabel> modes(a.modes());
  modes.insert(modes.end(), b.modes().begin(), b.modes().end());
  std::vector<int> cutoffs(a.cutoffs());
  cutoffs.insert(cutoffs.end(), b.cutoffs().begin(), b.cutoffs().end());
  const auto da = static_cast<Eigen::Index>(a.dimension());
  const auto db = static_cast<Eigen::Index>(b.dimension());
  if (a.is_pure() && b.is_pure()) {
    Vector v(da * db);
    for (Eigen::Index i = 0; i < da; ++i) v.segment(i * db, db) = a.data()[i] * b.data();
    return FockRegister::pure(std::move(modes), std::move(cutoffs), std::move(v));
  }
  const Matrix ra = a.density_matrix();
  const Matrix rb = b.density_matrix();
  Matrix r(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j) r.block(i * db, j * db, db, db) = ra(i, j) * rb;
  return FockRegister::mixed(std::move(modes), std::move(cutoffs), r);
}

FockRegister apply_map(const FockRegister& state, const Matrix& map,
                       const std::vector<ModeLabel>& inputs, const std::vector<ModeSlot>& outputs) {
  if (inputs.empty()) throw ModeError("map needs at least one input mode");
  require_unique(inputs);
  const std::vector<int> in_pos = positions_of(state, inputs);

  // Result layout: remaining modes in order, outputs inserted where the first
  // input was.
  std::vector<ModeLabel> rest_modes;
  std::vector<int> rest_cut;
  int insert_at = 0;
  for (std::size_t k = 0; k < state.mode_count(); ++k) {
    if (std::find(in_pos.begin(), in_pos.end(), static_cast<int>(k)) != in_pos.end()) continue;
    if (static_cast<int>(k) < in_pos[0]) ++insert_at;
    rest_modes.push_back(state.modes()[k]);
    rest_cut.push_back(state.cutoffs()[k]);
  }
  std::vector<ModeLabel> new_modes(rest_modes.begin(), rest_modes.begin() + insert_at);
  std::vector<int> new_cut(rest_cut.begin(), rest_cut.begin() + insert_at);
  std::vector<int> out_dims;
  for (const auto& o : outputs) {
    new_modes.push_back(o.label);
    new_cut.push_back(o.cutoff);
    out_dims.push_back(o.cutoff + 1);
  }
  new_modes.insert(new_modes.end(), rest_modes.begin() + insert_at, rest_modes.end());
  new_cut.insert(new_cut.end(), rest_cut.begin() + insert_at, rest_cut.end());
  require_unique(new_modes);

  const int n_new = static_cast<int>(new_modes.size());
  const auto n_out = outputs.size();
  std::vector<int> out_positions(n_out);
  for (std::size_t k = 0; k < n_out; ++k) out_positions[k] = insert_at + static_cast<int>(k);

  Tensor t = as_tensor(state);
  if (state.is_pure()) {
    t = detail::contract_front(t, in_pos, map, out_dims);
    t = detail::place_front(t, n_out, out_positions);
    return RegisterAccess::make(std::move(new_modes), std::move(new_cut), StateKind::pure,
                                std::move(t.data));
  }
  // Ket side: the new axes end up in place, bra axes still follow.
  t = detail::contract_front(t, in_pos, map, out_dims);
  std::vector<int> ket_positions(out_positions);
  t = detail::place_front(t, n_out, ket_positions);
  // The bra block still follows the n_new ket axes in its original order.
  std::vector<int> bra_axes;
  for (int p : in_pos) bra_axes.push_back(n_new + p);
  t = detail::contract_front(t, bra_axes, map.conjugate(), out_dims);
  std::vector<int> bra_positions;
  for (int p : out_positions) bra_positions.push_back(n_new + p);
  t = detail::place_front(t, n_out, bra_positions);
  return RegisterAccess::make(std::move(new_modes), std::move(new_cut), StateKind::mixed,
                              std::move(t.data));
}

FockRegister apply_operator(const FockRegister& state, const Matrix& op,
                            const std::vector<ModeLabel>& targets) {
  if (targets.empty()) throw ModeError("operator needs at least one target mode");
  std::vector<ModeSlot> slots;
  std::size_t dim = 1;
  for (const auto& l : targets) {
    const int c = state.cutoff(l);
    slots.push_back({l, c});
    dim *= static_cast<std::size_t>(c) + 1;
  }
  if (static_cast<std::size_t>(op.rows()) != dim || static_cast<std::size_t>(op.cols()) != dim)
    throw DimensionError("operator is " + std::to_string(op.rows()) + "x" + std::to_string(op.cols()) +
                         ", target space has dimension " + std::to_string(dim));
  FockRegister out = apply_map(state, op, targets, slots);
  return reorder(out, state.modes());
}

FockRegister reorder(const FockRegister& state, const std::vector<ModeLabel>& order) {
  if (order.size() != state.mode_count()) throw ModeError("reorder needs every mode exactly once");
  require_unique(order);
  std::vector<int> perm = positions_of(state, order);
  std::vector<int> cut;
  for (int p : perm) cut.push_back(state.cutoffs()[static_cast<std::size_t>(p)]);
  Tensor t = as_tensor(state);
  if (!state.is_pure()) {
    const int n = static_cast<int>(order.size());
    for (int k = 0; k < n; ++k) perm.push_back(n + perm[static_cast<std::size_t>(k)]);
  }
  t = detail::permute(t, perm);
  return RegisterAccess::make(order, std::move(cut), state.kind(), std::move(t.data));
}

FockRegister partial_trace(const FockRegister& state, const std::vector<ModeLabel>& keep) {
  if (keep.empty()) throw ModeError("partial trace needs at least one kept mode");
  require_unique(keep);
  std::vector<int> keep_pos = positions_of(state, keep);
  std::sort(keep_pos.begin(), keep_pos.end());
  std::vector<int> trace_pos;
  for (int k = 0; k < static_cast<int>(state.mode_count()); ++k)
    if (!std::binary_search(keep_pos.begin(), keep_pos.end(), k)) trace_pos.push_back(k);

  std::vector<ModeLabel> modes;
  std::vector<int> cut;
  std::size_t dk = 1, dt = 1;
  for (int p : keep_pos) {
    modes.push_back(state.modes()[static_cast<std::size_t>(p)]);
    cut.push_back(state.cutoffs()[static_cast<std::size_t>(p)]);
    dk *= static_cast<std::size_t>(cut.back()) + 1;
  }
  for (int p : trace_pos) dt *= static_cast<std::size_t>(state.cutoffs()[static_cast<std::size_t>(p)]) + 1;

  const auto DK = static_cast<Eigen::Index>(dk), DT = static_cast<Eigen::Index>(dt);
  Tensor t = as_tensor(state);
  if (state.is_pure()) {
    std::vector<int> perm(keep_pos);
    perm.insert(perm.end(), trace_pos.begin(), trace_pos.end());
    t = detail::permute(t, perm);
    // Row-major (dk x dt) is the column-major (dt x dk) map.
    Eigen::Map<const Matrix> x(t.data.data(), DT, DK);
    Matrix rho = (x.transpose() * x.conjugate()).eval();
    return FockRegister::mixed(std::move(modes), std::move(cut), rho);
  }
  const int n = static_cast<int>(state.mode_count());
  std::vector<int> perm(keep_pos);
  for (int p : keep_pos) perm.push_back(n + p);
  for (int p : trace_pos) perm.push_back(p);
  for (int p : trace_pos) perm.push_back(n + p);
  t = detail::permute(t, perm);
  Vector out = Vector::Zero(DK * DK);
  for (Eigen::Index ij = 0; ij < DK * DK; ++ij) {
    cplx s = 0;
    const Eigen::Index base = ij * DT * DT;
    for (Eigen::Index a = 0; a < DT; ++a) s += t.data[base + a * DT + a];
    out[ij] = s;
  }
  return RegisterAccess::make(std::move(modes), std::move(cut), StateKind::mixed, std::move(out));
}

cplx inner_product(const FockRegister& a, const FockRegister& b) {
  if (!a.is_pure() || !b.is_pure()) throw CapabilityError("inner product needs pure registers");
  if (a.modes() != b.modes() || a.cutoffs() != b.cutoffs())
    throw ModeError("inner product needs identical modes and cutoffs");
  return a.data().dot(b.data());
}

FockRegister rename_mode(const FockRegister& state, const ModeLabel& from, const ModeLabel& to) {
  std::vector<ModeLabel> modes(state.modes());
  modes[state.position(from)] = to;
  return RegisterAccess::make(std::move(modes), state.cutoffs(), state.kind(), state.data());
}

std::pair<FockRegister, double> resize_mode(const FockRegister& state, const ModeLabel& label,
                                            int new_cutoff) {
  if (new_cutoff < 0) throw RangeError("cutoff must be nonnegative");
  const int old = state.cutoff(label);
  if (old == new_cutoff) return {state, 0.0};
  Matrix m = Matrix::Identity(new_cutoff + 1, old + 1);
  const double before = state.trace();
  FockRegister out = reorder(apply_map(state, m, {label}, {{label, new_cutoff}}), state.modes());
  return {out, std::max(0.0, before - out.trace())};
}

std::vector<double> marginal_distribution(const FockRegister& state, const ModeLabel& label) {
  const FockRegister r = partial_trace(state, {label});
  const Matrix rho = r.density_matrix();
  std::vector<double> p(static_cast<std::size_t>(rho.rows()));
  for (Eigen::Index k = 0; k < rho.rows(); ++k) p[static_cast<std::size_t>(k)] = rho(k, k).real();
  return p;
}

FockRegister embed(const FockRegister& state, const std::vector<int>& cutoffs) {
  if (cutoffs.size() != state.mode_count()) throw DimensionError("one cutoff per mode required");
  FockRegister out = state;
  for (std::size_t k = 0; k < cutoffs.size(); ++k) {
    if (cutoffs[k] < state.cutoffs()[k]) throw RangeError("embed cannot shrink a mode");
    out = resize_mode(out, state.modes()[k], cutoffs[k]).first;
  }
  return out;
}

ModeLabel environment_label() { return mode("~env"); }

FockRegister trace_into_environment(const FockRegister& state, const std::vector<ModeLabel>& modes,
                                    double rel_tolerance) {
  if (!state.is_pure()) throw CapabilityError("purification compression needs a pure register");
  const ModeLabel env = environment_label();
  std::vector<ModeLabel> traced(modes);
  if (state.has_mode(env) && std::find(traced.begin(), traced.end(), env) == traced.end())
    traced.push_back(env);
  require_unique(traced);
  if (traced.empty()) return state;

  std::vector<int> tr_pos = positions_of(state, traced);
  std::vector<int> keep_pos;
  std::vector<ModeLabel> keep_modes;
  std::vector<int> keep_cut;
  for (int k = 0; k < static_cast<int>(state.mode_count()); ++k) {
    if (std::find(tr_pos.begin(), tr_pos.end(), k) != tr_pos.end()) continue;
    keep_pos.push_back(k);
    keep_modes.push_back(state.modes()[static_cast<std::size_t>(k)]);
    keep_cut.push_back(state.cutoffs()[static_cast<std::size_t>(k)]);
  }
  std::size_t dk = 1, dt = 1;
  for (int c : keep_cut) dk *= static_cast<std::size_t>(c) + 1;
  for (int p : tr_pos) dt *= static_cast<std::size_t>(state.cutoffs()[static_cast<std::size_t>(p)]) + 1;

  std::vector<int> perm(keep_pos);
  perm.insert(perm.end(), tr_pos.begin(), tr_pos.end());
  Tensor t = detail::permute(as_tensor(state), perm);
  const auto DK = static_cast<Eigen::Index>(dk), DT = static_cast<Eigen::Index>(dt);
  // psi(k, e) row-major; as a column-major map this is X^T with X = (dk x dt).
  Eigen::Map<const Matrix> xt(t.data.data(), DT, DK);
  const Matrix x = xt.transpose();

  Matrix y;  // dk x rank, with Y Y^dagger = X X^dagger
  if (dt <= dk) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((x.adjoint() * x).eval());
    const double total = std::max(es.eigenvalues().sum(), 0.0);
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = DT; k-- > 0;)
      if (es.eigenvalues()[k] > rel_tolerance * total) idx.push_back(k);
    y = Matrix::Zero(DK, std::max<Eigen::Index>(1, static_cast<Eigen::Index>(idx.size())));
    for (std::size_t c = 0; c < idx.size(); ++c)
      y.col(static_cast<Eigen::Index>(c)) = x * es.eigenvectors().col(idx[c]);
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es((x * x.adjoint()).eval());
    const double total = std::max(es.eigenvalues().sum(), 0.0);
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = DK; k-- > 0;)
      if (es.eigenvalues()[k] > rel_tolerance * total) idx.push_back(k);
    y = Matrix::Zero(DK, std::max<Eigen::Index>(1, static_cast<Eigen::Index>(idx.size())));
    for (std::size_t c = 0; c < idx.size(); ++c)
      y.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(idx[c]) * std::sqrt(es.eigenvalues()[idx[c]]);
  }
  const Eigen::Index rank = y.cols();
  // Row-major (dk x rank) storage equals the column-major transpose.
  Matrix yt = y.transpose();
  Vector data = Eigen::Map<const Vector>(yt.data(), yt.size());
  keep_modes.push_back(env);
  keep_cut.push_back(static_cast<int>(rank) - 1);
  return RegisterAccess::make(std::move(keep_modes), std::move(keep_cut), StateKind::pure,
                              std::move(data));
}

}  // namespace tbh
