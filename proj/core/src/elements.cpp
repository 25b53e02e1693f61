#include "tbh/elements.hpp"

#include <cmath>
#include <string>

#include "tbh/errors.hpp"

namespace tbh {

namespace {

void check_bs(double r, double t) {
  if (!std::isfinite(r) || !std::isfinite(t) || std::abs(r * r + t * t - 1.0) > 1e-12)
    throw RangeError("beam splitter needs r^2 + t^2 = 1");
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

// Generator G = a2^dag a1 - a1^dag a2 on two modes of equal cutoff n.
Matrix bs_generator(int n) {
  const Matrix a = annihilation(n);
  const Matrix id = Matrix::Identity(n + 1, n + 1);
  const Matrix a1 = kron(a, id), a2 = kron(id, a);
  return a2.adjoint() * a1 - a1.adjoint() * a2;
}

}  // namespace

ElementSpec ElementSpec::on(std::vector<ModeLabel> modes) const {
  if (modes.size() != arity())
    throw ModeError("element expects " + std::to_string(arity()) + " target mode(s)");
  require_unique(modes);
  ElementSpec e = *this;
  e.targets = std::move(modes);
  return e;
}

ElementSpec beam_splitter(double r, double t) {
  check_bs(r, t);
  ElementSpec e;
  e.kind = ElementKind::beam_splitter;
  e.r = r;
  e.t = t;
  return e;
}

ElementSpec balanced_beam_splitter() { return beam_splitter(std::sqrt(0.5), std::sqrt(0.5)); }

ElementSpec displacement(cplx beta) {
  if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag())) throw RangeError("displacement must be finite");
  ElementSpec e;
  e.kind = ElementKind::displacement;
  e.beta = beta;
  return e;
}

ElementSpec squeeze(cplx zeta) {
  if (zeta.imag() != 0.0) throw RangeError("only real squeezing parameters are supported");
  if (!std::isfinite(zeta.real())) throw RangeError("squeezing parameter must be finite");
  ElementSpec e;
  e.kind = ElementKind::squeeze;
  e.zeta = zeta.real();
  return e;
}

ElementSpec loss_channel(double transmission) {
  if (!(transmission >= 0.0 && transmission <= 1.0)) throw RangeError("transmission must lie in [0, 1]");
  ElementSpec e;
  e.kind = ElementKind::loss;
  e.transmission = transmission;
  return e;
}

ElementSpec depolarize_channel(double z_km, double lc_km) {
  if (!(z_km >= 0.0) || !std::isfinite(z_km)) throw RangeError("distance must be nonnegative");
  if (!(lc_km > 0.0) || !std::isfinite(lc_km)) throw RangeError("correlation length must be positive");
  ElementSpec e;
  e.kind = ElementKind::depolarize;
  e.z_km = z_km;
  e.lc_km = lc_km;
  return e;
}

double attenuation_per_km(double db_per_km) { return db_per_km * std::log(10.0) / 10.0; }

double fiber_transmission(double z_km, double db_per_km) {
  if (!(z_km >= 0.0)) throw RangeError("distance must be nonnegative");
  if (!(db_per_km >= 0.0)) throw RangeError("attenuation must be nonnegative");
  if (z_km == 0.0) return 1.0;
  return std::pow(10.0, -db_per_km * z_km / 10.0);
}

double depolarization_sigma2(double lc_km) {
  if (!(lc_km > 0.0)) throw RangeError("correlation length must be positive");
  return 2.0 / lc_km;
}

Matrix beam_splitter_map(double r, double t, int in1, int in2, int out1, int out2) {
  check_bs(r, t);
  if (in1 < 0 || in2 < 0 || out1 < 0 || out2 < 0) throw RangeError("cutoffs must be nonnegative");
  const int n = in1 + in2;
  const int d = n + 1;
  const Matrix u = expm_antihermitian(std::atan2(r, t) * bs_generator(n));
  Matrix m = Matrix::Zero((out1 + 1) * (out2 + 1), (in1 + 1) * (in2 + 1));
  for (int p = 0; p <= in1; ++p)
    for (int q = 0; q <= in2; ++q) {
      const int col = p * (in2 + 1) + q;
      for (int a = 0; a <= std::min(out1, n); ++a)
        for (int b = 0; b <= std::min(out2, n - a); ++b)
          m(a * (out2 + 1) + b, col) = u(a * d + b, p * d + q);
    }
  return m;
}

Matrix displacement_matrix(cplx beta, int cutoff, int padding) {
  if (cutoff < 0 || padding < 0) throw RangeError("cutoff must be nonnegative");
  const int n = cutoff + padding;
  const Matrix a = annihilation(n);
  const Matrix g = beta * a.adjoint() - std::conj(beta) * a;
  return expm_antihermitian(g).topLeftCorner(cutoff + 1, cutoff + 1);
}

Matrix squeeze_matrix(double zeta, int cutoff, int padding) {
  if (cutoff < 0 || padding < 0) throw RangeError("cutoff must be nonnegative");
  const int n = cutoff + padding;
  const Matrix a = annihilation(n);
  const Matrix a2 = a * a;
  const Matrix g = 0.5 * zeta * (a2 - a2.adjoint());
  return expm_antihermitian(g).topLeftCorner(cutoff + 1, cutoff + 1);
}

std::vector<Matrix> loss_kraus(double transmission, int cutoff) {
  if (!(transmission >= 0.0 && transmission <= 1.0)) throw RangeError("transmission must lie in [0, 1]");
  if (cutoff < 0) throw RangeError("cutoff must be nonnegative");
  std::vector<Matrix> ks;
  for (int k = 0; k <= cutoff; ++k) {
    Matrix m = Matrix::Zero(cutoff + 1, cutoff + 1);
    for (int n = k; n <= cutoff; ++n) {
      const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
      const double w = std::exp(0.5 * log_binom) * std::pow(transmission, 0.5 * (n - k)) *
                       std::pow(1.0 - transmission, 0.5 * k);
      m(n - k, n) = w;
    }
    ks.push_back(std::move(m));
  }
  return ks;
}

namespace {

FockRegister apply_kraus(const FockRegister& state, const std::vector<Matrix>& ks, const ModeLabel& target) {
  const FockRegister mixed = state.to_mixed();
  Vector acc;
  FockRegister result;
  for (const Matrix& k : ks) {
    FockRegister term = apply_operator(mixed, k, {target});
    if (acc.size() == 0) {
      acc = term.data();
      result = term;
    } else {
      acc += term.data();
    }
  }
  return FockRegister::mixed(result.modes(), result.cutoffs(),
                             Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                                 acc.data(), static_cast<Eigen::Index>(result.dimension()),
                                 static_cast<Eigen::Index>(result.dimension())));
}

FockRegister depolarize(const FockRegister& state, const ElementSpec& e) {
  const ModeLabel& h = e.targets[0];
  const ModeLabel& v = e.targets[1];
  const int n = state.cutoff(h) + state.cutoff(v);
  std::vector<int> cut(state.cutoffs());
  cut[state.position(h)] = n;
  cut[state.position(v)] = n;
  FockRegister padded = embed(state, cut).to_mixed();

  // Averaging the rotation over a Gaussian angle multiplies coherences
  // between generator eigenvalues m, m' by exp(-s2 z (m - m')^2 / 2).
  const Matrix h_gen = cplx(0, 1) * bs_generator(n);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h_gen + h_gen.adjoint()));
  const Matrix& vecs = es.eigenvectors();
  const RealVector m = es.eigenvalues().array().round().matrix();
  const double var = depolarization_sigma2(e.lc_km) * e.z_km;

  FockRegister rotated = apply_operator(padded, vecs.adjoint(), {h, v});
  FockRegister local = reorder(rotated, [&] {
    std::vector<ModeLabel> order{h, v};
    for (const auto& l : rotated.modes())
      if (!(l == h) && !(l == v)) order.push_back(l);
    return order;
  }());
  // With (h, v) leading, the density index is (pair, rest) on both sides.
  const auto dp = static_cast<Eigen::Index>((n + 1) * (n + 1));
  const auto dr = static_cast<Eigen::Index>(local.dimension()) / dp;
  Matrix rho = local.density_matrix();
  for (Eigen::Index i = 0; i < dp; ++i)
    for (Eigen::Index j = 0; j < dp; ++j) {
      const double dm = m[i] - m[j];
      if (dm == 0.0) continue;
      rho.block(i * dr, j * dr, dr, dr) *= std::exp(-0.5 * var * dm * dm);
    }
  FockRegister damped = FockRegister::mixed(local.modes(), local.cutoffs(), rho);
  return reorder(apply_operator(damped, vecs, {h, v}), padded.modes());
}

}  // namespace

FockRegister apply_element(const FockRegister& state, const ElementSpec& e) {
  if (e.targets.size() != e.arity()) throw ModeError("element is not bound to its target modes");
  switch (e.kind) {
    case ElementKind::beam_splitter: {
      const int c1 = state.cutoff(e.targets[0]), c2 = state.cutoff(e.targets[1]);
      const Matrix m = beam_splitter_map(e.r, e.t, c1, c2, c1 + c2, c1 + c2);
      FockRegister out = apply_map(state, m, e.targets, {{e.targets[0], c1 + c2}, {e.targets[1], c1 + c2}});
      return reorder(out, state.modes());
    }
    case ElementKind::displacement:
      return apply_operator(state, displacement_matrix(e.beta, state.cutoff(e.targets[0])), e.targets);
    case ElementKind::squeeze:
      return apply_operator(state, squeeze_matrix(e.zeta, state.cutoff(e.targets[0])), e.targets);
    case ElementKind::loss:
      return apply_kraus(state, loss_kraus(e.transmission, state.cutoff(e.targets[0])), e.targets[0]);
    case ElementKind::depolarize:
      return depolarize(state, e);
  }
  throw CapabilityError("unknown element kind");
}

}  // namespace tbh
