#include "tbh/povm.hpp"

#include <cmath>

#include "tbh/errors.hpp"

namespace tbh {

namespace {

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw RangeError("efficiency must lie in [0, 1]");
}

}  // namespace

POVMElement POVMElement::identity() { return POVMElement(); }

POVMElement POVMElement::fock(int n) {
  if (n < 0) throw RangeError("photon number must be nonnegative");
  POVMElement e;
  e.kind_ = POVMKind::fock;
  e.n_ = n;
  return e;
}

POVMElement POVMElement::off(double eta) {
  check_eta(eta);
  POVMElement e;
  e.kind_ = POVMKind::off;
  e.eta_ = eta;
  return e;
}

POVMElement POVMElement::on(double eta) {
  check_eta(eta);
  POVMElement e;
  e.kind_ = POVMKind::on;
  e.eta_ = eta;
  return e;
}

POVMElement POVMElement::dense(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw DimensionError("POVM matrix must be square");
  if (hermiticity_defect(m) > 1e-12) throw RangeError("POVM matrix must be Hermitian");
  const RealVector ev = hermitian_eigenvalues(m);
  if (ev.minCoeff() < -1e-12 || ev.maxCoeff() > 1.0 + 1e-12)
    throw RangeError("POVM eigenvalues must lie in [0, 1]");
  POVMElement e;
  e.kind_ = POVMKind::dense;
  e.dense_ = m;
  return e;
}

RealVector POVMElement::weights(int cutoff) const {
  if (cutoff < 0) throw RangeError("cutoff must be nonnegative");
  RealVector w(cutoff + 1);
  switch (kind_) {
    case POVMKind::identity:
      w.setOnes();
      break;
    case POVMKind::fock:
      w.setZero();
      if (n_ <= cutoff) w[n_] = 1.0;
      break;
    case POVMKind::off:
    case POVMKind::on:
      for (int k = 0; k <= cutoff; ++k) {
        // (1 - eta)^0 = 1 even at eta = 1.
        const double off = k == 0 ? 1.0 : std::pow(1.0 - eta_, k);
        w[k] = kind_ == POVMKind::off ? off : 1.0 - off;
      }
      break;
    case POVMKind::dense:
      throw CapabilityError("dense POVM elements have no diagonal weights");
  }
  return w;
}

Matrix POVMElement::matrix(int cutoff) const {
  if (kind_ == POVMKind::dense) {
    if (dense_.rows() != cutoff + 1) throw DimensionError("dense POVM element has a different cutoff");
    return dense_;
  }
  return weights(cutoff).cast<cplx>().asDiagonal();
}

OnOffPair onoff_povm(double eta) { return {POVMElement::off(eta), POVMElement::on(eta)}; }

}  // namespace tbh
