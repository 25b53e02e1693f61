#include "tbh/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tbh/detectors.hpp"
#include "tbh/errors.hpp"
#include "tbh/sources.hpp"

namespace tbh::analytic {

namespace {

double cat_denominator(double alpha) { return 1.0 + std::exp(-2.0 * alpha * alpha); }

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

const OperatingPoint& require_lambda(const OperatingPoint& pt) {
  if (!pt.lambda2) throw RangeError("operating point needs lambda2");
  if (*pt.lambda2 < 0.0 || *pt.lambda2 >= 1.0) throw RangeError("lambda2 must lie in [0, 1)");
  return pt;
}

// Index of |a_e, a_l, n_B> in a register over (A.e, A.l, B) with A cutoffs 1.
Eigen::Index hybrid_index(int ae, int al, int nb, int b_cutoff) {
  return static_cast<Eigen::Index>((ae * 2 + al) * (b_cutoff + 1) + nb);
}

Vector coherent(double beta, int cutoff) { return coherent_state(beta, cutoff, 1.0); }

// Places |u><v| into the (ket DV, bra DV) block of a hybrid density matrix.
void add_block(Matrix& rho, int ket_dv, int bra_dv, const Vector& u, const Vector& v, double w,
               int b_cutoff) {
  const int ke = ket_dv / 2, kl = ket_dv % 2, be = bra_dv / 2, bl = bra_dv % 2;
  for (int i = 0; i <= b_cutoff; ++i)
    for (int j = 0; j <= b_cutoff; ++j)
      rho(hybrid_index(ke, kl, i, b_cutoff), hybrid_index(be, bl, j, b_cutoff)) +=
          w * u[i] * std::conj(v[j]);
}

FockRegister hybrid_register(const Matrix& rho, int b_cutoff) {
  return FockRegister::mixed(hybrid_modes(), {1, 1, b_cutoff}, rho);
}

constexpr int early_photon = 2;  // |1_e 0_l>
constexpr int late_photon = 1;   // |0_e 1_l>

}  // namespace

double OperatingPoint::t() const { return std::sqrt(std::max(0.0, 1.0 - r * r)); }

OperatingPoint OperatingPoint::from_r_alpha(double alpha, double r_alpha, double eta) {
  if (alpha <= 0.0) throw RangeError("alpha must be positive");
  OperatingPoint pt;
  pt.alpha = alpha;
  pt.r = r_alpha / alpha;
  pt.eta = eta;
  pt.validate();
  return pt;
}

void OperatingPoint::validate() const {
  if (!(r >= 0.0 && r <= 1.0)) throw RangeError("r must lie in [0, 1]");
  if (!(eta >= 0.0 && eta <= 1.0)) throw RangeError("eta must lie in [0, 1]");
  if (!std::isfinite(alpha)) throw RangeError("alpha must be finite");
  if (lambda2 && (*lambda2 < 0.0 || *lambda2 >= 1.0)) throw RangeError("lambda2 must lie in [0, 1)");
  if (zeta && std::abs(*zeta) > 1.5) throw RangeError("|zeta| must not exceed 1.5");
  if (z_km && *z_km < 0.0) throw RangeError("distance must be nonnegative");
}

double p_ideal(const OperatingPoint& pt) {
  const double x = pt.r_alpha() * pt.r_alpha();
  return x * std::exp(-2.0 * x) / (16.0 * cat_denominator(pt.alpha));
}

double coherence1(const OperatingPoint& pt) {
  const double x = pt.r_alpha() * pt.r_alpha();
  const double h = 0.5 * pt.eta * x;
  // h / (1 - e^{-h}) -> 1 as h -> 0
  const double ratio = h == 0.0 ? 1.0 : h / -std::expm1(-h);
  return ratio * std::exp(-2.0 * x);
}

double fidelity1(const OperatingPoint& pt) { return 0.5 * (1.0 + coherence1(pt)); }

double p1(const OperatingPoint& pt) {
  const double x = pt.r_alpha() * pt.r_alpha();
  return pt.eta / 8.0 * -std::expm1(-0.5 * pt.eta * x) / cat_denominator(pt.alpha);
}

double p2(const OperatingPoint& pt) {
  const double eta = pt.eta;
  const double x = pt.r_alpha() * pt.r_alpha();
  const double e = std::exp(-0.5 * eta * x);
  // 12 - eta - (12 - 2 eta) e - ... regrouped so that r alpha -> 0 stays exact
  const double bracket = -(12.0 - 2.0 * eta) * std::expm1(-0.5 * eta * x) + eta -
                         0.5 * eta * eta * x * e + eta * std::exp(-2.0 * pt.alpha * pt.alpha);
  return eta / 48.0 * bracket / cat_denominator(pt.alpha);
}

double ratio_spdc(const OperatingPoint& pt) {
  const auto w = spdc_multipair(*require_lambda(pt).lambda2);
  const double denom = w.p1 * p1(pt);
  if (w.p2 == 0.0) return 0.0;
  if (!(denom > std::numeric_limits<double>::min()))
    throw DegenerateOutcome("single-pair herald probability underflows", denom);
  return w.p2 * p2(pt) / denom;
}

double ratio_spdc_asymptote(const OperatingPoint& pt) {
  const double x = pt.r_alpha() * pt.r_alpha();
  if (x == 0.0) throw RangeError("asymptote undefined at r alpha = 0");
  return *require_lambda(pt).lambda2 / x;
}

double fidelity_multipair(const OperatingPoint& pt) {
  return fidelity1(pt) / (1.0 + ratio_spdc(pt));
}

double hypergeometric_terminating(int n, double b, double c, double w) {
  if (n < 0) throw RangeError("terminating series needs n >= 0");
  double term = 1.0, sum = 1.0;
  for (int j = 0; j < n; ++j) {
    term *= (j - n) * (b + j) / ((c + j) * (j + 1.0)) * w;
    sum += term;
  }
  return sum;
}

namespace {

// 2F1(-a, -b; c; -1) with integers a, b >= 0, evaluated term by term in
// log space: every term has magnitude a!/(a-j)! b!/(b-j)! / ((c)_j j!).
double hypergeometric_integer(int a, int b, int c) {
  const int n = std::min(a, b);
  std::vector<double> logs(n + 1);
  double top = -std::numeric_limits<double>::infinity();
  for (int j = 0; j <= n; ++j) {
    logs[j] = std::lgamma(a + 1.0) - std::lgamma(a - j + 1.0) + std::lgamma(b + 1.0) -
              std::lgamma(b - j + 1.0) - (std::lgamma(c + j + 0.0) - std::lgamma(c + 0.0)) -
              std::lgamma(j + 1.0);
    top = std::max(top, logs[j]);
  }
  long double sum = 0.0L;
  for (int j = 0; j <= n; ++j) {
    const long double mag = std::exp(static_cast<long double>(logs[j] - top));
    sum += (j % 2 == 0) ? mag : -mag;
  }
  return static_cast<double>(sum) * std::exp(top);
}

}  // namespace

double bs_coefficient(int k, int l, int x) {
  if (k < 0 || l < 0 || x < 0 || x > k + l) throw RangeError("invalid beam-splitter indices");
  if (x <= l) {
    const double pre = 0.5 * (log_binomial(k + l - x, k) + log_binomial(l, x));
    return std::exp(pre) * hypergeometric_integer(k, x, l - x + 1);
  }
  const double pre = 0.5 * (log_binomial(x, l) + log_binomial(k, x - l));
  const double sign = ((x - l) % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(pre) * hypergeometric_integer(l, k + l - x, x - l + 1);
}

SeriesResult p0_squeezed_series(double zeta, double r, double alpha, double eta, double tol) {
  if (std::abs(zeta) > 1.5) throw RangeError("|zeta| must not exceed 1.5");
  if (!(tol > 0.0)) throw RangeError("tolerance must be positive");
  if (!(r >= 0.0 && r <= 1.0)) throw RangeError("r must lie in [0, 1]");
  const double t = std::sqrt(1.0 - r * r);
  const double ra = r * alpha;
  const double g = -std::tanh(zeta) / 2.0;
  const double click = 1.0 - eta / 4.0;
  const double prefactor = std::exp(-ra * ra) / std::cosh(zeta);

  constexpr int max_y = 200;
  constexpr int monotone_run = 5;
  SeriesResult result;
  long double total = 0.0L;
  // Terms alternate in size with the parity of y, so the certificate looks
  // at consecutive pairs (2j, 2j+1).
  std::vector<double> pairs;
  double pair = 0.0;
  for (int y = 0; y <= max_y; ++y) {
    double term = 0.0;
    for (int z = 2; z <= y; ++z) {
      for (int q = 1; q < z; ++q) {
        const double detect =
            (1.0 - std::pow(click, z - q)) * (1.0 - std::pow(click, q));
        if (detect == 0.0) continue;
        double amp = 0.0;
        for (int k4 = y % 2; k4 <= z; k4 += 2) {
          const int s = y - k4;  // photons from the squeezed mode
          const int reflected = z - k4;
          double log_mag = 0.5 * log_binomial(s, reflected) + 0.5 * log_binomial(s, s / 2) -
                           0.5 * std::lgamma(k4 + 1.0) - 0.5 * z * std::log(2.0);
          double sign = 1.0;
          auto factor = [&](double base, int power) {
            if (power == 0) return;
            if (base == 0.0) {
              log_mag = -std::numeric_limits<double>::infinity();
              return;
            }
            log_mag += power * std::log(std::abs(base));
            if (base < 0.0 && power % 2 == 1) sign = -sign;
          };
          factor(t, y - z);
          factor(r, reflected);
          factor(ra, k4);
          factor(g, s / 2);
          if (!std::isfinite(log_mag)) continue;
          amp += sign * std::exp(log_mag) * bs_coefficient(k4, reflected, q);
        }
        term += detect * amp * amp;
      }
    }
    term *= prefactor;
    total += term;
    result.terms = y + 1;
    pair += term;
    if (y % 2 == 1) {
      pairs.push_back(pair);
      pair = 0.0;
      const std::size_t n = pairs.size();
      if (n > monotone_run) {
        bool decaying = true;
        double ratio = 0.0;
        for (std::size_t i = n - monotone_run; i < n; ++i) {
          if (!(pairs[i] < pairs[i - 1]) || pairs[i - 1] <= 0.0) {
            decaying = false;
            break;
          }
          ratio = std::max(ratio, pairs[i] / pairs[i - 1]);
        }
        if (pairs.back() == 0.0 && pairs[n - 2] == 0.0 && n > 2 * monotone_run) {
          // every term vanishes (e.g. no squeezing and no light)
          result.tail_bound = 0.0;
          result.value = static_cast<double>(total);
          return result;
        }
        if (decaying && ratio < 1.0) {
          const double bound = pairs.back() * ratio / (1.0 - ratio);
          if (pairs.back() < tol && bound < 10.0 * tol) {
            result.tail_bound = bound;
            result.value = static_cast<double>(total);
            return result;
          }
        }
      }
    }
  }
  throw ConvergenceError("vacuum-input herald series not certified by y = " +
                         std::to_string(max_y));
}

double p0_squeezed(double zeta, double r, double alpha, double eta, double tol) {
  return p0_squeezed_series(zeta, r, alpha, eta, tol).value;
}

namespace {

double p0_for(const OperatingPoint& pt, std::optional<double> p0_override) {
  if (p0_override) return *p0_override;
  if (!pt.zeta) return 0.0;
  return p0_squeezed(*pt.zeta, pt.r, pt.alpha, pt.eta);
}

}  // namespace

double fidelity_squeezed(const OperatingPoint& pt, std::optional<double> p0_override) {
  const auto w = spdc_multipair(*require_lambda(pt).lambda2);
  const double single = w.p1 * p1(pt);
  if (!(single > std::numeric_limits<double>::min()))
    throw DegenerateOutcome("single-pair herald probability underflows", single);
  const double vac = w.p0 * p0_for(pt, p0_override) / single;
  const double multi = w.p2 * p2(pt) / single;
  return fidelity1(pt) / (1.0 + vac + multi);
}

double probability_squeezed(const OperatingPoint& pt, std::optional<double> p0_override) {
  const auto w = spdc_multipair(*require_lambda(pt).lambda2);
  return w.p0 * p0_for(pt, p0_override) + w.p1 * p1(pt) + w.p2 * p2(pt);
}

Window p1_window(const OperatingPoint& pt) {
  if (pt.r <= 0.0) throw RangeError("window needs r > 0");
  const double x = pt.r_alpha() * pt.r_alpha();
  return {x * x * x / std::pow(pt.r, 4), x};
}

double remote_fidelity(const RemoteChannel& channel, double z_km, double alpha_f) {
  if (z_km < 0.0) throw RangeError("distance must be nonnegative");
  const double e = std::exp(-2.0 * alpha_f * alpha_f);
  double decay = 1.0;
  switch (channel.encoding) {
    case Encoding::timebin:
      return 1.0;
    case Encoding::polarization:
      if (!(channel.lc_km > 0.0)) throw RangeError("correlation length must be positive");
      decay = std::exp(-z_km / channel.lc_km);
      break;
    case Encoding::singlerail: {
      const double beta = channel.beta_db_per_km * std::log(10.0) / 10.0;
      decay = std::exp(-0.5 * beta * z_km);
      break;
    }
  }
  return 0.5 + (decay - e) / (2.0 * (1.0 - decay * e));
}

CVLossRecord cv_loss_record(double alpha_f, double r_cv) {
  if (!(r_cv >= 0.0 && r_cv <= 1.0)) throw RangeError("r_cv must lie in [0, 1]");
  const double lost = r_cv * alpha_f;
  return {0.5, std::exp(-2.0 * lost * lost), std::sqrt(1.0 - r_cv * r_cv) * alpha_f};
}

DVLossRecord dv_loss_record(double r_dv) {
  if (!(r_dv >= 0.0 && r_dv <= 1.0)) throw RangeError("r_dv must lie in [0, 1]");
  return {1.0 - r_dv * r_dv, r_dv * r_dv};
}

FockRegister cv_loss_state(double alpha_f, double r_cv, int b_cutoff) {
  const auto rec = cv_loss_record(alpha_f, r_cv);
  const Vector plus = coherent(rec.amplitude, b_cutoff);
  const Vector minus = coherent(-rec.amplitude, b_cutoff);
  const auto d = 4 * (b_cutoff + 1);
  Matrix rho = Matrix::Zero(d, d);
  add_block(rho, early_photon, early_photon, plus, plus, rec.diagonal_weight, b_cutoff);
  add_block(rho, late_photon, late_photon, minus, minus, rec.diagonal_weight, b_cutoff);
  add_block(rho, early_photon, late_photon, plus, minus, -rec.diagonal_weight * rec.coherence, b_cutoff);
  add_block(rho, late_photon, early_photon, minus, plus, -rec.diagonal_weight * rec.coherence, b_cutoff);
  return hybrid_register(rho, b_cutoff);
}

FockRegister dv_loss_state(double alpha_f, double r_dv, int b_cutoff) {
  const auto rec = dv_loss_record(r_dv);
  const Vector plus = coherent(alpha_f, b_cutoff);
  const Vector minus = coherent(-alpha_f, b_cutoff);
  const auto d = 4 * (b_cutoff + 1);
  Matrix rho = Matrix::Zero(d, d);
  const double w = 0.5 * rec.intact_weight;
  add_block(rho, early_photon, early_photon, plus, plus, w, b_cutoff);
  add_block(rho, late_photon, late_photon, minus, minus, w, b_cutoff);
  add_block(rho, early_photon, late_photon, plus, minus, -w, b_cutoff);
  add_block(rho, late_photon, early_photon, minus, plus, -w, b_cutoff);
  add_block(rho, 0, 0, plus, plus, 0.5 * rec.vacuum_weight, b_cutoff);
  add_block(rho, 0, 0, minus, minus, 0.5 * rec.vacuum_weight, b_cutoff);
  return hybrid_register(rho, b_cutoff);
}

FockRegister heralded_state1(const OperatingPoint& pt, int b_cutoff) {
  const double af = pt.alpha_f();
  const double c = coherence1(pt);
  const Vector plus = coherent(af, b_cutoff);
  const Vector minus = coherent(-af, b_cutoff);
  const auto d = 4 * (b_cutoff + 1);
  Matrix rho = Matrix::Zero(d, d);
  add_block(rho, early_photon, early_photon, plus, plus, 0.5, b_cutoff);
  add_block(rho, late_photon, late_photon, minus, minus, 0.5, b_cutoff);
  add_block(rho, early_photon, late_photon, plus, minus, -0.5 * c, b_cutoff);
  add_block(rho, late_photon, early_photon, minus, plus, -0.5 * c, b_cutoff);
  return hybrid_register(rho, b_cutoff);
}

}  // namespace tbh::analytic
