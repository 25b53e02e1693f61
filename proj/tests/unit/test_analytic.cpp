#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tbh/analytic.hpp"
#include "tbh/errors.hpp"
#include "tbh/metrics.hpp"
#include "tbh/scheme.hpp"

using namespace tbh;
using namespace tbh::analytic;

namespace {

double rising(double x, int n) {
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= x + i;
  return p;
}

}  // namespace

TEST_CASE("ideal probability peaks at |r alpha| = 1/sqrt 2") {
  double best = 0.0, best_ra = 0.0;
  for (int i = 1; i < 20000; ++i) {
    const double ra = i * 1e-4;
    const double p = p_ideal(OperatingPoint::from_r_alpha(2.0, ra, 1.0));
    if (p > best) best = p, best_ra = ra;
  }
  CHECK(best_ra == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(2e-4));
}

TEST_CASE("on-off fidelity limits") {
  CHECK(coherence1(OperatingPoint::from_r_alpha(2.0, 0.0, 0.9)) == doctest::Approx(1.0));
  double prev = 1.0;
  for (double ra = 0.05; ra < 1.5; ra += 0.05) {
    const double f = fidelity1(OperatingPoint::from_r_alpha(2.0, ra, 0.95));
    CHECK(f < prev);
    CHECK(f > 0.5);
    prev = f;
  }
  const auto pt = OperatingPoint::from_r_alpha(2.0, 0.075 * std::numbers::sqrt2, 0.95);
  CHECK(fidelity1(pt) == doctest::Approx(0.99).epsilon(0.005));
}

TEST_CASE("double-pair probability tends to eta^2/48") {
  for (double eta : {0.6, 0.95, 1.0}) {
    const auto pt = OperatingPoint::from_r_alpha(0.25, 1e-4, eta);
    CHECK(p2(pt) == doctest::Approx(eta * eta / 48.0).epsilon(1e-3));
  }
}

TEST_CASE("SPDC ratio approaches its small r alpha asymptote") {
  // the limit needs small alpha as well: at alpha = 0.25 the ratio sits near exp(-alpha^2)
  auto pt = OperatingPoint::from_r_alpha(0.02, 0.002, 0.95);
  pt.lambda2 = 4e-6;
  CHECK(ratio_spdc(pt) == doctest::Approx(ratio_spdc_asymptote(pt)).epsilon(0.01));
  CHECK(ratio_spdc_asymptote(pt) == doctest::Approx(1.0));
  const auto w = p1_window(pt);
  CHECK(w.lower < w.upper);
}

TEST_CASE("terminating hypergeometric satisfies Chu-Vandermonde at w = 1") {
  for (int n = 0; n <= 8; ++n)
    for (double b : {0.5, 2.0, 3.5})
      for (double c : {1.0, 2.5, 6.0}) {
        const double expect = rising(c - b, n) / rising(c, n);
        CHECK(hypergeometric_terminating(n, b, c, 1.0) == doctest::Approx(expect).epsilon(1e-12));
      }
}

TEST_CASE("beam-splitter coefficients: single-port input is binomial") {
  for (int k = 0; k <= 10; ++k)
    for (int x = 0; x <= k; ++x)
      CHECK(std::abs(bs_coefficient(k, 0, x)) == doctest::Approx(std::sqrt(std::tgamma(k + 1.0) /
                                                                           (std::tgamma(x + 1.0) * std::tgamma(k - x + 1.0)))));
  CHECK_THROWS_AS(bs_coefficient(1, 1, 3), RangeError);
}

TEST_CASE("vacuum-input probability") {
  CHECK(p0_squeezed(0.0, 0.0, 0.25, 0.95) == doctest::Approx(0.0));
  const auto s = p0_squeezed_series(-0.061, 0.106 / 0.25, 0.25, 0.95);
  CHECK(s.value == doctest::Approx(1.3e-8).epsilon(0.1));
  CHECK(s.tail_bound < 1e-16);
  CHECK(s.terms > 2);
  CHECK_THROWS_AS(p0_squeezed(2.0, 0.1, 0.25, 0.95), RangeError);
}

TEST_CASE("remote preparation fidelities") {
  const double af = 2.0;
  CHECK(remote_fidelity({Encoding::timebin}, 300.0, af) == 1.0);
  CHECK(remote_fidelity({Encoding::singlerail}, 0.0, af) == doctest::Approx(1.0));
  CHECK(remote_fidelity({Encoding::singlerail}, 1e5, af) == doctest::Approx(0.5 - std::exp(-8.0) / 2));
  CHECK(remote_fidelity({Encoding::polarization, 50.0}, 0.0, af) == doctest::Approx(1.0));
  CHECK_THROWS_AS(remote_fidelity({Encoding::polarization, 0.0}, 1.0, af), RangeError);
}

TEST_CASE("closed-form heralded state matches the closed-form fidelity") {
  const auto pt = OperatingPoint::from_r_alpha(2.0, 0.3, 0.9);
  const auto rho = heralded_state1(pt, 30);
  CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fidelity(rho, target_state(pt.alpha_f(), 30)) == doctest::Approx(fidelity1(pt)).epsilon(1e-9));
}

TEST_CASE("loss records") {
  const auto cv = cv_loss_record(2.0, 0.3);
  CHECK(cv.coherence == doctest::Approx(std::exp(-2 * 0.36)));
  CHECK(cv.amplitude == doctest::Approx(std::sqrt(0.91) * 2.0));
  const auto dv = dv_loss_record(0.4);
  CHECK(dv.intact_weight + dv.vacuum_weight == doctest::Approx(1.0));
  CHECK(cv_loss_state(2.0, 0.3, 30).trace() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(dv_loss_state(2.0, 0.3, 30).trace() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("squeezed-input fidelity uses the override") {
  auto pt = OperatingPoint::from_r_alpha(0.25, 0.106, 0.95);
  pt.zeta = -0.061;
  pt.lambda2 = 5e-4;
  const double f = fidelity_squeezed(pt, 0.0);
  CHECK(f == doctest::Approx(fidelity_multipair(pt)).epsilon(1e-12));
  CHECK(fidelity_squeezed(pt) < f);
  CHECK(probability_squeezed(pt) > probability_squeezed(pt, 0.0));
}
