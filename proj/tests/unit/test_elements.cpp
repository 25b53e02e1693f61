#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "tbh/analytic.hpp"
#include "tbh/elements.hpp"
#include "tbh/errors.hpp"
#include "tbh/sources.hpp"

using namespace tbh;

namespace {

const ModeLabel m1 = mode("1"), m2 = mode("2");

}  // namespace

TEST_CASE("beam splitter routes a single photon with the library sign convention") {
  const double r = 0.6, t = 0.8;
  const auto in = FockRegister::fock({m1, m2}, {1, 1}, {1, 0});
  const auto out = apply_element(in, beam_splitter(r, t).on({m1, m2}));
  const int a[] = {1, 0}, b[] = {0, 1};
  CHECK(std::abs(out.amplitude(a) - t) < 1e-14);
  CHECK(std::abs(out.amplitude(b) - r) < 1e-14);

  const auto in2 = FockRegister::fock({m1, m2}, {1, 1}, {0, 1});
  const auto out2 = apply_element(in2, beam_splitter(r, t).on({m1, m2}));
  CHECK(std::abs(out2.amplitude(a) + r) < 1e-14);
  CHECK(std::abs(out2.amplitude(b) - t) < 1e-14);
}

TEST_CASE("balanced splitter suppresses coincidences") {
  const auto in = FockRegister::fock({m1, m2}, {1, 1}, {1, 1});
  const auto out = apply_element(in, balanced_beam_splitter().on({m1, m2}));
  const int both[] = {1, 1}, left[] = {2, 0}, right[] = {0, 2};
  CHECK(std::abs(out.amplitude(both)) < 1e-14);
  CHECK(std::norm(out.amplitude(left)) == doctest::Approx(0.5));
  CHECK(std::norm(out.amplitude(right)) == doctest::Approx(0.5));
}

TEST_CASE("beam-splitter map is unitary on complete sectors") {
  for (int trial = 0; trial < 10; ++trial) {
    const double th = test::uniform(0.0, std::numbers::pi / 2);
    const int c1 = 1 + trial % 3, c2 = 2 - trial % 2;
    const Matrix m = beam_splitter_map(std::sin(th), std::cos(th), c1, c2, c1 + c2, c1 + c2);
    const Matrix g = m.adjoint() * m;
    CHECK((g - Matrix::Identity(g.rows(), g.cols())).norm() < 1e-12);
  }
  CHECK_THROWS_AS(beam_splitter(0.6, 0.6), RangeError);
}

TEST_CASE("beam-splitter map magnitudes agree with the closed-form coefficient") {
  const double h = 1.0 / std::numbers::sqrt2;
  for (int k = 0; k <= 4; ++k)
    for (int l = 0; l <= 4; ++l) {
      const int n = k + l;
      const Matrix m = beam_splitter_map(h, h, k, l, n, n);
      for (int x = 0; x <= n; ++x) {
        const double amp = std::abs(m(x * (n + 1) + (n - x), k * (l + 1) + l));
        const double closed = std::abs(analytic::bs_coefficient(k, l, x)) / std::pow(std::numbers::sqrt2, n);
        CHECK(amp == doctest::Approx(closed).epsilon(1e-10));
      }
    }
}

TEST_CASE("displacement of vacuum is a coherent state") {
  const cplx beta(0.9, 0.4);
  const auto vac = FockRegister::vacuum({m1}, {30});
  const auto out = apply_element(vac, displacement(beta).on({m1}));
  CHECK((out.data() - coherent_state(beta, 30)).norm() < 1e-10);
}

TEST_CASE("squeeze matrix reproduces the squeezed-vacuum closed form") {
  for (double z : {-0.3, -0.061, 0.2}) {
    const Matrix s = squeeze_matrix(z, 30);
    const Vector col = s.col(0);
    CHECK((col - squeezed_vacuum(z, 30)).norm() < 1e-10);
  }
  CHECK_THROWS_AS(squeeze(cplx(0.1, 0.1)), RangeError);
}

TEST_CASE("loss channel: Kraus completeness and coherent attenuation") {
  const double T = 0.7;
  const auto kraus = loss_kraus(T, 12);
  Matrix sum = Matrix::Zero(13, 13);
  for (const auto& k : kraus) sum += k.adjoint() * k;
  CHECK((sum - Matrix::Identity(13, 13)).norm() < 1e-12);

  const cplx beta(1.1, 0.3);
  const auto in = FockRegister::single_mode(m1, coherent_state(beta, 30));
  const auto out = apply_element(in, loss_channel(T).on({m1}));
  const Vector expect = coherent_state(std::sqrt(T) * beta, 30);
  CHECK((out.density_matrix() - expect * expect.adjoint()).norm() < 1e-10);
  CHECK(fiber_transmission(50.0) == doctest::Approx(0.1));
  CHECK(attenuation_per_km(0.2) == doctest::Approx(0.2 * std::log(10.0) / 10.0));
}

TEST_CASE("depolarization damps the polarization coherence") {
  const double z = 3.0, lc = 10.0;
  const double h = 1.0 / std::numbers::sqrt2;
  Vector v = Vector::Zero(4);
  v[2] = h;  // |1_H 0_V>
  v[1] = h;  // |0_H 1_V>
  const auto in = FockRegister::pure({m1, m2}, {1, 1}, v);
  const auto out = apply_element(in, depolarize_channel(z, lc).on({m1, m2}));
  CHECK(out.trace() == doctest::Approx(1.0).epsilon(1e-12));
  // (1 + D)/2 on |phi> and (1 - D)/2 on the rotated partner, D = exp(-2 s2 z)
  const double d = std::exp(-2.0 * depolarization_sigma2(lc) * z);
  const auto proj = embed(in, out.cutoffs());
  const cplx keep = proj.data().dot(out.density_matrix() * proj.data());
  CHECK(std::real(keep) == doctest::Approx(0.5 * (1.0 + d)).epsilon(1e-12));
  CHECK_THROWS_AS(depolarize_channel(1.0, 0.0), RangeError);
}

TEST_CASE("channels preserve trace and positivity on random inputs") {
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix rho = test::random_density(9, 1 + trial % 3);
    const auto in = FockRegister::mixed({m1, m2}, {2, 2}, rho);
    const auto lossy = apply_element(in, loss_channel(test::uniform(0.0, 1.0)).on({m2}));
    CHECK(lossy.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(test::min_eigenvalue(lossy.density_matrix()) > -1e-12);
    const auto dep = apply_element(in, depolarize_channel(test::uniform(0.0, 5.0), 4.0).on({m1, m2}));
    CHECK(dep.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(test::min_eigenvalue(dep.density_matrix()) > -1e-12);
  }
}

TEST_CASE("expm_antihermitian and sqrt_psd") {
  Matrix g = Matrix::Random(5, 5);
  g = g - g.adjoint().eval();
  const Matrix u = expm_antihermitian(g);
  CHECK((u.adjoint() * u - Matrix::Identity(5, 5)).norm() < 1e-12);
  const Matrix p = test::random_density(5, 3);
  const Matrix s = sqrt_psd(p);
  CHECK((s * s - p).norm() < 1e-12);
  const Matrix a = annihilation(3);
  CHECK(std::abs(a(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(a(2, 3) - std::sqrt(3.0)) < 1e-15);
}
