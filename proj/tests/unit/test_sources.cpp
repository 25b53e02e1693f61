#include <doctest.h>

#include <cmath>

#include "tbh/errors.hpp"
#include "tbh/sources.hpp"

using namespace tbh;

TEST_CASE("even cat has no odd amplitudes and the stated normalisation") {
  const double a = 2.0;
  const Vector v = cat_plus(a, 40);
  CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
  for (int k = 1; k < 40; k += 2) CHECK(v[k] == cplx{});
  CHECK(cat_normalization(a) == doctest::Approx(std::sqrt(2.0 * (1.0 + std::exp(-8.0)))));
}

TEST_CASE("squeezed vacuum statistics") {
  const double z = -0.4;
  const Vector v = squeezed_vacuum(z, squeezed_cutoff(z, 1e-14));
  double mean = 0.0;
  for (Eigen::Index n = 0; n < v.size(); ++n) mean += n * std::norm(v[n]);
  CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mean == doctest::Approx(std::pow(std::sinh(z), 2)).epsilon(1e-10));
  CHECK(squeezed_cutoff(z, 1e-14) % 2 == 0);
}

TEST_CASE("two-source combination and SPDC weights") {
  const auto w = combine_two_sources(0.7, 0.2, 0.1);
  CHECK(w.p0 == doctest::Approx(0.49));
  CHECK(w.p1 == doctest::Approx(0.28));
  CHECK(w.p2 == doctest::Approx(0.14 + 0.04));
  const double l2 = 0.01;
  const auto s = spdc_multipair(l2);
  const double q = 1.0 - l2;
  CHECK(s.p0 == doctest::Approx(q * q));
  CHECK(s.p1 == doctest::Approx(2 * q * q * l2));
  CHECK(s.p2 == doctest::Approx(3 * q * q * l2 * l2));
  CHECK(s.pair_pair_amplitude * s.pair_pair_amplitude + s.quad_amplitude * s.quad_amplitude ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(spdc_multipair(1.0), RangeError);
}

TEST_CASE("DV components are normalised registers") {
  for (const auto& c : components(DVSourceSpec::spdc(0.02))) {
    const auto r = dv_component_register(c);
    CHECK(r.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.mode_count() == 4);
  }
  CHECK(components(DVSourceSpec::ideal_pair()).size() == 1);
  const auto pair = timebin_pair();
  const int ee[] = {1, 0, 1, 0}, el[] = {1, 0, 0, 1};
  CHECK(std::norm(pair.amplitude(ee)) == doctest::Approx(0.5));
  CHECK(std::abs(pair.amplitude(el)) < 1e-15);
}

TEST_CASE("source validation") {
  CHECK_THROWS_AS(DVSourceSpec::multipair(0.5, 0.6, 0.1).validate(), RangeError);
  CHECK_THROWS_AS(CVSourceSpec::cat(-1.0).validate(), RangeError);
  CHECK(cat_branches(1.0, mode("3")).size() == 2);
}
