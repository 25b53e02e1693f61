#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "tbh/errors.hpp"
#include "tbh/fock_register.hpp"
#include "tbh/truncation.hpp"

using namespace tbh;

TEST_CASE("coherent amplitudes follow the Poisson envelope") {
  const cplx beta(1.2, -0.7);
  const Vector v = coherent_state(beta, 30);
  CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
  double fact = 1.0;
  for (int k = 0; k <= 6; ++k) {
    if (k > 0) fact *= k;
    const cplx expect = std::exp(-std::norm(beta) / 2.0) * std::pow(beta, k) / std::sqrt(fact);
    CHECK(std::abs(v[k] - expect) < 1e-13);
  }
  CHECK_THROWS_AS(coherent_state(3.0, 5), TruncationError);
}

TEST_CASE("Poisson tail and cutoff policy") {
  CHECK(poisson_tail(0.0, 0) == doctest::Approx(0.0));
  CHECK(poisson_tail(1.0, 0) == doctest::Approx(1.0 - std::exp(-1.0)));
  const TruncationPolicy policy;
  const int c = policy.cutoff_for(2.0);
  CHECK(poisson_tail(4.0, c) < policy.eps_trunc);
  CHECK(policy.cutoff_for(2.0, 2) == c + 2);
}

TEST_CASE("registers address modes by label") {
  const auto a = FockRegister::fock({mode("a")}, {2}, {1});
  const auto b = FockRegister::fock({mode("b")}, {3}, {2});
  const auto ab = tensor_product(a, b);
  CHECK(ab.dimension() == 12);
  const int occ[] = {1, 2};
  CHECK(std::abs(ab.amplitude(occ) - 1.0) < 1e-15);

  const auto ba = reorder(ab, {mode("b"), mode("a")});
  const int occ2[] = {2, 1};
  CHECK(std::abs(ba.amplitude(occ2) - 1.0) < 1e-15);
  CHECK_THROWS_AS(ab.position(mode("c")), ModeError);
  CHECK_THROWS_AS(require_unique({mode("a"), mode("a")}), ModeError);
  CHECK(to_string(early("A")) == "A.e");
}

TEST_CASE("partial trace of a product returns the factor") {
  const Vector va = test::random_vector(3), vb = test::random_vector(4);
  const auto a = FockRegister::pure({mode("a")}, {2}, va);
  const auto b = FockRegister::pure({mode("b")}, {3}, vb);
  const auto reduced = partial_trace(tensor_product(a, b), {mode("a")});
  CHECK((reduced.density_matrix() - va * va.adjoint()).norm() < 1e-13);
  CHECK(reduced.trace() == doctest::Approx(1.0));
}

TEST_CASE("apply_operator matches a Kronecker product") {
  const Vector va = test::random_vector(3), vb = test::random_vector(2);
  const auto s = tensor_product(FockRegister::pure({mode("a")}, {2}, va),
                                FockRegister::pure({mode("b")}, {1}, vb));
  const Matrix u = test::random_unitary(2);
  const auto out = apply_operator(s, u, {mode("b")});
  Vector expect(6);
  const Vector ub = u * vb;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) expect[i * 2 + j] = va[i] * ub[j];
  CHECK((out.data() - expect).norm() < 1e-13);
}

TEST_CASE("resize and embed keep amplitudes") {
  const auto s = FockRegister::pure({mode("a")}, {3}, test::random_vector(4));
  const auto grown = embed(s, {6});
  CHECK(grown.dimension() == 7);
  const auto [back, removed] = resize_mode(grown, mode("a"), 3);
  CHECK(removed < 1e-15);
  CHECK((back.data() - s.data()).norm() < 1e-15);
  const auto [cut, lost] = resize_mode(s, mode("a"), 1);
  CHECK(lost == doctest::Approx(std::norm(s.data()[2]) + std::norm(s.data()[3])));
  CHECK(cut.trace() + lost == doctest::Approx(1.0));
}

TEST_CASE("environment compression preserves the reduced state") {
  const Vector v = test::random_vector(3 * 3 * 2);
  const auto s = FockRegister::pure({mode("a"), mode("b"), mode("c")}, {2, 2, 1}, v);
  const auto env = trace_into_environment(s, {mode("b"), mode("c")});
  const auto r1 = partial_trace(s, {mode("a")});
  const auto r2 = partial_trace(env, {mode("a")});
  CHECK((r1.density_matrix() - r2.density_matrix()).norm() < 1e-12);
}

TEST_CASE("marginal distribution and inner product") {
  const auto c = FockRegister::single_mode(mode("a"), coherent_state(0.8, 25));
  const auto dist = marginal_distribution(c, mode("a"));
  double mean = 0.0;
  for (std::size_t n = 0; n < dist.size(); ++n) mean += n * dist[n];
  CHECK(mean == doctest::Approx(0.64).epsilon(1e-10));
  const auto d = FockRegister::single_mode(mode("a"), coherent_state(-0.8, 25));
  CHECK(std::abs(inner_product(c, d)) == doctest::Approx(std::exp(-2 * 0.64)).epsilon(1e-10));
}
