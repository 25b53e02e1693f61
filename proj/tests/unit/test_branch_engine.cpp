#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tbh/branch_state.hpp"
#include "tbh/elements.hpp"
#include "tbh/errors.hpp"
#include "tbh/metrics.hpp"
#include "tbh/scheme.hpp"

using namespace tbh;

namespace {

const ModeLabel ma = mode("a"), mb = mode("b");

// (a^dag)^k |beta> on one mode.
ModeFactor factor(cplx beta, int k) {
  ModeFactor f;
  f.beta = beta;
  f.poly.assign(k + 1, 0.0);
  f.poly[k] = 1.0;
  return f;
}

}  // namespace

TEST_CASE("local vector of a^dag|beta> matches the dense operator") {
  const cplx beta(0.7, -0.2);
  const Vector v = local_vector(factor(beta, 1), 30, 1e-12);
  const Matrix ad = annihilation(30).adjoint();
  const Vector expect = ad * coherent_state(beta, 30);
  CHECK((v - expect).norm() < 1e-10);
}

TEST_CASE("branch beam splitter agrees with the dense beam splitter") {
  for (int trial = 0; trial < 10; ++trial) {
    const cplx b1(test::uniform(-0.5, 0.5), test::uniform(-0.5, 0.5));
    const cplx b2(test::uniform(-0.5, 0.5), test::uniform(-0.5, 0.5));
    auto s = BranchState::product({ma, mb}, {factor(b1, trial % 2), factor(b2, 1)});
    const double th = test::uniform(0.0, 1.5);
    const TruncationPolicy policy{6, 1e-16};
    const auto dense_in = to_dense(s, policy);
    const auto out = apply_beam_splitter(s, std::sin(th), std::cos(th), ma, mb);
    const auto dense_out = apply_element(dense_in, beam_splitter(std::sin(th), std::cos(th)).on({ma, mb}));
    const auto branch_dense = to_dense(out, policy);
    const auto common = embed(branch_dense, {std::max(branch_dense.cutoffs()[0], dense_out.cutoffs()[0]),
                                             std::max(branch_dense.cutoffs()[1], dense_out.cutoffs()[1])});
    const auto d2 = embed(dense_out, common.cutoffs());
    CHECK((common.data() - d2.data()).norm() < 1e-6);
  }
}

TEST_CASE("displacement shifts the coherent label") {
  auto s = BranchState::product({ma}, {factor(0.3, 0)});
  const auto d = apply_displacement(s, cplx(0.5, 0.1), ma);
  REQUIRE(d.size() == 1);
  CHECK(std::abs(d.branches()[0].factors[0].beta - cplx(0.8, 0.1)) < 1e-15);
  CHECK(std::abs(inner_product(d, d) - 1.0) < 1e-10);
}

TEST_CASE("identical branches merge and the limit is enforced") {
  BranchState s({ma}, 2);
  Branch b{0.5, {factor(0.1, 0)}};
  s.add(b);
  s.add(b);
  CHECK(s.size() == 1);
  CHECK(std::abs(s.branches()[0].coefficient - 1.0) < 1e-15);
  s.add(Branch{1.0, {factor(0.2, 0)}});
  CHECK_THROWS_AS(s.add(Branch{1.0, {factor(0.3, 0)}}), BranchLimitError);
}

TEST_CASE("branch expectation equals the dense conditional operator") {
  const ModeLabel mc = mode("c");
  const TruncationPolicy policy{6, 1e-15};
  for (int trial = 0; trial < 10; ++trial) {
    BranchState s({ma, mb, mc});
    for (int k = 0; k < 3; ++k) {
      auto amp = [] { return cplx(test::uniform(-0.6, 0.6), test::uniform(-0.6, 0.6)); };
      s.add(Branch{amp(), {factor(amp(), k % 2), factor(amp(), 1), factor(amp(), (k + 1) % 2)}});
    }
    const std::map<ModeLabel, POVMElement> povm{{mb, POVMElement::on(0.8)}, {mc, POVMElement::fock(1)}};
    const auto cond = expectation(s, povm, {ma}, policy);
    const auto outcome = herald(to_dense(s, policy), HeraldStrategy{povm, {ma}});
    CHECK(cond.probability == doctest::Approx(outcome.probability).epsilon(1e-9));
    const auto normalised = cond.state.scaled(1.0 / cond.probability);
    CHECK(state_overlap(normalised, outcome.state) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("to_dense respects the memory budget") {
  auto s = BranchState::product({ma, mb}, {factor(2.0, 0), factor(2.0, 0)});
  CHECK_THROWS_AS(to_dense(s, {}, 10), MemoryBudgetError);
}
