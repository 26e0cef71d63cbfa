#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "mchit/chain.hpp"
#include "mchit/io.hpp"
#include "mchit/sim.hpp"

using namespace mchit;

namespace {
Mat two_state_quarter() {
  Mat p(2, 2);
  p << 0.5, 0.5, 0.25, 0.75;
  return p;
}
}  // namespace

TEST_CASE("validate_chain accepts the two-state chain and caches pi") {
  MarkovChain chain = validate_chain(two_state_quarter(), {"s0", "s1"});
  Vec expected = oracle::two_state_pi(0.25);
  CHECK(chain.pi()(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(chain.pi()(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK((chain.pi() - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(chain.index_of("s1") == 1);
  CHECK_THROWS_AS(chain.index_of("nope"), Error);
}

TEST_CASE("validate_chain rejects periodic and non-stochastic input") {
  Mat flip(2, 2);
  flip << 0, 1, 1, 0;
  CHECK_THROWS_WITH_AS(validate_chain(flip), doctest::Contains("period"),
                       Error);
  try {
    validate_chain(flip);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Periodic);
  }

  Mat bad(2, 2);
  bad << 0.5, 0.6, 0.2, 0.8;
  try {
    validate_chain(bad);
    FAIL("expected NotStochastic");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotStochastic);
  }
}

TEST_CASE("validate_chain rejects reducible chains") {
  Mat block(4, 4);
  block << 0.5, 0.5, 0, 0, 0.5, 0.5, 0, 0, 0, 0, 0.5, 0.5, 0, 0, 0.5, 0.5;
  try {
    validate_chain(block);
    FAIL("expected NotIrreducible");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotIrreducible);
  }
}

TEST_CASE("stationary of an IID-rows chain is the row") {
  Vec r(3);
  r << 0.5, 0.3, 0.2;
  MarkovChain chain = io::iid_chain(r);
  CHECK((chain.pi() - r).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("stationary of a doubly stochastic chain is uniform") {
  Mat p(3, 3);
  p << 0.2, 0.3, 0.5, 0.5, 0.2, 0.3, 0.3, 0.5, 0.2;
  MarkovChain chain = validate_chain(p);
  for (int i = 0; i < 3; ++i)
    CHECK(chain.pi()(i) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("step_distribution matches the closed-form power") {
  MarkovChain chain = validate_chain(two_state_quarter());
  Vec d1 = point_mass(2, 1);

  Vec one = step_distribution(chain, d1, 1);
  CHECK(one(0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(one(1) == doctest::Approx(0.75).epsilon(1e-15));

  Vec two = step_distribution(chain, d1, 2);
  CHECK(two(0) == doctest::Approx(5.0 / 16.0).epsilon(1e-14));
  CHECK(two(1) == doctest::Approx(11.0 / 16.0).epsilon(1e-14));
  Mat p2 = oracle::two_state_pt(0.25, 2);
  CHECK(two(0) == doctest::Approx(p2(1, 0)).epsilon(1e-13));

  Vec zero = step_distribution(chain, d1, 0);
  CHECK(zero(1) == 1.0);
}

TEST_CASE("restricted_stationary renormalizes away from j") {
  MarkovChain chain = validate_chain(two_state_quarter());
  Vec r = restricted_stationary(chain, 1);
  CHECK(r(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r(1) == 0.0);

  Vec rows(3);
  rows << 0.5, 0.3, 0.2;
  MarkovChain iid = io::iid_chain(rows);
  Vec r2 = restricted_stationary(iid, 2);
  CHECK(r2(0) == doctest::Approx(0.625).epsilon(1e-12));
  CHECK(r2(1) == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(r2(2) == 0.0);

  Mat u(4, 4);
  u.setConstant(0.25);
  MarkovChain uni = validate_chain(u);
  Vec r3 = restricted_stationary(uni, 0);
  CHECK(r3(0) == 0.0);
  for (int i = 1; i < 4; ++i)
    CHECK(r3(i) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("remixing the restricted law recovers pi exactly") {
  SplitMix64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    MarkovChain chain = io::random_ergodic_chain(2 + rep % 5, rng);
    for (int j = 0; j < chain.size(); ++j) {
      Vec r = restricted_stationary(chain, j);
      double pj = chain.pi()(j);
      Vec remixed = r * (1.0 - pj);
      remixed(j) += pj;
      CHECK((remixed - chain.pi()).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
}

TEST_CASE("is_reversible: 2-state always, biased 3-cycle never") {
  CHECK(is_reversible(validate_chain(two_state_quarter())));

  Mat sym(3, 3);
  sym << 0.2, 0.4, 0.4, 0.4, 0.2, 0.4, 0.4, 0.4, 0.2;
  CHECK(is_reversible(validate_chain(sym)));

  Mat cyc(3, 3);
  cyc << 0, 0.9, 0.1, 0.1, 0, 0.9, 0.9, 0.1, 0;
  CHECK_FALSE(is_reversible(validate_chain(cyc)));
}

TEST_CASE("is_reversible is invariant under state relabeling") {
  SplitMix64 rng(23);
  std::mt19937 perm_rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    int n = 3 + rep % 3;
    MarkovChain chain = io::random_ergodic_chain(n, rng);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), perm_rng);
    Mat q(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        q(perm[i], perm[k]) = chain.transition()(i, k);
    MarkovChain relabeled = validate_chain(q);
    CHECK(is_reversible(chain) == is_reversible(relabeled));
  }

  // and for a genuinely reversible one
  MarkovChain bd = io::birth_death_chain(4);
  Mat q(4, 4);
  int perm[4] = {2, 0, 3, 1};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) q(perm[i], perm[k]) = bd.transition()(i, k);
  CHECK(is_reversible(bd));
  CHECK(is_reversible(validate_chain(q)));
}

TEST_CASE("step_distribution stays a distribution out to t = 200") {
  SplitMix64 rng(37);
  for (int rep = 0; rep < 5; ++rep) {
    MarkovChain chain = io::random_ergodic_chain(4, rng);
    Vec d = point_mass(4, rep % 4);
    for (long t : {1L, 7L, 50L, 200L}) {
      Vec out = step_distribution(chain, d, t);
      CHECK(out.minCoeff() >= 0.0);
      CHECK(out.maxCoeff() <= 1.0);
      CHECK(std::abs(out.sum() - 1.0) <= 1e-10);
    }
    Vec at_pi = step_distribution(chain, chain.pi(), 60);
    CHECK((at_pi - chain.pi()).cwiseAbs().maxCoeff() <= 1e-10);
  }
}
