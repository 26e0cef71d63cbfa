#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mchit/hitting.hpp"
#include "mchit/io.hpp"
#include "mchit/sim.hpp"

using namespace mchit;

TEST_CASE("two-state hitting law: atom 2/3 and halving tail") {
  MarkovChain chain = io::two_state_chain(0.25);
  HittingResult h = hitting_time_dist(chain, 1);
  CHECK(h.dist.pmf(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  for (long t = 1; t <= h.dist.n_max(); ++t)
    CHECK(h.dist.pmf(t) ==
          doctest::Approx((1.0 / 3.0) * std::pow(0.5, double(t)))
              .epsilon(1e-11));
  CHECK(h.mean_direct == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
  CHECK(h.mean_kac == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("IID-rows chain hits like a geometric") {
  Vec rows(3);
  rows << 0.5, 0.3, 0.2;
  MarkovChain chain = io::iid_chain(rows);
  HittingResult h = hitting_time_dist(chain, 2);
  IntDist g = geometric(0.2, h.dist.n_max());
  CHECK(tv_distance(h.dist, g).value <= 1e-10);
  CHECK(h.mean_kac == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("the hitting atom at zero is pi_j") {
  SplitMix64 rng(401);
  for (int rep = 0; rep < 10; ++rep) {
    MarkovChain chain = io::random_ergodic_chain(3 + rep % 4, rng);
    for (int j = 0; j < chain.size(); ++j) {
      HittingResult h = hitting_time_dist(chain, j);
      CHECK(h.dist.pmf(0) == doctest::Approx(chain.pi()(j)).epsilon(1e-12));
      CHECK(h.conditional_dist.pmf(0) == 0.0);
    }
  }
}

TEST_CASE("Kac identity on the worked examples") {
  MarkovChain chain = io::two_state_chain(0.25);
  CHECK(expected_hitting_kac(chain, 1) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-10));

  MarkovChain sym = io::two_state_chain(0.0);
  CHECK(expected_hitting_kac(sym, 1) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("average hitting time") {
  // brute-force oracle from the closed-form two-state powers
  double kac0 = 0.0, kac1 = 0.0;
  Vec pi = oracle::two_state_pi(0.25);
  for (long t = 0; t < 80; ++t) {
    Mat pt = oracle::two_state_pt(0.25, t);
    kac0 += pt(0, 0) - pi(0);
    kac1 += pt(1, 1) - pi(1);
  }
  double expected = kac0 + kac1;  // sum_j pi_j * (kac_j / pi_j)

  MarkovChain chain = io::two_state_chain(0.25);
  CHECK(average_hitting_time(chain) ==
        doctest::Approx(expected).epsilon(1e-10));
  CHECK(average_hitting_time(chain) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-10));

  Vec rows(3);
  rows << 0.5, 0.3, 0.2;
  CHECK(average_hitting_time(io::iid_chain(rows)) ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(average_hitting_time(io::two_state_chain(0.0)) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("mixture identity and the two mean routes agree") {
  SplitMix64 rng(403);
  for (int rep = 0; rep < 15; ++rep) {
    MarkovChain chain = io::random_ergodic_chain(3 + rep % 4, rng);
    for (int j = 0; j < chain.size(); ++j) {
      HittingResult h = hitting_time_dist(chain, j);
      double pj = chain.pi()(j);
      CHECK(h.dist.pmf(0) == doctest::Approx(pj).epsilon(1e-12));
      for (long t = 1; t <= h.dist.n_max(); ++t)
        CHECK(h.dist.pmf(t) ==
              doctest::Approx((1.0 - pj) * h.conditional_dist.pmf(t))
                  .epsilon(1e-12));
      CHECK(std::abs(h.mean_direct - h.mean_kac) <= 1e-8);
      // third, fully independent route: fundamental-matrix solve
      double fundamental = oracle::hitting_mean_by_fundamental(
          chain.transition(), chain.pi(), j);
      CHECK(h.mean_kac == doctest::Approx(fundamental).epsilon(1e-8));
    }
  }
}

TEST_CASE("hitting pmf matches the absorbing-chain oracle") {
  SplitMix64 rng(405);
  for (int rep = 0; rep < 10; ++rep) {
    MarkovChain chain = io::random_ergodic_chain(4, rng);
    int j = rep % 4;
    HittingResult h = hitting_time_dist(chain, j);
    std::vector<double> ref = oracle::hitting_pmf_by_absorption(
        chain.transition(), chain.pi(), j, h.dist.n_max());
    for (long t = 0; t <= h.dist.n_max(); ++t)
      CHECK(h.dist.pmf(t) ==
            doctest::Approx(ref[static_cast<size_t>(t)]).epsilon(1e-10));
  }
}

TEST_CASE("conditional law is the first-passage law from the restricted "
          "start") {
  SplitMix64 rng(407);
  MarkovChain chain = io::random_ergodic_chain(4, rng);
  HittingResult h = hitting_time_dist(chain, 2);
  std::vector<double> ref = oracle::hitting_pmf_by_absorption(
      chain.transition(), restricted_stationary(chain, 2), 2,
      h.conditional_dist.n_max());
  CHECK(ref[0] == 0.0);
  for (long t = 1; t <= h.conditional_dist.n_max(); ++t)
    CHECK(h.conditional_dist.pmf(t) ==
          doctest::Approx(ref[static_cast<size_t>(t)]).epsilon(1e-10));
}
