#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "helpers.hpp"
#include "mchit/io.hpp"

using namespace mchit;

TEST_CASE("json chain files round-trip") {
  MarkovChain chain = io::two_state_chain(0.25);
  std::string text = io::chain_to_json(chain);
  io::ChainFile cf = io::parse_chain_json(text);
  CHECK(cf.states == std::vector<std::string>{"0", "1"});
  CHECK((cf.transition - chain.transition()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("malformed json reports a position") {
  try {
    io::parse_chain_json("{\"states\": [\"a\"], \"P\": [[1.0,]]}");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ParseError);
    CHECK(std::string(e.what()).find("parse error") != std::string::npos);
  }
}

TEST_CASE("structural json problems are caught") {
  CHECK_THROWS_AS(io::parse_chain_json("[1,2,3]"), Error);
  CHECK_THROWS_AS(io::parse_chain_json("{\"P\": [[0.5,0.5]]}"), Error);
  CHECK_THROWS_AS(
      io::parse_chain_json(
          "{\"states\": [\"a\"], \"P\": [[0.5,0.5],[0.5,0.5]]}"),
      Error);
}

TEST_CASE("csv parsing and its error anchors") {
  io::ChainFile cf = io::parse_chain_csv("0.5, 0.5\n0.25, 0.75\n");
  CHECK(cf.transition(1, 0) == 0.25);
  CHECK(cf.states.size() == 2);

  try {
    io::parse_chain_csv("0.5, 0.5\n0.25, oops\n");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("field 2") != std::string::npos);
  }
}

TEST_CASE("builtin generators") {
  MarkovChain two = io::two_state_chain(0.25);
  CHECK(two.transition()(1, 0) == 0.25);
  CHECK_THROWS_AS(io::two_state_chain(0.5), Error);
  CHECK_THROWS_AS(io::two_state_chain(-0.1), Error);

  Vec pi(3);
  pi << 0.5, 0.3, 0.2;
  MarkovChain iid = io::iid_chain(pi);
  for (int i = 0; i < 3; ++i)
    CHECK((iid.transition().row(i).transpose() - pi).cwiseAbs().maxCoeff() ==
          0.0);

  MarkovChain bd = io::birth_death_chain(5);
  CHECK(is_reversible(bd));
  CHECK(bd.transition()(0, 2) == 0.0);
  CHECK_THROWS_AS(io::birth_death_chain(1), Error);
}

TEST_CASE("two-state family detection") {
  CHECK(*io::match_two_state_delta(io::two_state_chain(0.25)) ==
        doctest::Approx(0.25));
  CHECK(*io::match_two_state_delta(io::two_state_chain(0.0)) ==
        doctest::Approx(0.0));
  Mat p(2, 2);
  p << 0.6, 0.4, 0.4, 0.6;
  CHECK_FALSE(io::match_two_state_delta(validate_chain(p)).has_value());
}

TEST_CASE("random chains are ergodic and deterministic in the seed") {
  SplitMix64 a(123), b(123), c(124);
  MarkovChain ca = io::random_ergodic_chain(5, a);
  MarkovChain cb = io::random_ergodic_chain(5, b);
  MarkovChain cc = io::random_ergodic_chain(5, c);
  CHECK((ca.transition() - cb.transition()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ca.transition() - cc.transition()).cwiseAbs().maxCoeff() > 0.0);
  CHECK(ca.pi().minCoeff() > 0.0);
}

TEST_CASE("loading from an actual file") {
  std::string path = "mchit_test_chain.json";
  {
    std::ofstream out(path);
    out << "{\"states\": [\"s0\", \"s1\"], \"P\": [[0.5, 0.5], "
           "[0.25, 0.75]]}";
  }
  io::ChainFile cf = io::load_chain_json(path);
  CHECK(cf.states[1] == "s1");
  CHECK(cf.transition(1, 1) == 0.75);
  std::remove(path.c_str());
  CHECK_THROWS_AS(io::load_chain_json(path), Error);
}
