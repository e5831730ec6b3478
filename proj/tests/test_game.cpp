#include <doctest.h>

#include <map>

#include "mtd/game.hpp"
#include "oracles.hpp"

using namespace mtd;

namespace {

std::map<std::string, double> sample(const SystemState& s, const Observation& o, const DefendAction& d,
                                     const AttackAction& a, const GameConfig& c, std::size_t runs,
                                     std::uint64_t seed) {
  RandomSource rng(seed);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < runs; ++i) out[transit_state(s, o, d, a, c, rng).pattern()] += 1.0 / runs;
  return out;
}

}  // namespace

TEST_CASE("VmSet membership") {
  VmSet s(5, {1, 3});
  CHECK(s.size() == 2);
  CHECK(s.contains(1));
  CHECK_FALSE(s.contains(2));
  CHECK_FALSE(s.contains(99));
  s.erase(1);
  CHECK(s.size() == 1);
  CHECK_THROWS_AS(s.insert(5), std::out_of_range);
  CHECK(VmSet::all(4).size() == 4);
  CHECK(VmSet::all(4).members().back().value == 3);
}

TEST_CASE("init_game at the reference scale starts clean") {
  GameConfig c = make_config(50, 20, 20, 100);
  REQUIRE(c.q == 1000);
  const auto g = init_game(c);
  CHECK(g.state.pattern() == std::string(50, '0'));
  CHECK(g.observation.count() == 0);
  CHECK(g.attack.targets.empty());
  CHECK(g.defend.shuffled.empty());
}

TEST_CASE("init_game on the smallest legal config") {
  const auto g = init_game(make_config(1, 1, 1, 1));
  CHECK(g.state.pattern() == "0");
  CHECK(g.attack.targets.empty());
  CHECK(g.defend.shuffled.empty());
}

TEST_CASE("init_game rejects a user count that does not fill the VMs") {
  GameConfig c = make_config(3, 2, 1, 1);
  c.q = 5;
  try {
    init_game(c);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "q");
    CHECK(std::string(e.what()).find("m·n ≠ q") != std::string::npos);
  }
}

TEST_CASE("check_config names the bad field") {
  GameConfig c = make_config(4, 2, 2, 2);
  c.gamma = 1.5;
  auto issues = check_config(c);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].field == "gamma");

  c = make_config(4, 2, 2, 2);
  c.direct_success[2] = 1.2;
  issues = check_config(c);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].field == "direct_success");

  c = make_config(4, 2, 5, 2);
  CHECK(check_config(c).at(0).field == "r");

  c = make_config(4, 2, 2, 2);
  c.pivot_success.pop_back();
  CHECK(check_config(c).at(0).field == "pivot_success");
}

TEST_CASE("a shuffled compromised VM is restored") {
  GameConfig c = make_config(2, 1, 1, 1, 1.0, 1.0, 0.5);
  RandomSource rng(1);
  const auto next = transit_state(SystemState::from_pattern("11"), Observation::from_pattern("11"),
                                  DefendAction{VmSet(2, {0})}, AttackAction{VmSet(2, {0, 1})}, c, rng);
  CHECK(next.pattern() == "01");
}

TEST_CASE("a certain direct attack always lands") {
  GameConfig c = make_config(3, 1, 1, 1, 1.0, 0.0, 1.0);
  RandomSource rng(2);
  for (int i = 0; i < 100; ++i) {
    const auto next = transit_state(SystemState::healthy(3), Observation::clear(3), DefendAction{VmSet(3)},
                                    AttackAction{VmSet(3, {1})}, c, rng);
    CHECK(next.pattern() == "010");
  }
}

TEST_CASE("transition frequencies match coin enumeration, n = 3 worked case") {
  GameConfig c = make_config(3, 1, 1, 1, 0.5, 0.2, 0.9);
  const SystemState s = SystemState::healthy(3);
  const Observation o = Observation::clear(3);
  const DefendAction d{VmSet(3, {1})};
  const AttackAction a{VmSet(3, {0, 1})};
  const auto exact = oracle::transition(s, o, d, a, c);
  CHECK(exact.at("000") == doctest::Approx(0.5));
  CHECK(exact.at("100") == doctest::Approx(0.5));
  const auto seen = sample(s, o, d, a, c, 100000, 11);
  for (const auto& pattern : {"000", "100", "010", "001", "110", "101", "011", "111"}) {
    const double e = exact.count(pattern) ? exact.at(pattern) : 0.0;
    const double f = seen.count(pattern) ? seen.at(pattern) : 0.0;
    CHECK(std::abs(e - f) <= 0.01);
  }
}

TEST_CASE("false positives pivot from compromised VMs") {
  GameConfig c = make_config(3, 1, 1, 1, 0.5, 0.0, 0.9);
  c.pivot_success[0 * 3 + 2] = 0.3;
  c.pivot_success[1 * 3 + 2] = 0.6;
  const SystemState s = SystemState::from_pattern("110");
  const Observation o = Observation::from_pattern("001");
  const DefendAction d{VmSet(3)};
  const AttackAction a{VmSet(3)};
  CHECK(compromise_probability(s, o, d, a, c, 2) == doctest::Approx(0.6));
  c.pivot_combine = PivotCombine::independent_or;
  CHECK(compromise_probability(s, o, d, a, c, 2) == doctest::Approx(1 - 0.7 * 0.4));
  // Consistent observations leave the state alone.
  CHECK(compromise_probability(s, Observation::clear(3), d, a, c, 2) == 0.0);
  CHECK(compromise_probability(s, Observation::clear(3), d, a, c, 0) == 1.0);
}

TEST_CASE("property: shuffled VMs always come back healthy") {
  RandomSource gen(404);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 1 + gen.index(6);
    const GameConfig c = oracle::random_config(gen, n, 1, 1, 1);
    const auto s = SystemState::from_pattern(oracle::random_bits(gen, n));
    const auto o = Observation::from_pattern(oracle::random_bits(gen, n));
    const DefendAction d{oracle::random_set(gen, n)};
    const AttackAction a{oracle::random_set(gen, n)};
    RandomSource rng(gen.next_u64());
    const auto next = transit_state(s, o, d, a, c, rng);
    for (auto v : d.shuffled.members()) REQUIRE(next.at(v.value) == false);
  }
}

TEST_CASE("property: no attack and no compromise stays put") {
  RandomSource gen(405);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 1 + gen.index(6);
    const GameConfig c = oracle::random_config(gen, n, 1, 1, 1);
    const auto o = Observation::from_pattern(oracle::random_bits(gen, n));
    RandomSource rng(gen.next_u64());
    const auto next = transit_state(SystemState::healthy(n), o, DefendAction{oracle::random_set(gen, n)},
                                    AttackAction{VmSet(n)}, c, rng);
    REQUIRE(next == SystemState::healthy(n));
  }
}

TEST_CASE("property: raising p(v) never heals a VM under the same draws") {
  RandomSource gen(406);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 1 + gen.index(6);
    GameConfig lo = oracle::random_config(gen, n, 1, 1, 1);
    GameConfig hi = lo;
    for (auto& p : hi.direct_success) p = p + (1.0 - p) * gen.uniform();
    const auto s = SystemState::from_pattern(oracle::random_bits(gen, n));
    const auto o = Observation::from_pattern(oracle::random_bits(gen, n));
    const AttackAction a{oracle::random_set(gen, n)};
    const auto seed = gen.next_u64();
    RandomSource r1(seed), r2(seed);
    const auto x = transit_state(s, o, DefendAction{VmSet(n)}, a, lo, r1);
    const auto y = transit_state(s, o, DefendAction{VmSet(n)}, a, hi, r2);
    for (std::size_t v = 0; v < n; ++v) REQUIRE((!x.at(v) || y.at(v)));
  }
}

TEST_CASE("property: transit_state is deterministic for a seed") {
  RandomSource gen(407);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + gen.index(8);
    const GameConfig c = oracle::random_config(gen, n, 1, 1, 1);
    const auto s = SystemState::from_pattern(oracle::random_bits(gen, n));
    const auto o = Observation::from_pattern(oracle::random_bits(gen, n));
    const DefendAction d{oracle::random_set(gen, n)};
    const AttackAction a{oracle::random_set(gen, n)};
    const auto seed = gen.next_u64();
    RandomSource r1(seed), r2(seed);
    REQUIRE(transit_state(s, o, d, a, c, r1) == transit_state(s, o, d, a, c, r2));
  }
}

TEST_CASE("transit_state rejects mismatched lengths") {
  GameConfig c = make_config(3, 1, 1, 1);
  RandomSource rng(0);
  CHECK_THROWS_AS(transit_state(SystemState::healthy(2), Observation::clear(3), DefendAction{VmSet(3)},
                                AttackAction{VmSet(3)}, c, rng),
                  std::invalid_argument);
}

TEST_CASE("observe with a perfect or inverted sensor") {
  RandomSource rng(4);
  GameConfig c = make_config(3, 1, 1, 1, 0.5, 0.2, 1.0);
  CHECK(observe(SystemState::from_pattern("101"), c, rng) == Observation::from_pattern("101"));
  c = make_config(2, 1, 1, 1, 0.5, 0.2, 0.0);
  CHECK(observe(SystemState::from_pattern("10"), c, rng) == Observation::from_pattern("01"));
}

TEST_CASE("property: a perfect sensor is the identity") {
  RandomSource gen(408);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 1 + gen.index(10);
    GameConfig c = make_config(n, 1, 1, 1, 0.5, 0.2, 1.0);
    const auto s = SystemState::from_pattern(oracle::random_bits(gen, n));
    REQUIRE(observe(s, c, gen).flagged == s.compromised);
  }
}

TEST_CASE("observe flags 9 of 10 compromised VMs on average at pi = 0.9") {
  GameConfig c = make_config(10, 1, 1, 1, 0.5, 0.2, 0.9);
  RandomSource rng(6);
  const auto s = SystemState::from_pattern(std::string(10, '1'));
  double sum = 0.0;
  const int runs = 100000;
  for (int i = 0; i < runs; ++i) sum += static_cast<double>(observe(s, c, rng).count());
  CHECK(std::abs(sum / runs - 9.0) <= 0.1);
}

TEST_CASE("bit patterns round-trip and reject junk") {
  CHECK(SystemState::from_pattern("0110").pattern() == "0110");
  CHECK_THROWS_AS(SystemState::from_pattern("01x"), std::invalid_argument);
}
