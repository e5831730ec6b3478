#include <doctest.h>

#include <chrono>

#include "mtd/sim.hpp"
#include "oracles.hpp"

using namespace mtd;

namespace {

ExperimentSpec small_spec(PolicyKind policy, std::size_t trials = 20) {
  ExperimentSpec s;
  s.config = make_config(8, 4, 3, 4, 0.5, 0.2, 0.9);
  s.config.horizon = 8;
  for (auto& c : s.config.attack_cost) c = 0.3;
  s.policy = policy;
  s.trials = trials;
  s.seed = 12;
  s.eta = EtaSchedule::fixed(2.0);
  s.eval_step = 8;
  return s;
}

ExperimentSpec reference_spec(PolicyKind policy, std::size_t trials) {
  ExperimentSpec s;
  s.config = make_config(50, 20, 20, 100, 0.5, 0.2, 0.9);
  for (auto& c : s.config.attack_cost) c = 0.3;
  s.policy = policy;
  s.trials = trials;
  s.seed = 1;
  s.eta = EtaSchedule::fixed(10.0);
  return s;
}

}  // namespace

TEST_CASE("eta schedules") {
  CHECK(EtaSchedule::fixed(3.5).mean_at(7) == 3.5);
  const auto tr = EtaSchedule::series({1.0, 2.0, 4.0});
  CHECK(tr.mean_at(0) == 1.0);
  CHECK(tr.mean_at(2) == 4.0);
  CHECK(tr.mean_at(9) == 4.0);
  CHECK(EtaSchedule::sweep(3, 9).mean_at(0) == 3.0);
}

TEST_CASE("check_spec names experiment fields") {
  auto s = small_spec(PolicyKind::ces);
  CHECK(check_spec(s).empty());
  s.trials = 0;
  CHECK(check_spec(s).at(0).field == "trials");
  s = small_spec(PolicyKind::ces);
  s.eta = EtaSchedule::sweep(5, 2);
  CHECK(check_spec(s).at(0).field == "eta");
  s.eta = EtaSchedule::fixed(9.0);  // more than m
  CHECK(check_spec(s).at(0).field == "eta");
  s = small_spec(PolicyKind::ces);
  s.eval_step = 9;
  CHECK(check_spec(s).at(0).field == "eval_step");
}

TEST_CASE("online counts: exact rounding and binomial mean") {
  const GameConfig c = make_config(200, 20, 1, 1);
  RandomSource rng(1);
  const auto exact = draw_online(6.6, c, EtaSampling::exact, rng);
  for (auto e : exact.eta) CHECK(e == 7);
  double sum = 0.0;
  for (int i = 0; i < 50; ++i) {
    for (auto e : draw_online(10.0, c, EtaSampling::binomial, rng).eta) {
      REQUIRE(e <= 20);
      sum += static_cast<double>(e);
    }
  }
  CHECK(sum / (50.0 * 200.0) == doctest::Approx(10.0).epsilon(0.01));
  for (auto e : draw_online(0.0, c, EtaSampling::binomial, rng).eta) CHECK(e == 0);
  for (auto e : draw_online(20.0, c, EtaSampling::binomial, rng).eta) CHECK(e == 20);
}

TEST_CASE("sequential attacker hits the lowest healthy VM") {
  CHECK(sequential_attack(SystemState::from_pattern("1101")).targets == VmSet(4, {2}));
  CHECK(sequential_attack(SystemState::from_pattern("111")).targets.empty());
}

TEST_CASE("inert dynamics keep the starting state") {
  auto s = small_spec(PolicyKind::none);
  s.config = make_config(8, 4, 3, 4, 0.0, 0.0, 0.9);
  s.config.horizon = 8;
  const auto h = run_trial(s, 5);
  REQUIRE(h.records.size() == 8);
  for (const auto& r : h.records) {
    CHECK(r.state_after == SystemState::healthy(8));
    CHECK(r.defender_reward == 0.0);
    CHECK(r.attacker_reward == 0.0);
    CHECK(r.attack.targets.empty());
  }
}

TEST_CASE("one forced compromise") {
  ExperimentSpec s;
  s.config = make_config(1, 1, 1, 1, 1.0, 0.0, 1.0);
  s.config.horizon = 1;
  s.config.attack_cost[0] = 0.0;
  s.policy = PolicyKind::none;
  s.eta = EtaSchedule::fixed(1.0);
  s.eval_step = 1;
  const auto h = run_trial(s, 0);
  REQUIRE(h.records.size() == 1);
  CHECK(h.records[0].attack.targets == VmSet(1, {0}));
  CHECK(h.records[0].attacker_reward == 1.0);
  CHECK(h.records[0].state_after.pattern() == "1");
}

TEST_CASE("a reference-scale trial is fast") {
  for (auto p : {PolicyKind::ces, PolicyKind::rrt, PolicyKind::csa}) {
    const auto start = std::chrono::steady_clock::now();
    const auto h = run_trial(reference_spec(p, 1), 3);
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    CHECK(h.records.size() == 10);
    CHECK(took.count() < 1.0);
  }
}

TEST_CASE("property: recorded cost equals the matrix cost and vanishes only without shuffles") {
  for (auto p : {PolicyKind::random, PolicyKind::rrt, PolicyKind::csa, PolicyKind::ces}) {
    const auto spec = small_spec(p);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      run_trial(spec, seed, [&](const StepRecord& r, const Assignment& before, const ShuffleDecision& d) {
        REQUIRE(validate_assignment(d.next, spec.config).empty());
        REQUIRE(r.defender_cost == shuffle_cost(before, d.next, d.defend_action(), spec.config.weights));
        REQUIRE((r.defender_cost == 0.0) == d.shuffled.shuffled.empty());
        REQUIRE(r.defend == d.defend_action());
      });
    }
  }
}

TEST_CASE("summaries agree with the payoff ledger") {
  const auto spec = small_spec(PolicyKind::ces);
  const auto h = run_trial(spec, 9);
  const auto m = summarize(h);
  const auto p = cumulative_payoffs(h, spec.config.gamma);
  CHECK(m.defender_payoff.back() == doctest::Approx(p.defender).epsilon(1e-12));
  CHECK(m.attacker_payoff.back() == doctest::Approx(p.attacker).epsilon(1e-12));
}

TEST_CASE("one trial aggregates to itself with zero spread") {
  const auto spec = small_spec(PolicyKind::ces, 1);
  const auto one = summarize(run_trial(spec, trial_seed(spec.seed, 0)));
  const auto agg = run_experiment(spec);
  REQUIRE(agg.trials == 1);
  for (std::size_t t = 0; t < one.effectiveness.size(); ++t) {
    CHECK(agg.effectiveness[t].mean == one.effectiveness[t]);
    CHECK(agg.defender_payoff[t].mean == one.defender_payoff[t]);
    CHECK(agg.defender_payoff[t].std == 0.0);
  }
}

TEST_CASE("parallel and serial runs agree exactly") {
  for (auto p : {PolicyKind::none, PolicyKind::random, PolicyKind::rrt, PolicyKind::csa, PolicyKind::ces}) {
    const auto spec = small_spec(p, 40);
    const auto par = run_trials(spec);
    const auto ser = run_trials_serial(spec);
    REQUIRE(par.size() == ser.size());
    for (std::size_t k = 0; k < par.size(); ++k) {
      REQUIRE(par[k].defender_payoff == ser[k].defender_payoff);
      REQUIRE(par[k].crashed == ser[k].crashed);
    }
  }
}

TEST_CASE("property: cumulative effectiveness never decreases") {
  for (auto p : {PolicyKind::none, PolicyKind::random, PolicyKind::rrt, PolicyKind::csa, PolicyKind::ces}) {
    for (const auto& tr : run_trials(small_spec(p, 30))) {
      for (std::size_t t = 1; t < tr.effectiveness.size(); ++t) REQUIRE(tr.effectiveness[t] >= tr.effectiveness[t - 1]);
    }
  }
}

TEST_CASE("transition estimates") {
  GameConfig c = make_config(3, 1, 1, 1, 0.0, 0.0, 0.9);
  auto h = estimate_transition_distribution(c, TransitionProbe::all_attacked(3), 1000, 1);
  REQUIRE(h.counts.size() == 1);
  CHECK(h.frequency("000") == 1.0);

  c = make_config(1, 1, 1, 1, 1.0, 0.0, 0.9);
  h = estimate_transition_distribution(c, TransitionProbe::all_attacked(1), 1000, 1);
  CHECK(h.frequency("1") == 1.0);

  c = make_config(3, 1, 1, 1);
  c.direct_success = {0.3, 0.7, 0.5};
  c.pivot_success[0 * 3 + 2] = 0.6;
  c.pivot_success[1 * 3 + 2] = 0.4;
  TransitionProbe probe{SystemState::from_pattern("010"), Observation::from_pattern("001"),
                        AttackAction{VmSet(3, {0})}, DefendAction{VmSet(3)}};
  h = estimate_transition_distribution(c, probe, 100000, 7);
  oracle::Distribution seen;
  for (const auto& [k, n] : h.counts) seen[k] = h.frequency(k);
  CHECK(oracle::tv_distance(seen, oracle::transition(probe.state, probe.observation, probe.defend, probe.attack, c)) <
        0.02);
  std::size_t total = 0;
  for (const auto& [k, n] : h.by_compromised_count()) total += n;
  CHECK(total == 100000);
}

TEST_CASE("sequential DDoS without defense saturates") {
  ExperimentSpec s;
  s.config = make_config(6, 2, 2, 2, 1.0, 0.2, 0.9);
  s.config.horizon = 10;
  s.attacker = AttackerMode::sequential_ddos;
  s.trials = 5;
  s.eta = EtaSchedule::fixed(1.0);
  const auto out = ddos_scenario(s, {PolicyKind::none});
  const auto& crashed = out.at(PolicyKind::none).series.crashed;
  for (std::size_t t = 0; t < crashed.size(); ++t) {
    CHECK(crashed[t].mean >= static_cast<double>(std::min<std::size_t>(t + 1, 6)));
    if (t > 0) CHECK(crashed[t].mean >= crashed[t - 1].mean);
  }
}

TEST_CASE("CES with a perfect sensor holds the DDoS below no defense") {
  ExperimentSpec s;
  s.config = make_config(10, 4, 3, 3, 0.9, 0.2, 1.0);
  s.config.weights = {0.02, 0.01, 0.07};
  s.config.horizon = 30;
  s.attacker = AttackerMode::sequential_ddos;
  s.trials = 50;
  s.eta = EtaSchedule::fixed(2.0);
  const auto out = ddos_scenario(s, {PolicyKind::none, PolicyKind::ces});
  CHECK(out.at(PolicyKind::ces).steady_state.mean < out.at(PolicyKind::none).steady_state.mean);
}

TEST_CASE("without attack success nothing ever crashes") {
  ExperimentSpec s;
  s.config = make_config(6, 2, 2, 2, 0.0, 0.0, 0.9);
  s.config.horizon = 10;
  s.attacker = AttackerMode::sequential_ddos;
  s.trials = 5;
  s.eta = EtaSchedule::fixed(1.0);
  for (const auto& [policy, series] : ddos_scenario(s)) {
    for (const auto& c : series.series.crashed) CHECK(c.mean == 0.0);
  }
  s.attacker = AttackerMode::strategic;
  CHECK_THROWS_AS(ddos_scenario(s), ConfigError);
}

TEST_CASE("CES payoff at low online counts beats high ones") {
  auto s = reference_spec(PolicyKind::ces, 200);
  s.eta = EtaSchedule::sweep(2, 2);
  const auto low = sweep_eta(s);
  s.eta = EtaSchedule::sweep(18, 18);
  const auto high = sweep_eta(s);
  CHECK(low.at(0).payoff.mean > high.at(0).payoff.mean);
}

TEST_CASE("a sweep yields one point per eta and shares trial seeds") {
  auto s = small_spec(PolicyKind::rrt, 10);
  s.eta = EtaSchedule::sweep(0, 4);
  const auto pts = sweep_eta(s);
  REQUIRE(pts.size() == 5);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(pts[i].eta == i);
  s.eta = EtaSchedule::fixed(2.0);
  CHECK_THROWS_AS(sweep_eta(s), ConfigError);
}
