#include "mtd/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mtd {

double EtaSchedule::mean_at(std::size_t t) const {
  switch (kind) {
    case Kind::fixed: return value;
    case Kind::sweep: return static_cast<double>(lo);
    case Kind::trace: return trace.empty() ? 0.0 : trace[std::min(t, trace.size() - 1)];
  }
  return 0.0;
}

std::vector<ConfigIssue> check_spec(const ExperimentSpec& spec) {
  auto issues = check_config(spec.config);
  const double m = static_cast<double>(spec.config.m);
  const auto eta_ok = [m](double e) { return std::isfinite(e) && e >= 0.0 && e <= m; };
  if (spec.trials < 1) issues.push_back({"trials", "at least one trial is required"});
  switch (spec.eta.kind) {
    case EtaSchedule::Kind::fixed:
      if (!eta_ok(spec.eta.value)) issues.push_back({"eta", "eta must lie in [0, m]"});
      break;
    case EtaSchedule::Kind::sweep:
      if (spec.eta.lo > spec.eta.hi) issues.push_back({"eta", "sweep lower bound exceeds upper bound"});
      if (static_cast<double>(spec.eta.hi) > m) issues.push_back({"eta", "sweep upper bound exceeds m"});
      break;
    case EtaSchedule::Kind::trace:
      if (spec.eta.trace.empty()) issues.push_back({"eta", "trace needs at least one value"});
      if (!std::all_of(spec.eta.trace.begin(), spec.eta.trace.end(), eta_ok)) {
        issues.push_back({"eta", "trace values must lie in [0, m]"});
      }
      break;
  }
  if (spec.eval_step < 1 || spec.eval_step > spec.config.horizon) {
    issues.push_back({"eval_step", "evaluation step must lie in [1, horizon]"});
  }
  return issues;
}

OnlineCounts draw_online(double mean, const GameConfig& config, EtaSampling sampling, RandomSource& rng) {
  OnlineCounts out{std::vector<std::size_t>(config.n, 0)};
  const double m = static_cast<double>(config.m);
  mean = std::clamp(mean, 0.0, m);
  if (sampling == EtaSampling::exact) {
    std::fill(out.eta.begin(), out.eta.end(), static_cast<std::size_t>(std::lround(mean)));
    return out;
  }
  const double p = mean / m;
  for (auto& eta : out.eta) {
    for (std::size_t j = 0; j < config.m; ++j) eta += rng.bernoulli(p) ? 1 : 0;
  }
  return out;
}

AttackAction sequential_attack(const SystemState& state) {
  AttackAction a{VmSet(state.size())};
  for (std::size_t v = 0; v < state.size(); ++v) {
    if (!state.at(v)) {
      a.targets.insert(v);
      break;
    }
  }
  return a;
}

std::uint64_t trial_seed(std::uint64_t experiment_seed, std::size_t trial) {
  return derive_seed(experiment_seed, trial);
}

GameHistory run_trial(const ExperimentSpec& spec, std::uint64_t seed, const StepObserver& observer) {
  const GameConfig& config = spec.config;
  TrialStreams rng(seed);
  GameStart start = init_game(config);
  Assignment assignment = random_initial_assignment(config, rng.layout);

  GameHistory history;
  history.config = config;
  history.records.reserve(config.horizon);

  SystemState state = start.state;
  Observation observation = start.observation;
  for (std::size_t t = 0; t < config.horizon; ++t) {
    if (t > 0) observation = observe(state, config, rng.game);
    AttackAction attack = spec.attacker == AttackerMode::strategic ? attack_strategy(state, t, config)
                                                                   : sequential_attack(state);
    const OnlineCounts online = draw_online(spec.eta.mean_at(t), config, spec.eta_sampling, rng.online);
    ShuffleDecision decision =
        apply_policy(spec.policy, observation, assignment, online, t, config, rng.policy, spec.policy_options);
    DefendAction defend = decision.defend_action();
    SystemState next = transit_state(state, observation, defend, attack, config, rng.game);

    StepRecord rec;
    rec.t = t + 1;
    const auto rewards = step_rewards(state, next, config);
    rec.defender_reward = rewards.defender;
    rec.attacker_reward = rewards.attacker;
    rec.defender_cost = shuffle_cost(assignment, decision.next, defend, config.weights);
    rec.attacker_cost = attacker_step_cost(defend, attack, config);
    rec.state_before = std::move(state);
    rec.observation = observation;
    rec.attack = std::move(attack);
    rec.defend = std::move(defend);
    rec.state_after = next;
    if (observer) observer(rec, assignment, decision);

    state = std::move(next);
    assignment = std::move(decision.next);
    history.records.push_back(std::move(rec));
  }
  return history;
}

TrialMetrics summarize(const GameHistory& history) {
  TrialMetrics m;
  const std::size_t steps = history.records.size();
  for (auto* v : {&m.effectiveness, &m.effectiveness_step, &m.cost, &m.cumulative_cost, &m.defender_payoff,
                  &m.attacker_payoff, &m.crashed}) {
    v->reserve(steps);
  }
  double eff = 0.0, cost = 0.0, pd = 0.0, pa = 0.0, discount = 1.0;
  for (const auto& rec : history.records) {
    eff += rec.defender_reward;
    cost += rec.defender_cost;
    pd += discount * (rec.defender_reward - rec.defender_cost);
    pa += discount * (rec.attacker_reward - rec.attacker_cost);
    discount *= history.config.gamma;
    m.effectiveness.push_back(eff);
    m.effectiveness_step.push_back(rec.defender_reward);
    m.cost.push_back(rec.defender_cost);
    m.cumulative_cost.push_back(cost);
    m.defender_payoff.push_back(pd);
    m.attacker_payoff.push_back(pa);
    m.crashed.push_back(static_cast<double>(rec.state_after.count()));
  }
  return m;
}

Stat describe(const std::vector<double>& samples) {
  Stat s;
  if (samples.empty()) return s;
  double sum = 0.0;
  for (double x : samples) sum += x;
  s.mean = sum / static_cast<double>(samples.size());
  if (samples.size() < 2) return s;
  double sq = 0.0;
  for (double x : samples) sq += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(samples.size() - 1));
  return s;
}

double pooled_std(const Stat& a, const Stat& b) { return std::sqrt(0.5 * (a.std * a.std + b.std * b.std)); }

std::vector<TrialMetrics> run_trials(const ExperimentSpec& spec) {
  const auto issues = check_spec(spec);
  if (!issues.empty()) throw ConfigError(issues.front().field, issues.front().message);
  const auto count = static_cast<std::ptrdiff_t>(spec.trials);
  std::vector<TrialMetrics> out(spec.trials);
  std::vector<std::exception_ptr> errors(spec.trials);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = summarize(run_trial(spec, trial_seed(spec.seed, k)));
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<TrialMetrics> run_trials_serial(const ExperimentSpec& spec) {
  const auto issues = check_spec(spec);
  if (!issues.empty()) throw ConfigError(issues.front().field, issues.front().message);
  std::vector<TrialMetrics> out;
  out.reserve(spec.trials);
  for (std::size_t k = 0; k < spec.trials; ++k) out.push_back(summarize(run_trial(spec, trial_seed(spec.seed, k))));
  return out;
}

AggregateSeries aggregate(PolicyKind policy, const std::vector<TrialMetrics>& trials) {
  AggregateSeries agg;
  agg.policy = policy;
  agg.trials = trials.size();
  if (trials.empty()) return agg;
  const std::size_t steps = trials.front().crashed.size();
  std::vector<double> samples(trials.size());
  const auto column = [&](std::vector<double> TrialMetrics::*field, std::vector<Stat>& dst) {
    dst.resize(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t k = 0; k < trials.size(); ++k) samples[k] = (trials[k].*field)[t];
      dst[t] = describe(samples);
    }
  };
  column(&TrialMetrics::effectiveness, agg.effectiveness);
  column(&TrialMetrics::effectiveness_step, agg.effectiveness_step);
  column(&TrialMetrics::cost, agg.cost);
  column(&TrialMetrics::cumulative_cost, agg.cumulative_cost);
  column(&TrialMetrics::defender_payoff, agg.defender_payoff);
  column(&TrialMetrics::attacker_payoff, agg.attacker_payoff);
  column(&TrialMetrics::crashed, agg.crashed);
  return agg;
}

AggregateSeries run_experiment(const ExperimentSpec& spec) { return aggregate(spec.policy, run_trials(spec)); }

AggregateSeries run_experiment_serial(const ExperimentSpec& spec) {
  return aggregate(spec.policy, run_trials_serial(spec));
}

std::vector<SweepPoint> sweep_eta(const ExperimentSpec& spec) {
  if (spec.eta.kind != EtaSchedule::Kind::sweep) throw ConfigError("eta", "sweep_eta needs a sweep schedule");
  const auto issues = check_spec(spec);
  if (!issues.empty()) throw ConfigError(issues.front().field, issues.front().message);
  std::vector<SweepPoint> out;
  const std::size_t at = spec.eval_step - 1;
  for (std::size_t eta = spec.eta.lo; eta <= spec.eta.hi; ++eta) {
    ExperimentSpec point = spec;
    point.eta = EtaSchedule::fixed(static_cast<double>(eta));
    const auto trials = run_trials(point);
    std::vector<double> eff, cost, pay;
    for (const auto& tr : trials) {
      eff.push_back(tr.effectiveness[at]);
      cost.push_back(tr.cumulative_cost[at]);
      pay.push_back(tr.defender_payoff[at]);
    }
    out.push_back({eta, describe(eff), describe(cost), describe(pay)});
  }
  return out;
}

TransitionProbe TransitionProbe::all_attacked(std::size_t n) {
  return {SystemState::healthy(n), Observation::clear(n), AttackAction{VmSet::all(n)}, DefendAction{VmSet(n)}};
}

double TransitionHistogram::frequency(const std::string& pattern) const {
  auto it = counts.find(pattern);
  return it == counts.end() || runs == 0 ? 0.0 : static_cast<double>(it->second) / static_cast<double>(runs);
}

std::map<std::size_t, std::size_t> TransitionHistogram::by_compromised_count() const {
  std::map<std::size_t, std::size_t> out;
  for (const auto& [pattern, count] : counts) {
    out[static_cast<std::size_t>(std::count(pattern.begin(), pattern.end(), '1'))] += count;
  }
  return out;
}

TransitionHistogram estimate_transition_distribution(const GameConfig& config, const TransitionProbe& probe,
                                                     std::size_t runs, std::uint64_t seed) {
  require_valid(config);
  if (runs < 1) throw std::invalid_argument("estimate_transition_distribution: runs must be >= 1");
  RandomSource rng(seed);
  TransitionHistogram h;
  h.runs = runs;
  for (std::size_t i = 0; i < runs; ++i) {
    ++h.counts[transit_state(probe.state, probe.observation, probe.defend, probe.attack, config, rng).pattern()];
  }
  return h;
}

Stat steady_state_crashed(const std::vector<TrialMetrics>& trials, double fraction) {
  std::vector<double> per_trial;
  per_trial.reserve(trials.size());
  for (const auto& tr : trials) {
    const std::size_t steps = tr.crashed.size();
    const auto window = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(steps))));
    double sum = 0.0;
    for (std::size_t t = steps - window; t < steps; ++t) sum += tr.crashed[t];
    per_trial.push_back(sum / static_cast<double>(window));
  }
  return describe(per_trial);
}

std::map<PolicyKind, DdosSeries> ddos_scenario(const ExperimentSpec& spec, const std::vector<PolicyKind>& policies) {
  if (spec.attacker != AttackerMode::sequential_ddos) {
    throw ConfigError("attacker", "ddos_scenario requires the sequential-ddos attacker");
  }
  std::map<PolicyKind, DdosSeries> out;
  for (auto policy : policies) {
    ExperimentSpec run = spec;
    run.policy = policy;
    const auto trials = run_trials(run);
    out[policy] = DdosSeries{aggregate(policy, trials), steady_state_crashed(trials)};
  }
  return out;
}

}  // namespace mtd
