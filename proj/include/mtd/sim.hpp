#pragma once

// Seeded game trials, Monte Carlo aggregation, eta sweeps, transition
// probes and the sequential DDoS scenario.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mtd/assignment.hpp"
#include "mtd/game.hpp"
#include "mtd/policies.hpp"
#include "mtd/strategies.hpp"

namespace mtd {

enum class AttackerMode { strategic, sequential_ddos };
enum class EtaSampling { binomial, exact };

/// Source of the mean online-user count per VM.
struct EtaSchedule {
  enum class Kind { fixed, sweep, trace };
  Kind kind = Kind::fixed;
  double value = 0.0;         // fixed
  std::size_t lo = 0, hi = 0; // sweep, inclusive
  std::vector<double> trace;  // per step; the last entry repeats

  static EtaSchedule fixed(double v) { return {Kind::fixed, v, 0, 0, {}}; }
  static EtaSchedule sweep(std::size_t lo, std::size_t hi) { return {Kind::sweep, 0.0, lo, hi, {}}; }
  static EtaSchedule series(std::vector<double> values) { return {Kind::trace, 0.0, 0, 0, std::move(values)}; }

  /// Mean for step index t (0-based). Sweep schedules report lo.
  double mean_at(std::size_t t) const;
};

struct ExperimentSpec {
  GameConfig config;
  PolicyKind policy = PolicyKind::ces;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  EtaSchedule eta;
  EtaSampling eta_sampling = EtaSampling::binomial;
  AttackerMode attacker = AttackerMode::strategic;
  PolicyOptions policy_options;
  std::size_t eval_step = 10;  // sweep evaluation step (1-based)

  std::size_t horizon() const { return config.horizon; }
};

/// Config issues plus experiment-level ones (trials, eta range, eval step).
std::vector<ConfigIssue> check_spec(const ExperimentSpec& spec);

/// Per-VM online counts for one step: Binomial(m, mean/m) realized with m
/// uniforms per VM, or round(mean) everywhere.
OnlineCounts draw_online(double mean, const GameConfig& config, EtaSampling sampling, RandomSource& rng);

/// Lowest-id healthy VM, or nothing when every VM is down.
AttackAction sequential_attack(const SystemState& state);

/// Called after every step with the record, the assignment before the step
/// and the policy decision.
using StepObserver = std::function<void(const StepRecord&, const Assignment&, const ShuffleDecision&)>;

/// Independent streams used by one trial.
struct TrialStreams {
  explicit TrialStreams(std::uint64_t trial_seed)
      : game(derive_seed(trial_seed, 0)),
        online(derive_seed(trial_seed, 1)),
        policy(derive_seed(trial_seed, 2)),
        layout(derive_seed(trial_seed, 3)) {}
  RandomSource game;    // observations and transitions
  RandomSource online;  // online-user counts
  RandomSource policy;  // policy randomness
  RandomSource layout;  // initial assignment
};

std::uint64_t trial_seed(std::uint64_t experiment_seed, std::size_t trial);

/// Per step: observe, pick both actions, transition, score. Returns H_T.
GameHistory run_trial(const ExperimentSpec& spec, std::uint64_t seed, const StepObserver& observer = {});

/// Per-trial series, indexed by step (t = 1 at index 0).
struct TrialMetrics {
  std::vector<double> effectiveness;       // cumulative recoveries
  std::vector<double> effectiveness_step;  // recoveries this step
  std::vector<double> cost;                // defender cost this step
  std::vector<double> cumulative_cost;
  std::vector<double> defender_payoff;     // cumulative discounted
  std::vector<double> attacker_payoff;     // cumulative discounted
  std::vector<double> crashed;             // compromised VMs after the step
};

TrialMetrics summarize(const GameHistory& history);

struct Stat {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for one sample
};

Stat describe(const std::vector<double>& samples);

/// sqrt((a.std^2 + b.std^2) / 2)
double pooled_std(const Stat& a, const Stat& b);

struct AggregateSeries {
  PolicyKind policy = PolicyKind::ces;
  std::size_t trials = 0;
  std::vector<Stat> effectiveness;
  std::vector<Stat> effectiveness_step;
  std::vector<Stat> cost;
  std::vector<Stat> cumulative_cost;
  std::vector<Stat> defender_payoff;
  std::vector<Stat> attacker_payoff;
  std::vector<Stat> crashed;
};

/// All trials of the spec; OpenMP over trials, results in trial order.
std::vector<TrialMetrics> run_trials(const ExperimentSpec& spec);
/// Reference: the same trials one after another.
std::vector<TrialMetrics> run_trials_serial(const ExperimentSpec& spec);

AggregateSeries aggregate(PolicyKind policy, const std::vector<TrialMetrics>& trials);

AggregateSeries run_experiment(const ExperimentSpec& spec);
AggregateSeries run_experiment_serial(const ExperimentSpec& spec);

struct SweepPoint {
  std::size_t eta = 0;
  Stat effectiveness;  // cumulative recoveries at the evaluation step
  Stat cost;           // cumulative defender cost at the evaluation step
  Stat payoff;         // cumulative discounted defender payoff
};

/// One point per eta in [lo, hi], trials share seeds across points.
std::vector<SweepPoint> sweep_eta(const ExperimentSpec& spec);

/// Starting tuple for transition sampling.
struct TransitionProbe {
  SystemState state;
  Observation observation;
  AttackAction attack;
  DefendAction defend;

  /// Healthy state, nothing flagged, every VM attacked, nothing shuffled.
  static TransitionProbe all_attacked(std::size_t n);
};

struct TransitionHistogram {
  std::map<std::string, std::size_t> counts;  // next-state pattern -> count
  std::size_t runs = 0;

  double frequency(const std::string& pattern) const;
  /// Histogram over the number of compromised VMs.
  std::map<std::size_t, std::size_t> by_compromised_count() const;
};

TransitionHistogram estimate_transition_distribution(const GameConfig& config, const TransitionProbe& probe,
                                                     std::size_t runs = 10000, std::uint64_t seed = 0);

struct DdosSeries {
  AggregateSeries series;
  Stat steady_state;  // per-trial mean crashed count over the tail window
};

/// Trial-wise mean of the crashed count over the last `fraction` of steps.
Stat steady_state_crashed(const std::vector<TrialMetrics>& trials, double fraction = 1.0 / 3.0);

/// Sequential DDoS runs for each policy (default none, random, ces).
std::map<PolicyKind, DdosSeries> ddos_scenario(
    const ExperimentSpec& spec,
    const std::vector<PolicyKind>& policies = {PolicyKind::none, PolicyKind::random, PolicyKind::ces});

}  // namespace mtd
