#pragma once

// Attacker and defender action selection, per-step rewards and costs, and
// the discounted payoff ledger over a game history.

#include <cstddef>
#include <span>
#include <vector>

#include "mtd/game.hpp"

namespace mtd {

struct AttackTarget {
  VmId vm;
  bool pivot_origin = false;  // healthy and p(vm, v) > 0 for some other v
};

/// Healthy VMs, in ascending order, each marked if it can launch a pivot.
std::vector<AttackTarget> potential_attack_targets(const SystemState& state, const GameConfig& config);

/// Best-response attack. Candidates are every healthy v scored
/// gamma^t (p(v) R^a(v) - C^a(v)), and every ordered pair of distinct healthy
/// VMs (v', v) scored gamma^t (p(v', v) R^a(v') - C^a(v')), which targets v'.
/// Returns the empty action when the best score is <= 0.
AttackAction attack_strategy(const SystemState& state, std::size_t t, const GameConfig& config,
                             TieBreak tie);
inline AttackAction attack_strategy(const SystemState& state, std::size_t t, const GameConfig& config) {
  return attack_strategy(state, t, config, config.tie_break);
}

/// Flagged VMs plus unflagged VMs that were not shuffled last step.
VmSet potential_defend_targets(const Observation& observation, const DefendAction& previous);

/// Per-VM defend score; -inf for VMs outside the potential defend targets.
/// cost_estimate holds C^d(v).
std::vector<double> defend_scores(const Observation& observation, const DefendAction& previous,
                                  std::size_t t, const GameConfig& config,
                                  std::span<const double> cost_estimate);

/// Argmax of defend_scores, or the empty action when the best score is <= 0.
/// Throws std::domain_error when n = 1 and the VM is an unflagged candidate.
DefendAction defend_strategy(const Observation& observation, const DefendAction& previous,
                             std::size_t t, const GameConfig& config,
                             std::span<const double> cost_estimate, TieBreak tie = TieBreak::lowest_id);

struct StepRewards {
  double defender = 0.0;  // recoveries 1 -> 0
  double attacker = 0.0;  // new compromises 0 -> 1
};

StepRewards step_rewards(const SystemState& before, const SystemState& after, const GameConfig& config);

/// Sum over shuffled VMs of w3 plus, over VMs neither shuffled nor attacked, w1 + w2.
double attacker_step_cost(const DefendAction& defend, const AttackAction& attack, const GameConfig& config);

struct StepRecord {
  std::size_t t = 1;
  SystemState state_before;
  Observation observation;
  AttackAction attack;
  DefendAction defend;
  SystemState state_after;
  double defender_reward = 0.0;
  double defender_cost = 0.0;
  double attacker_reward = 0.0;
  double attacker_cost = 0.0;
};

struct GameHistory {
  std::vector<StepRecord> records;  // t = 1, 2, ...
  GameConfig config;
};

struct PayoffLedger {
  double defender = 0.0;
  double attacker = 0.0;
};

/// Step t is discounted by gamma^(t-1): the first step is undiscounted.
PayoffLedger cumulative_payoffs(const GameHistory& history, double gamma);

}  // namespace mtd
