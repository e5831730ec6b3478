#include "mtd/strategies.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mtd {

namespace {

constexpr double kNoCandidate = -std::numeric_limits<double>::infinity();

// Collapses per-VM best scores into an action.
VmSet select_maximizers(const std::vector<double>& best, TieBreak tie) {
  VmSet out(best.size());
  double top = kNoCandidate;
  for (double s : best) top = std::max(top, s);
  if (!(top > 0.0)) return out;
  for (std::size_t v = 0; v < best.size(); ++v) {
    if (best[v] == top) {
      out.insert(v);
      if (tie == TieBreak::lowest_id) break;
    }
  }
  return out;
}

}  // namespace

std::vector<AttackTarget> potential_attack_targets(const SystemState& state, const GameConfig& config) {
  std::vector<AttackTarget> out;
  for (std::size_t v = 0; v < config.n; ++v) {
    if (state.at(v)) continue;
    bool origin = false;
    for (std::size_t w = 0; w < config.n && !origin; ++w) {
      origin = w != v && config.pivot(v, w) > 0.0;
    }
    out.push_back({VmId{v}, origin});
  }
  return out;
}

AttackAction attack_strategy(const SystemState& state, std::size_t t, const GameConfig& config,
                             TieBreak tie) {
  const double discount = std::pow(config.gamma, static_cast<double>(t));
  // best[x]: highest score of any candidate whose attack is launched at x.
  std::vector<double> best(config.n, kNoCandidate);
  for (std::size_t v = 0; v < config.n; ++v) {
    if (state.at(v)) continue;
    const double direct =
        discount * (config.direct_success[v] * config.reward_attacker[v] - config.attack_cost[v]);
    best[v] = std::max(best[v], direct);
    for (std::size_t origin = 0; origin < config.n; ++origin) {
      if (origin == v || state.at(origin)) continue;
      const double pivot = discount * (config.pivot(origin, v) * config.reward_attacker[origin] -
                                       config.attack_cost[origin]);
      best[origin] = std::max(best[origin], pivot);
    }
  }
  return AttackAction{select_maximizers(best, tie)};
}

VmSet potential_defend_targets(const Observation& observation, const DefendAction& previous) {
  VmSet out(observation.size());
  for (std::size_t v = 0; v < observation.size(); ++v) {
    if (observation.at(v) || !previous.shuffled.contains(v)) out.insert(v);
  }
  return out;
}

std::vector<double> defend_scores(const Observation& observation, const DefendAction& previous,
                                  std::size_t t, const GameConfig& config,
                                  std::span<const double> cost_estimate) {
  const std::size_t n = config.n;
  if (cost_estimate.size() != n) throw std::invalid_argument("defend_scores: cost estimate must have n entries");
  const double discount = std::pow(config.gamma, static_cast<double>(t));
  std::vector<double> score(n, kNoCandidate);
  for (std::size_t v = 0; v < n; ++v) {
    const double gain = config.confidence[v] * config.reward_defender[v];
    if (observation.at(v)) {
      score[v] = discount * (gain - cost_estimate[v]);
    } else if (!previous.shuffled.contains(v)) {
      if (n == 1) {
        throw std::domain_error("defend_strategy: unflagged candidate with n = 1 divides by n - 1 = 0");
      }
      score[v] = discount * (gain / static_cast<double>(n - 1) - cost_estimate[v]);
    }
  }
  return score;
}

DefendAction defend_strategy(const Observation& observation, const DefendAction& previous, std::size_t t,
                             const GameConfig& config, std::span<const double> cost_estimate, TieBreak tie) {
  return DefendAction{select_maximizers(defend_scores(observation, previous, t, config, cost_estimate), tie)};
}

StepRewards step_rewards(const SystemState& before, const SystemState& after, const GameConfig& config) {
  if (before.size() != after.size()) throw std::invalid_argument("step_rewards: state lengths differ");
  StepRewards out;
  for (std::size_t v = 0; v < before.size(); ++v) {
    if (before.at(v) && !after.at(v)) out.defender += config.reward_defender[v];
    if (!before.at(v) && after.at(v)) out.attacker += config.reward_attacker[v];
  }
  return out;
}

double attacker_step_cost(const DefendAction& defend, const AttackAction& attack, const GameConfig& config) {
  double cost = 0.0;
  for (std::size_t v = 0; v < config.n; ++v) {
    if (defend.shuffled.contains(v)) {
      cost += config.weights.migration;
    } else if (!attack.targets.contains(v)) {
      cost += config.weights.ip + config.weights.port;
    }
  }
  return cost;
}

PayoffLedger cumulative_payoffs(const GameHistory& history, double gamma) {
  PayoffLedger ledger;
  double discount = 1.0;
  std::size_t expected_t = 1;
  for (const auto& rec : history.records) {
    if (rec.t != expected_t++) throw std::invalid_argument("cumulative_payoffs: history must be contiguous from t = 1");
    ledger.defender += discount * (rec.defender_reward - rec.defender_cost);
    ledger.attacker += discount * (rec.attacker_reward - rec.attacker_cost);
    discount *= gamma;
  }
  return ledger;
}

}  // namespace mtd
