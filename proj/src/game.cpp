#include "mtd/game.hpp"

#include <algorithm>
#include <cmath>

namespace mtd {

VmSet::VmSet(std::size_t n, std::initializer_list<std::size_t> ids) : bits_(n, 0) {
  for (auto id : ids) insert(VmId{id});
}

VmSet VmSet::all(std::size_t n) {
  VmSet s(n);
  std::fill(s.bits_.begin(), s.bits_.end(), 1);
  return s;
}

void VmSet::insert(VmId v) {
  if (v.value >= bits_.size()) {
    throw std::out_of_range("VmId " + std::to_string(v.value) + " outside [0, " +
                            std::to_string(bits_.size()) + ")");
  }
  bits_[v.value] = 1;
}

void VmSet::erase(std::size_t v) {
  if (v < bits_.size()) bits_[v] = 0;
}

std::size_t VmSet::size() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::vector<VmId> VmSet::members() const {
  std::vector<VmId> out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(VmId{i});
  }
  return out;
}

namespace {

std::vector<std::uint8_t> parse_bits(const std::string& bits) {
  std::vector<std::uint8_t> out;
  out.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit pattern must contain only 0/1: " + bits);
    out.push_back(c == '1' ? 1 : 0);
  }
  return out;
}

bool in_unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

void check_vector(std::vector<ConfigIssue>& issues, const std::string& field,
                  const std::vector<double>& values, std::size_t expected, bool probability) {
  if (values.size() != expected) {
    issues.push_back({field, "expected " + std::to_string(expected) + " values, got " +
                                 std::to_string(values.size())});
    return;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = values[i];
    if (probability ? !in_unit(x) : !(std::isfinite(x) && x >= 0.0)) {
      issues.push_back({field, "entry " + std::to_string(i) + " = " + std::to_string(x) +
                                   (probability ? " is not in [0,1]" : " is not a finite non-negative value")});
      return;
    }
  }
}

}  // namespace

std::size_t SystemState::count() const {
  return static_cast<std::size_t>(std::count(compromised.begin(), compromised.end(), 1));
}

std::string SystemState::pattern() const {
  std::string s(compromised.size(), '0');
  for (std::size_t i = 0; i < compromised.size(); ++i) {
    if (compromised[i]) s[i] = '1';
  }
  return s;
}

SystemState SystemState::from_pattern(const std::string& bits) { return {parse_bits(bits)}; }

std::size_t Observation::count() const {
  return static_cast<std::size_t>(std::count(flagged.begin(), flagged.end(), 1));
}

Observation Observation::from_pattern(const std::string& bits) { return {parse_bits(bits)}; }

GameConfig make_config(std::size_t n, std::size_t m, std::size_t r, std::size_t u, double direct,
                       double pivot, double confidence) {
  GameConfig c;
  c.n = n;
  c.m = m;
  c.q = m * n;
  c.r = r;
  c.u = u;
  c.horizon = 10;
  c.gamma = 0.9;
  c.direct_success.assign(n, direct);
  c.pivot_success.assign(n * n, pivot);
  for (std::size_t v = 0; v < n; ++v) c.pivot_success[v * n + v] = 0.0;
  c.confidence.assign(n, confidence);
  c.reward_defender.assign(n, 1.0);
  c.reward_attacker.assign(n, 1.0);
  c.attack_cost.assign(n, 1.0);
  return c;
}

std::vector<ConfigIssue> check_config(const GameConfig& c) {
  std::vector<ConfigIssue> issues;
  if (c.n == 0) issues.push_back({"n", "at least one VM is required"});
  if (c.m == 0) issues.push_back({"m", "each VM must serve at least one user"});
  if (c.m * c.n != c.q) {
    issues.push_back({"q", "m·n ≠ q (" + std::to_string(c.m) + "·" + std::to_string(c.n) +
                               " ≠ " + std::to_string(c.q) + ")"});
  }
  if (c.r == 0) issues.push_back({"r", "at least one network segment is required"});
  if (c.r > c.n) {
    issues.push_back({"r", "r > n (" + std::to_string(c.r) + " > " + std::to_string(c.n) + ")"});
  }
  if (c.u == 0) issues.push_back({"u", "at least one port is required"});
  if (c.horizon < 1) issues.push_back({"horizon", "T must be at least 1"});
  if (!(std::isfinite(c.gamma) && c.gamma > 0.0 && c.gamma <= 1.0)) {
    issues.push_back({"gamma", "gamma = " + std::to_string(c.gamma) + " is not in (0,1]"});
  }
  const auto nonneg = [](double w) { return std::isfinite(w) && w >= 0.0; };
  if (!nonneg(c.weights.ip)) issues.push_back({"weights.ip", "weight must be >= 0"});
  if (!nonneg(c.weights.port)) issues.push_back({"weights.port", "weight must be >= 0"});
  if (!nonneg(c.weights.migration)) issues.push_back({"weights.migration", "weight must be >= 0"});
  check_vector(issues, "direct_success", c.direct_success, c.n, true);
  check_vector(issues, "pivot_success", c.pivot_success, c.n * c.n, true);
  check_vector(issues, "confidence", c.confidence, c.n, true);
  check_vector(issues, "reward_defender", c.reward_defender, c.n, false);
  check_vector(issues, "reward_attacker", c.reward_attacker, c.n, false);
  check_vector(issues, "attack_cost", c.attack_cost, c.n, false);
  return issues;
}

void require_valid(const GameConfig& config) {
  auto issues = check_config(config);
  if (!issues.empty()) throw ConfigError(issues.front().field, issues.front().message);
}

GameStart init_game(const GameConfig& config) {
  require_valid(config);
  return GameStart{SystemState::healthy(config.n), Observation::clear(config.n),
                   AttackAction{VmSet(config.n)}, DefendAction{VmSet(config.n)}};
}

double compromise_probability(const SystemState& state, const Observation& observation,
                              const DefendAction& defend, const AttackAction& attack,
                              const GameConfig& config, std::size_t v) {
  if (defend.shuffled.contains(v)) return 0.0;
  const bool was = state.at(v);
  if (attack.targets.contains(v)) return was ? 1.0 : config.direct_success[v];
  const bool false_positive = observation.at(v) && !was;
  if (!false_positive) return was ? 1.0 : 0.0;

  double prob = 0.0;
  double miss = 1.0;
  bool any_source = false;
  for (std::size_t src = 0; src < config.n; ++src) {
    if (src == v || !state.at(src)) continue;
    any_source = true;
    const double p = config.pivot(src, v);
    prob = std::max(prob, p);
    miss *= 1.0 - p;
  }
  if (!any_source) return 0.0;
  return config.pivot_combine == PivotCombine::max ? prob : 1.0 - miss;
}

SystemState transit_state(const SystemState& state, const Observation& observation,
                          const DefendAction& defend, const AttackAction& attack,
                          const GameConfig& config, RandomSource& rng) {
  const std::size_t n = config.n;
  if (state.size() != n || observation.size() != n || defend.shuffled.universe() != n ||
      attack.targets.universe() != n) {
    throw std::invalid_argument("transit_state: vector lengths must equal n = " + std::to_string(n));
  }
  SystemState next = SystemState::healthy(n);
  for (std::size_t v = 0; v < n; ++v) {
    const double draw = rng.uniform();
    next.compromised[v] =
        draw < compromise_probability(state, observation, defend, attack, config, v) ? 1 : 0;
  }
  return next;
}

Observation observe(const SystemState& state, const GameConfig& config, RandomSource& rng) {
  Observation out = Observation::clear(state.size());
  for (std::size_t v = 0; v < state.size(); ++v) {
    const bool correct = rng.bernoulli(config.confidence[v]);
    out.flagged[v] = correct ? state.compromised[v] : static_cast<std::uint8_t>(1 - state.compromised[v]);
  }
  return out;
}

}  // namespace mtd
