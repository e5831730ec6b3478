#pragma once

// Game state machine: system state, defender observation, action sets and
// the per-step state transition.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtd/random.hpp"

namespace mtd {

struct VmId {
  std::size_t value = 0;
  auto operator<=>(const VmId&) const = default;
};

/// Membership set over the VMs [0, n).
class VmSet {
 public:
  VmSet() = default;
  explicit VmSet(std::size_t n) : bits_(n, 0) {}
  VmSet(std::size_t n, std::initializer_list<std::size_t> ids);

  static VmSet all(std::size_t n);

  std::size_t universe() const { return bits_.size(); }
  bool contains(VmId v) const { return v.value < bits_.size() && bits_[v.value] != 0; }
  bool contains(std::size_t v) const { return v < bits_.size() && bits_[v] != 0; }
  void insert(VmId v);
  void insert(std::size_t v) { insert(VmId{v}); }
  void erase(std::size_t v);
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  std::vector<VmId> members() const;

  bool operator==(const VmSet&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct AttackAction {
  VmSet targets;
  bool operator==(const AttackAction&) const = default;
};

struct DefendAction {
  VmSet shuffled;
  bool operator==(const DefendAction&) const = default;
};

/// S_t: 1 = compromised (crashed), 0 = healthy.
struct SystemState {
  std::vector<std::uint8_t> compromised;

  std::size_t size() const { return compromised.size(); }
  bool at(std::size_t v) const { return compromised[v] != 0; }
  std::size_t count() const;
  std::string pattern() const;
  static SystemState healthy(std::size_t n) { return {std::vector<std::uint8_t>(n, 0)}; }
  static SystemState from_pattern(const std::string& bits);
  bool operator==(const SystemState&) const = default;
};

/// O_t: 1 = the defender believes the VM is compromised.
struct Observation {
  std::vector<std::uint8_t> flagged;

  std::size_t size() const { return flagged.size(); }
  bool at(std::size_t v) const { return flagged[v] != 0; }
  std::size_t count() const;
  static Observation clear(std::size_t n) { return {std::vector<std::uint8_t>(n, 0)}; }
  static Observation from_pattern(const std::string& bits);
  bool operator==(const Observation&) const = default;
};

/// Shuffle cost weights: IP hop, port hop, migration.
struct Weights {
  double ip = 0.2;
  double port = 0.1;
  double migration = 0.7;
};

enum class PivotCombine { max, independent_or };
enum class TieBreak { lowest_id, keep_all };

struct GameConfig {
  std::size_t n = 1;        // VMs
  std::size_t m = 1;        // users per VM
  std::size_t q = 1;        // users
  std::size_t r = 1;        // network segments
  std::size_t u = 1;        // ports
  std::size_t horizon = 1;  // T
  double gamma = 0.9;
  Weights weights;
  std::vector<double> direct_success;  // p(v)
  std::vector<double> pivot_success;   // p(v', v), row-major [v'][v]
  std::vector<double> confidence;      // pi(v)
  std::vector<double> reward_defender;
  std::vector<double> reward_attacker;
  std::vector<double> attack_cost;
  PivotCombine pivot_combine = PivotCombine::max;
  TieBreak tie_break = TieBreak::lowest_id;

  double pivot(std::size_t from, std::size_t to) const { return pivot_success[from * n + to]; }
};

/// Uniform per-VM parameters: p(v) = direct, p(v', v) = pivot off the
/// diagonal, pi(v) = confidence, unit rewards and attack costs, q = m * n.
GameConfig make_config(std::size_t n, std::size_t m, std::size_t r, std::size_t u,
                       double direct = 0.5, double pivot = 0.2, double confidence = 0.9);

struct ConfigIssue {
  std::string field;
  std::string message;
};

/// Every violated invariant, each naming the offending field.
std::vector<ConfigIssue> check_config(const GameConfig& config);

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Throws ConfigError for the first issue found.
void require_valid(const GameConfig& config);

struct GameStart {
  SystemState state;
  Observation observation;
  AttackAction attack;
  DefendAction defend;
};

GameStart init_game(const GameConfig& config);

/// One draw of the transition. Exactly one uniform is consumed per VM, in
/// ascending VmId order, whether or not that VM's branch is random.
///   v in D                      -> 0
///   v in A                      -> 1 with prob p(v), else S_t(v)
///   false positive, v not in A  -> 1 with prob of the pivot from the
///                                  compromised VMs (if any), else 0
///   otherwise                   -> S_t(v)
SystemState transit_state(const SystemState& state, const Observation& observation,
                          const DefendAction& defend, const AttackAction& attack,
                          const GameConfig& config, RandomSource& rng);

/// Probability that transit_state sets VM v to 1; the draw compares a
/// uniform against this value.
double compromise_probability(const SystemState& state, const Observation& observation,
                              const DefendAction& defend, const AttackAction& attack,
                              const GameConfig& config, std::size_t v);

/// Per VM: correct with probability pi(v), inverted otherwise.
Observation observe(const SystemState& state, const GameConfig& config, RandomSource& rng);

}  // namespace mtd
