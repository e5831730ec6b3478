#pragma once

// Shuffling policies behind one interface: CES and the comparison baselines.

#include <cstddef>
#include <optional>
#include <string_view>

#include "mtd/shuffle.hpp"

namespace mtd {

enum class PolicyKind { none, random, rrt, csa, ces };

std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy(std::string_view name);

struct PolicyOptions {
  bool use_defend_gate = true;   // CES only
  std::size_t rrt_interval = 1;  // RRT shuffles when t % interval == 0
};

/// Never shuffles.
ShuffleDecision no_shuffle_policy(const Observation& observation, const Assignment& a, const OnlineCounts& online,
                                  std::size_t t, const GameConfig& config, RandomSource& rng);

/// Each flagged VM gets one uniformly chosen move: IP hop to a uniform
/// segment, port hop to a uniform port, or migration of its online users to a
/// uniform unflagged VM. Draws may land on the current segment or port.
/// Infeasible IP hops and migrations fall back to a port hop.
ShuffleDecision random_shuffle_policy(const Observation& observation, const Assignment& a,
                                      const OnlineCounts& online, std::size_t t, const GameConfig& config,
                                      RandomSource& rng);

/// Renewal-style full shuffle, blind to occupancy: every flagged VM swaps
/// all of its users with a uniform unflagged VM and hops to another segment.
ShuffleDecision rrt_policy(const Observation& observation, const Assignment& a, const OnlineCounts& online,
                           std::size_t t, const GameConfig& config, RandomSource& rng,
                           std::size_t interval = 1);

/// Every flagged VM exchanges a uniform random half (rounded down) of its
/// users with a uniform unflagged VM. No IP or port change.
ShuffleDecision csa_policy(const Observation& observation, const Assignment& a, const OnlineCounts& online,
                           std::size_t t, const GameConfig& config, RandomSource& rng);

ShuffleDecision apply_policy(PolicyKind kind, const Observation& observation, const Assignment& a,
                             const OnlineCounts& online, std::size_t t, const GameConfig& config,
                             RandomSource& rng, const PolicyOptions& options = {});

}  // namespace mtd
