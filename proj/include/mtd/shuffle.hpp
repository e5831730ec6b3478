#pragma once

// Shuffle decisions over an Assignment and the cost-effective shuffling
// algorithm (CES).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mtd/assignment.hpp"
#include "mtd/game.hpp"
#include "mtd/random.hpp"

namespace mtd {

/// eta(v): online users of VM v, 0 <= eta(v) <= m.
struct OnlineCounts {
  std::vector<std::size_t> eta;
};

enum class MoveKind { none, park, ip_hop, port_hop, migrate, reconfigure };

const char* to_string(MoveKind kind);

struct VmMove {
  VmId vm;
  MoveKind kind = MoveKind::none;  // requested kind (before any fallback)
  bool degraded = false;           // requested move was infeasible
  bool segment_changed = false;
  bool port_changed = false;
  std::optional<VmId> target;      // migration partner
  std::size_t users_moved = 0;
  double value = 0.0;              // CES: estimated P^d - P^a of the choice
};

struct ShuffleDecision {
  Assignment next;
  DefendAction shuffled;      // VMs whose x, y or z row changed
  std::vector<VmId> parked;   // flagged, no online users: reset in place
  std::vector<VmMove> moves;

  /// D_{t+1}: shuffled plus parked VMs.
  DefendAction defend_action() const;
};

/// Wraps an unchanged assignment.
ShuffleDecision unchanged(const Assignment& a);

/// The first eta users (ascending index) of a VM are its online users.
std::vector<std::size_t> online_users(const Assignment& a, std::size_t vm, std::size_t eta);

/// Swaps `outgoing` users of `from` with the same number of users of `to`,
/// taken from the highest-indexed end of `to`'s user list. Returns the count
/// actually exchanged.
std::size_t exchange_users(Assignment& a, std::size_t from, std::span<const std::size_t> outgoing,
                           std::size_t to);

/// Unflagged VMs other than `vm`: the admissible migration partners.
std::vector<std::size_t> migration_partners(const Observation& observation, std::size_t vm);

/// Whether `vm` can leave its segment without emptying it.
bool can_leave_segment(const Assignment& a, std::span<const std::size_t> segment_sizes, std::size_t vm);

/// C^d(v): cost of the cheapest admissible single-VM shuffle of each VM
/// (0 when eta(v) = 0, +inf when nothing is admissible).
std::vector<double> shuffle_cost_estimates(const Observation& observation, const Assignment& a,
                                           const OnlineCounts& online, const GameConfig& config);

struct CesOptions {
  /// Restrict CES to flagged VMs with a positive defend score.
  bool use_defend_gate = true;
};

/// One-step estimate of P^d - P^a for reconfiguring flagged VM v at cost
/// `cost` (shuffled = true) or leaving it alone (shuffled = false).
double ces_payoff_difference(std::size_t v, bool shuffled, double cost, std::size_t t, const GameConfig& config);

/// For each flagged VM in ascending order: park it when eta = 0; otherwise
/// search every (segment, port, migrate-or-not) move, migration only when
/// eta <= floor(m/2), and commit the move with the largest estimated
/// P^d - P^a. Unflagged VMs change only as migration partners.
ShuffleDecision ces_decide(const Observation& observation, const Assignment& a, const OnlineCounts& online,
                           std::size_t t, const GameConfig& config, RandomSource& rng,
                           const CesOptions& options = {});

}  // namespace mtd
