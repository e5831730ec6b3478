#include "mtd/policies.hpp"

#include <vector>

namespace mtd {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::none: return "none";
    case PolicyKind::random: return "random";
    case PolicyKind::rrt: return "rrt";
    case PolicyKind::csa: return "csa";
    case PolicyKind::ces: return "ces";
  }
  return "?";
}

std::optional<PolicyKind> parse_policy(std::string_view name) {
  for (auto k : {PolicyKind::none, PolicyKind::random, PolicyKind::rrt, PolicyKind::csa, PolicyKind::ces}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

ShuffleDecision no_shuffle_policy(const Observation&, const Assignment& a, const OnlineCounts&, std::size_t,
                                  const GameConfig&, RandomSource&) {
  return unchanged(a);
}

namespace {

void hop_port(Assignment& next, VmMove& move, const GameConfig& config, RandomSource& rng) {
  const std::size_t v = move.vm.value;
  const std::size_t port = rng.index(config.u);
  move.port_changed = port != next.port_of(v);
  next.move_port(v, port);
}

}  // namespace

ShuffleDecision random_shuffle_policy(const Observation& observation, const Assignment& a,
                                      const OnlineCounts& online, std::size_t, const GameConfig& config,
                                      RandomSource& rng) {
  ShuffleDecision decision = unchanged(a);
  Assignment& next = decision.next;
  auto sizes = next.segment_sizes();
  for (std::size_t v = 0; v < config.n; ++v) {
    if (!observation.at(v)) continue;
    VmMove move{VmId{v}};
    switch (rng.index(3)) {
      case 0: {
        move.kind = MoveKind::ip_hop;
        const std::size_t seg = next.segment_of(v);
        const std::size_t target = rng.index(config.r);
        if (target == seg) break;
        if (sizes[seg] < 2) {
          move.degraded = true;
          hop_port(next, move, config, rng);
          break;
        }
        --sizes[seg];
        ++sizes[target];
        next.move_segment(v, target);
        move.segment_changed = true;
        break;
      }
      case 1:
        move.kind = MoveKind::port_hop;
        hop_port(next, move, config, rng);
        break;
      default: {
        move.kind = MoveKind::migrate;
        const auto outgoing = online_users(next, v, online.eta[v]);
        const auto partners = migration_partners(observation, v);
        if (outgoing.empty() || partners.empty()) {
          move.degraded = true;
          hop_port(next, move, config, rng);
          break;
        }
        const std::size_t partner = partners[rng.index(partners.size())];
        move.target = VmId{partner};
        move.users_moved = exchange_users(next, v, outgoing, partner);
        break;
      }
    }
    decision.moves.push_back(move);
  }
  decision.shuffled = DefendAction{changed_rows(a, next)};
  return decision;
}

ShuffleDecision rrt_policy(const Observation& observation, const Assignment& a, const OnlineCounts&,
                           std::size_t t, const GameConfig& config, RandomSource& rng, std::size_t interval) {
  ShuffleDecision decision = unchanged(a);
  if (interval == 0 || t % interval != 0) return decision;
  Assignment& next = decision.next;
  auto sizes = next.segment_sizes();
  for (std::size_t v = 0; v < config.n; ++v) {
    if (!observation.at(v)) continue;
    VmMove move{VmId{v}, MoveKind::reconfigure};
    const auto partners = migration_partners(observation, v);
    if (!partners.empty()) {
      const std::size_t partner = partners[rng.index(partners.size())];
      const auto outgoing = next.users_of(v);
      move.target = VmId{partner};
      move.users_moved = exchange_users(next, v, outgoing, partner);
    } else {
      move.degraded = true;
    }
    const std::size_t seg = next.segment_of(v);
    if (can_leave_segment(next, sizes, v)) {
      std::size_t target = rng.index(config.r - 1);
      if (target >= seg) ++target;
      --sizes[seg];
      ++sizes[target];
      next.move_segment(v, target);
      move.segment_changed = true;
    }
    decision.moves.push_back(move);
  }
  decision.shuffled = DefendAction{changed_rows(a, next)};
  return decision;
}

ShuffleDecision csa_policy(const Observation& observation, const Assignment& a, const OnlineCounts&, std::size_t,
                           const GameConfig& config, RandomSource& rng) {
  ShuffleDecision decision = unchanged(a);
  Assignment& next = decision.next;
  for (std::size_t v = 0; v < config.n; ++v) {
    if (!observation.at(v)) continue;
    VmMove move{VmId{v}, MoveKind::migrate};
    auto users = next.users_of(v);
    const std::size_t half = users.size() / 2;
    const auto partners = migration_partners(observation, v);
    if (half == 0 || partners.empty()) {
      move.degraded = half > 0;
      decision.moves.push_back(move);
      continue;
    }
    rng.shuffle(std::span<std::size_t>(users));
    users.resize(half);
    const std::size_t partner = partners[rng.index(partners.size())];
    // Partner returns a random subset of the same size.
    auto incoming = next.users_of(partner);
    rng.shuffle(std::span<std::size_t>(incoming));
    const std::size_t k = std::min(half, incoming.size());
    for (std::size_t i = 0; i < k; ++i) {
      next.move_user(users[i], v, partner);
      next.move_user(incoming[i], partner, v);
    }
    move.target = VmId{partner};
    move.users_moved = k;
    decision.moves.push_back(move);
  }
  decision.shuffled = DefendAction{changed_rows(a, next)};
  return decision;
}

ShuffleDecision apply_policy(PolicyKind kind, const Observation& observation, const Assignment& a,
                             const OnlineCounts& online, std::size_t t, const GameConfig& config,
                             RandomSource& rng, const PolicyOptions& options) {
  switch (kind) {
    case PolicyKind::none: return no_shuffle_policy(observation, a, online, t, config, rng);
    case PolicyKind::random: return random_shuffle_policy(observation, a, online, t, config, rng);
    case PolicyKind::rrt: return rrt_policy(observation, a, online, t, config, rng, options.rrt_interval);
    case PolicyKind::csa: return csa_policy(observation, a, online, t, config, rng);
    case PolicyKind::ces:
      return ces_decide(observation, a, online, t, config, rng, CesOptions{options.use_defend_gate});
  }
  return unchanged(a);
}

}  // namespace mtd
