#include "mtd/shuffle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mtd/strategies.hpp"

namespace mtd {

const char* to_string(MoveKind kind) {
  switch (kind) {
    case MoveKind::none: return "none";
    case MoveKind::park: return "park";
    case MoveKind::ip_hop: return "ip_hop";
    case MoveKind::port_hop: return "port_hop";
    case MoveKind::migrate: return "migrate";
    case MoveKind::reconfigure: return "reconfigure";
  }
  return "?";
}

DefendAction ShuffleDecision::defend_action() const {
  DefendAction d = shuffled;
  for (auto v : parked) d.shuffled.insert(v);
  return d;
}

ShuffleDecision unchanged(const Assignment& a) {
  return ShuffleDecision{a, DefendAction{VmSet(a.vm_count())}, {}, {}};
}

std::vector<std::size_t> online_users(const Assignment& a, std::size_t vm, std::size_t eta) {
  auto users = a.users_of(vm);
  if (users.size() > eta) users.resize(eta);
  return users;
}

std::size_t exchange_users(Assignment& a, std::size_t from, std::span<const std::size_t> outgoing,
                           std::size_t to) {
  if (from == to) return 0;
  auto incoming = a.users_of(to);
  const std::size_t k = std::min(outgoing.size(), incoming.size());
  for (std::size_t i = 0; i < k; ++i) {
    a.move_user(outgoing[i], from, to);
    a.move_user(incoming[incoming.size() - 1 - i], to, from);
  }
  return k;
}

std::vector<std::size_t> migration_partners(const Observation& observation, std::size_t vm) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < observation.size(); ++k) {
    if (k != vm && !observation.at(k)) out.push_back(k);
  }
  return out;
}

bool can_leave_segment(const Assignment& a, std::span<const std::size_t> segment_sizes, std::size_t vm) {
  return a.x.cols() > 1 && segment_sizes[a.segment_of(vm)] > 1;
}

std::vector<double> shuffle_cost_estimates(const Observation& observation, const Assignment& a,
                                           const OnlineCounts& online, const GameConfig& config) {
  const auto& w = config.weights;
  const auto sizes = a.segment_sizes();
  std::vector<double> out(config.n, std::numeric_limits<double>::infinity());
  for (std::size_t v = 0; v < config.n; ++v) {
    if (online.eta[v] == 0) {
      out[v] = 0.0;
      continue;
    }
    if (config.u > 1) out[v] = std::min(out[v], 2.0 * w.port);
    if (can_leave_segment(a, sizes, v)) out[v] = std::min(out[v], 2.0 * w.ip);
    if (online.eta[v] <= config.m / 2 && !migration_partners(observation, v).empty()) {
      out[v] = std::min(out[v], 4.0 * static_cast<double>(online.eta[v]) * w.migration);
    }
  }
  return out;
}

namespace {

double payoff_difference(std::size_t v, bool shuffled, double cost, double discount, const GameConfig& config) {
  const double pi = config.confidence[v];
  const double p = config.direct_success[v];
  if (!shuffled) {
    // VM stays as it is: the attacker keeps it (prob pi) or takes it (prob p).
    return -discount * config.reward_attacker[v] * (pi + (1.0 - pi) * p);
  }
  const double defender = discount * (pi * config.reward_defender[v] - cost);
  const double attacker = discount * (p * config.reward_attacker[v] - config.weights.migration);
  return defender - attacker;
}

}  // namespace

double ces_payoff_difference(std::size_t v, bool shuffled, double cost, std::size_t t, const GameConfig& config) {
  return payoff_difference(v, shuffled, cost, std::pow(config.gamma, static_cast<double>(t)), config);
}

namespace {

struct Candidate {
  std::size_t segment = 0;
  std::size_t port = 0;
  bool migrate = false;
  double value = -std::numeric_limits<double>::infinity();
};

std::size_t least_loaded(const std::vector<std::size_t>& partners, const OnlineCounts& online) {
  std::size_t best = partners.front();
  for (auto k : partners) {
    if (online.eta[k] < online.eta[best]) best = k;
  }
  return best;
}

}  // namespace

ShuffleDecision ces_decide(const Observation& observation, const Assignment& a, const OnlineCounts& online,
                           std::size_t t, const GameConfig& config, [[maybe_unused]] RandomSource& rng,
                           const CesOptions& options) {
  const std::size_t n = config.n;
  if (observation.size() != n || online.eta.size() != n || a.vm_count() != n) {
    throw std::invalid_argument("ces_decide: observation, online counts and assignment must cover n VMs");
  }
  ShuffleDecision decision = unchanged(a);
  Assignment& next = decision.next;
  auto sizes = next.segment_sizes();
  const auto& w = config.weights;
  const double discount = std::pow(config.gamma, static_cast<double>(t));

  std::vector<double> gate;
  if (options.use_defend_gate) {
    const auto estimates = shuffle_cost_estimates(observation, a, online, config);
    // Previous action = all VMs, so only flagged VMs are scored.
    gate = defend_scores(observation, DefendAction{VmSet::all(n)}, t, config, estimates);
  }

  for (std::size_t v = 0; v < n; ++v) {
    if (!observation.at(v)) continue;
    if (options.use_defend_gate && !(gate[v] > 0.0)) continue;

    if (online.eta[v] == 0) {
      decision.parked.push_back(VmId{v});
      decision.moves.push_back(VmMove{VmId{v}, MoveKind::park});
      continue;
    }

    VmMove move{VmId{v}};
    const bool migration_allowed = online.eta[v] <= config.m / 2;
    const auto outgoing = online_users(next, v, online.eta[v]);
    std::optional<std::size_t> partner;
    if (migration_allowed) {
      const auto partners = migration_partners(observation, v);
      if (partners.empty()) {
        move.degraded = true;
      } else {
        partner = least_loaded(partners, online);
      }
    }
    const double migration_cost = 4.0 * static_cast<double>(outgoing.size()) * w.migration;

    const std::size_t seg = next.segment_of(v);
    const std::size_t port = next.port_of(v);
    const bool mobile = can_leave_segment(next, sizes, v);
    Candidate best;
    for (std::size_t s = 0; s < config.r; ++s) {
      if (s != seg && !mobile) continue;
      for (std::size_t p = 0; p < config.u; ++p) {
        for (int mig = 0; mig < (partner ? 2 : 1); ++mig) {
          const bool migrate = mig == 1 && !outgoing.empty();
          if (mig == 1 && !migrate) continue;
          const bool changed = s != seg || p != port || migrate;
          const double cost = (s != seg ? 2.0 * w.ip : 0.0) + (p != port ? 2.0 * w.port : 0.0) +
                              (migrate ? migration_cost : 0.0);
          const double value = payoff_difference(v, changed, cost, discount, config);
          if (value > best.value) best = Candidate{s, p, migrate, value};
        }
      }
    }

    move.value = best.value;
    move.segment_changed = best.segment != seg;
    move.port_changed = best.port != port;
    if (best.migrate) {
      move.kind = MoveKind::migrate;
    } else if (move.segment_changed && move.port_changed) {
      move.kind = MoveKind::reconfigure;
    } else if (move.segment_changed) {
      move.kind = MoveKind::ip_hop;
    } else if (move.port_changed) {
      move.kind = MoveKind::port_hop;
    }
    if (move.segment_changed) {
      --sizes[seg];
      ++sizes[best.segment];
      next.move_segment(v, best.segment);
    }
    if (move.port_changed) next.move_port(v, best.port);
    if (best.migrate) {
      move.target = VmId{*partner};
      move.users_moved = exchange_users(next, v, outgoing, *partner);
    }
    decision.moves.push_back(move);
  }
  decision.shuffled = DefendAction{changed_rows(a, next)};
  return decision;
}

}  // namespace mtd
