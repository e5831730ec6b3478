#pragma once

// Experiment spec documents: INI-style text with [game], [weights],
// [probabilities], [experiment] and optional [probe] sections.
//
//   [game]          n, m, q (default m*n), r, u, horizon, gamma,
//                   reward_defender, reward_attacker, attack_cost
//   [weights]       ip, port, migration
//   [probabilities] direct, pivot, confidence, pivot_combine = max|independent_or
//   [experiment]    policies, trials, seed, eta = fixed:V | sweep:LO..HI | trace:V,V,...,
//                   eta_sampling = binomial|exact, attacker = strategic|sequential-ddos,
//                   eval_step, tie_break = lowest-id|keep-all, use_defend_gate, rrt_interval
//   [probe]         state, observation (bit strings), attack, defend (VM id lists), runs
//
// Per-VM entries take one value (applied to every VM) or a comma list of n
// values; pivot takes one value (off-diagonal) or n*n values, row-major by
// source VM. Unknown sections and keys are rejected.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mtd/sim.hpp"

namespace mtd {

struct SpecDocument {
  ExperimentSpec base;  // base.policy is the first listed policy
  std::vector<PolicyKind> policies;
  std::optional<TransitionProbe> probe;
  std::size_t probe_runs = 10000;

  /// One spec per listed policy.
  std::vector<ExperimentSpec> experiments() const;
};

/// Throws ConfigError naming the offending field.
SpecDocument parse_spec_document(std::istream& in);
SpecDocument load_spec_document(const std::string& path);

}  // namespace mtd
