#pragma once

// The three CLI commands as library calls. Each returns the process exit
// code: 0 ok, 2 invalid spec (the field is named on `err`), 3 output not
// writable, 1 anything else.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mtd/csv.hpp"
#include "mtd/sim.hpp"
#include "mtd/spec_document.hpp"

namespace mtd {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_invalid_spec = 2;
inline constexpr int exit_unwritable = 3;

struct CommandOptions {
  std::string spec_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::string> policies;     // comma list, replaces the spec's list
  std::optional<std::size_t> runs;         // transition-probe only
  std::optional<std::string> dump_prefix;  // simulate: final trial-0 assignment per policy
};

int cmd_simulate(const CommandOptions& options, std::ostream& err);
int cmd_sweep_eta(const CommandOptions& options, std::ostream& err);
int cmd_transition_probe(const CommandOptions& options, std::ostream& err);

/// Table builders used by the commands.
CsvTable simulate_table(const std::vector<AggregateSeries>& series);
CsvTable sweep_table(const std::vector<std::pair<PolicyKind, std::vector<SweepPoint>>>& sweeps);
CsvTable probe_table(const TransitionHistogram& histogram);

/// Spec document with command-line overrides applied and revalidated.
SpecDocument resolve_spec(const CommandOptions& options);

}  // namespace mtd
