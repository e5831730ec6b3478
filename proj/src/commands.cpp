#include "mtd/commands.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace mtd {

namespace {

std::vector<PolicyKind> parse_policy_list(const std::string& text) {
  std::vector<PolicyKind> out;
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    auto p = parse_policy(name);
    if (!p) throw ConfigError("policy", "unknown policy '" + name + "'");
    out.push_back(*p);
  }
  if (out.empty()) throw ConfigError("policy", "no policy given");
  return out;
}

// Opens the output before any work so an unwritable path fails fast.
bool open_output(const std::string& path, std::ofstream& out, std::ostream& err) {
  out.open(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    err << "error: cannot write output file " << path << "\n";
    return false;
  }
  return true;
}

bool finish_output(const std::string& path, std::ofstream& out, const CsvTable& table, std::ostream& err) {
  write_csv(out, table);
  out.close();
  if (!out) {
    err << "error: failed while writing " << path << "\n";
    return false;
  }
  return true;
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: invalid spec field '" << e.field() << "': " << e.what() << "\n";
    return exit_invalid_spec;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
}

}  // namespace

SpecDocument resolve_spec(const CommandOptions& options) {
  SpecDocument doc = load_spec_document(options.spec_path);
  if (options.seed) doc.base.seed = *options.seed;
  if (options.trials) doc.base.trials = *options.trials;
  if (options.policies) doc.policies = parse_policy_list(*options.policies);
  doc.base.policy = doc.policies.front();
  if (options.runs) doc.probe_runs = *options.runs;
  if (doc.probe_runs < 1) throw ConfigError("runs", "at least one run is required");
  const auto issues = check_spec(doc.base);
  if (!issues.empty()) throw ConfigError(issues.front().field, issues.front().message);
  return doc;
}

CsvTable simulate_table(const std::vector<AggregateSeries>& series) {
  CsvTable table;
  table.header = {"t", "policy", "effectiveness", "cost", "defender_payoff", "attacker_payoff", "crashed_vms", "trials"};
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.effectiveness.size(); ++i) {
      table.rows.push_back({std::to_string(i + 1), std::string(to_string(s.policy)),
                            format_number(s.effectiveness[i].mean), format_number(s.cost[i].mean),
                            format_number(s.defender_payoff[i].mean), format_number(s.attacker_payoff[i].mean),
                            format_number(s.crashed[i].mean), std::to_string(s.trials)});
    }
  }
  return table;
}

CsvTable sweep_table(const std::vector<std::pair<PolicyKind, std::vector<SweepPoint>>>& sweeps) {
  CsvTable table;
  table.header = {"eta", "policy", "effectiveness", "cost", "payoff"};
  for (const auto& [policy, points] : sweeps) {
    for (const auto& p : points) {
      table.rows.push_back({std::to_string(p.eta), std::string(to_string(policy)), format_number(p.effectiveness.mean),
                            format_number(p.cost.mean), format_number(p.payoff.mean)});
    }
  }
  return table;
}

CsvTable probe_table(const TransitionHistogram& histogram) {
  CsvTable table;
  table.header = {"state_pattern", "count", "frequency"};
  for (const auto& [pattern, count] : histogram.counts) {
    table.rows.push_back({pattern, std::to_string(count), format_number(histogram.frequency(pattern))});
  }
  return table;
}

int cmd_simulate(const CommandOptions& options, std::ostream& err) {
  return guarded(err, [&] {
    const auto doc = resolve_spec(options);
    std::ofstream out;
    if (!open_output(options.out_path, out, err)) return exit_unwritable;
    std::vector<AggregateSeries> series;
    for (const auto& spec : doc.experiments()) {
      series.push_back(run_experiment(spec));
      if (options.dump_prefix) {
        Assignment last;
        run_trial(spec, trial_seed(spec.seed, 0),
                  [&](const StepRecord&, const Assignment&, const ShuffleDecision& d) { last = d.next; });
        const std::string path = *options.dump_prefix + std::string(to_string(spec.policy)) + ".txt";
        std::ofstream dump(path, std::ios::binary | std::ios::trunc);
        if (!dump) {
          err << "error: cannot write assignment dump " << path << "\n";
          return exit_unwritable;
        }
        write_assignment(dump, last);
      }
    }
    return finish_output(options.out_path, out, simulate_table(series), err) ? exit_ok : exit_unwritable;
  });
}

int cmd_sweep_eta(const CommandOptions& options, std::ostream& err) {
  return guarded(err, [&] {
    const auto doc = resolve_spec(options);
    if (doc.base.eta.kind != EtaSchedule::Kind::sweep) throw ConfigError("eta", "sweep-eta needs eta = sweep:LO..HI");
    std::ofstream out;
    if (!open_output(options.out_path, out, err)) return exit_unwritable;
    std::vector<std::pair<PolicyKind, std::vector<SweepPoint>>> sweeps;
    for (const auto& spec : doc.experiments()) sweeps.emplace_back(spec.policy, sweep_eta(spec));
    return finish_output(options.out_path, out, sweep_table(sweeps), err) ? exit_ok : exit_unwritable;
  });
}

int cmd_transition_probe(const CommandOptions& options, std::ostream& err) {
  return guarded(err, [&] {
    const auto doc = resolve_spec(options);
    const auto probe = doc.probe ? *doc.probe : TransitionProbe::all_attacked(doc.base.config.n);
    std::ofstream out;
    if (!open_output(options.out_path, out, err)) return exit_unwritable;
    const auto histogram = estimate_transition_distribution(doc.base.config, probe, doc.probe_runs, doc.base.seed);
    return finish_output(options.out_path, out, probe_table(histogram), err) ? exit_ok : exit_unwritable;
  });
}

}  // namespace mtd
