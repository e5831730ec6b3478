#include <CLI11.hpp>

#include <iostream>

#include "mtd/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Shuffling moving-target-defense game simulator"};
  app.require_subcommand(1);

  mtd::CommandOptions opt;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t runs = 0;
  std::string policies;
  std::string dump;

  const auto common = [&](CLI::App* cmd) {
    cmd->add_option("--spec", opt.spec_path, "experiment spec document")->required();
    cmd->add_option("--out", opt.out_path, "output CSV path")->required();
    cmd->add_option("--seed", seed, "override the spec seed");
    cmd->add_option("--trials", trials, "override the trial count");
    cmd->add_option("--policy", policies, "comma list of policies: none,random,rrt,csa,ces");
  };

  auto* simulate = app.add_subcommand("simulate", "per-step means for each policy");
  common(simulate);
  simulate->add_option("--dump-assignment", dump, "write trial 0's final assignment to PREFIX<policy>.txt");
  auto* sweep = app.add_subcommand("sweep-eta", "metrics at the evaluation step for each eta");
  common(sweep);
  auto* probe = app.add_subcommand("transition-probe", "next-state histogram from a fixed tuple");
  common(probe);
  probe->add_option("--runs", runs, "number of sampled transitions (default 10000)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  for (auto* cmd : {simulate, sweep, probe}) {
    if (!*cmd) continue;
    if (cmd->count("--seed")) opt.seed = seed;
    if (cmd->count("--trials")) opt.trials = trials;
    if (cmd->count("--policy")) opt.policies = policies;
  }
  if (probe->count("--runs")) opt.runs = runs;
  if (simulate->count("--dump-assignment")) opt.dump_prefix = dump;

  if (*simulate) return mtd::cmd_simulate(opt, std::cerr);
  if (*sweep) return mtd::cmd_sweep_eta(opt, std::cerr);
  return mtd::cmd_transition_probe(opt, std::cerr);
}
