#include "mtd/spec_document.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <string_view>

namespace mtd {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n\"");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n\"");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(const std::string& field, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(field, "not a number: '" + text + "'");
  return v;
}

std::uint64_t to_uint(const std::string& field, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(field, "not a non-negative integer: '" + text + "'");
  return v;
}

bool to_bool(const std::string& field, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(field, "not a boolean: '" + text + "'");
}

std::vector<double> to_doubles(const std::string& field, const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(to_double(field, part));
  return out;
}

std::vector<double> per_vm(const std::string& field, const std::string& text, std::size_t n) {
  auto values = to_doubles(field, text);
  if (values.size() == 1) return std::vector<double>(n, values.front());
  if (values.size() != n) {
    throw ConfigError(field, "expected 1 or " + std::to_string(n) + " values, got " + std::to_string(values.size()));
  }
  return values;
}

bool probability_ok(double p) { return p >= 0.0 && p <= 1.0; }

void require_probabilities(const std::string& field, const std::vector<double>& values) {
  for (double p : values) {
    if (!probability_ok(p)) throw ConfigError(field, "probability " + std::to_string(p) + " is not in [0,1]");
  }
}

VmSet to_vm_set(const std::string& field, const std::string& text, std::size_t n) {
  VmSet out(n);
  if (trim(text).empty()) return out;
  for (const auto& part : split(text, ',')) {
    const auto v = to_uint(field, part);
    if (v >= n) throw ConfigError(field, "VM " + part + " outside [0, n)");
    out.insert(static_cast<std::size_t>(v));
  }
  return out;
}

using Section = std::map<std::string, std::string>;

std::map<std::string, Section> sections_of(const pt::ptree& tree) {
  static const std::map<std::string, std::set<std::string>> allowed = {
      {"game", {"n", "m", "q", "r", "u", "horizon", "gamma", "reward_defender", "reward_attacker", "attack_cost"}},
      {"weights", {"ip", "port", "migration"}},
      {"probabilities", {"direct", "pivot", "confidence", "pivot_combine"}},
      {"experiment",
       {"policies", "trials", "seed", "eta", "eta_sampling", "attacker", "eval_step", "tie_break", "use_defend_gate",
        "rrt_interval"}},
      {"probe", {"state", "observation", "attack", "defend", "runs"}},
  };
  std::map<std::string, Section> out;
  for (const auto& [name, node] : tree) {
    auto it = allowed.find(name);
    if (it == allowed.end()) throw ConfigError(name, "unknown section [" + name + "]");
    if (node.empty()) throw ConfigError(name, "key outside any section");
    for (const auto& [key, value] : node) {
      if (!it->second.count(key)) throw ConfigError(name + "." + key, "unknown key");
      out[name][key] = trim(value.data());
    }
  }
  return out;
}

const std::string* find(const std::map<std::string, Section>& doc, const std::string& section, const std::string& key) {
  auto s = doc.find(section);
  if (s == doc.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

EtaSchedule parse_eta(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = trim(text.substr(0, colon));
  const std::string rest = colon == std::string::npos ? std::string() : trim(text.substr(colon + 1));
  if (kind == "fixed") return EtaSchedule::fixed(to_double("eta", rest));
  if (kind == "trace") return EtaSchedule::series(to_doubles("eta", rest));
  if (kind == "sweep") {
    const auto dots = rest.find("..");
    if (dots == std::string::npos) throw ConfigError("eta", "sweep needs LO..HI");
    return EtaSchedule::sweep(to_uint("eta", trim(rest.substr(0, dots))), to_uint("eta", trim(rest.substr(dots + 2))));
  }
  throw ConfigError("eta", "expected fixed:V, sweep:LO..HI or trace:V,V,...");
}

}  // namespace

std::vector<ExperimentSpec> SpecDocument::experiments() const {
  std::vector<ExperimentSpec> out;
  for (auto p : policies) {
    ExperimentSpec s = base;
    s.policy = p;
    out.push_back(std::move(s));
  }
  return out;
}

SpecDocument parse_spec_document(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("document", e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  const auto doc = sections_of(tree);
  const auto get = [&](const std::string& section, const std::string& key) { return find(doc, section, key); };
  const auto required = [&](const std::string& section, const std::string& key) -> const std::string& {
    const auto* v = get(section, key);
    if (!v) throw ConfigError(key, "missing required key in [" + section + "]");
    return *v;
  };

  SpecDocument out;
  GameConfig& c = out.base.config;
  const auto n = static_cast<std::size_t>(to_uint("n", required("game", "n")));
  const auto m = static_cast<std::size_t>(to_uint("m", required("game", "m")));
  const auto r = static_cast<std::size_t>(to_uint("r", required("game", "r")));
  const auto u = static_cast<std::size_t>(to_uint("u", required("game", "u")));
  if (n == 0) throw ConfigError("n", "at least one VM is required");
  c = make_config(n, m, r, u);
  if (const auto* v = get("game", "q")) c.q = static_cast<std::size_t>(to_uint("q", *v));
  if (const auto* v = get("game", "horizon")) c.horizon = static_cast<std::size_t>(to_uint("horizon", *v));
  if (const auto* v = get("game", "gamma")) c.gamma = to_double("gamma", *v);
  if (const auto* v = get("game", "reward_defender")) c.reward_defender = per_vm("reward_defender", *v, n);
  if (const auto* v = get("game", "reward_attacker")) c.reward_attacker = per_vm("reward_attacker", *v, n);
  if (const auto* v = get("game", "attack_cost")) c.attack_cost = per_vm("attack_cost", *v, n);

  if (const auto* v = get("weights", "ip")) c.weights.ip = to_double("ip", *v);
  if (const auto* v = get("weights", "port")) c.weights.port = to_double("port", *v);
  if (const auto* v = get("weights", "migration")) c.weights.migration = to_double("migration", *v);

  if (const auto* v = get("probabilities", "direct")) {
    c.direct_success = per_vm("direct", *v, n);
    require_probabilities("direct", c.direct_success);
  }
  if (const auto* v = get("probabilities", "confidence")) {
    c.confidence = per_vm("confidence", *v, n);
    require_probabilities("confidence", c.confidence);
  }
  if (const auto* v = get("probabilities", "pivot")) {
    auto values = to_doubles("pivot", *v);
    require_probabilities("pivot", values);
    if (values.size() == 1) {
      c.pivot_success.assign(n * n, values.front());
      for (std::size_t i = 0; i < n; ++i) c.pivot_success[i * n + i] = 0.0;
    } else if (values.size() == n * n) {
      c.pivot_success = std::move(values);
    } else {
      throw ConfigError("pivot", "expected 1 or n*n values");
    }
  }
  if (const auto* v = get("probabilities", "pivot_combine")) {
    if (*v == "max") c.pivot_combine = PivotCombine::max;
    else if (*v == "independent_or") c.pivot_combine = PivotCombine::independent_or;
    else throw ConfigError("pivot_combine", "expected max or independent_or");
  }

  ExperimentSpec& e = out.base;
  e.eta = EtaSchedule::fixed(static_cast<double>(m) / 2.0);
  const std::string policies = get("experiment", "policies") ? *get("experiment", "policies") : "ces";
  for (const auto& name : split(policies, ',')) {
    auto p = parse_policy(name);
    if (!p) throw ConfigError("policies", "unknown policy '" + name + "'");
    out.policies.push_back(*p);
  }
  e.policy = out.policies.front();
  if (const auto* v = get("experiment", "trials")) e.trials = static_cast<std::size_t>(to_uint("trials", *v));
  if (const auto* v = get("experiment", "seed")) e.seed = to_uint("seed", *v);
  if (const auto* v = get("experiment", "eta")) e.eta = parse_eta(*v);
  if (const auto* v = get("experiment", "eta_sampling")) {
    if (*v == "binomial") e.eta_sampling = EtaSampling::binomial;
    else if (*v == "exact") e.eta_sampling = EtaSampling::exact;
    else throw ConfigError("eta_sampling", "expected binomial or exact");
  }
  if (const auto* v = get("experiment", "attacker")) {
    if (*v == "strategic") e.attacker = AttackerMode::strategic;
    else if (*v == "sequential-ddos") e.attacker = AttackerMode::sequential_ddos;
    else throw ConfigError("attacker", "expected strategic or sequential-ddos");
  }
  if (const auto* v = get("experiment", "eval_step")) e.eval_step = static_cast<std::size_t>(to_uint("eval_step", *v));
  else e.eval_step = std::min<std::size_t>(10, std::max<std::size_t>(1, c.horizon));
  if (const auto* v = get("experiment", "tie_break")) {
    if (*v == "lowest-id") c.tie_break = TieBreak::lowest_id;
    else if (*v == "keep-all") c.tie_break = TieBreak::keep_all;
    else throw ConfigError("tie_break", "expected lowest-id or keep-all");
  }
  if (const auto* v = get("experiment", "use_defend_gate")) {
    e.policy_options.use_defend_gate = to_bool("use_defend_gate", *v);
  }
  if (const auto* v = get("experiment", "rrt_interval")) {
    e.policy_options.rrt_interval = static_cast<std::size_t>(to_uint("rrt_interval", *v));
    if (e.policy_options.rrt_interval == 0) throw ConfigError("rrt_interval", "interval must be >= 1");
  }

  if (doc.count("probe")) {
    TransitionProbe probe = TransitionProbe::all_attacked(n);
    try {
      if (const auto* v = get("probe", "state")) probe.state = SystemState::from_pattern(*v);
      if (const auto* v = get("probe", "observation")) probe.observation = Observation::from_pattern(*v);
    } catch (const std::invalid_argument& err) {
      throw ConfigError("probe", err.what());
    }
    if (probe.state.size() != n) throw ConfigError("state", "pattern length must equal n");
    if (probe.observation.size() != n) throw ConfigError("observation", "pattern length must equal n");
    if (const auto* v = get("probe", "attack")) probe.attack = AttackAction{to_vm_set("attack", *v, n)};
    if (const auto* v = get("probe", "defend")) probe.defend = DefendAction{to_vm_set("defend", *v, n)};
    if (const auto* v = get("probe", "runs")) out.probe_runs = static_cast<std::size_t>(to_uint("runs", *v));
    out.probe = std::move(probe);
  }

  const auto issues = check_spec(e);
  if (!issues.empty()) throw ConfigError(issues.front().field, issues.front().message);
  return out;
}

SpecDocument load_spec_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("spec", "cannot open " + path);
  return parse_spec_document(in);
}

}  // namespace mtd
