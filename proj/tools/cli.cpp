#include "cli.hpp"

#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gclab/caps.hpp"
#include "gclab/claims.hpp"
#include "gclab/format.hpp"
#include "gclab/info.hpp"
#include "gclab/mdp_io.hpp"
#include "gclab/misl.hpp"
#include "gclab/policy_io.hpp"
#include "gclab/search.hpp"
#include "gclab/sensitivity.hpp"
#include "gclab/values.hpp"

namespace gclab::cli {
namespace {

std::string num(double v) { return format_number(v); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::uint64_t parse_u64(const std::string& token) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(token, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not an unsigned integer: " + token);
  }
  if (used != token.size() || token.front() == '-') throw InvalidArgument("not an unsigned integer: " + token);
  return v;
}

// "3", "0..9" or comma-separated mixtures of both.
std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  for (const auto& item : split(spec, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      seeds.push_back(parse_u64(item));
      continue;
    }
    const std::uint64_t lo = parse_u64(item.substr(0, dots));
    const std::uint64_t hi = parse_u64(item.substr(dots + 2));
    if (hi < lo) throw InvalidArgument("empty seed range: " + item);
    if (hi - lo >= 1'000'000) throw InvalidArgument("seed range too large: " + item);
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

std::vector<double> parse_weights(const std::string& spec) {
  std::vector<double> w;
  for (const auto& item : split(spec, ',')) {
    double v = 0.0;
    if (!parse_double(item, v)) throw InvalidArgument("not a number: " + item);
    w.push_back(v);
  }
  return w;
}

struct FormulationArgs {
  std::string name = "et";
  std::optional<double> gamma;
  std::size_t K = 1;

  void add(CLI::App* app, const std::string& default_name) {
    name = default_name;
    app->add_option("--formulation", name, "pe, et or ow")
        ->check(CLI::IsMember({"pe", "et", "ow"}))
        ->capture_default_str();
    app->add_option("--gamma", gamma, "discount; required for pe, defaults to 1 for ow");
    app->add_option("--K", K, "horizon for et and ow")->capture_default_str();
  }

  Formulation build(std::size_t n_states) const {
    Formulation f;
    if (name == "pe") {
      if (!gamma) throw InvalidArgument("--gamma is required for pe");
      f = Pe{*gamma};
    } else if (name == "et") {
      f = ET{K};
    } else {
      f = OW{K, gamma.value_or(1.0)};
    }
    validate_formulation(f, n_states);
    return f;
  }
};

GoalDistribution goal_distribution(const std::string& weights, std::size_t n) {
  if (weights.empty()) return GoalDistribution::uniform(n);
  auto w = parse_weights(weights);
  if (w.size() != n) throw InvalidArgument("--goal-weights needs one weight per state");
  return GoalDistribution(std::move(w));
}

ActionIndex first_action(const PolicyBranch& b, StateIndex s) {
  auto pi = b.action_probs(0, s);
  return static_cast<ActionIndex>(std::max_element(pi.begin(), pi.end()) - pi.begin());
}

void write_or_print(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file_atomic(path, text);
  }
}

// ---------------------------------------------------------------- env / validate

struct EnvCmd {
  std::string name;
  double eps1 = 0.08;
  double eps2 = 0.2;
  std::size_t size = 3;
  std::size_t states = 4;
  std::size_t actions = 2;
  std::size_t branching = 2;
  double slip = 0.02;
  std::optional<std::uint64_t> seed;
  std::string out_path;

  void add(CLI::App* app) {
    app->add_option("--name", name, "river, grid, star, fork, slippery, random or waiting")
        ->required()
        ->check(CLI::IsMember({"river", "grid", "star", "fork", "slippery", "random", "waiting"}));
    app->add_option("--eps1", eps1, "river jump success at s1")->capture_default_str();
    app->add_option("--eps2", eps2, "river jump success at s2")->capture_default_str();
    app->add_option("--size", size, "grid side")->capture_default_str();
    app->add_option("--states", states, "state count for star, slippery, random, waiting")->capture_default_str();
    app->add_option("--actions", actions, "actions per state for random, waiting")->capture_default_str();
    app->add_option("--branching", branching, "successors per row for random, waiting")->capture_default_str();
    app->add_option("--slip", slip, "slip probability for slippery")->capture_default_str();
    app->add_option("--seed", seed, "seed for random and waiting");
    app->add_option("--out", out_path, "output path; stdout when omitted");
  }

  int run(std::ostream& out, std::ostream&) const {
    FiniteMdp mdp;
    if (name == "river") {
      mdp = build_river_env(eps1, eps2);
    } else if (name == "grid") {
      mdp = deterministic_grid(size);
    } else if (name == "star") {
      mdp = star_mdp(states);
    } else if (name == "fork") {
      mdp = fork_mdp();
    } else if (name == "slippery") {
      mdp = slippery_complete_mdp(states, slip);
    } else {
      if (!seed) throw InvalidArgument("--seed is required for randomized environments");
      mdp = name == "random" ? random_mdp(states, actions, branching, *seed)
                             : random_waiting_mdp(states, actions, branching, *seed);
    }
    write_or_print(out_path, to_text(mdp), out);
    return kExitOk;
  }
};

struct ValidateCmd {
  std::string mdp_path;

  void add(CLI::App* app) { app->add_option("--mdp", mdp_path, "MDP file")->required(); }

  int run(std::ostream& out, std::ostream&) const {
    const FiniteMdp mdp = load_mdp(mdp_path);
    const auto pred = env_predicates(mdp);
    out << "status,ok\n"
        << "states," << mdp.num_states() << "\n"
        << "actions," << mdp.total_actions() << "\n"
        << "deterministic," << (pred.deterministic ? 1 : 0) << "\n"
        << "waiting_actions," << (pred.has_waiting_actions ? 1 : 0) << "\n";
    return kExitOk;
  }
};

// ---------------------------------------------------------------- solve

struct SolveCmd {
  std::string mdp_path;
  FormulationArgs form;
  std::string goal;
  std::string start;
  std::string policy_out;
  std::string out_path;

  void add(CLI::App* app) {
    app->add_option("--mdp", mdp_path, "MDP file")->required();
    form.add(app, "et");
    app->add_option("--goal", goal, "goal state name; all goals when omitted");
    app->add_option("--start", start, "start state name; all states when omitted");
    app->add_option("--policy-out", policy_out, "write the optimal goal-conditioned policy");
    app->add_option("--out", out_path, "write the value table as CSV");
  }

  int run(std::ostream& out, std::ostream&) const {
    const FiniteMdp mdp = load_mdp(mdp_path);
    const std::size_t n = mdp.num_states();
    const Formulation f = form.build(n);
    std::vector<StateIndex> goals;
    std::vector<StateIndex> starts;
    if (goal.empty()) {
      for (StateIndex g = 0; g < n; ++g) goals.push_back(g);
    } else {
      goals.push_back(mdp.state_index(goal));
    }
    if (start.empty()) {
      for (StateIndex s = 0; s < n; ++s) starts.push_back(s);
    } else {
      starts.push_back(mdp.state_index(start));
    }
    std::string table = "goal,start,value,first_action\n";
    std::vector<PolicyBranch> branches(n);
    for (StateIndex g : goals) {
      const auto sol = solve_optimal(mdp, f, g);
      for (StateIndex s : starts) {
        table += mdp.state_name(g) + "," + mdp.state_name(s) + "," + num(sol.values[s]) + "," +
                 mdp.action_name(s, first_action(sol.branch, s)) + "\n";
      }
      branches[g] = sol.branch;
    }
    out << table;
    if (!out_path.empty()) write_file_atomic(out_path, table);
    if (!policy_out.empty()) {
      if (goals.size() != n) throw InvalidArgument("--policy-out needs every goal; drop --goal");
      save_policy(policy_out, mdp, GoalConditionedPolicy::over_goals(mdp, std::move(branches)));
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------- sensitivity

std::string consistency_line(const ConsistencyReport& r) {
  return r.consistent ? "consistent" : "violations=" + std::to_string(r.violations.size());
}

struct SensitivityCmd {
  std::string mdp_path;
  std::string policy_path;
  FormulationArgs form;
  std::string start;
  std::string weights;

  void add(CLI::App* app) {
    app->add_option("--mdp", mdp_path, "MDP file")->required();
    app->add_option("--policy", policy_path, "goal-conditioned policy file; C* only when omitted");
    form.add(app, "et");
    app->add_option("--start", start, "start state name")->required();
    app->add_option("--goal-weights", weights, "comma-separated goal distribution; uniform when omitted");
  }

  int run(std::ostream& out, std::ostream&) const {
    const FiniteMdp mdp = load_mdp(mdp_path);
    const Formulation f = form.build(mdp.num_states());
    const StateIndex s0 = mdp.state_index(start);
    const auto p = goal_distribution(weights, mdp.num_states());
    out << "formulation," << describe(f) << "\n" << "start," << start << "\n";
    if (!policy_path.empty()) {
      const auto policy = load_policy(mdp, policy_path);
      if (policy.domain() != ConditioningDomain::kGoals) throw InvalidArgument("--policy must be goal-conditioned");
      out << "sensitivity," << num(goal_sensitivity(mdp, f, policy, s0, p).value) << "\n"
          << "performance," << num(test_time_performance(mdp, f, policy, s0, p)) << "\n"
          << "consistency_plain,"
          << consistency_line(check_consistency_at(mdp, f, policy, s0, ConsistencyMode::kPlain, p)) << "\n"
          << "consistency_strong,"
          << consistency_line(check_consistency_at(mdp, f, policy, s0, ConsistencyMode::kStrong, p)) << "\n";
      if (std::holds_alternative<OW>(f)) {
        out << "consistency_stochastic,"
            << consistency_line(check_consistency_at(mdp, f, policy, s0, ConsistencyMode::kStochastic, p))
            << "\n";
      }
    }
    const auto cstar = objective_controllability(mdp, f, s0, p);
    out << "controllability," << num(cstar.value) << "\n" << "controllability_exact," << (cstar.exact ? 1 : 0) << "\n";
    return kExitOk;
  }
};

// ---------------------------------------------------------------- mi / bounds

std::string bounds_table(const FiniteMdp& mdp, const GoalConditionedPolicy* policy, StateIndex s0,
                         std::size_t K, double gamma, const GoalDistribution& p) {
  const std::size_t n = mdp.num_states();
  std::vector<std::pair<Formulation, BehaviorSpec>> rows;
  if (gamma < 1.0) rows.push_back({Pe{gamma}, SGammaPlus{gamma}});
  rows.push_back({ET{K}, SK{K}});
  rows.push_back({OW{K, gamma}, FirstVisitVector{K, gamma}});
  std::string table = "formulation,sensitivity,performance,mi,phi_down,phi_up,pinsker\n";
  for (const auto& [f, spec] : rows) {
    GoalConditionedPolicy optimal;
    if (policy == nullptr) {
      std::vector<PolicyBranch> branches;
      for (StateIndex g = 0; g < n; ++g) branches.push_back(solve_optimal(mdp, f, g).branch);
      optimal = GoalConditionedPolicy::over_goals(mdp, std::move(branches));
    }
    const GoalConditionedPolicy& pi = policy != nullptr ? *policy : optimal;
    const double C = goal_sensitivity(mdp, f, pi, s0, p).value;
    const double J = test_time_performance(mdp, f, pi, s0, p);
    const double I = goal_behavior_mi(mdp, pi, s0, p, spec);
    table += describe(f) + "," + num(C) + "," + num(J) + "," + num(I) + ",";
    if (std::holds_alternative<OW>(f)) {
      table += ",," + num(ow_mi_lower_bound(C));
    } else if (p.is_uniform()) {
      const double x = 1.0 / static_cast<double>(n) + C;
      table += num(phi_down(n, x)) + "," + num(phi_up(n, x)) + ",";
    } else {
      table += num(phi_down_general(p, J)) + "," + num(phi_up_general(p, J)) + ",";
    }
    table += "\n";
  }
  return table;
}

struct MiCmd {
  std::string mdp_path;
  std::string policy_path;
  std::string start;
  std::size_t K = 2;
  double gamma = 0.9;
  std::string weights;
  std::string out_path;

  void add(CLI::App* app) {
    app->add_option("--mdp", mdp_path, "MDP file")->required();
    app->add_option("--policy", policy_path, "goal- or skill-conditioned policy file")->required();
    app->add_option("--start", start, "start state name")->required();
    app->add_option("--K", K, "behavior horizon")->capture_default_str();
    app->add_option("--gamma", gamma, "discount for occupancy and first-visit behavior")->capture_default_str();
    app->add_option("--goal-weights", weights, "comma-separated goal distribution; uniform when omitted");
    app->add_option("--out", out_path, "write the bounds table as CSV");
  }

  int run(std::ostream& out, std::ostream&) const {
    const FiniteMdp mdp = load_mdp(mdp_path);
    const auto policy = load_policy(mdp, policy_path);
    const StateIndex s0 = mdp.state_index(start);
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("--gamma must lie in [0, 1]");
    if (K < 1) throw InvalidArgument("--K must be at least 1");
    std::vector<std::pair<std::string, BehaviorSpec>> specs;
    if (gamma < 1.0) specs.push_back({"s_gamma_plus", SGammaPlus{gamma}});
    specs.push_back({"s_K", SK{K}});
    specs.push_back({"first_visit", FirstVisitVector{K, gamma}});
    specs.push_back({"state_path", StatePathK{K}});
    specs.push_back({"trajectory", TrajectoryK{K}});
    const bool skills = policy.domain() == ConditioningDomain::kSkills;
    out << (skills ? "behavior,skill_mi\n" : "behavior,goal_mi\n");
    std::optional<GoalDistribution> p;
    if (!skills) p = goal_distribution(weights, mdp.num_states());
    for (const auto& [name, spec] : specs) {
      const double I = skills ? misl_objective(mdp, policy, s0, SkillPrior::uniform(policy.size()), spec)
                              : goal_behavior_mi(mdp, policy, s0, *p, spec);
      out << name << "," << num(I) << "\n";
    }
    if (!skills) {
      const std::string table = bounds_table(mdp, &policy, s0, K, gamma, *p);
      out << "\n" << table;
      if (!out_path.empty()) write_file_atomic(out_path, table);
    }
    return kExitOk;
  }
};

struct BoundsCmd {
  std::string mdp_path;
  std::string policy_path;
  std::string start;
  std::size_t K = 2;
  double gamma = 0.9;
  std::string weights;
  std::string out_path;

  void add(CLI::App* app) {
    app->add_option("--mdp", mdp_path, "MDP file")->required();
    app->add_option("--policy", policy_path, "goal-conditioned policy; per-formulation optima when omitted");
    app->add_option("--start", start, "start state name")->required();
    app->add_option("--K", K, "horizon for et and ow")->capture_default_str();
    app->add_option("--gamma", gamma, "discount for pe and ow")->capture_default_str();
    app->add_option("--goal-weights", weights, "comma-separated goal distribution; uniform when omitted");
    app->add_option("--out", out_path, "write the table as CSV");
  }

  int run(std::ostream& out, std::ostream&) const {
    const FiniteMdp mdp = load_mdp(mdp_path);
    const StateIndex s0 = mdp.state_index(start);
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("--gamma must lie in [0, 1]");
    const auto p = goal_distribution(weights, mdp.num_states());
    std::optional<GoalConditionedPolicy> policy;
    if (!policy_path.empty()) {
      policy = load_policy(mdp, policy_path);
      if (policy->domain() != ConditioningDomain::kGoals) throw InvalidArgument("--policy must be goal-conditioned");
    }
    const std::string table = bounds_table(mdp, policy ? &*policy : nullptr, s0, K, gamma, p);
    write_or_print(out_path, table, out);
    return kExitOk;
  }
};

// ---------------------------------------------------------------- search

struct SearchCmd {
  std::string target;
  std::optional<std::uint64_t> seed;
  double budget = 60.0;
  std::size_t max_states = 5;
  std::uint64_t max_instances = 200000;
  std::string out_path;

  void add(CLI::App* app) {
    app->add_option("--target", target, "formulation-disagreement or ow-control-vs-optimal")
        ->required()
        ->check(CLI::IsMember({"formulation-disagreement", "ow-control-vs-optimal"}));
    app->add_option("--seed", seed, "search seed")->required();
    app->add_option("--budget", budget, "time budget in seconds")->capture_default_str();
    app->add_option("--max-states", max_states, "largest instance size")->capture_default_str();
    app->add_option("--max-instances", max_instances, "instance budget")->capture_default_str();
    app->add_option("--out", out_path, "write the witness MDP");
  }

  int run(std::ostream& out, std::ostream&) const {
    SearchConfig config;
    config.time_budget_seconds = budget;
    config.max_states = max_states;
    config.max_instances = max_instances;
    const auto t = target == "formulation-disagreement" ? SearchTarget::kFormulationDisagreement
                                                        : SearchTarget::kOwControlVsOptimal;
    const auto r = counterexample_search(t, config, *seed);
    out << "found," << (r.found ? 1 : 0) << "\n"
        << "instances," << r.instances_examined << "\n"
        << "report," << r.report << "\n";
    if (r.disagreement) {
      const auto& d = *r.disagreement;
      out << "formulation,value_pe_branch,value_et_branch,value_ow_branch\n";
      const char* names[] = {"pe", "et", "ow"};
      for (int i = 0; i < 3; ++i) {
        out << names[i] << "," << num(d.values[i][0]) << "," << num(d.values[i][1]) << "," << num(d.values[i][2])
            << "\n";
      }
    }
    if (r.control) {
      const auto& c = *r.control;
      out << "policy,performance,sensitivity\n"
          << "optimal," << num(c.j_optimal) << "," << num(c.c_optimal) << "\n"
          << "incontrol," << num(c.j_incontrol) << "," << num(c.c_incontrol) << "\n";
    }
    if (r.witness && !out_path.empty()) save_mdp(out_path, *r.witness);
    return kExitOk;
  }
};

// ---------------------------------------------------------------- misl

struct MislCmd {
  std::string mdp_path;
  std::string start;
  std::size_t skills = 2;
  std::string behavior = "s-k";
  std::size_t K = 1;
  double gamma = 0.9;
  std::string mode = "ascent";
  std::optional<std::uint64_t> seed;
  std::size_t iterations = 100;
  FormulationArgs form;
  std::string policy_out;
  std::string trace_out;

  void add(CLI::App* app) {
    app->add_option("--mdp", mdp_path, "MDP file")->required();
    app->add_option("--start", start, "start state name")->required();
    app->add_option("--skills", skills, "number of skills")->capture_default_str();
    app->add_option("--behavior", behavior, "s-gamma-plus, s-k, first-visit or state-path")
        ->check(CLI::IsMember({"s-gamma-plus", "s-k", "first-visit", "state-path"}))
        ->capture_default_str();
    app->add_option("--behavior-K", K, "behavior horizon")->capture_default_str();
    app->add_option("--behavior-gamma", gamma, "behavior discount")->capture_default_str();
    app->add_option("--mode", mode, "exhaustive or ascent")
        ->check(CLI::IsMember({"exhaustive", "ascent"}))
        ->capture_default_str();
    app->add_option("--seed", seed, "seed for the ascent start")->required();
    app->add_option("--iterations", iterations, "maximum ascent sweeps")->capture_default_str();
    form.add(app, "et");
    app->add_option("--policy-out", policy_out, "write the skill policy");
    app->add_option("--trace-out", trace_out, "write the objective trace as CSV");
  }

  int run(std::ostream& out, std::ostream&) const {
    const FiniteMdp mdp = load_mdp(mdp_path);
    const StateIndex s0 = mdp.state_index(start);
    const std::size_t n = mdp.num_states();
    BehaviorSpec spec = SK{K};
    if (behavior == "s-gamma-plus") spec = SGammaPlus{gamma};
    if (behavior == "first-visit") spec = FirstVisitVector{K, gamma};
    if (behavior == "state-path") spec = StatePathK{K};
    const Formulation f = form.build(n);
    MislConfig config;
    config.mode = mode == "exhaustive" ? MislMode::kExhaustive : MislMode::kAscent;
    config.seed = *seed;
    config.iterations = iterations;
    const auto r = optimize_misl_tabular(mdp, spec, skills, s0, config);
    const auto map = consistent_mapping(mdp, f, r.policy);
    const auto downstream = compose_downstream_by_start(mdp, r.policy, map).at(s0);
    const auto p = GoalDistribution::uniform(n);
    const auto identity = verify_mi_identity(mdp, r.policy, map, s0, p, spec);
    const auto p_f = downstream_skill_distribution(map, p, s0);
    const auto gap = mi_gap_bound(p_f.probs, skills, identity_outcomes(mdp, spec));
    out << "skill_mi," << num(r.objective) << "\n"
        << "evaluations," << r.evaluations << "\n"
        << "downstream_formulation," << describe(f) << "\n"
        << "downstream_performance," << num(test_time_performance(mdp, f, downstream, s0, p)) << "\n"
        << "downstream_sensitivity," << num(goal_sensitivity(mdp, f, downstream, s0, p).value) << "\n"
        << "goal_mi," << num(identity.lhs) << "\n"
        << "skill_mi_under_p_f," << num(identity.rhs) << "\n"
        << "gap," << num(std::fabs(r.objective - identity.lhs)) << "\n"
        << "gap_bound," << num(gap.bound) << "\n";
    if (!policy_out.empty()) save_policy(policy_out, mdp, r.policy);
    if (!trace_out.empty()) {
      std::string csv = "step,objective\n";
      for (std::size_t i = 0; i < r.trace.size(); ++i) csv += std::to_string(i) + "," + num(r.trace[i]) + "\n";
      write_file_atomic(trace_out, csv);
    }
    return kExitOk;
  }

  // Size of the behavior alphabet entering the gap bound.
  static std::size_t identity_outcomes(const FiniteMdp& mdp, const BehaviorSpec& spec) {
    const std::size_t n = mdp.num_states();
    if (std::holds_alternative<SK>(spec) || std::holds_alternative<SGammaPlus>(spec)) return n;
    if (const auto* fv = std::get_if<FirstVisitVector>(&spec)) return saturating_pow(fv->K + 1, n);
    return saturating_pow(n, std::get<StatePathK>(spec).K);
  }
};

// ---------------------------------------------------------------- verify

struct VerifyCmd {
  std::string claims = "all";
  std::string seeds;
  std::string sizes = "4";
  std::size_t actions = 2;
  std::size_t branching = 2;
  std::string out_path;

  void add(CLI::App* app) {
    app->add_option("--claims", claims, "all or a comma-separated list of claim ids")->capture_default_str();
    app->add_option("--seeds", seeds, "seeds such as 0..9 or 1,4,7")->required();
    app->add_option("--sizes", sizes, "comma-separated state counts")->capture_default_str();
    app->add_option("--actions", actions, "actions per state")->capture_default_str();
    app->add_option("--branching", branching, "successors per row")->capture_default_str();
    app->add_option("--out", out_path, "report CSV path; stdout when omitted");
  }

  int run(std::ostream& out, std::ostream& err) const {
    SuiteConfig config;
    if (claims != "all") config.claims = split(claims, ',');
    for (const auto& id : config.claims) (void)claim_info(id);
    config.seeds = parse_seeds(seeds);
    config.sizes.clear();
    for (const auto& s : split(sizes, ',')) config.sizes.push_back(parse_u64(s));
    if (config.sizes.empty()) throw InvalidArgument("--sizes is empty");
    config.n_actions = actions;
    config.branching = branching;
    const auto report = random_suite(config);
    std::ostream& summary = out_path.empty() ? err : out;
    if (out_path.empty()) {
      out << report_csv(report);
    } else {
      write_report(out_path, report);
    }
    const auto c = report.counts();
    summary << "checks " << report.checks.size() << ": pass " << c.pass << ", bound-checked " << c.bound_checked
            << ", skipped " << c.skipped << ", fail " << c.fail << "\n";
    for (const auto& check : report.checks) {
      if (check.status == ClaimStatus::kFail) {
        err << "FAIL " << check.claim_id << " seed " << check.seed << " " << check.instance_id << ": "
            << check.detail << "\n";
      }
    }
    return report.any_failed() ? kExitClaimFailure : kExitOk;
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite goal-conditioned MDP toolkit"};
  app.name("gclab");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "expand every subcommand");
  std::optional<std::uint64_t> cap;
  app.add_option("--cap", cap, "enumeration cap; overrides GCLAB_CAP");

  EnvCmd env;
  ValidateCmd validate;
  SolveCmd solve;
  SensitivityCmd sensitivity;
  MiCmd mi;
  BoundsCmd bounds;
  SearchCmd search;
  MislCmd misl;
  VerifyCmd verify;

  std::vector<std::pair<CLI::App*, std::function<int(std::ostream&, std::ostream&)>>> commands;
  auto reg = [&](auto& cmd, const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    cmd.add(sub);
    commands.emplace_back(sub, [&cmd](std::ostream& o, std::ostream& e) { return cmd.run(o, e); });
  };
  reg(env, "env", "write a built-in environment in mdp v1 form");
  reg(validate, "validate", "load and validate an MDP file");
  reg(solve, "solve", "optimal value table and first actions per goal");
  reg(sensitivity, "sensitivity", "goal-sensitivity, controllability and consistency");
  reg(mi, "mi", "goal or skill behavior mutual information with bounds");
  reg(bounds, "bounds", "per-formulation sensitivity, matching MI and bounds");
  reg(search, "search", "counterexample search over small MDPs");
  reg(misl, "misl", "tabular skill pretraining and downstream evaluation");
  reg(verify, "verify", "run the claim registry and write the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  if (cap) ::setenv("GCLAB_CAP", std::to_string(*cap).c_str(), 1);
  for (auto& [sub, run] : commands) {
    if (!sub->parsed()) continue;
    try {
      return run(out, err);
    } catch (const CapExceeded& e) {
      err << "error: " << e.what() << " (raise --cap or GCLAB_CAP)\n";
      return kExitInputError;
    } catch (const ParseError& e) {
      err << "error: " << e.what() << "\n";
      return kExitInputError;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitInputError;
    }
  }
  return kExitInputError;
}

}  // namespace gclab::cli
