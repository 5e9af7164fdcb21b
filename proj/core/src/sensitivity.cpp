#include "gclab/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gclab/caps.hpp"
#include "gclab/values.hpp"

namespace gclab {
namespace {

void check_goal_policy(const FiniteMdp& mdp, const GoalConditionedPolicy& policy,
                       const GoalDistribution& p_goal, const char* what) {
  if (policy.size() != mdp.num_states()) {
    throw InvalidArgument(std::string(what) + ": policy must have one branch per goal state");
  }
  if (p_goal.size() != mdp.num_states()) {
    throw InvalidArgument(std::string(what) + ": goal distribution must cover every state");
  }
}

std::vector<std::vector<bool>> free_cells(const FiniteMdp& mdp, StateIndex s0, std::size_t K) {
  auto reach = reachable_by_time(mdp, s0, K);
  std::vector<std::vector<bool>> free(K + 1, std::vector<bool>(mdp.num_states(), false));
  for (std::size_t t = 0; t < K; ++t) free[t] = reach[t];
  return free;
}

// sum_g p(g) J_g for a branch; returns the per-goal values too.
double branch_objective(const FiniteMdp& mdp, const Formulation& f, const PolicyBranch& branch,
                        StateIndex s0, StateIndex b, const GoalDistribution& p_goal) {
  const auto J = goal_values(mdp, f, branch, s0);
  double mean = 0.0;
  for (StateIndex g = 0; g < J.size(); ++g) mean += p_goal[g] * J[g];
  return J[b] - mean;
}

PolicyBranch local_ascent(const FiniteMdp& mdp, const Formulation& f, StateIndex s0, StateIndex b,
                          const GoalDistribution& p_goal, std::size_t K, std::uint64_t& examined) {
  const auto free = free_cells(mdp, s0, K);
  const PolicyBranch start = solve_optimal(mdp, f, b).branch;
  std::vector<std::vector<ActionIndex>> choice(K + 1, std::vector<ActionIndex>(mdp.num_states(), 0));
  for (std::size_t t = 0; t < K; ++t) {
    for (StateIndex s = 0; s < mdp.num_states(); ++s) {
      auto pi = start.action_probs(t, s);
      choice[t][s] = static_cast<ActionIndex>(std::max_element(pi.begin(), pi.end()) - pi.begin());
    }
  }
  double best = branch_objective(mdp, f, PolicyBranch::deterministic(mdp, K, choice), s0, b, p_goal);
  ++examined;
  for (bool improved = true; improved;) {
    improved = false;
    for (std::size_t t = 0; t < K; ++t) {
      for (StateIndex s = 0; s < mdp.num_states(); ++s) {
        if (!free[t][s]) continue;
        for (ActionIndex a = 0; a < mdp.num_actions(s); ++a) {
          if (a == choice[t][s]) continue;
          const ActionIndex keep = choice[t][s];
          choice[t][s] = a;
          const double v =
              branch_objective(mdp, f, PolicyBranch::deterministic(mdp, K, choice), s0, b, p_goal);
          ++examined;
          if (v > best + kTieTolerance) {
            best = v;
            improved = true;
          } else {
            choice[t][s] = keep;
          }
        }
      }
    }
  }
  return PolicyBranch::deterministic(mdp, K, choice);
}

}  // namespace

StateGoalTable value_matrix(const FiniteMdp& mdp, const Formulation& f,
                            const GoalConditionedPolicy& policy, StateIndex s0) {
  const std::size_t n = mdp.num_states();
  if (policy.size() != n) throw InvalidArgument("value_matrix: one branch per goal state required");
  StateGoalTable values(n, std::vector<double>(n, 0.0));
  for (StateIndex g2 = 0; g2 < n; ++g2) {
    const auto col = goal_values(mdp, f, policy.branch(g2), s0);
    for (StateIndex g = 0; g < n; ++g) values[g][g2] = col[g];
  }
  return values;
}

SensitivityResult goal_sensitivity(const FiniteMdp& mdp, const Formulation& f,
                                   const GoalConditionedPolicy& policy, StateIndex s0,
                                   const GoalDistribution& p_goal) {
  check_goal_policy(mdp, policy, p_goal, "goal_sensitivity");
  SensitivityResult out;
  out.values = value_matrix(mdp, f, policy, s0);
  const std::size_t n = mdp.num_states();
  out.gain.assign(n, std::vector<double>(n, 0.0));
  for (StateIndex g = 0; g < n; ++g) {
    for (StateIndex g2 = 0; g2 < n; ++g2) {
      out.gain[g][g2] = out.values[g][g] - out.values[g][g2];
      out.value += p_goal[g] * p_goal[g2] * out.gain[g][g2];
    }
  }
  return out;
}

ConsistencyReport check_consistency_at(const FiniteMdp& mdp, const Formulation& f,
                                       const GoalConditionedPolicy& policy, StateIndex s0,
                                       ConsistencyMode mode, const GoalDistribution& p_goal,
                                       double tol) {
  check_goal_policy(mdp, policy, p_goal, "check_consistency");
  const std::size_t n = mdp.num_states();
  ConsistencyReport report;
  if (mode == ConsistencyMode::kStochastic) {
    const auto* ow = std::get_if<OW>(&f);
    if (ow == nullptr) throw InvalidArgument("stochastic consistency is defined for ow only");
    validate_formulation(f, n);
    const MixturePolicy mix = mixture_policy(policy, p_goal);
    std::vector<double> thresholds;
    for (std::size_t j = 0; j < ow->K; ++j) thresholds.push_back(std::pow(ow->gamma, static_cast<double>(j)));
    for (StateIndex g = 0; g < n; ++g) {
      const auto own = first_visit_time_distribution(mdp, policy.branch(g), s0, g, ow->K);
      const auto avg = first_visit_time_distribution(mdp, mix, s0, g, ow->K);
      for (double r : thresholds) {
        if (r <= 0.0) continue;
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t t = 1; t <= ow->K; ++t) {
          if (std::pow(ow->gamma, static_cast<double>(t - 1)) >= r) {
            lhs += own[t - 1];
            rhs += avg[t - 1];
          }
        }
        if (lhs < rhs - tol) {
          report.consistent = false;
          report.violations.push_back({s0, g, std::nullopt, r, lhs, rhs});
        }
      }
    }
    return report;
  }
  const StateGoalTable values = value_matrix(mdp, f, policy, s0);
  for (StateIndex g = 0; g < n; ++g) {
    for (StateIndex g2 = 0; g2 < n; ++g2) {
      if (g2 == g) continue;
      const double factor =
          mode == ConsistencyMode::kStrong ? std::max(1.0, p_goal[g2] / p_goal[g]) : 1.0;
      const double lhs = values[g][g];
      const double rhs = factor * values[g][g2];
      if (lhs < rhs - tol) {
        report.consistent = false;
        report.violations.push_back({s0, g, g2, 0.0, lhs, rhs});
      }
    }
  }
  return report;
}

ConsistencyReport check_consistency(const FiniteMdp& mdp, const Formulation& f,
                                    const StartConditionedPolicy& policy, ConsistencyMode mode,
                                    const GoalDistribution& p_goal, double tol) {
  if (policy.num_states() != mdp.num_states()) {
    throw InvalidArgument("check_consistency: need a policy for every start state");
  }
  ConsistencyReport report;
  for (StateIndex s0 = 0; s0 < mdp.num_states(); ++s0) {
    auto part = check_consistency_at(mdp, f, policy.at(s0), s0, mode, p_goal, tol);
    if (!part.consistent) report.consistent = false;
    report.violations.insert(report.violations.end(), part.violations.begin(), part.violations.end());
  }
  return report;
}

InControlResult search_max_incontrol(const FiniteMdp& mdp, const Formulation& f, StateIndex s0,
                                     const GoalDistribution& p_goal) {
  const std::size_t n = mdp.num_states();
  if (p_goal.size() != n) throw InvalidArgument("search_max_incontrol: goal distribution size");
  if (s0 >= n) throw InvalidArgument("search_max_incontrol: bad start state");
  validate_formulation(f, n);
  InControlResult out;
  std::vector<PolicyBranch> branches;
  if (std::holds_alternative<Pe>(f) || std::holds_alternative<ET>(f)) {
    for (StateIndex b = 0; b < n; ++b) {
      std::vector<double> reward(n);
      for (StateIndex x = 0; x < n; ++x) reward[x] = (x == b ? 1.0 : 0.0) - p_goal[x];
      auto sol = maximize_state_reward(mdp, f, reward);
      out.value += p_goal[b] * sol.values[s0];
      branches.push_back(std::move(sol.branch));
    }
    out.policy = GoalConditionedPolicy::over_goals(mdp, std::move(branches));
    return out;
  }
  const auto* ow = std::get_if<OW>(&f);
  if (ow == nullptr) throw InvalidArgument("search_max_incontrol: unsupported formulation");
  const std::size_t K = ow->K;
  const auto free = free_cells(mdp, s0, K);
  const std::uint64_t cap = enumeration_cap();
  if (count_masked_policies(mdp, free) <= cap) {
    std::vector<double> best(n, -std::numeric_limits<double>::infinity());
    branches.assign(n, PolicyBranch{});
    for_each_masked_policy(mdp, K, free, cap, [&](const PolicyBranch& cand) {
      ++out.policies_examined;
      const auto J = goal_values(mdp, f, cand, s0);
      double mean = 0.0;
      for (StateIndex g = 0; g < n; ++g) mean += p_goal[g] * J[g];
      for (StateIndex b = 0; b < n; ++b) {
        const double v = J[b] - mean;
        if (v > best[b] + kTieTolerance) {
          best[b] = v;
          branches[b] = cand;
        }
      }
    });
  } else {
    out.exhaustive = false;
    for (StateIndex b = 0; b < n; ++b) {
      branches.push_back(local_ascent(mdp, f, s0, b, p_goal, K, out.policies_examined));
    }
  }
  for (StateIndex b = 0; b < n; ++b) {
    out.value += p_goal[b] * branch_objective(mdp, f, branches[b], s0, b, p_goal);
  }
  out.policy = GoalConditionedPolicy::over_goals(mdp, std::move(branches));
  return out;
}

ControllabilityResult objective_controllability(const FiniteMdp& mdp, const Formulation& f,
                                                StateIndex s0, const GoalDistribution& p_goal) {
  const auto r = search_max_incontrol(mdp, f, s0, p_goal);
  return {r.value, r.exhaustive};
}

double one_step_controllability(const FiniteMdp& mdp, StateIndex s) {
  if (s >= mdp.num_states()) throw InvalidArgument("one_step_controllability: bad state");
  const std::size_t n = mdp.num_states();
  const std::size_t na = mdp.num_actions(s);
  std::vector<ActionIndex> owner(n, 0);
  for (StateIndex j = 0; j < n; ++j) {
    double best = -1.0;
    for (ActionIndex a = 0; a < na; ++a) {
      if (mdp.prob(s, a, j) > best) {
        best = mdp.prob(s, a, j);
        owner[j] = a;
      }
    }
  }
  double total = 0.0;
  for (ActionIndex a = 0; a < na; ++a) {
    double delta = 0.0;
    for (ActionIndex a2 = 0; a2 < na; ++a2) {
      for (StateIndex j = 0; j < n; ++j) {
        if (owner[j] == a) delta += std::fabs(mdp.prob(s, a, j) - mdp.prob(s, a2, j));
      }
    }
    total += delta / static_cast<double>(na);
  }
  return total / static_cast<double>(n);
}

}  // namespace gclab
