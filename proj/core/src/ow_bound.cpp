#include <cmath>

#include "gclab/info.hpp"
#include "gclab/sensitivity.hpp"

namespace gclab {

OwBoundDiagnostics ow_upper_bound(const FiniteMdp& mdp, const GoalConditionedPolicy& policy,
                                  StateIndex s0, std::size_t K, double gamma,
                                  const GoalDistribution& p_goal) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("ow_upper_bound: gamma must lie in (0, 1)");
  const std::size_t n = mdp.num_states();
  if (policy.size() != n || p_goal.size() != n) {
    throw InvalidArgument("ow_upper_bound: need one branch and one weight per goal state");
  }
  const OW f{K, gamma};
  OwBoundDiagnostics d;
  d.mutual_information =
      mutual_information(behavior_joint(mdp, policy, s0, p_goal.weights(), FirstVisitVector{K, gamma}));
  d.sensitivity = goal_sensitivity(mdp, f, policy, s0, p_goal).value;
  d.delta = first_visit_value_gap(K, gamma);

  const MixturePolicy mix = mixture_policy(policy, p_goal);
  d.eta = 1.0;
  for (StateIndex g = 0; g < n; ++g) {
    const auto avg = first_visit_marginal(first_visit_time_distribution(mdp, mix, s0, g, K), gamma);
    const auto own = first_visit_marginal(
        first_visit_time_distribution(mdp, policy.branch(g), s0, g, K), gamma);
    std::vector<double> p, q;
    for (const auto& [value, mass] : avg) {
      if (mass > 0.0) d.eta = std::min(d.eta, mass);
      double own_mass = 0.0;
      for (const auto& [v2, m2] : own) {
        if (v2 == value) own_mass = m2;
      }
      p.push_back(own_mass);
      q.push_back(mass);
    }
    d.marginal_kl += p_goal[g] * kl_divergence(p, q);
  }
  d.epsilon = d.mutual_information - d.marginal_kl;
  d.support_floor = d.eta > 0.0;
  d.finite_interference = std::isfinite(d.epsilon);
  d.stochastic_consistency =
      check_consistency_at(mdp, f, policy, s0, ConsistencyMode::kStochastic, p_goal).consistent;
  if (d.support_floor && d.finite_interference) {
    d.bound = 4.0 / (d.eta * d.delta * d.delta) * d.sensitivity + d.epsilon;
  }
  return d;
}

}  // namespace gclab
