#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "gclab/formulation.hpp"
#include "gclab/mdp.hpp"
#include "gclab/policy.hpp"

namespace gclab {

enum class ValueMethod {
  kLinearSolve,
  kBackwardInduction,
  kForwardPropagation,
  kTruncatedSeries,
};

struct ValueResult {
  double value = 0.0;
  ValueMethod method = ValueMethod::kForwardPropagation;
  /// Upper bound on the neglected remainder; zero for exact methods.
  double tail_bound = 0.0;
};

/// Law of S_{gamma,+} = (1 - gamma) sum_{t>=1} gamma^(t-1) P_t.
struct SGammaPlus {
  double gamma = 0.0;
};

/// Law of S_K.
struct SK {
  std::size_t K = 1;
};

using OccupancySpec = std::variant<SGammaPlus, SK>;

/// Distribution over states of the requested occupancy from s0.
std::vector<double> behavior_distribution(const FiniteMdp& mdp, const PolicyBranch& branch,
                                          StateIndex s0, const OccupancySpec& spec);

/// E[gamma^(T_g - 1) 1{T_g <= K}] with T_g = min{t >= 1 : S_t = g}; 0^0 = 1.
ValueResult first_visit_value(const FiniteMdp& mdp, const PolicyBranch& branch, StateIndex s0,
                              StateIndex g, std::size_t K, double gamma);

/// P(T_g = t) for t = 1..K, stored at index t - 1.
std::vector<double> first_visit_time_distribution(const FiniteMdp& mdp, const PolicyBranch& branch,
                                                  StateIndex s0, StateIndex g, std::size_t K);

/// Same law under the latent-goal mixture.
std::vector<double> first_visit_time_distribution(const FiniteMdp& mdp,
                                                  const MixturePolicy& mixture, StateIndex s0,
                                                  StateIndex g, std::size_t K);

/// E[gamma^(T_g - 1) 1{T_g < inf}] for gamma in [0, 1), solved exactly.
ValueResult first_visit_value_infinite(const FiniteMdp& mdp, const PolicyBranch& branch,
                                       StateIndex s0, StateIndex g, double gamma);

/// J(s0, g, branch) under any formulation, computed forward from s0.
ValueResult eval_J(const FiniteMdp& mdp, const Formulation& f, const PolicyBranch& branch,
                   StateIndex s0, StateIndex g);

/// J(s0, g, pi_g) using branch g of a goal-conditioned policy.
ValueResult eval_J(const FiniteMdp& mdp, const Formulation& f, const GoalConditionedPolicy& policy,
                   StateIndex s0, StateIndex g);

/// J(s0, g, branch) for every goal g at once (forward route).
std::vector<double> goal_values(const FiniteMdp& mdp, const Formulation& f,
                                const PolicyBranch& branch, StateIndex s0);

/// J(s, g, branch) for every start state s at once (backward route).
std::vector<double> branch_values(const FiniteMdp& mdp, const Formulation& f,
                                  const PolicyBranch& branch, StateIndex g);

/// sum_g p(g) J(s0, g, pi_g)
double test_time_performance(const FiniteMdp& mdp, const Formulation& f,
                             const GoalConditionedPolicy& policy, StateIndex s0,
                             const GoalDistribution& p_goal);

struct OptimalSolution {
  PolicyBranch branch;
  /// Optimal value from every start state at t = 0.
  std::vector<double> values;
  /// Q-values at t = 0, indexed [state][action].
  std::vector<std::vector<double>> first_step_q;
};

/// Optimal branch for goal g under Pe, ET or OW; ties go to the lowest action index.
OptimalSolution solve_optimal(const FiniteMdp& mdp, const Formulation& f, StateIndex g);

/// Maximizes E[sum_t (1-gamma) gamma^(t-1) r(S_t)] (Pe) or E[r(S_K)] (ET)
/// for an arbitrary state reward r.
OptimalSolution maximize_state_reward(const FiniteMdp& mdp, const Formulation& f,
                                      const std::vector<double>& reward);

/// Cesaro limit of P(S_t = g) under the branch.
double stationary_occupancy(const FiniteMdp& mdp, const PolicyBranch& branch, StateIndex g,
                            StateIndex s0);

/// sum_{t>=1} (1 - gamma) gamma^(t-1) J_ET(t), truncated once gamma^T <= tol.
ValueResult geometric_et_value(const FiniteMdp& mdp, const PolicyBranch& branch, StateIndex s0,
                               StateIndex g, double gamma, double tol = 1e-13);

struct HittingMoments {
  std::vector<double> mean;            ///< E[T_g] per start state
  std::vector<double> second_moment;   ///< E[T_g^2] per start state
};

/// Moments of T_g under a stationary branch. Every state must reach g with
/// probability one under the branch; throws InvalidArgument otherwise.
HittingMoments hitting_time_moments(const FiniteMdp& mdp, const PolicyBranch& branch, StateIndex g);

/// Greedy tie tolerance used by all solvers.
inline constexpr double kTieTolerance = 1e-12;

}  // namespace gclab
