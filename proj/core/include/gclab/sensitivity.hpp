#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gclab/formulation.hpp"
#include "gclab/mdp.hpp"
#include "gclab/policy.hpp"

namespace gclab {

/// values[g][g2] = J(s0, g, pi_{g2}).
StateGoalTable value_matrix(const FiniteMdp& mdp, const Formulation& f,
                            const GoalConditionedPolicy& policy, StateIndex s0);

struct SensitivityResult {
  /// sum_{g, g2} p(g) p(g2) gain[g][g2]
  double value = 0.0;
  /// gain[g][g2] = J(s0, g, pi_g) - J(s0, g, pi_{g2})
  StateGoalTable gain;
  StateGoalTable values;
};

SensitivityResult goal_sensitivity(const FiniteMdp& mdp, const Formulation& f,
                                   const GoalConditionedPolicy& policy, StateIndex s0,
                                   const GoalDistribution& p_goal);

enum class ConsistencyMode {
  /// J(s, g, pi_g) >= J(s, g, pi_{g2})
  kPlain,
  /// J(s, g, pi_g) >= max{1, p(g2) / p(g)} J(s, g, pi_{g2})
  kStrong,
  /// P_{pi_g}(F_g >= r) >= P_{mixture}(F_g >= r) for every attainable r (OW only)
  kStochastic,
};

struct ConsistencyViolation {
  StateIndex start = 0;
  StateIndex goal = 0;
  /// Competing branch; empty for the stochastic mode, which compares with the mixture.
  std::optional<StateIndex> other = std::nullopt;
  /// Threshold r for the stochastic mode.
  double threshold = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ConsistencyReport {
  bool consistent = true;
  std::vector<ConsistencyViolation> violations;
};

inline constexpr double kConsistencyTolerance = 1e-12;

/// Checks the condition at every start state.
ConsistencyReport check_consistency(const FiniteMdp& mdp, const Formulation& f,
                                    const StartConditionedPolicy& policy, ConsistencyMode mode,
                                    const GoalDistribution& p_goal,
                                    double tol = kConsistencyTolerance);

/// Checks the condition at a single start state.
ConsistencyReport check_consistency_at(const FiniteMdp& mdp, const Formulation& f,
                                       const GoalConditionedPolicy& policy, StateIndex s0,
                                       ConsistencyMode mode, const GoalDistribution& p_goal,
                                       double tol = kConsistencyTolerance);

struct InControlResult {
  GoalConditionedPolicy policy;
  double value = 0.0;
  /// False when the enumeration cap forced a local search; value is then a lower bound.
  bool exhaustive = true;
  std::uint64_t policies_examined = 0;
};

/// Goal-sensitivity maximizer over goal-conditioned policies.
///
/// The objective separates over branches: branch b maximizes
/// E[R_b] - sum_g p(g) E[R_g], where R_g is the per-goal return. Pe and ET
/// reduce this to a state-reward control problem; OW enumerates deterministic
/// Markov branches over the cells reachable from s0 within K steps.
InControlResult search_max_incontrol(const FiniteMdp& mdp, const Formulation& f, StateIndex s0,
                                     const GoalDistribution& p_goal);

struct ControllabilityResult {
  double value = 0.0;
  bool exact = true;
};

/// C*(s0) = max over policies of the goal-sensitivity.
ControllabilityResult objective_controllability(const FiniteMdp& mdp, const Formulation& f,
                                                StateIndex s0, const GoalDistribution& p_goal);

/// (1 / N_s) sum_a Delta(a; s), with Delta built from the successor sets on
/// which each action is the (lowest-index) most likely one.
double one_step_controllability(const FiniteMdp& mdp, StateIndex s);

struct EmpowermentOptions {
  /// Use log |reachable set| when the MDP is deterministic.
  bool allow_deterministic_shortcut = true;
  double tolerance = 1e-10;
  std::size_t max_iterations = 10'000;
  /// Zero means enumeration_cap().
  std::uint64_t cap = 0;
};

struct EmpowermentResult {
  /// Achievable rate (lower end of the Blahut-Arimoto sandwich).
  double value = 0.0;
  /// max_x KL(p(.|x) || q); equals value for the shortcut.
  double upper = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool shortcut = false;
  std::uint64_t sequences = 0;
};

/// Capacity of the channel from open-loop action sequences A_{0:K-1} to S_K.
/// At a state with fewer actions than the step alphabet, larger indices map to
/// the state's last action.
EmpowermentResult klyubin_empowerment(const FiniteMdp& mdp, StateIndex s0, std::size_t K,
                                      const EmpowermentOptions& options = {});

}  // namespace gclab
