#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gclab/formulation.hpp"
#include "gclab/info.hpp"
#include "gclab/mdp.hpp"
#include "gclab/policy.hpp"

namespace gclab {

/// Prior over skills used by the skill-behavior objective.
class SkillPrior {
 public:
  explicit SkillPrior(std::vector<double> probs);
  static SkillPrior uniform(std::size_t n_skills);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t z) const { return probs_[z]; }
  const std::vector<double>& probs() const noexcept { return probs_; }

 private:
  std::vector<double> probs_;
};

/// I(Z; S') with Z drawn from the prior.
double misl_objective(const FiniteMdp& mdp, const GoalConditionedPolicy& skill_policy,
                      StateIndex s0, const SkillPrior& prior, const BehaviorSpec& spec);

/// p_f(z) = sum_g p_goal(g) 1{z = f(g)} for a plain map.
DiscreteDistribution downstream_skill_distribution(const GoalToSkillMap& f,
                                                   const GoalDistribution& p_goal);

/// The same distribution at start state s0; valid for both map modes.
DiscreteDistribution downstream_skill_distribution(const GoalToSkillMap& f,
                                                   const GoalDistribution& p_goal, StateIndex s0);

struct GapBoundResult {
  double delta = 0.0;
  double bound = 0.0;
  bool applicable = false;
};

/// delta = TV(p_f, uniform over n_z), bound = h(delta) + delta log(n'^2 (n' - 1)).
GapBoundResult mi_gap_bound(std::span<const double> p_f, std::size_t n_z, std::size_t n_sprime);

/// f(s0, g) = argmax_z J(s0, g, skill branch z), lowest index on ties.
GoalToSkillMap consistent_mapping(const FiniteMdp& mdp, const Formulation& formulation,
                                  const GoalConditionedPolicy& skill_policy);

struct MiIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};

/// lhs = I(G; S') of the composed policy, rhs = I(Z; S') with Z ~ p_f.
MiIdentity verify_mi_identity(const FiniteMdp& mdp, const GoalConditionedPolicy& skill_policy,
                              const GoalToSkillMap& f, StateIndex s0,
                              const GoalDistribution& p_goal, const BehaviorSpec& spec);

enum class MislMode { kExhaustive, kAscent };

struct MislConfig {
  MislMode mode = MislMode::kAscent;
  std::uint64_t seed = 0;
  /// Maximum number of full sweeps in ascent mode.
  std::size_t iterations = 100;
};

struct MislResult {
  GoalConditionedPolicy policy;
  double objective = 0.0;
  /// Objective after the start and after every accepted move (ascent mode).
  std::vector<double> trace;
  std::uint64_t evaluations = 0;
};

/// Maximizes I(Z; S') under a uniform prior over deterministic skill branches.
/// Only cells reachable from s0 before the behavior horizon are free; others
/// take action 0. Exhaustive mode throws CapExceeded above the enumeration cap.
MislResult optimize_misl_tabular(const FiniteMdp& mdp, const BehaviorSpec& spec, std::size_t n_z,
                                 StateIndex s0, const MislConfig& config);

}  // namespace gclab
