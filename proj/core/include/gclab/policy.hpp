#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gclab/mdp.hpp"

namespace gclab {

/// One branch of a conditioned policy: `horizon` time-indexed slots followed
/// by a stationary tail slot used for every t >= horizon.
class PolicyBranch {
 public:
  PolicyBranch() = default;

  /// probs[slot][state] holds one probability per action; probs.size() must
  /// equal horizon + 1 (the last slot is the tail).
  PolicyBranch(const FiniteMdp& mdp, std::size_t horizon,
               const std::vector<std::vector<std::vector<double>>>& probs);

  /// choices[slot][state] is the chosen action; choices.size() == horizon + 1.
  static PolicyBranch deterministic(const FiniteMdp& mdp, std::size_t horizon,
                                    const std::vector<std::vector<ActionIndex>>& choices);
  static PolicyBranch stationary(const FiniteMdp& mdp, const std::vector<ActionIndex>& choices);
  static PolicyBranch uniform(const FiniteMdp& mdp);
  /// Independent uniform-simplex draws for every (slot, state).
  static PolicyBranch random(const FiniteMdp& mdp, std::size_t horizon, std::uint64_t seed);

  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t num_states() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  bool is_stationary() const noexcept { return horizon_ == 0; }
  bool is_deterministic() const;

  std::span<const double> action_probs(std::size_t t, StateIndex s) const;

  /// Induced state chain at time t: P_t(s, s') = sum_a pi_t(a|s) p(s'|s,a).
  std::vector<std::vector<double>> transition_matrix(const FiniteMdp& mdp, std::size_t t) const;

  /// One step of the state law: returns d' with d'(j) = sum_s d(s) P_t(s, j).
  std::vector<double> step(const FiniteMdp& mdp, std::size_t t,
                           std::span<const double> law) const;

  bool operator==(const PolicyBranch&) const = default;

 private:
  std::size_t horizon_ = 0;
  std::vector<std::size_t> offsets_;  // per state, into a slot
  std::vector<double> probs_;         // (horizon + 1) slots of offsets_.back() entries
};

enum class ConditioningDomain { kGoals, kSkills };

/// A family of branches indexed by a goal state or a skill.
class GoalConditionedPolicy {
 public:
  GoalConditionedPolicy() = default;
  GoalConditionedPolicy(ConditioningDomain domain, std::vector<std::string> labels,
                        std::vector<PolicyBranch> branches);

  /// Branch g conditions on goal state g; labels are the state names.
  static GoalConditionedPolicy over_goals(const FiniteMdp& mdp, std::vector<PolicyBranch> branches);
  /// Branch z has label z<z>.
  static GoalConditionedPolicy over_skills(std::vector<PolicyBranch> branches);
  /// The same branch for every goal.
  static GoalConditionedPolicy goal_independent(const FiniteMdp& mdp, const PolicyBranch& branch);

  ConditioningDomain domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return branches_.size(); }
  const PolicyBranch& branch(std::size_t c) const { return branches_.at(c); }
  const std::vector<PolicyBranch>& branches() const noexcept { return branches_; }
  const std::string& label(std::size_t c) const { return labels_.at(c); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  bool operator==(const GoalConditionedPolicy&) const = default;

 private:
  ConditioningDomain domain_ = ConditioningDomain::kGoals;
  std::vector<std::string> labels_;
  std::vector<PolicyBranch> branches_;
};

/// Seeded random policy: each branch draws every (slot, state) from the simplex.
GoalConditionedPolicy uniform_random_policy(const FiniteMdp& mdp, ConditioningDomain domain,
                                            std::size_t n_branches, std::size_t horizon,
                                            std::uint64_t seed);

/// Seeded random deterministic policy.
GoalConditionedPolicy random_deterministic_policy(const FiniteMdp& mdp, ConditioningDomain domain,
                                                  std::size_t n_branches, std::size_t horizon,
                                                  std::uint64_t seed);

/// A goal-conditioned policy that may change with the start state.
class StartConditionedPolicy {
 public:
  StartConditionedPolicy() = default;
  /// Same policy at every start state.
  StartConditionedPolicy(const GoalConditionedPolicy& policy, std::size_t n_states);
  explicit StartConditionedPolicy(std::vector<GoalConditionedPolicy> per_start);

  const GoalConditionedPolicy& at(StateIndex s0) const { return per_start_.at(s0); }
  std::size_t num_states() const noexcept { return per_start_.size(); }

 private:
  std::vector<GoalConditionedPolicy> per_start_;
};

/// Goal-to-skill map; plain maps ignore the start state.
class GoalToSkillMap {
 public:
  enum class Mode { kPlain, kStateDependent };

  static GoalToSkillMap plain(std::vector<std::size_t> skill_of_goal, std::size_t n_skills);
  /// skill[s0][g]
  static GoalToSkillMap state_dependent(std::vector<std::vector<std::size_t>> skill,
                                        std::size_t n_skills);

  Mode mode() const noexcept { return mode_; }
  std::size_t num_skills() const noexcept { return n_skills_; }
  std::size_t num_goals() const noexcept { return n_goals_; }
  std::size_t skill(StateIndex s0, StateIndex g) const;
  /// Only for plain maps.
  std::size_t skill(StateIndex g) const;

 private:
  Mode mode_ = Mode::kPlain;
  std::size_t n_skills_ = 0;
  std::size_t n_goals_ = 0;
  std::vector<std::vector<std::size_t>> table_;  // one row for plain maps
};

/// Downstream policy pi_g = pi_{f(g)} for a plain map.
GoalConditionedPolicy compose_downstream(const FiniteMdp& mdp,
                                         const GoalConditionedPolicy& skill_policy,
                                         const GoalToSkillMap& f);

/// Downstream policy pi_g = pi_{f(s0, g)}; works for either map mode.
StartConditionedPolicy compose_downstream_by_start(const FiniteMdp& mdp,
                                                   const GoalConditionedPolicy& skill_policy,
                                                   const GoalToSkillMap& f);

/// Draws a latent condition c ~ weights at t = 0 and follows branch c for the
/// whole episode.
struct MixturePolicy {
  GoalConditionedPolicy components;
  std::vector<double> weights;
};

MixturePolicy mixture_policy(const GoalConditionedPolicy& policy, const GoalDistribution& p_goal);

/// Law of S_t from s0.
std::vector<double> state_law(const FiniteMdp& mdp, const PolicyBranch& branch, StateIndex s0,
                              std::size_t t);
std::vector<double> state_law(const FiniteMdp& mdp, const MixturePolicy& mixture, StateIndex s0,
                              std::size_t t);

/// Number of deterministic branches with the given horizon (saturating).
std::uint64_t count_deterministic_policies(const FiniteMdp& mdp, std::size_t horizon,
                                           bool stationary_only);

/// Visits every deterministic branch. Non-stationary branches use `horizon`
/// explicit slots; the tail slot is pinned to action 0. Throws CapExceeded
/// before visiting anything if the count exceeds `cap`.
void for_each_deterministic_policy(const FiniteMdp& mdp, std::size_t horizon,
                                   bool stationary_only, std::uint64_t cap,
                                   const std::function<void(const PolicyBranch&)>& visit);

std::vector<PolicyBranch> enumerate_deterministic_policies(const FiniteMdp& mdp,
                                                           std::size_t horizon,
                                                           bool stationary_only,
                                                           std::uint64_t cap);
std::vector<PolicyBranch> enumerate_deterministic_policies(const FiniteMdp& mdp,
                                                           std::size_t horizon,
                                                           bool stationary_only);

/// Deterministic choices restricted to the (slot, state) cells flagged in
/// `free`; other cells take action 0. free.size() == horizon + 1.
std::uint64_t count_masked_policies(const FiniteMdp& mdp,
                                    const std::vector<std::vector<bool>>& free);
void for_each_masked_policy(const FiniteMdp& mdp, std::size_t horizon,
                            const std::vector<std::vector<bool>>& free, std::uint64_t cap,
                            const std::function<void(const PolicyBranch&)>& visit);

}  // namespace gclab
