#include "gclab/policy.hpp"

#include <algorithm>
#include <cmath>

#include "gclab/caps.hpp"
#include "gclab/rng.hpp"

namespace gclab {
namespace {

std::vector<std::size_t> action_offsets(const FiniteMdp& mdp) {
  std::vector<std::size_t> off(mdp.num_states() + 1, 0);
  for (StateIndex s = 0; s < mdp.num_states(); ++s) off[s + 1] = off[s] + mdp.num_actions(s);
  return off;
}

}  // namespace

PolicyBranch::PolicyBranch(const FiniteMdp& mdp, std::size_t horizon,
                           const std::vector<std::vector<std::vector<double>>>& probs)
    : horizon_(horizon), offsets_(action_offsets(mdp)) {
  if (probs.size() != horizon + 1) {
    throw InvalidArgument("PolicyBranch: expected horizon + 1 slots");
  }
  const std::size_t width = offsets_.back();
  probs_.assign((horizon + 1) * width, 0.0);
  for (std::size_t slot = 0; slot <= horizon; ++slot) {
    if (probs[slot].size() != mdp.num_states()) {
      throw InvalidArgument("PolicyBranch: slot has wrong number of states");
    }
    for (StateIndex s = 0; s < mdp.num_states(); ++s) {
      const auto& row = probs[slot][s];
      if (row.size() != mdp.num_actions(s)) {
        throw InvalidArgument("PolicyBranch: action distribution at " + mdp.state_name(s) +
                              " has wrong length");
      }
      double sum = 0.0;
      for (double p : row) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
          throw InvalidArgument("PolicyBranch: negative or non-finite probability at " +
                                mdp.state_name(s));
        }
        sum += p;
      }
      if (std::fabs(sum - 1.0) > kRowSumTolerance) {
        throw InvalidArgument("PolicyBranch: action distribution at " + mdp.state_name(s) +
                              " does not sum to 1");
      }
      double* dst = probs_.data() + slot * width + offsets_[s];
      for (std::size_t a = 0; a < row.size(); ++a) dst[a] = row[a] / sum;
    }
  }
}

PolicyBranch PolicyBranch::deterministic(const FiniteMdp& mdp, std::size_t horizon,
                                         const std::vector<std::vector<ActionIndex>>& choices) {
  if (choices.size() != horizon + 1) {
    throw InvalidArgument("PolicyBranch::deterministic: expected horizon + 1 slots");
  }
  PolicyBranch b;
  b.horizon_ = horizon;
  b.offsets_ = action_offsets(mdp);
  const std::size_t width = b.offsets_.back();
  b.probs_.assign((horizon + 1) * width, 0.0);
  for (std::size_t slot = 0; slot <= horizon; ++slot) {
    if (choices[slot].size() != mdp.num_states()) {
      throw InvalidArgument("PolicyBranch::deterministic: slot has wrong number of states");
    }
    for (StateIndex s = 0; s < mdp.num_states(); ++s) {
      const ActionIndex a = choices[slot][s];
      if (a >= mdp.num_actions(s)) {
        throw InvalidArgument("PolicyBranch::deterministic: action index out of range at " +
                              mdp.state_name(s));
      }
      b.probs_[slot * width + b.offsets_[s] + a] = 1.0;
    }
  }
  return b;
}

PolicyBranch PolicyBranch::stationary(const FiniteMdp& mdp, const std::vector<ActionIndex>& choices) {
  return deterministic(mdp, 0, {choices});
}

PolicyBranch PolicyBranch::uniform(const FiniteMdp& mdp) {
  std::vector<std::vector<double>> slot;
  for (StateIndex s = 0; s < mdp.num_states(); ++s) {
    const auto na = mdp.num_actions(s);
    slot.emplace_back(na, 1.0 / static_cast<double>(na));
  }
  return PolicyBranch(mdp, 0, {slot});
}

PolicyBranch PolicyBranch::random(const FiniteMdp& mdp, std::size_t horizon, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<std::vector<double>>> probs(horizon + 1);
  for (auto& slot : probs) {
    for (StateIndex s = 0; s < mdp.num_states(); ++s) {
      std::vector<double> row(mdp.num_actions(s));
      double sum = 0.0;
      for (double& x : row) {
        x = -std::log(rng.uniform_positive());
        sum += x;
      }
      if (sum == 0.0) {
        std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
      } else {
        for (double& x : row) x /= sum;
      }
      slot.push_back(std::move(row));
    }
  }
  return PolicyBranch(mdp, horizon, probs);
}

bool PolicyBranch::is_deterministic() const {
  return std::all_of(probs_.begin(), probs_.end(), [](double p) { return p == 0.0 || p == 1.0; });
}

std::span<const double> PolicyBranch::action_probs(std::size_t t, StateIndex s) const {
  if (s + 1 >= offsets_.size()) throw InvalidArgument("PolicyBranch: state out of range");
  const std::size_t slot = std::min(t, horizon_);
  const std::size_t width = offsets_.back();
  return {probs_.data() + slot * width + offsets_[s], offsets_[s + 1] - offsets_[s]};
}

std::vector<std::vector<double>> PolicyBranch::transition_matrix(const FiniteMdp& mdp,
                                                                 std::size_t t) const {
  const std::size_t n = mdp.num_states();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (StateIndex s = 0; s < n; ++s) {
    auto pi = action_probs(t, s);
    for (ActionIndex a = 0; a < pi.size(); ++a) {
      if (pi[a] == 0.0) continue;
      auto row = mdp.row(s, a);
      for (StateIndex j = 0; j < n; ++j) m[s][j] += pi[a] * row[j];
    }
  }
  return m;
}

std::vector<double> PolicyBranch::step(const FiniteMdp& mdp, std::size_t t,
                                       std::span<const double> law) const {
  const std::size_t n = mdp.num_states();
  std::vector<double> next(n, 0.0);
  for (StateIndex s = 0; s < n; ++s) {
    if (law[s] == 0.0) continue;
    auto pi = action_probs(t, s);
    for (ActionIndex a = 0; a < pi.size(); ++a) {
      const double w = law[s] * pi[a];
      if (w == 0.0) continue;
      auto row = mdp.row(s, a);
      for (StateIndex j = 0; j < n; ++j) next[j] += w * row[j];
    }
  }
  return next;
}

GoalConditionedPolicy::GoalConditionedPolicy(ConditioningDomain domain,
                                             std::vector<std::string> labels,
                                             std::vector<PolicyBranch> branches)
    : domain_(domain), labels_(std::move(labels)), branches_(std::move(branches)) {
  if (labels_.size() != branches_.size()) {
    throw InvalidArgument("GoalConditionedPolicy: one label per branch required");
  }
  if (branches_.empty()) throw InvalidArgument("GoalConditionedPolicy: no branches");
  for (const auto& b : branches_) {
    if (b.num_states() != branches_.front().num_states()) {
      throw InvalidArgument("GoalConditionedPolicy: branches disagree on state count");
    }
  }
}

GoalConditionedPolicy GoalConditionedPolicy::over_goals(const FiniteMdp& mdp,
                                                        std::vector<PolicyBranch> branches) {
  if (branches.size() != mdp.num_states()) {
    throw InvalidArgument("over_goals: one branch per state required");
  }
  return GoalConditionedPolicy(ConditioningDomain::kGoals, mdp.state_names(), std::move(branches));
}

GoalConditionedPolicy GoalConditionedPolicy::over_skills(std::vector<PolicyBranch> branches) {
  std::vector<std::string> labels;
  for (std::size_t z = 0; z < branches.size(); ++z) labels.push_back("z" + std::to_string(z));
  return GoalConditionedPolicy(ConditioningDomain::kSkills, std::move(labels), std::move(branches));
}

GoalConditionedPolicy GoalConditionedPolicy::goal_independent(const FiniteMdp& mdp,
                                                              const PolicyBranch& branch) {
  return over_goals(mdp, std::vector<PolicyBranch>(mdp.num_states(), branch));
}

GoalConditionedPolicy uniform_random_policy(const FiniteMdp& mdp, ConditioningDomain domain,
                                            std::size_t n_branches, std::size_t horizon,
                                            std::uint64_t seed) {
  std::vector<PolicyBranch> branches;
  for (std::size_t c = 0; c < n_branches; ++c) {
    branches.push_back(PolicyBranch::random(mdp, horizon, derive_seed(seed, "branch", c)));
  }
  if (domain == ConditioningDomain::kGoals) {
    return GoalConditionedPolicy::over_goals(mdp, std::move(branches));
  }
  return GoalConditionedPolicy::over_skills(std::move(branches));
}

GoalConditionedPolicy random_deterministic_policy(const FiniteMdp& mdp, ConditioningDomain domain,
                                                  std::size_t n_branches, std::size_t horizon,
                                                  std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PolicyBranch> branches;
  for (std::size_t c = 0; c < n_branches; ++c) {
    std::vector<std::vector<ActionIndex>> choices(horizon + 1);
    for (auto& slot : choices) {
      for (StateIndex s = 0; s < mdp.num_states(); ++s) slot.push_back(rng.below(mdp.num_actions(s)));
    }
    branches.push_back(PolicyBranch::deterministic(mdp, horizon, choices));
  }
  if (domain == ConditioningDomain::kGoals) {
    return GoalConditionedPolicy::over_goals(mdp, std::move(branches));
  }
  return GoalConditionedPolicy::over_skills(std::move(branches));
}

StartConditionedPolicy::StartConditionedPolicy(const GoalConditionedPolicy& policy,
                                               std::size_t n_states)
    : per_start_(n_states, policy) {}

StartConditionedPolicy::StartConditionedPolicy(std::vector<GoalConditionedPolicy> per_start)
    : per_start_(std::move(per_start)) {}

GoalToSkillMap GoalToSkillMap::plain(std::vector<std::size_t> skill_of_goal, std::size_t n_skills) {
  GoalToSkillMap f;
  f.mode_ = Mode::kPlain;
  f.n_skills_ = n_skills;
  f.n_goals_ = skill_of_goal.size();
  for (auto z : skill_of_goal) {
    if (z >= n_skills) throw InvalidArgument("GoalToSkillMap: skill index out of range");
  }
  f.table_.push_back(std::move(skill_of_goal));
  return f;
}

GoalToSkillMap GoalToSkillMap::state_dependent(std::vector<std::vector<std::size_t>> skill,
                                               std::size_t n_skills) {
  GoalToSkillMap f;
  f.mode_ = Mode::kStateDependent;
  f.n_skills_ = n_skills;
  if (skill.empty()) throw InvalidArgument("GoalToSkillMap: empty table");
  f.n_goals_ = skill.front().size();
  for (const auto& row : skill) {
    if (row.size() != f.n_goals_) throw InvalidArgument("GoalToSkillMap: ragged table");
    for (auto z : row) {
      if (z >= n_skills) throw InvalidArgument("GoalToSkillMap: skill index out of range");
    }
  }
  f.table_ = std::move(skill);
  return f;
}

std::size_t GoalToSkillMap::skill(StateIndex s0, StateIndex g) const {
  if (mode_ == Mode::kPlain) return table_.front().at(g);
  return table_.at(s0).at(g);
}

std::size_t GoalToSkillMap::skill(StateIndex g) const {
  if (mode_ != Mode::kPlain) throw InvalidArgument("GoalToSkillMap: map depends on the start state");
  return table_.front().at(g);
}

GoalConditionedPolicy compose_downstream(const FiniteMdp& mdp,
                                         const GoalConditionedPolicy& skill_policy,
                                         const GoalToSkillMap& f) {
  if (f.num_skills() != skill_policy.size()) {
    throw InvalidArgument("compose_downstream: map and policy disagree on the skill count");
  }
  if (f.num_goals() != mdp.num_states()) {
    throw InvalidArgument("compose_downstream: map must cover every goal state");
  }
  std::vector<PolicyBranch> branches;
  for (StateIndex g = 0; g < mdp.num_states(); ++g) branches.push_back(skill_policy.branch(f.skill(g)));
  return GoalConditionedPolicy::over_goals(mdp, std::move(branches));
}

StartConditionedPolicy compose_downstream_by_start(const FiniteMdp& mdp,
                                                   const GoalConditionedPolicy& skill_policy,
                                                   const GoalToSkillMap& f) {
  if (f.num_skills() != skill_policy.size()) {
    throw InvalidArgument("compose_downstream: map and policy disagree on the skill count");
  }
  if (f.num_goals() != mdp.num_states()) {
    throw InvalidArgument("compose_downstream: map must cover every goal state");
  }
  std::vector<GoalConditionedPolicy> per_start;
  for (StateIndex s0 = 0; s0 < mdp.num_states(); ++s0) {
    std::vector<PolicyBranch> branches;
    for (StateIndex g = 0; g < mdp.num_states(); ++g) {
      branches.push_back(skill_policy.branch(f.skill(s0, g)));
    }
    per_start.push_back(GoalConditionedPolicy::over_goals(mdp, std::move(branches)));
  }
  return StartConditionedPolicy(std::move(per_start));
}

MixturePolicy mixture_policy(const GoalConditionedPolicy& policy, const GoalDistribution& p_goal) {
  if (p_goal.size() != policy.size()) {
    throw InvalidArgument("mixture_policy: weights and branches differ in number");
  }
  return MixturePolicy{policy, p_goal.weights()};
}

std::vector<double> state_law(const FiniteMdp& mdp, const PolicyBranch& branch, StateIndex s0,
                              std::size_t t) {
  std::vector<double> law(mdp.num_states(), 0.0);
  law.at(s0) = 1.0;
  for (std::size_t k = 0; k < t; ++k) law = branch.step(mdp, k, law);
  return law;
}

std::vector<double> state_law(const FiniteMdp& mdp, const MixturePolicy& mixture, StateIndex s0,
                              std::size_t t) {
  std::vector<double> law(mdp.num_states(), 0.0);
  for (std::size_t c = 0; c < mixture.components.size(); ++c) {
    auto part = state_law(mdp, mixture.components.branch(c), s0, t);
    for (StateIndex s = 0; s < law.size(); ++s) law[s] += mixture.weights[c] * part[s];
  }
  return law;
}

std::uint64_t count_masked_policies(const FiniteMdp& mdp,
                                    const std::vector<std::vector<bool>>& free) {
  std::uint64_t count = 1;
  for (const auto& slot : free) {
    for (StateIndex s = 0; s < slot.size(); ++s) {
      if (slot[s]) count = saturating_mul(count, mdp.num_actions(s));
    }
  }
  return count;
}

void for_each_masked_policy(const FiniteMdp& mdp, std::size_t horizon,
                            const std::vector<std::vector<bool>>& free, std::uint64_t cap,
                            const std::function<void(const PolicyBranch&)>& visit) {
  if (free.size() != horizon + 1) throw InvalidArgument("for_each_masked_policy: mask shape");
  const std::uint64_t count = count_masked_policies(mdp, free);
  if (count > cap) throw CapExceeded("deterministic policy enumeration", count, cap);
  std::vector<std::pair<std::size_t, StateIndex>> cells;
  for (std::size_t slot = 0; slot <= horizon; ++slot) {
    if (free[slot].size() != mdp.num_states()) {
      throw InvalidArgument("for_each_masked_policy: mask shape");
    }
    for (StateIndex s = 0; s < mdp.num_states(); ++s) {
      if (free[slot][s]) cells.emplace_back(slot, s);
    }
  }
  std::vector<std::vector<ActionIndex>> choices(horizon + 1,
                                                std::vector<ActionIndex>(mdp.num_states(), 0));
  while (true) {
    visit(PolicyBranch::deterministic(mdp, horizon, choices));
    std::size_t k = 0;
    for (; k < cells.size(); ++k) {
      auto [slot, s] = cells[k];
      if (++choices[slot][s] < mdp.num_actions(s)) break;
      choices[slot][s] = 0;
    }
    if (k == cells.size()) break;
  }
}

std::uint64_t count_deterministic_policies(const FiniteMdp& mdp, std::size_t horizon,
                                           bool stationary_only) {
  std::uint64_t per_slot = 1;
  for (StateIndex s = 0; s < mdp.num_states(); ++s) per_slot = saturating_mul(per_slot, mdp.num_actions(s));
  if (stationary_only || horizon == 0) return per_slot;
  return saturating_pow(per_slot, horizon);
}

void for_each_deterministic_policy(const FiniteMdp& mdp, std::size_t horizon,
                                   bool stationary_only, std::uint64_t cap,
                                   const std::function<void(const PolicyBranch&)>& visit) {
  const std::size_t h = stationary_only ? 0 : horizon;
  std::vector<std::vector<bool>> free(h + 1, std::vector<bool>(mdp.num_states(), h == 0));
  for (std::size_t slot = 0; slot < h; ++slot) free[slot].assign(mdp.num_states(), true);
  for_each_masked_policy(mdp, h, free, cap, visit);
}

std::vector<PolicyBranch> enumerate_deterministic_policies(const FiniteMdp& mdp,
                                                           std::size_t horizon,
                                                           bool stationary_only,
                                                           std::uint64_t cap) {
  std::vector<PolicyBranch> out;
  for_each_deterministic_policy(mdp, horizon, stationary_only, cap,
                                [&](const PolicyBranch& b) { out.push_back(b); });
  return out;
}

std::vector<PolicyBranch> enumerate_deterministic_policies(const FiniteMdp& mdp,
                                                           std::size_t horizon,
                                                           bool stationary_only) {
  return enumerate_deterministic_policies(mdp, horizon, stationary_only, enumeration_cap());
}

}  // namespace gclab
