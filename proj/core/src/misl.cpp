#include "gclab/misl.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gclab/caps.hpp"
#include "gclab/rng.hpp"
#include "gclab/values.hpp"
#include "overloaded.hpp"

namespace gclab {
namespace {

using Code = std::vector<std::size_t>;

// Horizon of the policy slots that matter for a behavior spec.
std::size_t spec_horizon(const BehaviorSpec& spec) {
  return std::visit(detail::Overloaded{
                        [](const SGammaPlus&) -> std::size_t { return 0; },
                        [](const SK& s) { return s.K; },
                        [](const FirstVisitVector& s) { return s.K; },
                        [](const TrajectoryK& s) { return s.K; },
                        [](const StatePathK& s) { return s.K; },
                    },
                    spec);
}

std::vector<std::vector<bool>> spec_free_cells(const FiniteMdp& mdp, StateIndex s0, std::size_t H) {
  const std::size_t n = mdp.num_states();
  if (H == 0) {
    // Stationary: every state reachable from s0 at any time.
    std::vector<bool> seen(n, false);
    std::vector<StateIndex> stack{s0};
    seen[s0] = true;
    while (!stack.empty()) {
      const StateIndex s = stack.back();
      stack.pop_back();
      for (ActionIndex a = 0; a < mdp.num_actions(s); ++a) {
        for (StateIndex j = 0; j < n; ++j) {
          if (mdp.prob(s, a, j) > 0.0 && !seen[j]) {
            seen[j] = true;
            stack.push_back(j);
          }
        }
      }
    }
    return {seen};
  }
  auto reach = reachable_by_time(mdp, s0, H);
  std::vector<std::vector<bool>> free(H + 1, std::vector<bool>(n, false));
  for (std::size_t t = 0; t < H; ++t) free[t] = reach[t];
  return free;
}

// Conditional laws over a shared outcome index.
class OutcomeTable {
 public:
  OutcomeTable(const FiniteMdp& mdp, StateIndex s0, const BehaviorSpec& spec)
      : mdp_(mdp), s0_(s0), spec_(spec) {}

  std::vector<double> law(const PolicyBranch& branch) {
    const auto joint = behavior_joint(mdp_, GoalConditionedPolicy::over_skills({branch}), s0_, {1.0}, spec_);
    std::vector<double> out(index_.size(), 0.0);
    for (std::size_t o = 0; o < joint.outcome_codes.size(); ++o) {
      const double p = joint.conditionals[0][o];
      if (p == 0.0) continue;
      auto [it, inserted] = index_.emplace(joint.outcome_codes[o], index_.size());
      if (it->second >= out.size()) out.resize(it->second + 1, 0.0);
      out[it->second] += p;
    }
    return out;
  }

 private:
  const FiniteMdp& mdp_;
  StateIndex s0_;
  BehaviorSpec spec_;
  std::map<Code, std::size_t> index_;
};

// I(Z; O) for a uniform prior over the given laws (possibly of unequal length).
double uniform_mi(const std::vector<const std::vector<double>*>& laws) {
  std::size_t width = 0;
  for (const auto* l : laws) width = std::max(width, l->size());
  const double w = 1.0 / static_cast<double>(laws.size());
  std::vector<double> marginal(width, 0.0);
  for (const auto* l : laws) {
    for (std::size_t o = 0; o < l->size(); ++o) marginal[o] += w * (*l)[o];
  }
  double mi = 0.0;
  for (const auto* l : laws) {
    for (std::size_t o = 0; o < l->size(); ++o) {
      const double p = (*l)[o];
      if (p > 0.0) mi += w * p * std::log(p / marginal[o]);
    }
  }
  return std::max(mi, 0.0);
}

}  // namespace

SkillPrior::SkillPrior(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw InvalidArgument("SkillPrior: empty");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw InvalidArgument("SkillPrior: negative mass");
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-9) throw InvalidArgument("SkillPrior: masses must sum to 1");
}

SkillPrior SkillPrior::uniform(std::size_t n_skills) {
  if (n_skills == 0) throw InvalidArgument("SkillPrior: need at least one skill");
  return SkillPrior(std::vector<double>(n_skills, 1.0 / static_cast<double>(n_skills)));
}

double misl_objective(const FiniteMdp& mdp, const GoalConditionedPolicy& skill_policy,
                      StateIndex s0, const SkillPrior& prior, const BehaviorSpec& spec) {
  return mutual_information(behavior_joint(mdp, skill_policy, s0, prior.probs(), spec));
}

DiscreteDistribution downstream_skill_distribution(const GoalToSkillMap& f,
                                                   const GoalDistribution& p_goal, StateIndex s0) {
  if (f.num_goals() != p_goal.size()) {
    throw InvalidArgument("downstream_skill_distribution: map and goal distribution differ in size");
  }
  DiscreteDistribution out;
  out.probs.assign(f.num_skills(), 0.0);
  for (std::size_t z = 0; z < f.num_skills(); ++z) out.labels.push_back("z" + std::to_string(z));
  if (p_goal.is_uniform()) {
    std::vector<std::size_t> count(f.num_skills(), 0);
    for (StateIndex g = 0; g < p_goal.size(); ++g) ++count[f.skill(s0, g)];
    for (std::size_t z = 0; z < count.size(); ++z) {
      out.probs[z] = static_cast<double>(count[z]) / static_cast<double>(p_goal.size());
    }
    return out;
  }
  for (StateIndex g = 0; g < p_goal.size(); ++g) out.probs[f.skill(s0, g)] += p_goal[g];
  return out;
}

DiscreteDistribution downstream_skill_distribution(const GoalToSkillMap& f,
                                                   const GoalDistribution& p_goal) {
  if (f.mode() != GoalToSkillMap::Mode::kPlain) {
    throw InvalidArgument("downstream_skill_distribution: state-dependent map needs a start state");
  }
  return downstream_skill_distribution(f, p_goal, 0);
}

GapBoundResult mi_gap_bound(std::span<const double> p_f, std::size_t n_z, std::size_t n_sprime) {
  if (n_z == 0 || p_f.size() != n_z) throw InvalidArgument("mi_gap_bound: p_f must have n_z entries");
  if (n_sprime < 2) throw InvalidArgument("mi_gap_bound: n_sprime must be at least 2");
  GapBoundResult out;
  const std::vector<double> u(n_z, 1.0 / static_cast<double>(n_z));
  out.delta = total_variation(p_f, u);
  const double m = static_cast<double>(n_sprime);
  out.bound = out.delta == 0.0 ? 0.0 : binary_entropy(out.delta) + out.delta * std::log(m * m * (m - 1.0));
  out.applicable = n_z <= n_sprime;
  return out;
}

GoalToSkillMap consistent_mapping(const FiniteMdp& mdp, const Formulation& formulation,
                                  const GoalConditionedPolicy& skill_policy) {
  const std::size_t n = mdp.num_states();
  const std::size_t nz = skill_policy.size();
  if (nz == 0) throw InvalidArgument("consistent_mapping: no skills");
  // values[z][g][s0]
  std::vector<std::vector<std::vector<double>>> values(nz);
  for (std::size_t z = 0; z < nz; ++z) {
    for (StateIndex g = 0; g < n; ++g) {
      values[z].push_back(branch_values(mdp, formulation, skill_policy.branch(z), g));
    }
  }
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n, 0));
  for (StateIndex s0 = 0; s0 < n; ++s0) {
    for (StateIndex g = 0; g < n; ++g) {
      double best = values[0][g][s0];
      for (std::size_t z = 1; z < nz; ++z) {
        if (values[z][g][s0] > best + kTieTolerance) {
          best = values[z][g][s0];
          table[s0][g] = z;
        }
      }
    }
  }
  return GoalToSkillMap::state_dependent(std::move(table), nz);
}

MiIdentity verify_mi_identity(const FiniteMdp& mdp, const GoalConditionedPolicy& skill_policy,
                              const GoalToSkillMap& f, StateIndex s0,
                              const GoalDistribution& p_goal, const BehaviorSpec& spec) {
  MiIdentity out;
  const auto downstream = compose_downstream_by_start(mdp, skill_policy, f).at(s0);
  out.lhs = goal_behavior_mi(mdp, downstream, s0, p_goal, spec);
  const auto p_f = downstream_skill_distribution(f, p_goal, s0);
  out.rhs = mutual_information(behavior_joint(mdp, skill_policy, s0, p_f.probs, spec));
  out.gap = std::fabs(out.lhs - out.rhs);
  return out;
}

MislResult optimize_misl_tabular(const FiniteMdp& mdp, const BehaviorSpec& spec, std::size_t n_z,
                                 StateIndex s0, const MislConfig& config) {
  if (n_z == 0) throw InvalidArgument("optimize_misl_tabular: need at least one skill");
  if (s0 >= mdp.num_states()) throw InvalidArgument("optimize_misl_tabular: bad start state");
  const std::size_t H = spec_horizon(spec);
  const auto free = spec_free_cells(mdp, s0, H);
  OutcomeTable table(mdp, s0, spec);
  MislResult out;

  if (config.mode == MislMode::kExhaustive) {
    const std::uint64_t cap = enumeration_cap();
    const std::uint64_t m = count_masked_policies(mdp, free);
    if (m > cap) throw CapExceeded("skill branch enumeration", m, cap);
    std::vector<PolicyBranch> candidates;
    std::vector<std::vector<double>> laws;
    for_each_masked_policy(mdp, H, free, cap, [&](const PolicyBranch& b) {
      candidates.push_back(b);
      laws.push_back(table.law(b));
    });
    // Skills are exchangeable under a uniform prior: visit multisets only.
    std::uint64_t combos = 1;
    for (std::size_t k = 0; k < n_z; ++k) {
      combos = saturating_mul(combos, m + k) / (k + 1);
    }
    if (combos > cap) throw CapExceeded("skill multiset enumeration", combos, cap);
    std::vector<std::size_t> pick(n_z, 0);
    std::vector<std::size_t> best_pick = pick;
    double best = -1.0;
    std::vector<const std::vector<double>*> view(n_z);
    while (true) {
      for (std::size_t z = 0; z < n_z; ++z) view[z] = &laws[pick[z]];
      const double v = uniform_mi(view);
      ++out.evaluations;
      if (v > best + kTieTolerance) {
        best = v;
        best_pick = pick;
      }
      std::size_t k = n_z;
      while (k > 0 && pick[k - 1] + 1 == candidates.size()) --k;
      if (k == 0) break;
      ++pick[k - 1];
      for (std::size_t j = k; j < n_z; ++j) pick[j] = pick[k - 1];
    }
    std::vector<PolicyBranch> branches;
    for (std::size_t idx : best_pick) branches.push_back(candidates[idx]);
    out.policy = GoalConditionedPolicy::over_skills(std::move(branches));
    out.objective = best;
    out.trace.push_back(best);
    return out;
  }

  Rng rng(config.seed);
  const std::size_t n = mdp.num_states();
  std::vector<std::vector<std::vector<ActionIndex>>> choice(
      n_z, std::vector<std::vector<ActionIndex>>(H + 1, std::vector<ActionIndex>(n, 0)));
  for (std::size_t z = 0; z < n_z; ++z) {
    for (std::size_t t = 0; t <= H; ++t) {
      for (StateIndex s = 0; s < n; ++s) {
        if (free[t][s]) choice[z][t][s] = static_cast<ActionIndex>(rng.below(mdp.num_actions(s)));
      }
    }
  }
  std::vector<std::vector<double>> laws;
  for (std::size_t z = 0; z < n_z; ++z) laws.push_back(table.law(PolicyBranch::deterministic(mdp, H, choice[z])));
  std::vector<const std::vector<double>*> view(n_z);
  for (std::size_t z = 0; z < n_z; ++z) view[z] = &laws[z];
  double current = uniform_mi(view);
  ++out.evaluations;
  out.trace.push_back(current);
  for (std::size_t sweep = 0; sweep < config.iterations; ++sweep) {
    bool improved = false;
    for (std::size_t z = 0; z < n_z; ++z) {
      for (std::size_t t = 0; t <= H; ++t) {
        for (StateIndex s = 0; s < n; ++s) {
          if (!free[t][s]) continue;
          for (ActionIndex a = 0; a < mdp.num_actions(s); ++a) {
            const ActionIndex keep = choice[z][t][s];
            if (a == keep) continue;
            choice[z][t][s] = a;
            std::vector<double> trial = table.law(PolicyBranch::deterministic(mdp, H, choice[z]));
            std::swap(laws[z], trial);
            for (std::size_t k = 0; k < n_z; ++k) view[k] = &laws[k];
            const double v = uniform_mi(view);
            ++out.evaluations;
            if (v > current + kTieTolerance) {
              current = v;
              improved = true;
              out.trace.push_back(current);
            } else {
              std::swap(laws[z], trial);
              choice[z][t][s] = keep;
            }
          }
        }
      }
    }
    if (!improved) break;
  }
  std::vector<PolicyBranch> branches;
  for (std::size_t z = 0; z < n_z; ++z) branches.push_back(PolicyBranch::deterministic(mdp, H, choice[z]));
  out.policy = GoalConditionedPolicy::over_skills(std::move(branches));
  out.objective = current;
  return out;
}

}  // namespace gclab
