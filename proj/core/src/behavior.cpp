#include <cmath>
#include <map>

#include "gclab/format.hpp"
#include "gclab/info.hpp"
#include "gclab/trajectory.hpp"
#include "overloaded.hpp"

namespace gclab {
namespace {

using detail::Overloaded;
using Code = std::vector<std::size_t>;

// Builds a joint from per-condition sparse laws over codes.
JointDistribution assemble(const GoalConditionedPolicy& policy, const std::vector<double>& prior,
                           const std::vector<std::map<Code, double>>& laws,
                           const std::function<std::string(const Code&)>& label) {
  std::map<Code, std::size_t> index;
  for (const auto& law : laws) {
    for (const auto& [code, p] : law) index.emplace(code, 0);
  }
  JointDistribution out;
  out.condition_labels = policy.labels();
  out.prior = prior;
  std::size_t k = 0;
  for (auto& [code, idx] : index) {
    idx = k++;
    out.outcome_codes.push_back(code);
    out.outcome_labels.push_back(label(code));
  }
  out.conditionals.assign(laws.size(), std::vector<double>(index.size(), 0.0));
  for (std::size_t c = 0; c < laws.size(); ++c) {
    for (const auto& [code, p] : laws[c]) out.conditionals[c][index.at(code)] += p;
  }
  return out;
}

std::size_t first_visit_class(const std::vector<StateIndex>& path, StateIndex g, std::size_t K,
                              double gamma) {
  std::size_t T = K + 1;
  for (std::size_t t = 0; t < path.size(); ++t) {
    if (path[t] == g) {
      T = t + 1;
      break;
    }
  }
  if (gamma == 0.0) return T == 1 ? 1 : K + 1;
  if (gamma == 1.0) return T <= K ? 1 : K + 1;
  return T;
}

}  // namespace

JointDistribution behavior_joint(const FiniteMdp& mdp, const GoalConditionedPolicy& policy,
                                 StateIndex s0, const std::vector<double>& prior,
                                 const BehaviorSpec& spec, std::uint64_t cap) {
  if (prior.size() != policy.size()) {
    throw InvalidArgument("behavior_joint: prior and policy differ in size");
  }
  if (s0 >= mdp.num_states()) throw InvalidArgument("behavior_joint: bad start state");
  const std::size_t n = mdp.num_states();
  auto state_label = [&](const Code& c) { return mdp.state_name(c.at(0)); };
  auto path_label = [&](const Code& c) {
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + mdp.state_name(c[i]);
    return s;
  };

  std::vector<std::map<Code, double>> laws(policy.size());
  JointDistribution out = std::visit(
      Overloaded{
          [&](const auto& occ) -> JointDistribution
            requires(std::is_same_v<std::decay_t<decltype(occ)>, SGammaPlus> ||
                     std::is_same_v<std::decay_t<decltype(occ)>, SK>) {
                       for (std::size_t c = 0; c < policy.size(); ++c) {
                         auto d = behavior_distribution(mdp, policy.branch(c), s0, OccupancySpec(occ));
                         for (StateIndex s = 0; s < n; ++s) {
                           if (d[s] != 0.0) laws[c][{s}] += d[s];
                         }
                       }
                       return assemble(policy, prior, laws, state_label);
                     },
          [&](const StatePathK& sp) {
            for (std::size_t c = 0; c < policy.size(); ++c) {
              for (auto& path : enumerate_state_paths(mdp, policy.branch(c), s0, sp.K, cap)) {
                laws[c][path.states] += path.prob;
              }
            }
            return assemble(policy, prior, laws, path_label);
          },
          [&](const TrajectoryK& tk) {
            for (std::size_t c = 0; c < policy.size(); ++c) {
              for (auto& tr : enumerate_trajectories(mdp, policy.branch(c), s0, tk.K, cap)) {
                Code code;
                for (std::size_t t = 0; t < tk.K; ++t) {
                  code.push_back(tr.actions[t]);
                  code.push_back(tr.states[t]);
                }
                laws[c][code] += tr.prob;
              }
            }
            return assemble(policy, prior, laws, [&](const Code& c) {
              std::string s;
              StateIndex prev = s0;
              for (std::size_t i = 0; i + 1 < c.size(); i += 2) {
                s += (i ? "," : "") + mdp.action_name(prev, c[i]) + ">" + mdp.state_name(c[i + 1]);
                prev = c[i + 1];
              }
              return s;
            });
          },
          [&](const FirstVisitVector& fv) {
            if (!(fv.gamma >= 0.0 && fv.gamma <= 1.0)) {
              throw InvalidArgument("behavior_joint: gamma must lie in [0, 1]");
            }
            for (std::size_t c = 0; c < policy.size(); ++c) {
              for (auto& path : enumerate_state_paths(mdp, policy.branch(c), s0, fv.K, cap)) {
                Code code(n);
                for (StateIndex g = 0; g < n; ++g) {
                  code[g] = first_visit_class(path.states, g, fv.K, fv.gamma);
                }
                laws[c][code] += path.prob;
              }
            }
            return assemble(policy, prior, laws, [&](const Code& c) {
              std::string s = "(";
              for (std::size_t g = 0; g < c.size(); ++g) {
                const double v =
                    c[g] > fv.K ? 0.0 : std::pow(fv.gamma, static_cast<double>(c[g] - 1));
                s += (g ? "," : "") + format_exact(v);
              }
              return s + ")";
            });
          },
      },
      spec);
  out.validate();
  return out;
}

JointDistribution behavior_joint(const FiniteMdp& mdp, const GoalConditionedPolicy& policy,
                                 StateIndex s0, const std::vector<double>& prior,
                                 const BehaviorSpec& spec) {
  return behavior_joint(mdp, policy, s0, prior, spec, enumeration_cap());
}

double goal_behavior_mi(const FiniteMdp& mdp, const GoalConditionedPolicy& policy, StateIndex s0,
                        const GoalDistribution& p_goal, const BehaviorSpec& spec) {
  return mutual_information(behavior_joint(mdp, policy, s0, p_goal.weights(), spec));
}

}  // namespace gclab
