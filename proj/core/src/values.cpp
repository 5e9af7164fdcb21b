#include "gclab/values.hpp"

#include <algorithm>
#include <cmath>

#include "linalg.hpp"
#include "overloaded.hpp"

namespace gclab {
namespace {

using detail::Matrix;
using detail::Overloaded;

void check_state(const FiniteMdp& mdp, StateIndex s, const char* what) {
  if (s >= mdp.num_states()) throw InvalidArgument(std::string(what) + ": state index out of range");
}

void check_branch(const FiniteMdp& mdp, const PolicyBranch& b) {
  if (b.num_states() != mdp.num_states()) {
    throw InvalidArgument("policy branch does not match the MDP");
  }
}

std::vector<double> unit(std::size_t n, StateIndex i) {
  std::vector<double> v(n, 0.0);
  v[i] = 1.0;
  return v;
}

std::vector<double> occupancy_pe(const FiniteMdp& mdp, const PolicyBranch& branch, StateIndex s0,
                                 double gamma) {
  const std::size_t n = mdp.num_states();
  std::vector<double> law = unit(n, s0);
  std::vector<double> acc(n, 0.0);
  double w = 1.0;
  for (std::size_t t = 1; t <= branch.horizon(); ++t) {
    law = branch.step(mdp, t - 1, law);
    for (std::size_t s = 0; s < n; ++s) acc[s] += w * law[s];
    w *= gamma;
  }
  const Matrix M = branch.transition_matrix(mdp, branch.horizon());
  const std::vector<double> x = detail::solve_left(M, gamma, detail::left_multiply(law, M));
  std::vector<double> d(n);
  for (std::size_t s = 0; s < n; ++s) d[s] = (1.0 - gamma) * (acc[s] + w * x[s]);
  return d;
}

std::vector<double> law_at(const FiniteMdp& mdp, const PolicyBranch& branch, StateIndex s0,
                           std::size_t K) {
  return state_law(mdp, branch, s0, K);
}

double first_visit_forward(const FiniteMdp& mdp, const PolicyBranch& branch, StateIndex s0,
                           StateIndex g, std::size_t K, double gamma) {
  std::vector<double> m = unit(mdp.num_states(), s0);
  double J = 0.0;
  double w = 1.0;
  for (std::size_t t = 1; t <= K; ++t) {
    m = branch.step(mdp, t - 1, m);
    J += w * m[g];
    m[g] = 0.0;
    w *= gamma;
  }
  return J;
}

const StateGoalTable& discount_at(const General& G, std::size_t k) {
  return k <= G.horizon ? G.discounts[k] : G.discount_tail;
}

const StateGoalTable& reward_at(const General& G, std::size_t t) {
  return t <= G.horizon ? G.rewards[t] : G.reward_tail;
}

// W = Gamma M (r + W) for the stationary part of a general formulation.
std::vector<double> general_tail(const FiniteMdp& mdp, const General& G,
                                 const PolicyBranch& branch, StateIndex g) {
  const std::size_t n = mdp.num_states();
  const Matrix M = branch.transition_matrix(mdp, branch.horizon());
  std::vector<double> c(n), r(n);
  for (std::size_t s = 0; s < n; ++s) {
    c[s] = G.discount_tail[s][g];
    r[s] = G.reward_tail[s][g];
  }
  std::vector<double> b = detail::right_multiply(M, r);
  for (std::size_t s = 0; s < n; ++s) b[s] *= c[s];
  return detail::solve_right(M, c, b);
}

double general_forward(const FiniteMdp& mdp, const General& G, const PolicyBranch& branch,
                       StateIndex s0, StateIndex g) {
  const std::size_t n = mdp.num_states();
  const std::size_t T1 = std::max(G.horizon + 1, branch.horizon());
  std::vector<double> m = unit(n, s0);
  double J = 0.0;
  for (std::size_t t = 1; t <= T1; ++t) {
    if (t >= 2) {
      const auto& disc = discount_at(G, t - 1);
      for (std::size_t s = 0; s < n; ++s) m[s] *= disc[s][g];
    }
    m = branch.step(mdp, t - 1, m);
    const auto& rew = reward_at(G, t);
    for (std::size_t s = 0; s < n; ++s) J += m[s] * rew[s][g];
  }
  const std::vector<double> W = general_tail(mdp, G, branch, g);
  for (std::size_t s = 0; s < n; ++s) J += m[s] * W[s];
  return J;
}

std::vector<double> general_backward(const FiniteMdp& mdp, const General& G,
                                     const PolicyBranch& branch, StateIndex g) {
  const std::size_t n = mdp.num_states();
  const std::size_t T1 = std::max(G.horizon + 1, branch.horizon());
  std::vector<double> U = general_tail(mdp, G, branch, g);
  for (std::size_t t = T1; t-- > 0;) {
    const auto& rew = reward_at(G, t + 1);
    std::vector<double> v(n);
    for (std::size_t s = 0; s < n; ++s) v[s] = rew[s][g] + U[s];
    U = detail::right_multiply(branch.transition_matrix(mdp, t), v);
    if (t >= 1) {
      const auto& disc = discount_at(G, t);
      for (std::size_t s = 0; s < n; ++s) U[s] *= disc[s][g];
    }
  }
  return U;
}

// Lowest action whose value is within kTieTolerance of the maximum.
ActionIndex greedy(const std::vector<double>& q) {
  const double best = *std::max_element(q.begin(), q.end());
  for (ActionIndex a = 0; a < q.size(); ++a) {
    if (q[a] >= best - kTieTolerance) return a;
  }
  return 0;
}

std::vector<std::vector<double>> q_values(const FiniteMdp& mdp, const std::vector<double>& cont) {
  std::vector<std::vector<double>> q(mdp.num_states());
  for (StateIndex s = 0; s < mdp.num_states(); ++s) {
    for (ActionIndex a = 0; a < mdp.num_actions(s); ++a) {
      auto row = mdp.row(s, a);
      double v = 0.0;
      for (StateIndex j = 0; j < row.size(); ++j) v += row[j] * cont[j];
      q[s].push_back(v);
    }
  }
  return q;
}

OptimalSolution pe_reward(const FiniteMdp& mdp, double gamma, const std::vector<double>& r) {
  const std::size_t n = mdp.num_states();
  auto continuation = [&](const std::vector<double>& V) {
    std::vector<double> c(n);
    for (std::size_t s = 0; s < n; ++s) c[s] = (1.0 - gamma) * r[s] + gamma * V[s];
    return c;
  };
  std::vector<double> V(n, 0.0);
  for (int it = 0; it < 1000; ++it) {
    auto q = q_values(mdp, continuation(V));
    double d = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const double v = *std::max_element(q[s].begin(), q[s].end());
      d = std::max(d, std::fabs(v - V[s]));
      V[s] = v;
    }
    if (d <= 1e-12) break;
  }
  std::vector<ActionIndex> choice(n);
  {
    auto q = q_values(mdp, continuation(V));
    for (std::size_t s = 0; s < n; ++s) choice[s] = greedy(q[s]);
  }
  auto evaluate = [&](const std::vector<ActionIndex>& pol) {
    const PolicyBranch b = PolicyBranch::stationary(mdp, pol);
    const Matrix M = b.transition_matrix(mdp, 0);
    std::vector<double> base(n);
    for (std::size_t s = 0; s < n; ++s) base[s] = (1.0 - gamma) * r[s];
    return detail::solve_right(M, std::vector<double>(n, gamma), detail::right_multiply(M, base));
  };
  for (int it = 0; it < 10000; ++it) {
    V = evaluate(choice);
    auto q = q_values(mdp, continuation(V));
    bool changed = false;
    for (std::size_t s = 0; s < n; ++s) {
      const double best = *std::max_element(q[s].begin(), q[s].end());
      if (q[s][choice[s]] < best - kTieTolerance) {
        choice[s] = greedy(q[s]);
        changed = true;
      }
    }
    if (!changed) break;
  }
  auto q = q_values(mdp, continuation(V));
  for (std::size_t s = 0; s < n; ++s) choice[s] = greedy(q[s]);
  V = evaluate(choice);
  OptimalSolution out;
  out.branch = PolicyBranch::stationary(mdp, choice);
  out.values = V;
  out.first_step_q = q_values(mdp, continuation(V));
  return out;
}

// Backward induction over K steps; `backup(V)` gives the continuation vector
// whose expectation under p(.|s,a) is Q_t(s,a).
template <class Backup>
OptimalSolution finite_horizon(const FiniteMdp& mdp, std::size_t K, std::vector<double> V,
                               Backup backup) {
  const std::size_t n = mdp.num_states();
  std::vector<std::vector<ActionIndex>> choices(K + 1, std::vector<ActionIndex>(n, 0));
  std::vector<std::vector<double>> q0;
  for (std::size_t t = K; t-- > 0;) {
    auto q = q_values(mdp, backup(V));
    std::vector<double> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      choices[t][s] = greedy(q[s]);
      next[s] = q[s][choices[t][s]];
    }
    V = std::move(next);
    if (t == 0) q0 = std::move(q);
  }
  OptimalSolution out;
  out.branch = PolicyBranch::deterministic(mdp, K, choices);
  out.values = std::move(V);
  out.first_step_q = std::move(q0);
  return out;
}

}  // namespace

std::vector<double> behavior_distribution(const FiniteMdp& mdp, const PolicyBranch& branch,
                                          StateIndex s0, const OccupancySpec& spec) {
  check_state(mdp, s0, "behavior_distribution");
  check_branch(mdp, branch);
  return std::visit(Overloaded{
                        [&](const SGammaPlus& sg) {
                          if (!(sg.gamma >= 0.0 && sg.gamma < 1.0)) {
                            throw InvalidArgument("S_gamma+: gamma must lie in [0, 1)");
                          }
                          return occupancy_pe(mdp, branch, s0, sg.gamma);
                        },
                        [&](const SK& sk) { return law_at(mdp, branch, s0, sk.K); },
                    },
                    spec);
}

ValueResult first_visit_value(const FiniteMdp& mdp, const PolicyBranch& branch, StateIndex s0,
                              StateIndex g, std::size_t K, double gamma) {
  check_state(mdp, s0, "first_visit_value");
  check_state(mdp, g, "first_visit_value");
  check_branch(mdp, branch);
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgument("first_visit_value: gamma out of range");
  return {first_visit_forward(mdp, branch, s0, g, K, gamma), ValueMethod::kForwardPropagation, 0.0};
}

std::vector<double> first_visit_time_distribution(const FiniteMdp& mdp, const PolicyBranch& branch,
                                                  StateIndex s0, StateIndex g, std::size_t K) {
  check_state(mdp, s0, "first_visit_time_distribution");
  check_state(mdp, g, "first_visit_time_distribution");
  check_branch(mdp, branch);
  std::vector<double> m = unit(mdp.num_states(), s0);
  std::vector<double> out(K, 0.0);
  for (std::size_t t = 1; t <= K; ++t) {
    m = branch.step(mdp, t - 1, m);
    out[t - 1] = m[g];
    m[g] = 0.0;
  }
  return out;
}

std::vector<double> first_visit_time_distribution(const FiniteMdp& mdp,
                                                  const MixturePolicy& mixture, StateIndex s0,
                                                  StateIndex g, std::size_t K) {
  std::vector<double> out(K, 0.0);
  for (std::size_t c = 0; c < mixture.components.size(); ++c) {
    auto part = first_visit_time_distribution(mdp, mixture.components.branch(c), s0, g, K);
    for (std::size_t t = 0; t < K; ++t) out[t] += mixture.weights[c] * part[t];
  }
  return out;
}

ValueResult first_visit_value_infinite(const FiniteMdp& mdp, const PolicyBranch& branch,
                                       StateIndex s0, StateIndex g, double gamma) {
  check_state(mdp, s0, "first_visit_value_infinite");
  check_state(mdp, g, "first_visit_value_infinite");
  check_branch(mdp, branch);
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw InvalidArgument("first_visit_value_infinite: gamma must lie in [0, 1)");
  }
  const std::size_t n = mdp.num_states();
  std::vector<double> m = unit(n, s0);
  double J = 0.0;
  double w = 1.0;
  for (std::size_t t = 1; t <= branch.horizon(); ++t) {
    m = branch.step(mdp, t - 1, m);
    J += w * m[g];
    m[g] = 0.0;
    w *= gamma;
  }
  const Matrix M = branch.transition_matrix(mdp, branch.horizon());
  Matrix Q = M;
  for (auto& row : Q) row[g] = 0.0;
  const std::vector<double> y = detail::solve_left(Q, gamma, m);
  J += w * detail::left_multiply(y, M)[g];
  return {J, ValueMethod::kLinearSolve, 0.0};
}

ValueResult eval_J(const FiniteMdp& mdp, const Formulation& f, const PolicyBranch& branch,
                   StateIndex s0, StateIndex g) {
  validate_formulation(f, mdp.num_states());
  check_state(mdp, s0, "eval_J");
  check_state(mdp, g, "eval_J");
  check_branch(mdp, branch);
  return std::visit(
      Overloaded{
          [&](const Pe& pe) {
            return ValueResult{occupancy_pe(mdp, branch, s0, pe.gamma)[g], ValueMethod::kLinearSolve,
                               0.0};
          },
          [&](const ET& et) {
            return ValueResult{law_at(mdp, branch, s0, et.K)[g], ValueMethod::kForwardPropagation,
                               0.0};
          },
          [&](const OW& ow) {
            return ValueResult{first_visit_forward(mdp, branch, s0, g, ow.K, ow.gamma),
                               ValueMethod::kForwardPropagation, 0.0};
          },
          [&](const General& G) {
            return ValueResult{general_forward(mdp, G, branch, s0, g), ValueMethod::kLinearSolve,
                               0.0};
          },
      },
      f);
}

ValueResult eval_J(const FiniteMdp& mdp, const Formulation& f, const GoalConditionedPolicy& policy,
                   StateIndex s0, StateIndex g) {
  if (policy.size() != mdp.num_states()) {
    throw InvalidArgument("eval_J: policy must have one branch per goal state");
  }
  return eval_J(mdp, f, policy.branch(g), s0, g);
}

std::vector<double> goal_values(const FiniteMdp& mdp, const Formulation& f,
                                const PolicyBranch& branch, StateIndex s0) {
  validate_formulation(f, mdp.num_states());
  check_state(mdp, s0, "goal_values");
  check_branch(mdp, branch);
  const std::size_t n = mdp.num_states();
  return std::visit(Overloaded{
                        [&](const Pe& pe) { return occupancy_pe(mdp, branch, s0, pe.gamma); },
                        [&](const ET& et) { return law_at(mdp, branch, s0, et.K); },
                        [&](const OW& ow) {
                          std::vector<double> out(n);
                          for (StateIndex g = 0; g < n; ++g) {
                            out[g] = first_visit_forward(mdp, branch, s0, g, ow.K, ow.gamma);
                          }
                          return out;
                        },
                        [&](const General& G) {
                          std::vector<double> out(n);
                          for (StateIndex g = 0; g < n; ++g) {
                            out[g] = general_forward(mdp, G, branch, s0, g);
                          }
                          return out;
                        },
                    },
                    f);
}

std::vector<double> branch_values(const FiniteMdp& mdp, const Formulation& f,
                                  const PolicyBranch& branch, StateIndex g) {
  validate_formulation(f, mdp.num_states());
  check_state(mdp, g, "branch_values");
  check_branch(mdp, branch);
  const std::size_t n = mdp.num_states();
  return std::visit(
      Overloaded{
          [&](const Pe& pe) {
            const std::size_t H = branch.horizon();
            const Matrix M = branch.transition_matrix(mdp, H);
            std::vector<double> b = detail::right_multiply(M, unit(n, g));
            for (double& x : b) x *= 1.0 - pe.gamma;
            std::vector<double> V =
                detail::solve_right(M, std::vector<double>(n, pe.gamma), b);
            for (std::size_t t = H; t-- > 0;) {
              std::vector<double> c(n);
              for (std::size_t s = 0; s < n; ++s) {
                c[s] = (s == g ? 1.0 - pe.gamma : 0.0) + pe.gamma * V[s];
              }
              V = detail::right_multiply(branch.transition_matrix(mdp, t), c);
            }
            return V;
          },
          [&](const ET& et) {
            std::vector<double> V = unit(n, g);
            for (std::size_t t = et.K; t-- > 0;) {
              V = detail::right_multiply(branch.transition_matrix(mdp, t), V);
            }
            return V;
          },
          [&](const OW& ow) {
            std::vector<double> V(n, 0.0);
            for (std::size_t t = ow.K; t-- > 0;) {
              std::vector<double> c(n);
              for (std::size_t s = 0; s < n; ++s) c[s] = s == g ? 1.0 : ow.gamma * V[s];
              V = detail::right_multiply(branch.transition_matrix(mdp, t), c);
            }
            return V;
          },
          [&](const General& G) { return general_backward(mdp, G, branch, g); },
      },
      f);
}

double test_time_performance(const FiniteMdp& mdp, const Formulation& f,
                             const GoalConditionedPolicy& policy, StateIndex s0,
                             const GoalDistribution& p_goal) {
  if (p_goal.size() != mdp.num_states() || policy.size() != mdp.num_states()) {
    throw InvalidArgument("test_time_performance: need one branch and one weight per goal");
  }
  double J = 0.0;
  for (StateIndex g = 0; g < mdp.num_states(); ++g) {
    J += p_goal[g] * eval_J(mdp, f, policy.branch(g), s0, g).value;
  }
  return J;
}

OptimalSolution maximize_state_reward(const FiniteMdp& mdp, const Formulation& f,
                                      const std::vector<double>& reward) {
  validate_formulation(f, mdp.num_states());
  if (reward.size() != mdp.num_states()) throw InvalidArgument("maximize_state_reward: reward size");
  if (const auto* pe = std::get_if<Pe>(&f)) return pe_reward(mdp, pe->gamma, reward);
  if (const auto* et = std::get_if<ET>(&f)) {
    return finite_horizon(mdp, et->K, reward, [](const std::vector<double>& V) { return V; });
  }
  throw InvalidArgument("maximize_state_reward: only pe and et formulations are supported");
}

OptimalSolution solve_optimal(const FiniteMdp& mdp, const Formulation& f, StateIndex g) {
  validate_formulation(f, mdp.num_states());
  check_state(mdp, g, "solve_optimal");
  const std::size_t n = mdp.num_states();
  if (const auto* ow = std::get_if<OW>(&f)) {
    const double gamma = ow->gamma;
    return finite_horizon(mdp, ow->K, std::vector<double>(n, 0.0),
                          [&](const std::vector<double>& V) {
                            std::vector<double> c(n);
                            for (std::size_t s = 0; s < n; ++s) c[s] = s == g ? 1.0 : gamma * V[s];
                            return c;
                          });
  }
  if (std::holds_alternative<General>(f)) {
    throw InvalidArgument("solve_optimal: general formulations are evaluation-only");
  }
  return maximize_state_reward(mdp, f, unit(n, g));
}

double stationary_occupancy(const FiniteMdp& mdp, const PolicyBranch& branch, StateIndex g,
                            StateIndex s0) {
  check_state(mdp, s0, "stationary_occupancy");
  check_state(mdp, g, "stationary_occupancy");
  check_branch(mdp, branch);
  const std::vector<double> law = state_law(mdp, branch, s0, branch.horizon());
  const Matrix limit = detail::cesaro_limit(branch.transition_matrix(mdp, branch.horizon()));
  return detail::left_multiply(law, limit)[g];
}

ValueResult geometric_et_value(const FiniteMdp& mdp, const PolicyBranch& branch, StateIndex s0,
                               StateIndex g, double gamma, double tol) {
  check_state(mdp, s0, "geometric_et_value");
  check_state(mdp, g, "geometric_et_value");
  check_branch(mdp, branch);
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidArgument("geometric_et_value: gamma out of range");
  if (!(tol > 0.0)) throw InvalidArgument("geometric_et_value: tol must be positive");
  std::vector<double> law = unit(mdp.num_states(), s0);
  double J = 0.0;
  double w = 1.0;
  for (std::size_t t = 1;; ++t) {
    law = branch.step(mdp, t - 1, law);
    J += (1.0 - gamma) * w * law[g];
    w *= gamma;
    if (w <= tol) break;
  }
  return {J, ValueMethod::kTruncatedSeries, w};
}

HittingMoments hitting_time_moments(const FiniteMdp& mdp, const PolicyBranch& branch, StateIndex g) {
  check_state(mdp, g, "hitting_time_moments");
  check_branch(mdp, branch);
  if (!branch.is_stationary()) throw InvalidArgument("hitting_time_moments: branch must be stationary");
  const std::size_t n = mdp.num_states();
  const Matrix M = branch.transition_matrix(mdp, 0);
  std::vector<bool> reaches(n, false);
  reaches[g] = true;
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (reaches[s]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (M[s][j] > 0.0 && reaches[j]) {
          reaches[s] = true;
          grew = true;
          break;
        }
      }
    }
  }
  if (!std::all_of(reaches.begin(), reaches.end(), [](bool b) { return b; })) {
    throw InvalidArgument("hitting_time_moments: goal is not reached almost surely");
  }
  Matrix Q = M;
  for (auto& row : Q) row[g] = 0.0;
  const std::vector<double> ones(n, 1.0);
  HittingMoments out;
  out.mean = detail::solve_right(Q, ones, ones);
  std::vector<double> b = detail::right_multiply(Q, out.mean);
  for (double& x : b) x = 1.0 + 2.0 * x;
  out.second_moment = detail::solve_right(Q, ones, b);
  return out;
}

}  // namespace gclab
