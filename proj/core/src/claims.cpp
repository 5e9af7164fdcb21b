#include "gclab/claims.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>

#include "gclab/caps.hpp"
#include "gclab/format.hpp"
#include "gclab/info.hpp"
#include "gclab/misl.hpp"
#include "gclab/rng.hpp"
#include "gclab/search.hpp"
#include "gclab/sensitivity.hpp"
#include "gclab/values.hpp"
#include "linalg.hpp"

namespace gclab {
namespace {

constexpr double kExact = 1e-12;
constexpr double kTight = 1e-10;

struct Context {
  std::string id;
  InstanceConfig config;
  std::uint64_t master = 0;
  std::uint64_t seed = 0;  // per-cell seed

  std::uint64_t sub(std::string_view tag, std::uint64_t i = 0) const { return derive_seed(seed, tag, i); }
};

// Tracks the worst sub-check of a claim.
class Verdict {
 public:
  explicit Verdict(double tolerance) : tol_(tolerance) {}

  void le(double lhs, double rhs, const std::string& what) { record(lhs - rhs, lhs, rhs, what + " (<=)"); }
  void eq(double lhs, double rhs, const std::string& what) {
    record(std::fabs(lhs - rhs), lhs, rhs, what + " (==)");
  }
  void require(bool ok, const std::string& what) {
    if (!ok && hard_.empty()) hard_ = what;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  void mark_bound_checked() { bound_checked_ = true; }

  void finish(ClaimCheck& c) const {
    c.lhs = lhs_;
    c.rhs = rhs_;
    c.tolerance = tol_;
    const bool ok = hard_.empty() && !(worst_ > tol_) && !std::isnan(worst_);
    c.status = !ok ? ClaimStatus::kFail : bound_checked_ ? ClaimStatus::kBoundChecked : ClaimStatus::kPass;
    std::string d = "worst: " + what_;
    if (!hard_.empty()) d = "failed: " + hard_ + "; " + d;
    if (!notes_.empty()) d += "; " + notes_;
    c.detail = d;
  }

 private:
  void record(double violation, double lhs, double rhs, const std::string& what) {
    if (!what_.empty() && (std::isnan(worst_) || !(std::isnan(violation) || violation > worst_))) return;
    worst_ = violation;
    lhs_ = lhs;
    rhs_ = rhs;
    what_ = what;
  }

  double tol_;
  double worst_ = -std::numeric_limits<double>::infinity();
  double lhs_ = 0.0;
  double rhs_ = 0.0;
  std::string what_;
  std::string hard_;
  std::string notes_;
  bool bound_checked_ = false;
};

struct Skip {
  std::string reason;
  std::string detail;
};

std::string mdp_tag(const char* name, std::size_t n, std::size_t a, std::size_t b, std::uint64_t s) {
  return std::string(name) + "(" + std::to_string(n) + "," + std::to_string(a) + "," + std::to_string(b) +
         "," + std::to_string(s) + ")";
}

ActionIndex greedy_action(const PolicyBranch& b, std::size_t t, StateIndex s) {
  auto pi = b.action_probs(t, s);
  return static_cast<ActionIndex>(std::max_element(pi.begin(), pi.end()) - pi.begin());
}

PolicyBranch random_stationary_deterministic(const FiniteMdp& mdp, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ActionIndex> choice(mdp.num_states());
  for (StateIndex s = 0; s < mdp.num_states(); ++s) choice[s] = static_cast<ActionIndex>(rng.below(mdp.num_actions(s)));
  return PolicyBranch::stationary(mdp, choice);
}

GoalConditionedPolicy optimal_family(const FiniteMdp& mdp, const Formulation& f) {
  std::vector<PolicyBranch> branches;
  for (StateIndex g = 0; g < mdp.num_states(); ++g) branches.push_back(solve_optimal(mdp, f, g).branch);
  return GoalConditionedPolicy::over_goals(mdp, std::move(branches));
}

// Consistent policy at s0 built from a random skill policy and the argmax map.
GoalConditionedPolicy mapped_consistent_policy(const FiniteMdp& mdp, const Formulation& f, std::size_t n_z,
                                               std::size_t horizon, StateIndex s0, std::uint64_t seed) {
  const auto skills = uniform_random_policy(mdp, ConditioningDomain::kSkills, n_z, horizon, seed);
  const auto map = consistent_mapping(mdp, f, skills);
  return compose_downstream_by_start(mdp, skills, map).at(s0);
}

double max_norm(const detail::Matrix& M) {
  double best = 0.0;
  for (const auto& row : M) {
    double s = 0.0;
    for (double v : row) s += std::fabs(v);
    best = std::max(best, s);
  }
  return best;
}

// ---------------------------------------------------------------- claims

void claim_p1(const Context&, ClaimCheck& c, Verdict& v) {
  const double gamma = 0.35;
  const std::size_t K = 2;
  const FiniteMdp mdp = build_river_env(0.08, 0.2);
  c.instance_id = "river(0.08,0.2) gamma=0.35 K=2 s1->g";
  const StateIndex s1 = mdp.state_index("s1");
  const StateIndex s2 = mdp.state_index("s2");
  const StateIndex g = mdp.state_index("g");
  const auto pe = solve_optimal(mdp, Pe{gamma}, g);
  const auto et = solve_optimal(mdp, ET{K}, g);
  const auto ow = solve_optimal(mdp, OW{K, gamma}, g);
  const std::string a_pe = mdp.action_name(s1, greedy_action(pe.branch, 0, s1));
  const std::string a_et = mdp.action_name(s1, greedy_action(et.branch, 0, s1));
  const std::string a_et2 = mdp.action_name(s2, greedy_action(et.branch, 1, s2));
  const std::string a_ow = mdp.action_name(s1, greedy_action(ow.branch, 0, s1));
  v.require(a_pe == "a_f", "pe first action " + a_pe);
  v.require(a_et == "a_f" && a_et2 == "a_j", "et actions " + a_et + "," + a_et2);
  v.require(a_ow == "a_j", "ow first action " + a_ow);
  v.eq(pe.values[s1], 0.1225, "J*_Pe");
  v.eq(et.values[s1], 0.2, "J*_ET");
  v.eq(ow.values[s1], 0.08, "J*_OW");
  const auto cert = certify_disagreement(mdp, gamma, K, s1, g);
  v.require(cert.holds(), "optimal branches are not mutually suboptimal");
  v.note("first actions pe=" + a_pe + " et=" + a_et + "," + a_et2 + " ow=" + a_ow);
}

void claim_a1(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp")) + " gamma=0.999";
  const double gamma = 0.999;
  const PolicyBranch branch = random_stationary_deterministic(mdp, x.sub("policy"));
  const auto P = branch.transition_matrix(mdp, 0);
  const auto Pi = detail::cesaro_limit(P);
  const std::size_t n = mdp.num_states();
  detail::Matrix A(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) A[i][j] = (i == j ? 1.0 : 0.0) - P[i][j] + Pi[i][j];
  }
  auto H = detail::inverse(A);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) H[i][j] -= Pi[i][j];
  }
  const double bound = 2.0 * (1.0 - gamma) * max_norm(H);
  for (StateIndex s0 = 0; s0 < n; ++s0) {
    for (StateIndex g = 0; g < n; ++g) {
      const double J = eval_J(mdp, Pe{gamma}, branch, s0, g).value;
      const double occ = stationary_occupancy(mdp, branch, g, s0);
      v.le(std::fabs(J - occ), bound, "|J_Pe - occupancy| at s0=" + std::to_string(s0) + " g=" + std::to_string(g));
    }
  }
}

void claim_a2(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  const double gamma = (x.seed % 2 == 0) ? 0.3 : 0.9;
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp")) +
                  " gamma=" + format_number(gamma);
  const PolicyBranch branch = PolicyBranch::random(mdp, 2, x.sub("policy"));
  for (StateIndex s0 = 0; s0 < mdp.num_states(); ++s0) {
    for (StateIndex g = 0; g < mdp.num_states(); ++g) {
      const double J = eval_J(mdp, Pe{gamma}, branch, s0, g).value;
      const auto geo = geometric_et_value(mdp, branch, s0, g, gamma, 1e-13);
      v.eq(J, geo.value, "J_Pe vs averaged ET at s0=" + std::to_string(s0) + " g=" + std::to_string(g));
    }
  }
}

void claim_a3(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  // Full-support rows make every goal reachable with probability one.
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.n_states, x.sub("mdp"));
  const double eps = 1e-3;
  const double gamma = 1.0 - eps;
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.n_states, x.sub("mdp")) + " gamma=0.999";
  const PolicyBranch branch = random_stationary_deterministic(mdp, x.sub("policy"));
  for (StateIndex g = 0; g < mdp.num_states(); ++g) {
    const auto m = hitting_time_moments(mdp, branch, g);
    for (StateIndex s0 = 0; s0 < mdp.num_states(); ++s0) {
      const double J = first_visit_value_infinite(mdp, branch, s0, g, gamma).value;
      const double approx = 1.0 + eps - eps * m.mean[s0];
      const double curvature = m.second_moment[s0] - 3.0 * m.mean[s0] + 2.0;
      const std::string at = " at s0=" + std::to_string(s0) + " g=" + std::to_string(g);
      v.le(approx, J, "first-order approximation below J" + at);
      v.le(J - approx, 0.5 * eps * eps * curvature, "second-order remainder" + at);
    }
  }
}

void claim_a4(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp")) +
                  " pe(0) et(1) ow(1,0.5) ow(3,0)";
  const std::vector<Formulation> fs{Pe{0.0}, ET{1}, OW{1, 0.5}, OW{3, 0.0}};
  for (StateIndex g = 0; g < mdp.num_states(); ++g) {
    std::vector<OptimalSolution> sols;
    for (const auto& f : fs) sols.push_back(solve_optimal(mdp, f, g));
    for (std::size_t i = 1; i < fs.size(); ++i) {
      for (StateIndex s = 0; s < mdp.num_states(); ++s) {
        v.eq(sols[i].values[s], sols[0].values[s], describe(fs[i]) + " vs pe(0) value at s=" + std::to_string(s));
        const auto& q0 = sols[0].first_step_q[s];
        const auto& qi = sols[i].first_step_q[s];
        const double m0 = *std::max_element(q0.begin(), q0.end());
        const double mi = *std::max_element(qi.begin(), qi.end());
        for (ActionIndex a = 0; a < q0.size(); ++a) {
          const bool in0 = q0[a] >= m0 - kTieTolerance;
          const bool ini = qi[a] >= mi - kTieTolerance;
          v.require(in0 == ini, "argmax sets differ for " + describe(fs[i]) + " at s=" + std::to_string(s));
        }
        v.require(greedy_action(sols[i].branch, 0, s) == greedy_action(sols[0].branch, 0, s),
                  "chosen actions differ for " + describe(fs[i]));
      }
    }
  }
}

void claim_a5(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  const double gamma = 0.9;
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp")) +
                  " gamma=0.9 stationary";
  const PolicyBranch branch = PolicyBranch::random(mdp, 0, x.sub("policy"));
  for (StateIndex g = 0; g < mdp.num_states(); ++g) {
    const double back = first_visit_value_infinite(mdp, branch, g, g, gamma).value;
    for (StateIndex s0 = 0; s0 < mdp.num_states(); ++s0) {
      const double J = eval_J(mdp, Pe{gamma}, branch, s0, g).value;
      const double ow = first_visit_value_infinite(mdp, branch, s0, g, gamma).value;
      v.eq(J, (1.0 - gamma) * ow / (1.0 - gamma * back),
           "renewal relation at s0=" + std::to_string(s0) + " g=" + std::to_string(g));
    }
  }
}

// Stationary branch that moves along a shortest path to g and, at g, takes the quickest return.
PolicyBranch shortest_path_branch(const FiniteMdp& mdp, StateIndex g) {
  const std::size_t n = mdp.num_states();
  const std::size_t inf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(n, inf);
  dist[g] = 0;
  std::queue<StateIndex> q;
  q.push(g);
  while (!q.empty()) {
    const StateIndex cur = q.front();
    q.pop();
    for (StateIndex s = 0; s < n; ++s) {
      if (dist[s] != inf) continue;
      for (ActionIndex a = 0; a < mdp.num_actions(s); ++a) {
        if (deterministic_successor(mdp, s, a) == cur) {
          dist[s] = dist[cur] + 1;
          q.push(s);
          break;
        }
      }
    }
  }
  std::vector<ActionIndex> choice(n, 0);
  for (StateIndex s = 0; s < n; ++s) {
    std::size_t best = inf;
    for (ActionIndex a = 0; a < mdp.num_actions(s); ++a) {
      const std::size_t d = dist[deterministic_successor(mdp, s, a)];
      if (d != inf && d < best) {
        best = d;
        choice[s] = a;
      }
    }
  }
  return PolicyBranch::stationary(mdp, choice);
}

void claim_a6(const Context& x, ClaimCheck& c, Verdict& v) {
  const std::size_t side = 2 + x.seed % 3;
  const FiniteMdp mdp = deterministic_grid(side);
  c.instance_id = "deterministic_grid(" + std::to_string(side) + ")";
  for (StateIndex g = 0; g < mdp.num_states(); ++g) {
    const PolicyBranch sp = shortest_path_branch(mdp, g);
    for (double gamma : {0.5, 0.9}) {
      std::vector<Formulation> fs{Pe{gamma}};
      for (std::size_t K : {3, 6}) fs.push_back(OW{K, gamma});
      for (const auto& f : fs) {
        const auto best = solve_optimal(mdp, f, g).values;
        const auto got = branch_values(mdp, f, sp, g);
        for (StateIndex s0 = 0; s0 < mdp.num_states(); ++s0) {
          v.eq(got[s0], best[s0], describe(f) + " shortest path at s0=" + std::to_string(s0) + " g=" + std::to_string(g));
        }
      }
    }
  }
}

void claim_a7(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_waiting_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  c.instance_id = mdp_tag("random_waiting_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  const std::size_t n = mdp.num_states();
  std::vector<ActionIndex> wait(n, 0);
  for (StateIndex s = 0; s < n; ++s) wait[s] = mdp.find_action(s, "wait").value();
  for (std::size_t K : {1, 2, 3}) {
    for (StateIndex g = 0; g < n; ++g) {
      const auto ow = solve_optimal(mdp, OW{K, 1.0}, g);
      const auto et = solve_optimal(mdp, ET{K}, g);
      // The OW optimum modified to wait at g is optimal for both.
      std::vector<std::vector<std::vector<double>>> probs(K + 1);
      for (std::size_t t = 0; t <= K; ++t) {
        for (StateIndex s = 0; s < n; ++s) {
          auto pi = ow.branch.action_probs(t, s);
          std::vector<double> row(pi.begin(), pi.end());
          if (s == g) {
            std::fill(row.begin(), row.end(), 0.0);
            row[wait[s]] = 1.0;
          }
          probs[t].push_back(std::move(row));
        }
      }
      const PolicyBranch waiting(mdp, K, probs);
      const auto et_wait = branch_values(mdp, ET{K}, waiting, g);
      for (StateIndex s0 = 0; s0 < n; ++s0) {
        const std::string at = " K=" + std::to_string(K) + " s0=" + std::to_string(s0) + " g=" + std::to_string(g);
        v.eq(ow.values[s0], et.values[s0], "J*_OW(K,1) vs J*_ET(K)" + at);
        v.eq(et_wait[s0], et.values[s0], "waiting branch under ET" + at);
      }
    }
  }
}

void claim_t11(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  const std::size_t n = mdp.num_states();
  const auto policy = uniform_random_policy(mdp, ConditioningDomain::kGoals, n, 3, x.sub("policy"));
  const auto p = GoalDistribution::uniform(n);
  const std::vector<Formulation> fs{Pe{0.3}, Pe{0.9}, ET{1}, ET{2}, ET{3}};
  for (const auto& f : fs) {
    for (StateIndex s0 = 0; s0 < n; ++s0) {
      const double J = test_time_performance(mdp, f, policy, s0, p);
      const double C = goal_sensitivity(mdp, f, policy, s0, p).value;
      v.eq(J - C, 1.0 / static_cast<double>(n), describe(f) + " J - C at s0=" + std::to_string(s0));
    }
  }
}

General random_nonnegative_general(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  General f;
  f.horizon = 2;
  auto table = [&](double scale) {
    StateGoalTable t(n, std::vector<double>(n));
    for (auto& row : t) {
      for (double& e : row) e = scale * rng.uniform();
    }
    return t;
  };
  f.rewards.push_back(table(0.0));
  f.discounts.push_back(table(0.0));
  for (std::size_t t = 1; t <= f.horizon; ++t) {
    f.rewards.push_back(table(1.0));
    f.discounts.push_back(table(1.0));
  }
  f.reward_tail = table(1.0);
  f.discount_tail = table(0.5);
  return f;
}

void claim_t12(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp")) + " + star_mdp";
  const std::size_t n = mdp.num_states();
  const double ratio = static_cast<double>(n) / static_cast<double>(n - 1);
  const auto policy = uniform_random_policy(mdp, ConditioningDomain::kGoals, n, 3, x.sub("policy"));
  const auto p = GoalDistribution::uniform(n);
  std::vector<Formulation> fs;
  for (std::size_t K : {1, 2, 3}) {
    for (double gamma : {0.5, 1.0}) fs.push_back(OW{K, gamma});
  }
  fs.push_back(random_nonnegative_general(n, x.sub("general")));
  for (const auto& f : fs) {
    for (StateIndex s0 = 0; s0 < n; ++s0) {
      const double J = test_time_performance(mdp, f, policy, s0, p);
      const double C = goal_sensitivity(mdp, f, policy, s0, p).value;
      v.le(ratio * C, J, describe(f) + " at s0=" + std::to_string(s0));
    }
  }
  // Equality when no branch ever reaches another goal.
  const FiniteMdp star = star_mdp(n);
  std::vector<PolicyBranch> branches;
  for (StateIndex g = 0; g < n; ++g) {
    std::vector<ActionIndex> choice(n, 0);
    choice[0] = static_cast<ActionIndex>(g);
    branches.push_back(PolicyBranch::stationary(star, choice));
  }
  const auto disjoint = GoalConditionedPolicy::over_goals(star, std::move(branches));
  const OW f{2, 0.7};
  const double J = test_time_performance(star, f, disjoint, 0, p);
  const double C = goal_sensitivity(star, f, disjoint, 0, p).value;
  v.eq(J, ratio * C, "equality on star_mdp");
}

void claim_t13(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  const double gamma = (x.seed % 2 == 0) ? 1.0 : 0.5;
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp")) +
                  " ow(2," + format_number(gamma) + ")";
  const std::size_t n = mdp.num_states();
  const double ratio = static_cast<double>(n) / static_cast<double>(n - 1);
  const auto cert = certify_control_vs_optimal(mdp, 2, gamma, 0);
  const double regret = cert.j_optimal - cert.j_incontrol;
  v.le(0.0, regret, "regret non-negative");
  v.le(regret, 1.0 - ratio * cert.c_incontrol, "regret bound");
  v.le(cert.c_optimal, cert.c_incontrol, "C(optimal) <= C*");
  if (!cert.exhaustive) v.mark_bound_checked();
}

void claim_t21(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  const std::size_t n = mdp.num_states();
  const auto policy = uniform_random_policy(mdp, ConditioningDomain::kGoals, n, 3, x.sub("policy"));
  const auto p = GoalDistribution::uniform(n);
  const std::vector<std::pair<Formulation, BehaviorSpec>> cases{
      {Pe{0.3}, SGammaPlus{0.3}}, {Pe{0.9}, SGammaPlus{0.9}}, {ET{1}, SK{1}}, {ET{2}, SK{2}}, {ET{3}, SK{3}}};
  for (const auto& [f, spec] : cases) {
    const double C = goal_sensitivity(mdp, f, policy, 0, p).value;
    const double I = goal_behavior_mi(mdp, policy, 0, p, spec);
    v.le(phi_down(n, 1.0 / static_cast<double>(n) + C), I, describe(f) + " Fano lower bound");
  }
}

void claim_t22(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp")) + " mapped skills";
  const std::size_t n = mdp.num_states();
  const auto p = GoalDistribution::uniform(n);
  const std::vector<std::pair<Formulation, BehaviorSpec>> cases{
      {Pe{0.3}, SGammaPlus{0.3}}, {Pe{0.9}, SGammaPlus{0.9}}, {ET{1}, SK{1}}, {ET{2}, SK{2}}, {ET{3}, SK{3}}};
  std::uint64_t i = 0;
  for (const auto& [f, spec] : cases) {
    const auto policy = mapped_consistent_policy(mdp, f, n, 3, 0, x.sub("skills", i++));
    const double C = goal_sensitivity(mdp, f, policy, 0, p).value;
    const double I = goal_behavior_mi(mdp, policy, 0, p, spec);
    v.le(I, phi_up(n, 1.0 / static_cast<double>(n) + C), describe(f) + " reverse-Fano upper bound");
  }
}

void claim_t23(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp")) + " mapped skills";
  const std::size_t n = mdp.num_states();
  const auto p = GoalDistribution::uniform(n);
  std::uint64_t i = 0;
  for (std::size_t K : {1, 2, 3}) {
    for (double gamma : {0.5, 1.0}) {
      const OW f{K, gamma};
      const auto policy = mapped_consistent_policy(mdp, f, n, K, 0, x.sub("skills", i++));
      const double C = goal_sensitivity(mdp, f, policy, 0, p).value;
      const double I = goal_behavior_mi(mdp, policy, 0, p, FirstVisitVector{K, gamma});
      v.le(ow_mi_lower_bound(C), I, describe(f) + " Pinsker bound");
    }
  }
}

void gap_checks(const FiniteMdp& mdp, const GoalDistribution& p, std::uint64_t seed, Verdict& v) {
  const std::size_t n = mdp.num_states();
  Rng rng(seed);
  const std::size_t n_z = 1 + rng.below(n);
  std::vector<std::size_t> map(n);
  for (auto& z : map) z = rng.below(n_z);
  const auto f = GoalToSkillMap::plain(map, n_z);
  const auto skills = uniform_random_policy(mdp, ConditioningDomain::kSkills, n_z, 2, rng.next());
  const SK spec{2};
  const double j_misl = misl_objective(mdp, skills, 0, SkillPrior::uniform(n_z), spec);
  const double i_goal = goal_behavior_mi(mdp, compose_downstream(mdp, skills, f), 0, p, spec);
  const auto p_f = downstream_skill_distribution(f, p);
  const auto gap = mi_gap_bound(p_f.probs, n_z, n);
  v.le(std::fabs(j_misl - i_goal), gap.bound, "gap bound with n_z=" + std::to_string(n_z));
  v.note("delta=" + format_number(gap.delta));
}

void claim_p3(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp")) + " S_2";
  const std::size_t n = mdp.num_states();
  const auto p = GoalDistribution::uniform(n);
  gap_checks(mdp, p, x.sub("map"), v);
  // Equal preimages under uniform goals leave no gap.
  for (std::size_t n_z = 1; n_z <= n; ++n_z) {
    if (n % n_z != 0) continue;
    std::vector<std::size_t> map(n);
    for (StateIndex g = 0; g < n; ++g) map[g] = g % n_z;
    const auto f = GoalToSkillMap::plain(map, n_z);
    const auto skills = uniform_random_policy(mdp, ConditioningDomain::kSkills, n_z, 2, x.sub("equal", n_z));
    const double j_misl = misl_objective(mdp, skills, 0, SkillPrior::uniform(n_z), SK{2});
    const double i_goal = goal_behavior_mi(mdp, compose_downstream(mdp, skills, f), 0, p, SK{2});
    v.eq(j_misl, i_goal, "equal preimages n_z=" + std::to_string(n_z));
  }
}

void claim_b1(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  const auto p = GoalDistribution::uniform(mdp.num_states());
  for (StateIndex s = 0; s < mdp.num_states(); ++s) {
    v.eq(one_step_controllability(mdp, s), objective_controllability(mdp, ET{1}, s, p).value,
         "one-step controllability at s=" + std::to_string(s));
  }
}

void claim_b2(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, 1, x.sub("mdp"));
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, 1, x.sub("mdp"));
  const std::size_t n = mdp.num_states();
  const auto p = GoalDistribution::uniform(n);
  EmpowermentOptions channel;
  channel.allow_deterministic_shortcut = false;
  for (std::size_t K : {1, 2, 3}) {
    for (StateIndex s0 = 0; s0 < n; ++s0) {
      const double cstar = objective_controllability(mdp, ET{K}, s0, p).value;
      const double target = std::log(1.0 + static_cast<double>(n) * cstar);
      const std::string at = " K=" + std::to_string(K) + " s0=" + std::to_string(s0);
      v.eq(klyubin_empowerment(mdp, s0, K).value, target, "reachable-set count" + at);
      const auto ba = klyubin_empowerment(mdp, s0, K, channel);
      v.require(ba.converged, "capacity iteration did not converge" + at);
      v.eq(ba.value, target, "channel capacity" + at);
    }
  }
}

double max_goal_mi_deterministic(const FiniteMdp& mdp, StateIndex s0, std::size_t K, std::uint64_t& examined) {
  // Every goal picks one deterministic branch; MI is convex in the branch laws,
  // so deterministic choices attain the maximum.
  std::vector<std::vector<bool>> free(K + 1, std::vector<bool>(mdp.num_states(), false));
  auto reach = reachable_by_time(mdp, s0, K);
  for (std::size_t t = 0; t < K; ++t) free[t] = reach[t];
  std::vector<std::vector<double>> laws;
  for_each_masked_policy(mdp, K, free, enumeration_cap(), [&](const PolicyBranch& b) {
    laws.push_back(state_law(mdp, b, s0, K));
  });
  const std::size_t n = mdp.num_states();
  const std::uint64_t total = saturating_pow(laws.size(), n);
  if (total > enumeration_cap()) throw CapExceeded("goal-conditioned policy enumeration", total, enumeration_cap());
  std::vector<std::size_t> pick(n, 0);
  double best = 0.0;
  while (true) {
    JointDistribution j;
    j.condition_labels = mdp.state_names();
    j.prior.assign(n, 1.0 / static_cast<double>(n));
    for (StateIndex s = 0; s < n; ++s) {
      j.outcome_labels.push_back(mdp.state_name(s));
      j.outcome_codes.push_back({s});
    }
    for (StateIndex g = 0; g < n; ++g) j.conditionals.push_back(laws[pick[g]]);
    best = std::max(best, mutual_information(j));
    ++examined;
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++pick[i] < laws.size()) break;
      pick[i] = 0;
    }
    if (i == n) break;
  }
  return best;
}

void claim_c1(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const std::size_t n = k.n_states;
  // Open-loop capacity bounds closed-loop goal policies at K = 1 in any
  // environment and at every K in deterministic ones.
  const FiniteMdp noisy = random_mdp(n, k.n_actions, k.branching, x.sub("mdp"));
  const FiniteMdp det = random_mdp(n, k.n_actions, 1, x.sub("det"));
  c.instance_id = mdp_tag("random_mdp", n, k.n_actions, k.branching, x.sub("mdp")) + " K=1; " +
                  mdp_tag("random_mdp", n, k.n_actions, 1, x.sub("det")) + " K=2; fork_mdp";
  const auto p = GoalDistribution::uniform(n);
  const std::vector<std::pair<const FiniteMdp*, std::size_t>> cases{{&noisy, 1}, {&det, 2}};
  std::uint64_t i = 0;
  for (const auto& [mdp, K] : cases) {
    const auto emp = klyubin_empowerment(*mdp, 0, K);
    double best = 0.0;
    for (int r = 0; r < 8; ++r) {
      best = std::max(best, goal_behavior_mi(*mdp, uniform_random_policy(*mdp, ConditioningDomain::kGoals, n, K, x.sub("pi", i++)), 0, p, SK{K}));
      best = std::max(best, goal_behavior_mi(*mdp, random_deterministic_policy(*mdp, ConditioningDomain::kGoals, n, K, x.sub("pi", i++)), 0, p, SK{K}));
    }
    best = std::max(best, goal_behavior_mi(*mdp, optimal_family(*mdp, ET{K}), 0, p, SK{K}));
    v.le(best, emp.upper, "sampled max I(G;S_K) vs capacity K=" + std::to_string(K));
  }
  const FiniteMdp fork = fork_mdp();
  std::uint64_t examined = 0;
  const double cap = klyubin_empowerment(fork, 0, 1).value;
  const double max_mi = max_goal_mi_deterministic(fork, 0, 1, examined);
  v.eq(cap, std::log(2.0), "fork capacity");
  v.eq(max_mi, binary_entropy(1.0 / 3.0), "fork max goal MI");
  v.require(cap - max_mi > 0.05, "fork example is not strict");
}

// Deterministic branch reaching `target` at exactly time K from s0.
PolicyBranch branch_to_endpoint(const FiniteMdp& mdp, StateIndex s0, std::size_t K, StateIndex target) {
  const auto reach = reachable_by_time(mdp, s0, K);
  std::vector<std::vector<ActionIndex>> choice(K + 1, std::vector<ActionIndex>(mdp.num_states(), 0));
  StateIndex cur = target;
  for (std::size_t t = K; t-- > 0;) {
    bool found = false;
    for (StateIndex s = 0; s < mdp.num_states() && !found; ++s) {
      if (!reach[t][s]) continue;
      for (ActionIndex a = 0; a < mdp.num_actions(s); ++a) {
        if (deterministic_successor(mdp, s, a) == cur) {
          choice[t][s] = a;
          cur = s;
          found = true;
          break;
        }
      }
    }
    if (!found) throw InvalidArgument("branch_to_endpoint: target not reachable");
  }
  return PolicyBranch::deterministic(mdp, K, choice);
}

void claim_c2(const Context& x, ClaimCheck& c, Verdict& v) {
  const std::size_t side = 2 + x.seed % 2;
  const std::size_t K = 1 + (x.seed / 2) % 2;
  const FiniteMdp mdp = deterministic_grid(side);
  const std::size_t n = mdp.num_states();
  const StateIndex s0 = static_cast<StateIndex>(x.sub("start") % n);
  c.instance_id = "deterministic_grid(" + std::to_string(side) + ") K=" + std::to_string(K) + " s0=" + std::to_string(s0);
  const auto p = GoalDistribution::uniform(n);
  const double cstar = objective_controllability(mdp, ET{K}, s0, p).value;
  // Balanced assignment of goals to reachable endpoints maximizes I(G; S_K).
  const auto reach = reachable_by_time(mdp, s0, K);
  std::vector<StateIndex> ends;
  for (StateIndex s = 0; s < n; ++s) {
    if (reach[K][s]) ends.push_back(s);
  }
  std::vector<StateIndex> endpoint(n);
  std::size_t next = 0;
  for (StateIndex g = 0; g < n; ++g) {
    endpoint[g] = reach[K][g] ? g : ends[next++ % ends.size()];
  }
  std::vector<PolicyBranch> branches;
  for (StateIndex g = 0; g < n; ++g) branches.push_back(branch_to_endpoint(mdp, s0, K, endpoint[g]));
  const auto balanced = GoalConditionedPolicy::over_goals(mdp, std::move(branches));
  const double i_max = goal_behavior_mi(mdp, balanced, s0, p, SK{K});
  v.le(phi_down(n, 1.0 / static_cast<double>(n) + cstar), i_max, "Fano side");
  v.le(i_max, std::log(1.0 + static_cast<double>(n) * cstar), "log(1 + N C*) side");
  std::uint64_t examined = 0;
  const std::uint64_t combos = saturating_pow(count_masked_policies(mdp, [&] {
    std::vector<std::vector<bool>> free(K + 1, std::vector<bool>(n, false));
    for (std::size_t t = 0; t < K; ++t) free[t] = reach[t];
    return free;
  }()), n);
  if (combos <= 100000) {
    v.eq(max_goal_mi_deterministic(mdp, s0, K, examined), i_max, "balanced assignment vs enumeration");
  } else {
    v.note("enumeration skipped above 1e5 policies");
  }
}

void claim_c3(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  const std::size_t K = 1 + x.seed % 3;
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp")) + " K=" + std::to_string(K);
  const std::size_t n = mdp.num_states();
  const auto policy = uniform_random_policy(mdp, ConditioningDomain::kGoals, n, K, x.sub("policy"));
  const std::vector<double> prior(n, 1.0 / static_cast<double>(n));
  const double i_sk = mutual_information(behavior_joint(mdp, policy, 0, prior, SK{K}));
  const double i_path = mutual_information(behavior_joint(mdp, policy, 0, prior, StatePathK{K}));
  const auto traj = behavior_joint(mdp, policy, 0, prior, TrajectoryK{K});
  const double i_traj = mutual_information(traj);
  const double i_f = mutual_information(behavior_joint(mdp, policy, 0, prior, FirstVisitVector{K, 0.7}));
  const auto projected = coarsen(
      traj,
      [](const std::vector<std::size_t>& code) {
        std::vector<std::size_t> states;
        for (std::size_t i = 1; i < code.size(); i += 2) states.push_back(code[i]);
        return states;
      },
      [](const std::vector<std::size_t>& code) {
        std::string s;
        for (auto v : code) s += (s.empty() ? "" : ",") + std::to_string(v);
        return s;
      });
  v.eq(mutual_information(projected), i_path, "projected trajectory vs direct path joint");
  v.le(i_sk, i_path, "I(G;S_K) <= I(G;S_1:K)");
  v.le(i_path, i_traj, "I(G;S_1:K) <= I(G;tau_K)");
  v.le(i_f, i_path, "I(G;F) <= I(G;S_1:K)");
}

std::optional<Skip> claim_d1(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  const std::size_t K = 2 + x.seed % 2;
  const double gamma = 0.7;
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp")) +
                  " ow(" + std::to_string(K) + ",0.7)";
  const std::size_t n = mdp.num_states();
  const auto p = GoalDistribution::uniform(n);
  const OW f{K, gamma};
  const std::vector<std::pair<std::string, GoalConditionedPolicy>> candidates{
      {"optimal family", optimal_family(mdp, f)},
      {"mapped skills", mapped_consistent_policy(mdp, f, n, K, 0, x.sub("skills"))}};
  std::string first_failure;
  for (const auto& [name, policy] : candidates) {
    const auto d = ow_upper_bound(mdp, policy, 0, K, gamma, p);
    if (!d.assumptions_hold()) {
      if (first_failure.empty()) first_failure = d.failed_assumption();
      continue;
    }
    v.le(d.mutual_information, d.bound, "I(G;F) vs bound for " + name);
    v.note("eta=" + format_number(d.eta) + " delta=" + format_number(d.delta) +
           " epsilon=" + format_number(d.epsilon) + " C=" + format_number(d.sensitivity));
    return std::nullopt;
  }
  return Skip{"assumption:" + first_failure, "no candidate policy satisfies the assumptions"};
}

void claim_e1(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  const std::size_t n = mdp.num_states();
  const std::vector<Formulation> fs{Pe{0.7}, ET{2}, OW{2, 0.8}};
  const Formulation& f = fs[x.seed % fs.size()];
  const std::size_t n_z = 2 + x.sub("nz") % (n - 1);
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp")) + " " + describe(f) +
                  " n_z=" + std::to_string(n_z);
  const auto skills = uniform_random_policy(mdp, ConditioningDomain::kSkills, n_z, 2, x.sub("skills"));
  const auto map = consistent_mapping(mdp, f, skills);
  const auto composed = compose_downstream_by_start(mdp, skills, map);
  double worst = -std::numeric_limits<double>::infinity();
  for (StateIndex s0 = 0; s0 < n; ++s0) {
    const auto values = value_matrix(mdp, f, composed.at(s0), s0);
    for (StateIndex g = 0; g < n; ++g) {
      for (StateIndex g2 = 0; g2 < n; ++g2) worst = std::max(worst, values[g][g2] - values[g][g]);
    }
  }
  v.le(worst, 0.0, "max_{s,g,g'} J(s,g,pi_g') - J(s,g,pi_g)");
  const auto report = check_consistency(mdp, f, composed, ConsistencyMode::kPlain, GoalDistribution::uniform(n));
  v.require(report.consistent, "check_consistency reported violations");
}

void claim_f1(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  const std::size_t n = mdp.num_states();
  const bool pe = x.seed % 2 == 0;
  const Formulation f = pe ? Formulation{Pe{0.7}} : Formulation{ET{2}};
  const BehaviorSpec spec = pe ? BehaviorSpec{SGammaPlus{0.7}} : BehaviorSpec{SK{2}};
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp")) + " " + describe(f);
  const auto p = GoalDistribution::uniform(n);
  const auto policy = mapped_consistent_policy(mdp, f, n, 2, 0, x.sub("skills"));
  const auto errors = decoder_errors(behavior_joint(mdp, policy, 0, p.weights(), spec));
  v.eq(errors.naive, errors.bayes, "identity vs Bayes decoder error");
  v.eq(errors.naive, 1.0 - test_time_performance(mdp, f, policy, 0, p), "identity error vs 1 - J");
  // The same holds for a goal-independent policy.
  const auto flat = GoalConditionedPolicy::goal_independent(mdp, PolicyBranch::random(mdp, 2, x.sub("flat")));
  const auto flat_errors = decoder_errors(behavior_joint(mdp, flat, 0, p.weights(), spec));
  v.eq(flat_errors.naive, flat_errors.bayes, "goal-independent policy");
}

void claim_gt1(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  const std::size_t n = mdp.num_states();
  const auto p = random_goal_distribution(n, x.sub("goals"));
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp")) +
                  " p_goal seed " + std::to_string(x.sub("goals"));
  const auto policy = uniform_random_policy(mdp, ConditioningDomain::kGoals, n, 3, x.sub("policy"));
  for (const Formulation& f : {Formulation{Pe{0.3}}, Formulation{Pe{0.9}}, Formulation{ET{1}},
                               Formulation{ET{2}}, Formulation{ET{3}}}) {
    const double J = test_time_performance(mdp, f, policy, 0, p);
    const double C = goal_sensitivity(mdp, f, policy, 0, p).value;
    v.le(p.min() + C, J, describe(f) + " lower");
    v.le(J, p.max() + C, describe(f) + " upper");
    const auto inc = search_max_incontrol(mdp, f, 0, p);
    double jstar = 0.0;
    for (StateIndex g = 0; g < n; ++g) jstar += p[g] * solve_optimal(mdp, f, g).values[0];
    const double regret = jstar - test_time_performance(mdp, f, inc.policy, 0, p);
    v.le(-regret, 0.0, describe(f) + " regret non-negative");
    v.le(regret, p.max() - p.min(), describe(f) + " regret bound");
  }
  for (std::size_t K : {1, 2}) {
    for (double gamma : {0.5, 1.0}) {
      const OW f{K, gamma};
      const double J = test_time_performance(mdp, f, policy, 0, p);
      const double C = goal_sensitivity(mdp, f, policy, 0, p).value;
      v.le(C / (1.0 - p.min()), J, describe(f) + " non-negative reward bound");
      const auto inc = search_max_incontrol(mdp, f, 0, p);
      if (!inc.exhaustive) v.mark_bound_checked();
      double jstar = 0.0;
      for (StateIndex g = 0; g < n; ++g) jstar += p[g] * solve_optimal(mdp, f, g).values[0];
      const double regret = jstar - test_time_performance(mdp, f, inc.policy, 0, p);
      v.le(-regret, 0.0, describe(f) + " regret non-negative");
      v.le(regret, 1.0 - inc.value / (1.0 - p.min()), describe(f) + " regret bound");
    }
  }
}

struct StrongInstance {
  FiniteMdp mdp;
  GoalDistribution p;
};

StrongInstance strong_instance(const Context& x, ClaimCheck& c) {
  const std::size_t n = x.config.n_states;
  StrongInstance s{slippery_complete_mdp(n, 0.02), random_goal_distribution(n, x.sub("goals"))};
  c.instance_id = "slippery_complete_mdp(" + std::to_string(n) + ",0.02) p_goal seed " + std::to_string(x.sub("goals"));
  return s;
}

std::optional<Skip> claim_gt2(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto inst = strong_instance(x, c);
  const auto& mdp = inst.mdp;
  const auto& p = inst.p;
  const std::size_t n = mdp.num_states();
  const std::vector<std::pair<Formulation, BehaviorSpec>> cases{
      {Pe{0.5}, SGammaPlus{0.5}}, {ET{1}, SK{1}}, {ET{2}, SK{2}}};
  bool any = false;
  for (const auto& [f, spec] : cases) {
    const auto policy = optimal_family(mdp, f);
    const double J = test_time_performance(mdp, f, policy, 0, p);
    const double C = goal_sensitivity(mdp, f, policy, 0, p).value;
    const double I = goal_behavior_mi(mdp, policy, 0, p, spec);
    v.le(phi_down_general(p, J), I, describe(f) + " Fano lower bound in J");
    const auto strong = check_consistency_at(mdp, f, policy, 0, ConsistencyMode::kStrong, p);
    if (!strong.consistent) continue;
    any = true;
    v.le(phi_down_general(p, p.min() + C), I, describe(f) + " lower bound in p_min + C");
    v.le(I, phi_up_general(p, J), describe(f) + " upper bound in J");
    v.le(I, phi_up_general(p, p.max() + C), describe(f) + " upper bound in p_max + C");
  }
  // The first-visit Pinsker bound needs no consistency.
  for (std::size_t K : {1, 2}) {
    const OW f{K, 0.8};
    const auto policy = optimal_family(mdp, f);
    const double C = goal_sensitivity(mdp, f, policy, 0, p).value;
    const double I = goal_behavior_mi(mdp, policy, 0, p, FirstVisitVector{K, 0.8});
    v.le(ow_mi_lower_bound(C), I, describe(f) + " Pinsker bound");
  }
  (void)n;
  if (!any) return Skip{"assumption:strong-consistency", "optimal families are not strongly consistent under this p_goal"};
  return std::nullopt;
}

std::optional<Skip> claim_gl1(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto inst = strong_instance(x, c);
  const auto& mdp = inst.mdp;
  const auto& p = inst.p;
  bool any = false;
  const std::vector<std::pair<Formulation, BehaviorSpec>> cases{
      {Pe{0.5}, SGammaPlus{0.5}}, {ET{1}, SK{1}}, {ET{2}, SK{2}}};
  for (const auto& [f, spec] : cases) {
    const auto policy = optimal_family(mdp, f);
    if (!check_consistency_at(mdp, f, policy, 0, ConsistencyMode::kStrong, p).consistent) continue;
    any = true;
    const auto errors = decoder_errors(behavior_joint(mdp, policy, 0, p.weights(), spec));
    v.eq(errors.naive, errors.bayes, describe(f) + " identity vs Bayes decoder error");
  }
  if (!any) return Skip{"assumption:strong-consistency", "optimal families are not strongly consistent under this p_goal"};
  return std::nullopt;
}

void claim_gp3(const Context& x, ClaimCheck& c, Verdict& v) {
  const auto& k = x.config;
  const FiniteMdp mdp = random_mdp(k.n_states, k.n_actions, k.branching, x.sub("mdp"));
  const auto p = random_goal_distribution(mdp.num_states(), x.sub("goals"));
  c.instance_id = mdp_tag("random_mdp", k.n_states, k.n_actions, k.branching, x.sub("mdp")) +
                  " S_2 p_goal seed " + std::to_string(x.sub("goals"));
  gap_checks(mdp, p, x.sub("map"), v);
}

using Runner = std::function<std::optional<Skip>(const Context&, ClaimCheck&, Verdict&)>;

template <typename F>
Runner plain(F f) {
  return [f](const Context& x, ClaimCheck& c, Verdict& v) -> std::optional<Skip> {
    f(x, c, v);
    return std::nullopt;
  };
}

struct Entry {
  ClaimInfo info;
  double tolerance;
  Runner run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table{
      {{"P1", "Prop. 1 (formulations have different optimal policies)",
        "river environment: Pe, ET(2), OW(2,0.35) optima differ at s1"},
       kExact, plain(claim_p1)},
      {{"A1", "Prop. A.1 (Pe tends to steady-state target occupancy)",
        "|J_Pe - Cesaro occupancy| <= 2(1-gamma)||H|| with H the deviation matrix"},
       kTight, plain(claim_a1)},
      {{"A2", "Prop. A.2 (Pe equals exact timing at a geometric horizon)",
        "J_Pe = sum_t (1-gamma) gamma^(t-1) J_ET(t)"},
       1e-9, plain(claim_a2)},
      {{"A3", "Prop. A.3 (OW with gamma near 1 is a shortest-path objective)",
        "0 <= J_OW(inf,1-eps) - (1 + eps - eps E[T]) <= eps^2/2 E[(T-1)(T-2)]"},
       kTight, plain(claim_a3)},
      {{"A4", "Prop. A.4 (one-step horizon case)",
        "Pe(0), ET(1), OW(1,gamma), OW(K,0) share optimal values and argmax sets"},
       kExact, plain(claim_a4)},
      {{"A5", "Prop. A.5 (OW-Pe equivalence as K grows)",
        "J_Pe = (1-gamma) J_OW(inf) / (1 - gamma J_OW(g,g,inf)) for stationary branches"},
       kTight, plain(claim_a5)},
      {{"A6", "Prop. A.6 (OW-Pe equivalence in deterministic environments)",
        "shortest-path branches attain the Pe and OW optima on grids"},
       kExact, plain(claim_a6)},
      {{"A7", "Prop. A.7 (OW-ET equivalence with waiting actions)",
        "J*_OW(K,1) = J*_ET(K) with a waiting action everywhere"},
       kExact, plain(claim_a7)},
      {{"T1.1", "Theorem 1, part 1 (sensitivity decomposition for Pe and ET)", "J = C + 1/N"},
       kTight, plain(claim_t11)},
      {{"T1.2", "Theorem 1, part 2 (non-negative rewards)", "J >= N/(N-1) C, with equality on star_mdp"},
       kExact, plain(claim_t12)},
      {{"T1.3", "Theorem 1, part 3 (maximally in-control OW policy)",
        "0 <= J* - J(pi^C*) <= 1 - N/(N-1) C*"},
       kExact, plain(claim_t13)},
      {{"T2.1", "Theorem 2, part 1 (Fano lower bounds)", "I(G;S') >= phi_down(N, 1/N + C) for all policies"},
       kTight, plain(claim_t21)},
      {{"T2.2", "Theorem 2, part 2 (reverse-Fano upper bounds)",
        "I(G;S') <= phi_up(N, 1/N + C) for consistent policies"},
       kTight, plain(claim_t22)},
      {{"T2.3", "Theorem 2, part 3 (first-visit Pinsker bound)", "I(G;F) >= 2 C_OW^2"},
       kTight, plain(claim_t23)},
      {{"P3", "Prop. 3 (skill-behavior MI gap)",
        "|J_MISL - I(G;S')| <= h(delta) + delta log(N'^2 (N'-1)); zero for equal preimages"},
       kExact, plain(claim_p3)},
      {{"B1", "Prop. B.1 (one-step controllability)", "(1/N) sum_a Delta(a;s) = C*_ET(s,1)"},
       kExact, plain(claim_b1)},
      {{"B2", "Prop. B.2 (empowerment in deterministic environments)", "Emp(s;K) = log(1 + N C*_ET(s,K))"},
       kTight, plain(claim_b2)},
      {{"C1", "Prop. C.1 (goal-state MI below empowerment)",
        "max_pi I(G;S_K) <= Emp(s;K), strict on the fork example"},
       kTight, plain(claim_c1)},
      {{"C2", "Corollary C.2 (deterministic sandwich)",
        "phi_down(N, 1/N + C*_ET) <= max_pi I(G;S_K) <= log(1 + N C*_ET)"},
       kTight, plain(claim_c2)},
      {{"C3", "Corollary C.3 (data processing)", "I(G;S_K), I(G;F) <= I(G;S_1:K) <= I(G;tau_K)"},
       kTight, plain(claim_c3)},
      {{"D1", "Prop. D.1 (first-visit MI upper bound)", "I(G;F) <= 4/(eta delta^2) C_OW + epsilon"},
       kTight, claim_d1},
      {{"E1", "Prop. E.1 (consistency through goal-to-skill maps)",
        "argmax skill maps give plain-consistent downstream policies"},
       kExact, plain(claim_e1)},
      {{"F1", "Decoder lemma (identity decoder is Bayes optimal under consistency)", "p_e = p*_e"},
       kExact, plain(claim_f1)},
      {{"G.T1", "Theorem G.1 (non-uniform goals: sensitivity decomposition)",
        "p_min + C <= J <= p_max + C for Pe/ET; J >= C/(1-p_min) for OW; regret bounds"},
       kTight, plain(claim_gt1)},
      {{"G.T2", "Theorem G.2 (non-uniform goals: MI bounds)",
        "generalized Fano bounds with H[p_goal] under strong consistency; OW Pinsker bound"},
       kTight, claim_gt2},
      {{"G.L1", "Lemma G.1 (non-uniform goals: decoder lemma)", "p_e = p*_e under strong consistency"},
       kExact, claim_gl1},
      {{"G.P3", "Prop. G.3 (non-uniform goals: skill-behavior MI gap)",
        "|J_MISL - I(G;S')| <= h(delta) + delta log(N'^2 (N'-1))"},
       kExact, plain(claim_gp3)},
  };
  return table;
}

const Entry& entry(const std::string& id) {
  for (const auto& e : entries()) {
    if (e.info.id == id) return e;
  }
  throw InvalidArgument("unknown claim id: " + id);
}

}  // namespace

const std::vector<ClaimInfo>& claim_registry() {
  static const std::vector<ClaimInfo> infos = [] {
    std::vector<ClaimInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

const ClaimInfo& claim_info(const std::string& id) { return entry(id).info; }

ClaimCheck run_claim(const std::string& id, const InstanceConfig& config, std::uint64_t seed) {
  const Entry& e = entry(id);
  if (config.n_states < 2 || config.n_actions < 1 || config.branching < 1 || config.branching > config.n_states) {
    throw InvalidArgument("run_claim: need n_states >= 2 and 1 <= branching <= n_states");
  }
  Context x{id, config, seed, derive_seed(seed, id, config.n_states)};
  ClaimCheck c;
  c.claim_id = id;
  c.seed = seed;
  c.instance_id = "n=" + std::to_string(config.n_states);
  Verdict v(e.tolerance);
  try {
    if (auto skip = e.run(x, c, v)) {
      c.status = ClaimStatus::kSkipped;
      c.reason = skip->reason;
      c.detail = skip->detail;
      c.tolerance = e.tolerance;
      return c;
    }
  } catch (const CapExceeded& err) {
    c.status = ClaimStatus::kSkipped;
    c.reason = "cap";
    c.detail = err.what();
    c.tolerance = e.tolerance;
    return c;
  } catch (const std::exception& err) {
    c.status = ClaimStatus::kSkipped;
    c.reason = "error";
    c.detail = err.what();
    c.tolerance = e.tolerance;
    return c;
  }
  v.finish(c);
  return c;
}

VerificationReport random_suite(const SuiteConfig& config) {
  std::vector<std::string> ids = config.claims;
  if (ids.empty()) {
    for (const auto& info : claim_registry()) ids.push_back(info.id);
  }
  for (const auto& id : ids) (void)entry(id);
  VerificationReport report;
  for (std::uint64_t seed : config.seeds) {
    for (std::size_t n : config.sizes) {
      const InstanceConfig ic{n, config.n_actions, std::min(config.branching, n)};
      for (const auto& id : ids) report.checks.push_back(run_claim(id, ic, seed));
    }
  }
  return report;
}

}  // namespace gclab
