#include "gclab/search.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "gclab/caps.hpp"
#include "gclab/format.hpp"
#include "gclab/rng.hpp"
#include "gclab/sensitivity.hpp"
#include "gclab/values.hpp"

namespace gclab {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string describe_instance(const std::string& family, std::size_t K, double gamma, StateIndex s0) {
  return family + " K=" + std::to_string(K) + " gamma=" + format_number(gamma) +
         " s0=" + std::to_string(s0);
}

}  // namespace

bool DisagreementCertificate::holds(double margin) const {
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j && !(values[i][j] < values[i][i] - margin)) return false;
    }
  }
  return true;
}

DisagreementCertificate certify_disagreement(const FiniteMdp& mdp, double gamma, std::size_t K,
                                             StateIndex s0, StateIndex goal) {
  DisagreementCertificate c;
  c.gamma = gamma;
  c.K = K;
  c.s0 = s0;
  c.goal = goal;
  const std::array<Formulation, 3> fs{Pe{gamma}, ET{K}, OW{K, gamma}};
  for (std::size_t j = 0; j < 3; ++j) c.branches[j] = solve_optimal(mdp, fs[j], goal).branch;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      c.values[i][j] = eval_J(mdp, fs[i], c.branches[j], s0, goal).value;
    }
  }
  return c;
}

bool ControlCertificate::holds(double margin) const {
  return exhaustive && j_incontrol < j_optimal - margin && c_incontrol > c_optimal + margin;
}

ControlCertificate certify_control_vs_optimal(const FiniteMdp& mdp, std::size_t K, double gamma,
                                              StateIndex s0) {
  const std::size_t n = mdp.num_states();
  const OW f{K, gamma};
  const auto p = GoalDistribution::uniform(n);
  ControlCertificate c;
  c.K = K;
  c.gamma = gamma;
  c.s0 = s0;
  std::vector<PolicyBranch> best;
  std::vector<double> best_j(n);
  for (StateIndex g = 0; g < n; ++g) {
    auto sol = solve_optimal(mdp, f, g);
    best_j[g] = sol.values[s0];
    best.push_back(std::move(sol.branch));
  }
  c.optimal = GoalConditionedPolicy::over_goals(mdp, std::move(best));
  c.j_optimal = test_time_performance(mdp, f, c.optimal, s0, p);
  c.c_optimal = goal_sensitivity(mdp, f, c.optimal, s0, p).value;

  auto incontrol = search_max_incontrol(mdp, f, s0, p);
  c.incontrol = std::move(incontrol.policy);
  c.exhaustive = incontrol.exhaustive;
  c.j_incontrol = test_time_performance(mdp, f, c.incontrol, s0, p);
  c.c_incontrol = goal_sensitivity(mdp, f, c.incontrol, s0, p).value;

  if (c.exhaustive) {
    // Best goal value among all per-branch maximizers of the sensitivity term.
    std::vector<double> top(n, -std::numeric_limits<double>::infinity());
    std::vector<double> top_j(n, -1.0);
    auto reach = reachable_by_time(mdp, s0, K);
    std::vector<std::vector<bool>> free(K + 1, std::vector<bool>(n, false));
    for (std::size_t t = 0; t < K; ++t) free[t] = reach[t];
    for_each_masked_policy(mdp, K, free, enumeration_cap(), [&](const PolicyBranch& b) {
      const auto J = goal_values(mdp, f, b, s0);
      double mean = 0.0;
      for (double v : J) mean += v / static_cast<double>(n);
      for (StateIndex g = 0; g < n; ++g) {
        const double phi = J[g] - mean;
        if (phi > top[g] + kTieTolerance) {
          top[g] = phi;
          top_j[g] = J[g];
        } else if (phi >= top[g] - kTieTolerance) {
          top_j[g] = std::max(top_j[g], J[g]);
        }
      }
    });
    for (StateIndex g = 0; g < n; ++g) {
      if (top_j[g] < best_j[g] - 1e-6) c.all_maximizers_suboptimal = true;
    }
  }
  return c;
}

SearchResult counterexample_search(SearchTarget target, const SearchConfig& config, std::uint64_t seed) {
  if (config.max_states == 0 || config.max_actions == 0 || config.max_K == 0) {
    throw InvalidArgument("counterexample_search: sizes must be positive");
  }
  const auto start = Clock::now();
  SearchResult out;
  auto finish = [&](std::string report) {
    out.seconds = elapsed(start);
    out.report = std::move(report);
    return out;
  };

  if (config.max_states == 1) {
    // Every one-state MDP has the same kernel, so all policies behave alike.
    out.instances_examined = 1;
    return finish("exhausted: with one state every action row is the point mass on that state, "
                  "so all policies induce the same behavior and no witness exists");
  }

  if (target == SearchTarget::kFormulationDisagreement) {
    // Structured family first: river environments on a parameter grid.
    const std::vector<double> eps{0.02, 0.05, 0.08, 0.1, 0.15, 0.2, 0.3};
    if (config.max_states >= 5 && config.max_K >= 2) {
      for (double e1 : eps) {
        for (double e2 : eps) {
          if (!(e1 < e2)) continue;
          const FiniteMdp river = build_river_env(e1, e2);
          for (double gamma : config.gammas) {
            ++out.instances_examined;
            auto cert = certify_disagreement(river, gamma, 2, 0, 3);
            if (cert.holds()) {
              out.found = true;
              out.witness = river;
              out.family = "river(" + format_number(e1) + "," + format_number(e2) + ")";
              out.disagreement = std::move(cert);
              return finish("witness: " + describe_instance(out.family, 2, gamma, 0) + " goal=g");
            }
          }
        }
      }
    }
    for (std::uint64_t i = 0; i < config.max_instances; ++i) {
      if (elapsed(start) > config.time_budget_seconds) break;
      Rng rng(derive_seed(seed, "formulation-disagreement", i));
      const std::size_t n = 2 + rng.below(config.max_states - 1);
      const std::size_t a = 1 + rng.below(config.max_actions);
      const std::size_t b = 1 + rng.below(n);
      const std::uint64_t mseed = rng.next();
      const FiniteMdp mdp = random_mdp(n, a, b, mseed);
      const double gamma = config.gammas[rng.below(config.gammas.size())];
      const std::size_t K = 1 + rng.below(config.max_K);
      ++out.instances_examined;
      for (StateIndex s0 = 0; s0 < n; ++s0) {
        for (StateIndex g = 0; g < n; ++g) {
          auto cert = certify_disagreement(mdp, gamma, K, s0, g);
          if (cert.holds()) {
            out.found = true;
            out.witness = mdp;
            out.family = "random_mdp(" + std::to_string(n) + "," + std::to_string(a) + "," +
                         std::to_string(b) + "," + std::to_string(mseed) + ")";
            out.disagreement = std::move(cert);
            return finish("witness: " + describe_instance(out.family, K, gamma, s0) +
                          " goal=" + mdp.state_name(g));
          }
        }
      }
    }
    return finish("budget exhausted after " + std::to_string(out.instances_examined) +
                  " instances without a witness");
  }

  // OW sensitivity maximizer versus optimal policy; K = 2, gamma = 1 first.
  std::vector<std::pair<std::size_t, double>> settings;
  for (std::size_t K = std::min<std::size_t>(2, config.max_K); K <= config.max_K; ++K) {
    settings.emplace_back(K, 1.0);
    for (double g : config.gammas) settings.emplace_back(K, g);
  }
  for (std::uint64_t i = 0; i < config.max_instances; ++i) {
    if (elapsed(start) > config.time_budget_seconds) break;
    Rng rng(derive_seed(seed, "ow-control-vs-optimal", i));
    const std::size_t n = 2 + rng.below(config.max_states - 1);
    const std::size_t a = 1 + rng.below(config.max_actions);
    const std::size_t b = 1 + rng.below(n);
    const std::uint64_t mseed = rng.next();
    const auto [K, gamma] = settings[rng.below(4) != 0 ? 0 : rng.below(settings.size())];
    const FiniteMdp mdp = random_mdp(n, a, b, mseed);
    ++out.instances_examined;
    for (StateIndex s0 = 0; s0 < n; ++s0) {
      auto cert = certify_control_vs_optimal(mdp, K, gamma, s0);
      if (cert.holds()) {
        out.found = true;
        out.witness = mdp;
        out.family = "random_mdp(" + std::to_string(n) + "," + std::to_string(a) + "," +
                     std::to_string(b) + "," + std::to_string(mseed) + ")";
        out.control = std::move(cert);
        return finish("witness: " + describe_instance(out.family, K, gamma, s0));
      }
    }
  }
  return finish("budget exhausted after " + std::to_string(out.instances_examined) +
                " instances without a witness");
}

}  // namespace gclab
