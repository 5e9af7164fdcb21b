#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gclab/mdp.hpp"
#include "gclab/policy.hpp"

namespace gclab {

enum class SearchTarget { kFormulationDisagreement, kOwControlVsOptimal };

struct SearchConfig {
  std::size_t max_states = 5;
  std::size_t max_actions = 2;
  std::size_t max_K = 3;
  std::vector<double> gammas{0.1, 0.2, 0.3, 0.35, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  double time_budget_seconds = 60.0;
  std::uint64_t max_instances = 200000;
};

/// Optimal branches for Pe(gamma), ET(K), OW(K, gamma) at (s0, g) together with
/// values[i][j] = J_i(s0, g, branch j).
struct DisagreementCertificate {
  double gamma = 0.0;
  std::size_t K = 1;
  StateIndex s0 = 0;
  StateIndex goal = 0;
  std::array<PolicyBranch, 3> branches;
  std::array<std::array<double, 3>, 3> values{};

  /// Every optimal branch is worse than `margin` under the other two formulations.
  bool holds(double margin = 1e-9) const;
};

DisagreementCertificate certify_disagreement(const FiniteMdp& mdp, double gamma, std::size_t K,
                                             StateIndex s0, StateIndex goal);

/// Optimal and maximally in-control OW policies under a uniform goal distribution.
struct ControlCertificate {
  std::size_t K = 1;
  double gamma = 1.0;
  StateIndex s0 = 0;
  GoalConditionedPolicy optimal;
  GoalConditionedPolicy incontrol;
  double j_optimal = 0.0;
  double j_incontrol = 0.0;
  double c_optimal = 0.0;
  double c_incontrol = 0.0;
  bool exhaustive = false;
  /// No deterministic maximizer of the sensitivity attains the optimal value.
  bool all_maximizers_suboptimal = false;

  bool holds(double margin = 1e-6) const;
};

ControlCertificate certify_control_vs_optimal(const FiniteMdp& mdp, std::size_t K, double gamma,
                                              StateIndex s0);

struct SearchResult {
  bool found = false;
  std::optional<FiniteMdp> witness;
  std::string family;
  std::optional<DisagreementCertificate> disagreement;
  std::optional<ControlCertificate> control;
  std::uint64_t instances_examined = 0;
  double seconds = 0.0;
  /// Human-readable summary; for failed searches, why the space was exhausted.
  std::string report;
};

SearchResult counterexample_search(SearchTarget target, const SearchConfig& config, std::uint64_t seed);

/// Witness for the ow-control-vs-optimal target found by the search and frozen.
struct FrozenOwWitness {
  std::string mdp_text;
  std::size_t K = 2;
  double gamma = 1.0;
  StateIndex s0 = 0;
  std::uint64_t search_seed = 0;
};

const FrozenOwWitness& frozen_ow_witness();

}  // namespace gclab
