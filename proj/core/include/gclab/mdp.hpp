#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gclab/error.hpp"

namespace gclab {

using StateIndex = std::size_t;
using ActionIndex = std::size_t;

/// Maximum allowed deviation of a transition row from unit mass.
inline constexpr double kRowSumTolerance = 1e-9;

/// Finite MDP with named states and per-state action sets.
///
/// The kernel is stored densely: row(s, a) has one entry per state.
/// Construction does not check stochasticity; see validate() and normalized().
class FiniteMdp {
 public:
  using Row = std::vector<double>;

  FiniteMdp() = default;
  FiniteMdp(std::vector<std::string> states, std::vector<std::vector<std::string>> actions,
            std::vector<std::vector<Row>> kernel);

  std::size_t num_states() const noexcept { return states_.size(); }
  std::size_t num_actions(StateIndex s) const { return actions_.at(s).size(); }
  std::size_t max_actions() const noexcept;
  std::size_t total_actions() const noexcept;

  std::span<const double> row(StateIndex s, ActionIndex a) const;
  double prob(StateIndex s, ActionIndex a, StateIndex next) const { return row(s, a)[next]; }

  const std::string& state_name(StateIndex s) const { return states_.at(s); }
  const std::string& action_name(StateIndex s, ActionIndex a) const { return actions_.at(s).at(a); }
  const std::vector<std::string>& state_names() const noexcept { return states_; }
  const std::vector<std::string>& action_names(StateIndex s) const { return actions_.at(s); }

  std::optional<StateIndex> find_state(std::string_view name) const;
  std::optional<ActionIndex> find_action(StateIndex s, std::string_view name) const;

  /// Like find_state, but throws InvalidArgument for unknown names.
  StateIndex state_index(std::string_view name) const;

  bool operator==(const FiniteMdp&) const = default;

 private:
  std::vector<std::string> states_;
  std::vector<std::vector<std::string>> actions_;
  std::vector<std::vector<Row>> kernel_;
};

struct Violation {
  enum class Kind {
    kEmptyStateSet,
    kEmptyActionSet,
    kDuplicateState,
    kDuplicateAction,
    kBadName,
    kShapeMismatch,
    kNegativeProbability,
    kNonFiniteProbability,
    kRowSum,
  };
  Kind kind;
  std::optional<StateIndex> state;
  std::optional<ActionIndex> action;
  double value = 0.0;
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Lists every structural or stochastic defect of the MDP.
ValidationResult validate(const FiniteMdp& mdp);

/// Validates and rescales each row to unit mass.
/// Throws ValidationError if any violation is found. Rows already within a
/// few ulps of unit mass are left untouched so that text round-trips are exact.
FiniteMdp normalized(const FiniteMdp& mdp);

/// Probability vector over goal states; strictly positive entries.
class GoalDistribution {
 public:
  static GoalDistribution uniform(std::size_t n);
  explicit GoalDistribution(std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t g) const { return weights_.at(g); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double min() const;
  double max() const;
  bool is_uniform(double tol = 1e-15) const;

 private:
  std::vector<double> weights_;
};

/// Seeded positive goal distribution with every mass at least `floor`.
GoalDistribution random_goal_distribution(std::size_t n, std::uint64_t seed, double floor = 1e-3);

/// Five-state river with a slow forward path and a risky jump.
/// States s1 s2 s3 g T; a_f moves s1->s2->s3->g; a_j at s1 (s2) reaches g with
/// probability eps1 (eps2) and the absorbing trap T otherwise.
FiniteMdp build_river_env(double eps1, double eps2);

/// n x n grid with actions up, down, left, right, stay; walls clamp.
/// State r*n+c is named r<r>c<c>.
FiniteMdp deterministic_grid(std::size_t n);

/// Each (s, a) row spreads positive mass over `branching` distinct successors.
FiniteMdp random_mdp(std::size_t n_states, std::size_t n_actions, std::size_t branching,
                     std::uint64_t seed);

/// Random MDP where every state additionally has a self-loop action "wait".
FiniteMdp random_waiting_mdp(std::size_t n_states, std::size_t n_actions, std::size_t branching,
                             std::uint64_t seed);

/// One step from `hub` (state 0) reaches state i through action i with
/// certainty; every other state is absorbing.
FiniteMdp star_mdp(std::size_t n_states);

/// States s g1 g2; from s, a1 reaches g1 and a2 reaches g2; g1 and g2 are absorbing.
FiniteMdp fork_mdp();

/// Action to_s<j> moves to state j with probability 1 - slip and otherwise to
/// a uniformly drawn state.
FiniteMdp slippery_complete_mdp(std::size_t n_states, double slip);

struct EnvPredicates {
  bool deterministic = false;
  bool has_waiting_actions = false;
};

EnvPredicates env_predicates(const FiniteMdp& mdp);

/// Successor of a deterministic (s, a); throws if the row is not deterministic.
StateIndex deterministic_successor(const FiniteMdp& mdp, StateIndex s, ActionIndex a);

/// States reachable from s0 in exactly t steps, for t = 0..horizon.
std::vector<std::vector<bool>> reachable_by_time(const FiniteMdp& mdp, StateIndex s0,
                                                 std::size_t horizon);

}  // namespace gclab
