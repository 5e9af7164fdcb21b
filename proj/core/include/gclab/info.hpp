#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gclab/caps.hpp"
#include "gclab/mdp.hpp"
#include "gclab/policy.hpp"
#include "gclab/values.hpp"

namespace gclab {

/// All information quantities use natural logarithms and 0 log 0 = 0.
double entropy(std::span<const double> p);
double binary_entropy(double x);
/// +infinity when p is not absolutely continuous with respect to q.
double kl_divergence(std::span<const double> p, std::span<const double> q);
double total_variation(std::span<const double> p, std::span<const double> q);

struct DiscreteDistribution {
  std::vector<std::string> labels;
  std::vector<double> probs;
};

struct InfoMeasures {
  double entropy_p = 0.0;
  double entropy_q = 0.0;
  double kl_pq = 0.0;
  double total_variation = 0.0;
};

/// Measures of two distributions over the same labels.
InfoMeasures info_measures(const DiscreteDistribution& p, const DiscreteDistribution& q);

/// Prior over conditions together with one outcome law per condition.
struct JointDistribution {
  std::vector<std::string> condition_labels;
  std::vector<double> prior;
  std::vector<std::string> outcome_labels;
  /// Structured outcome identity; see behavior_joint for the encoding.
  std::vector<std::vector<std::size_t>> outcome_codes;
  /// conditionals[c][o] = P(outcome o | condition c)
  std::vector<std::vector<double>> conditionals;

  std::vector<double> marginal() const;
  /// Throws InvalidArgument if shapes disagree or a law does not sum to 1.
  void validate() const;
};

/// I(C; O) = sum_c prior(c) KL(P(.|c) || P(.)).
double mutual_information(const JointDistribution& joint);

/// Merges outcomes whose mapped codes coincide. Outcomes are reordered by new code.
JointDistribution coarsen(const JointDistribution& joint,
                          const std::function<std::vector<std::size_t>(const std::vector<std::size_t>&)>& map,
                          const std::function<std::string(const std::vector<std::size_t>&)>& label);

/// Fano-type lower bound log N - h(x) - (1 - x) log(N - 1).
double phi_down(std::size_t n, double x);

enum class CeilingConvention {
  /// ceil(y) := floor(y) + 1, also at integers.
  kShifted,
  /// Ordinary ceiling; discontinuous at x = 1/m. Not used by the harness.
  kConventional,
};

/// Reverse-Fano upper bound log N - (c x - 1) f log f - (1 - f x) c log c with
/// f = floor(1/x) and c the ceiling per `convention`. Returns log N for x >= 1.
double phi_up(std::size_t n, double x, CeilingConvention convention = CeilingConvention::kShifted);

/// Same bounds with log N replaced by the entropy of the goal distribution.
double phi_down_general(const GoalDistribution& p_goal, double x);
double phi_up_general(const GoalDistribution& p_goal, double x,
                      CeilingConvention convention = CeilingConvention::kShifted);

/// First-visit vector F = (gamma^(T_g - 1) 1{T_g <= K})_g.
struct FirstVisitVector {
  std::size_t K = 1;
  double gamma = 1.0;
};

/// A_0 S_1 ... A_{K-1} S_K.
struct TrajectoryK {
  std::size_t K = 1;
};

/// S_1 ... S_K.
struct StatePathK {
  std::size_t K = 1;
};

using BehaviorSpec = std::variant<SGammaPlus, SK, FirstVisitVector, TrajectoryK, StatePathK>;

/// Joint law of (condition, behavior) from s0.
///
/// Outcome codes: SGammaPlus and SK use {state}; StatePathK uses the state
/// sequence; TrajectoryK interleaves {a_0, s_1, a_1, s_2, ...}; the first-visit
/// vector uses one class per goal, namely T_g in 1..K or K + 1 for "not within
/// K", with classes merged whenever they give the same value of gamma^(T_g - 1).
JointDistribution behavior_joint(const FiniteMdp& mdp, const GoalConditionedPolicy& policy,
                                 StateIndex s0, const std::vector<double>& prior,
                                 const BehaviorSpec& spec, std::uint64_t cap);
JointDistribution behavior_joint(const FiniteMdp& mdp, const GoalConditionedPolicy& policy,
                                 StateIndex s0, const std::vector<double>& prior,
                                 const BehaviorSpec& spec);

/// I(G; S') with G ~ p_goal and S' produced by branch G.
double goal_behavior_mi(const FiniteMdp& mdp, const GoalConditionedPolicy& policy, StateIndex s0,
                        const GoalDistribution& p_goal, const BehaviorSpec& spec);

struct DecoderErrors {
  /// Error of the identity decoder G_hat(s') = s'.
  double naive = 0.0;
  /// Error of the maximum a posteriori decoder.
  double bayes = 0.0;
};

/// Needs outcome labels drawn from the condition labels (state outcomes with goal conditions).
DecoderErrors decoder_errors(const JointDistribution& joint);

/// 2 C^2
double ow_mi_lower_bound(double sensitivity);

/// Law of F_g as (value, probability) pairs in decreasing value order.
std::vector<std::pair<double, double>> first_visit_marginal(std::span<const double> time_law,
                                                            double gamma);

struct OwBoundDiagnostics {
  double mutual_information = 0.0;
  double sensitivity = 0.0;
  double eta = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  double marginal_kl = 0.0;
  double bound = std::numeric_limits<double>::infinity();
  bool stochastic_consistency = false;
  bool support_floor = false;
  bool finite_interference = false;

  bool assumptions_hold() const {
    return stochastic_consistency && support_floor && finite_interference;
  }
  /// Empty when all assumptions hold.
  std::string failed_assumption() const;
};

/// Upper bound on I(G; F) of the form 4 / (eta delta^2) * C_OW + epsilon,
/// together with the diagnostics that enter it. gamma must lie in (0, 1).
OwBoundDiagnostics ow_upper_bound(const FiniteMdp& mdp, const GoalConditionedPolicy& policy,
                                  StateIndex s0, std::size_t K, double gamma,
                                  const GoalDistribution& p_goal);

/// Smallest gap between distinct values of {0, gamma^(K-1), ..., gamma, 1}.
double first_visit_value_gap(std::size_t K, double gamma);

}  // namespace gclab
