#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "gclab/info.hpp"
#include "gclab/mdp.hpp"
#include "gclab/rng.hpp"
#include "gclab/sensitivity.hpp"
#include "oracle.hpp"

using namespace gclab;

namespace {

std::vector<double> random_simplex(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) total += (x = e(rng));
  for (auto& x : p) x /= total;
  return p;
}

JointDistribution state_joint(const std::vector<std::vector<double>>& cond) {
  JointDistribution j;
  const std::size_t n = cond.size();
  for (std::size_t i = 0; i < n; ++i) {
    j.condition_labels.push_back("s" + std::to_string(i));
    j.outcome_labels.push_back("s" + std::to_string(i));
    j.outcome_codes.push_back({i});
  }
  j.prior.assign(n, 1.0 / n);
  j.conditionals = cond;
  return j;
}

double manual_bayes_error(const std::vector<double>& prior, const std::vector<std::vector<double>>& cond) {
  double correct = 0.0;
  for (std::size_t o = 0; o < cond[0].size(); ++o) {
    double best = 0.0;
    for (std::size_t c = 0; c < prior.size(); ++c) best = std::max(best, prior[c] * cond[c][o]);
    correct += best;
  }
  return 1.0 - correct;
}

}  // namespace

TEST(Entropy, ClosedForms) {
  const std::vector<double> u(5, 0.2);
  EXPECT_NEAR(entropy(u), std::log(5.0), 1e-15);
  EXPECT_EQ(entropy(std::vector<double>{1.0, 0.0}), 0.0);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.5), std::log(2.0), 1e-15);
  EXPECT_NEAR(binary_entropy(0.25), -(0.25 * std::log(0.25) + 0.75 * std::log(0.75)), 1e-15);
}

TEST(Divergence, KlTvAndPinsker) {
  const std::vector<double> p{0.5, 0.5, 0.0}, q{0.25, 0.25, 0.5}, r{1.0, 0.0, 0.0};
  EXPECT_NEAR(kl_divergence(p, q), std::log(2.0), 1e-15);
  EXPECT_EQ(kl_divergence(q, p), std::numeric_limits<double>::infinity());
  EXPECT_EQ(kl_divergence(p, p), 0.0);
  EXPECT_NEAR(total_variation(p, q), 0.5, 1e-15);
  EXPECT_NEAR(total_variation(p, r), 0.5, 1e-15);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_simplex(2 + i % 6, rng);
    const auto b = random_simplex(a.size(), rng);
    double kl = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) kl += a[k] * std::log(a[k] / b[k]);
    EXPECT_NEAR(kl_divergence(a, b), kl, 1e-12);
    EXPECT_LE(total_variation(a, b), std::sqrt(kl / 2) + 1e-15);
  }
}

TEST(Divergence, MeasuresOverLabels) {
  const auto m = info_measures({{"x", "y"}, {0.5, 0.5}}, {{"x", "y"}, {0.9, 0.1}});
  EXPECT_NEAR(m.entropy_p, std::log(2.0), 1e-15);
  EXPECT_NEAR(m.total_variation, 0.4, 1e-15);
  EXPECT_NEAR(m.kl_pq, 0.5 * std::log(0.5 / 0.9) + 0.5 * std::log(0.5 / 0.1), 1e-15);
}

TEST(FanoBounds, AnchorValues) {
  for (std::size_t n : {2u, 3u, 5u, 10u}) {
    EXPECT_NEAR(phi_down(n, 1.0 / n), 0.0, 1e-14);
    EXPECT_NEAR(phi_down(n, 1.0), std::log(double(n)), 1e-14);
    EXPECT_NEAR(phi_up(n, 1.0), std::log(double(n)), 1e-14);
    EXPECT_NEAR(phi_up(n, 1.5), std::log(double(n)), 1e-14);
    for (std::size_t m = 1; m <= n; ++m) {
      EXPECT_NEAR(phi_up(n, 1.0 / m), std::log(double(n)) - std::log(double(m)), 1e-13) << n << " " << m;
    }
    for (int i = 1; i <= 200; ++i) {
      const double x = 1.0 / n + (1.0 - 1.0 / n) * i / 200.0;
      EXPECT_GE(phi_up(n, x) + 1e-14, phi_down(n, x));
    }
  }
}

TEST(FanoBounds, ConventionalCeilingDiffersOnlyAtReciprocals) {
  EXPECT_NEAR(phi_up(4, 0.3, CeilingConvention::kConventional), phi_up(4, 0.3), 1e-15);
  EXPECT_NE(phi_up(4, 0.5, CeilingConvention::kConventional), phi_up(4, 0.5));
}

TEST(FanoBounds, GeneralReducesUnderUniformGoals) {
  const auto u = GoalDistribution::uniform(4);
  for (double x : {0.25, 0.4, 0.7, 1.0}) {
    EXPECT_NEAR(phi_down_general(u, x), phi_down(4, x), 1e-14);
    EXPECT_NEAR(phi_up_general(u, x), phi_up(4, x), 1e-14);
  }
}

TEST(FanoBounds, BracketBayesSuccessOnRandomChannels) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 2 + i % 5;
    std::vector<std::vector<double>> cond;
    for (std::size_t c = 0; c < n; ++c) cond.push_back(random_simplex(n, rng));
    const auto j = state_joint(cond);
    const double mi = mutual_information(j);
    EXPECT_NEAR(mi, oracle::mutual_information(j.prior, cond), 1e-13);
    const auto err = decoder_errors(j);
    EXPECT_NEAR(err.bayes, manual_bayes_error(j.prior, cond), 1e-14);
    double naive = 0.0;
    for (std::size_t c = 0; c < n; ++c) naive += (1.0 - cond[c][c]) / n;
    EXPECT_NEAR(err.naive, naive, 1e-14);
    EXPECT_LE(err.bayes, err.naive + 1e-15);
    EXPECT_GE(mi + 1e-12, phi_down(n, 1.0 - err.bayes));
    EXPECT_LE(mi, phi_up(n, 1.0 - err.bayes) + 1e-12);
  }
}

TEST(MutualInformation, ValidationRejectsBadShapes) {
  auto j = state_joint({{1.0, 0.0}, {0.0, 1.0}});
  EXPECT_NEAR(mutual_information(j), std::log(2.0), 1e-15);
  j.conditionals[1] = {0.5, 0.4};
  EXPECT_THROW(j.validate(), InvalidArgument);
  j.conditionals[1] = {0.5};
  EXPECT_THROW(j.validate(), InvalidArgument);
}

TEST(Behavior, JointMatchesStateLawsAndOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = random_mdp(4, 2, 2, seed);
    const auto policy = uniform_random_policy(m, ConditioningDomain::kGoals, 4, 3, seed);
    const std::vector<double> prior(4, 0.25);
    const auto j = behavior_joint(m, policy, 0, prior, SK{3});
    std::vector<std::vector<double>> cond;
    for (std::size_t g = 0; g < 4; ++g) {
      cond.push_back(state_law(m, policy.branch(g), 0, 3));
      std::vector<double> mapped(4, 0.0);
      for (std::size_t o = 0; o < j.outcome_codes.size(); ++o) mapped[j.outcome_codes[o][0]] = j.conditionals[g][o];
      for (StateIndex s = 0; s < 4; ++s) EXPECT_NEAR(mapped[s], cond[g][s], 1e-15);
    }
    EXPECT_NEAR(mutual_information(j), oracle::mutual_information(prior, cond), 1e-13);
    EXPECT_NEAR(goal_behavior_mi(m, policy, 0, GoalDistribution::uniform(4), SK{3}),
                oracle::mutual_information(prior, cond), 1e-13);
  }
}

TEST(Behavior, DataProcessingAlongCoarsenings) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto m = random_mdp(4, 2, 2, seed);
    const auto policy = uniform_random_policy(m, ConditioningDomain::kGoals, 4, 3, seed + 50);
    const std::vector<double> prior(4, 0.25);
    const std::size_t K = 3;
    const auto traj = behavior_joint(m, policy, 0, prior, TrajectoryK{K});
    const auto path = behavior_joint(m, policy, 0, prior, StatePathK{K});
    const auto last = behavior_joint(m, policy, 0, prior, SK{K});
    const auto visit = behavior_joint(m, policy, 0, prior, FirstVisitVector{K, 0.7});
    const double it = mutual_information(traj), ip = mutual_information(path);
    EXPECT_GE(it + 1e-12, ip);
    EXPECT_GE(ip + 1e-12, mutual_information(last));
    EXPECT_GE(ip + 1e-12, mutual_information(visit));

    // Dropping the actions from trajectory codes reproduces the path joint.
    const auto merged = coarsen(
        traj,
        [](const std::vector<std::size_t>& code) {
          std::vector<std::size_t> states;
          for (std::size_t i = 1; i < code.size(); i += 2) states.push_back(code[i]);
          return states;
        },
        [](const std::vector<std::size_t>&) { return std::string("p"); });
    EXPECT_NEAR(mutual_information(merged), ip, 1e-12);
  }
}

TEST(Behavior, TrajectoryLawAgreesWithRollouts) {
  const auto m = random_mdp(3, 2, 2, 4);
  const auto policy = uniform_random_policy(m, ConditioningDomain::kGoals, 3, 2, 9);
  const auto j = behavior_joint(m, policy, 1, {1.0 / 3, 1.0 / 3, 1.0 / 3}, StatePathK{3});
  std::mt19937_64 rng(77);
  const int samples = 200000;
  for (std::size_t g = 0; g < 3; ++g) {
    std::map<std::vector<std::size_t>, int> counts;
    for (int i = 0; i < samples; ++i) {
      const auto path = oracle::rollout(m, policy.branch(g), 1, 3, rng);
      counts[std::vector<std::size_t>(path.begin(), path.end())]++;
    }
    for (std::size_t o = 0; o < j.outcome_codes.size(); ++o) {
      const double p = j.conditionals[g][o];
      const double freq = double(counts[j.outcome_codes[o]]) / samples;
      EXPECT_NEAR(freq, p, 5 * std::sqrt(p * (1 - p) / samples) + 1e-12);
    }
  }
}

TEST(Behavior, GoalIndependentPolicyCarriesNoInformation) {
  const auto m = random_mdp(4, 2, 2, 2);
  const auto policy = GoalConditionedPolicy::goal_independent(m, PolicyBranch::random(m, 2, 1));
  const auto p = random_goal_distribution(4, 5);
  for (const BehaviorSpec& spec : {BehaviorSpec{SGammaPlus{0.6}}, BehaviorSpec{SK{2}},
                                   BehaviorSpec{FirstVisitVector{3, 0.5}}, BehaviorSpec{StatePathK{3}},
                                   BehaviorSpec{TrajectoryK{3}}}) {
    EXPECT_NEAR(goal_behavior_mi(m, policy, 0, p, spec), 0.0, 1e-14);
  }
}

TEST(Behavior, FirstVisitClassesMergeEqualValues) {
  // With gamma = 1 every arrival within K has value 1, so only hit/miss remain.
  const auto m = random_mdp(3, 2, 2, 6);
  const auto policy = uniform_random_policy(m, ConditioningDomain::kGoals, 3, 2, 6);
  const auto a = behavior_joint(m, policy, 0, {0.5, 0.25, 0.25}, FirstVisitVector{3, 1.0});
  EXPECT_LE(a.outcome_codes.size(), 8u);
  const auto b = behavior_joint(m, policy, 0, {0.5, 0.25, 0.25}, FirstVisitVector{3, 0.5});
  EXPECT_GE(b.outcome_codes.size(), a.outcome_codes.size());
}

TEST(FirstVisit, MarginalAndValueGap) {
  const std::vector<double> time_law{0.2, 0.3, 0.1};
  const auto marg = first_visit_marginal(time_law, 0.5);
  double total = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < marg.size(); ++i) {
    total += marg[i].second;
    mean += marg[i].first * marg[i].second;
    if (i > 0) EXPECT_LT(marg[i].first, marg[i - 1].first);
  }
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_NEAR(mean, 0.2 + 0.3 * 0.5 + 0.1 * 0.25, 1e-15);
  EXPECT_NEAR(first_visit_value_gap(3, 0.5), 0.25, 1e-15);
  EXPECT_NEAR(first_visit_value_gap(1, 0.5), 1.0, 1e-15);
}

TEST(OwBounds, PinskerFloorAndUpperBound) {
  EXPECT_NEAR(ow_mi_lower_bound(0.5), 0.5, 1e-15);
  EXPECT_EQ(ow_mi_lower_bound(0.0), 0.0);
  std::size_t applied = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto m = random_mdp(4, 2, 2, seed);
    const auto policy = uniform_random_policy(m, ConditioningDomain::kGoals, 4, 2, seed);
    const auto p = GoalDistribution::uniform(4);
    const auto d = ow_upper_bound(m, policy, 0, 2, 0.5, p);
    const double mi = goal_behavior_mi(m, policy, 0, p, FirstVisitVector{2, 0.5});
    EXPECT_NEAR(d.mutual_information, mi, 1e-12);
    EXPECT_NEAR(d.sensitivity, goal_sensitivity(m, OW{2, 0.5}, policy, 0, p).value, 1e-12);
    EXPECT_EQ(d.failed_assumption().empty(), d.assumptions_hold());
    if (d.assumptions_hold()) {
      ++applied;
      EXPECT_LE(mi, d.bound + 1e-10);
    }
  }
  EXPECT_THROW(ow_upper_bound(random_mdp(3, 2, 2, 0), uniform_random_policy(random_mdp(3, 2, 2, 0),
                                                                             ConditioningDomain::kGoals, 3, 1, 0),
                              0, 2, 1.0, GoalDistribution::uniform(3)),
               InvalidArgument);
  RecordProperty("applied", static_cast<int>(applied));
}
