#include <gtest/gtest.h>

#include "gclab/caps.hpp"
#include "gclab/mdp.hpp"
#include "gclab/policy.hpp"
#include "gclab/policy_io.hpp"
#include "gclab/trajectory.hpp"
#include "oracle.hpp"

using namespace gclab;

namespace {

FiniteMdp two_by_two() { return random_mdp(2, 2, 2, 5); }

}  // namespace

TEST(Enumeration, CountsMatchProductOfActionSets) {
  const FiniteMdp one({"x"}, {{"a", "b"}}, {{{1.0}, {1.0}}});
  EXPECT_EQ(enumerate_deterministic_policies(one, 0, true).size(), 2u);
  const auto m = two_by_two();
  EXPECT_EQ(enumerate_deterministic_policies(m, 0, true).size(), 4u);
  EXPECT_EQ(enumerate_deterministic_policies(m, 2, false).size(), 16u);
  EXPECT_EQ(count_deterministic_policies(m, 2, false), 16u);
  const auto grid = deterministic_grid(2);
  EXPECT_EQ(count_deterministic_policies(grid, 0, true), 625u);
  EXPECT_EQ(count_deterministic_policies(grid, 2, false), 625u * 625u);
}

TEST(Enumeration, CapIsEnforcedBeforeVisiting) {
  const auto grid = deterministic_grid(3);
  std::size_t visited = 0;
  EXPECT_THROW(for_each_deterministic_policy(grid, 2, false, 1000, [&](const PolicyBranch&) { ++visited; }),
               CapExceeded);
  EXPECT_EQ(visited, 0u);
}

TEST(Enumeration, BranchesAreDistinctAndDeterministic) {
  const auto m = random_mdp(3, 2, 2, 1);
  const auto all = enumerate_deterministic_policies(m, 1, false);
  ASSERT_EQ(all.size(), 8u);
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_TRUE(all[i].is_deterministic());
    for (std::size_t j = i + 1; j < all.size(); ++j) EXPECT_FALSE(all[i] == all[j]);
  }
}

TEST(RandomPolicy, SeededAndInterior) {
  const auto m = random_mdp(4, 2, 2, 9);
  const auto a = uniform_random_policy(m, ConditioningDomain::kGoals, 4, 3, 42);
  EXPECT_EQ(a, uniform_random_policy(m, ConditioningDomain::kGoals, 4, 3, 42));
  for (const auto& b : a.branches()) {
    for (std::size_t t = 0; t <= 3; ++t) {
      for (StateIndex s = 0; s < 4; ++s) {
        for (double p : b.action_probs(t, s)) {
          EXPECT_GT(p, 0.0);
          EXPECT_LT(p, 1.0);
        }
      }
    }
  }
  const FiniteMdp single({"x", "y"}, {{"a"}, {"a"}}, {{{0.0, 1.0}}, {{1.0, 0.0}}});
  const auto s = uniform_random_policy(single, ConditioningDomain::kGoals, 2, 2, 1);
  for (const auto& b : s.branches()) EXPECT_EQ(b.action_probs(0, 0)[0], 1.0);
}

TEST(Compose, IdentityAndConstantMaps) {
  const auto m = random_mdp(3, 2, 2, 4);
  const auto skills = uniform_random_policy(m, ConditioningDomain::kSkills, 3, 2, 8);
  const auto id = compose_downstream(m, skills, GoalToSkillMap::plain({0, 1, 2}, 3));
  for (std::size_t g = 0; g < 3; ++g) EXPECT_EQ(id.branch(g), skills.branch(g));
  EXPECT_EQ(id.domain(), ConditioningDomain::kGoals);
  EXPECT_EQ(id.label(1), m.state_name(1));

  const auto two = uniform_random_policy(m, ConditioningDomain::kSkills, 2, 2, 8);
  const auto constant = compose_downstream(m, two, GoalToSkillMap::plain({0, 0, 0}, 2));
  for (std::size_t g = 0; g < 3; ++g) EXPECT_EQ(constant.branch(g), two.branch(0));
}

TEST(Compose, BranchesReproduceMappedSkills) {
  const auto m = random_mdp(4, 2, 2, 6);
  const auto skills = uniform_random_policy(m, ConditioningDomain::kSkills, 2, 2, 3);
  const std::vector<std::size_t> f{1, 0, 1, 0};
  const auto composed = compose_downstream(m, skills, GoalToSkillMap::plain(f, 2));
  for (std::size_t g = 0; g < 4; ++g) EXPECT_EQ(composed.branch(g), skills.branch(f[g]));

  const auto dep = GoalToSkillMap::state_dependent({{0, 0, 0, 0}, {1, 1, 1, 1}, {0, 1, 0, 1}, {1, 0, 1, 0}}, 2);
  const auto by_start = compose_downstream_by_start(m, skills, dep);
  for (StateIndex s0 = 0; s0 < 4; ++s0) {
    for (std::size_t g = 0; g < 4; ++g) EXPECT_EQ(by_start.at(s0).branch(g), skills.branch(dep.skill(s0, g)));
  }
  EXPECT_THROW(GoalToSkillMap::plain({0, 2}, 2), InvalidArgument);
}

TEST(Mixture, CommonBranchAndPointMass) {
  const auto m = random_mdp(3, 2, 2, 2);
  const auto b = PolicyBranch::random(m, 2, 5);
  const auto same = GoalConditionedPolicy::goal_independent(m, b);
  const auto mix = mixture_policy(same, GoalDistribution::uniform(3));
  for (std::size_t t = 0; t <= 3; ++t) {
    const auto a = state_law(m, mix, 0, t);
    const auto e = state_law(m, b, 0, t);
    for (StateIndex s = 0; s < 3; ++s) EXPECT_NEAR(a[s], e[s], 1e-15);
  }
  const auto policy = uniform_random_policy(m, ConditioningDomain::kGoals, 3, 2, 12);
  const auto point = mixture_policy(policy, GoalDistribution({1e-300, 1.0 - 2e-300, 1e-300}));
  const auto law = state_law(m, point, 0, 3);
  const auto ref = state_law(m, policy.branch(1), 0, 3);
  for (StateIndex s = 0; s < 3; ++s) EXPECT_NEAR(law[s], ref[s], 1e-12);
}

TEST(Mixture, TwoDeterministicBranchesSplitEvenly) {
  const auto fork = fork_mdp();
  const auto a = PolicyBranch::stationary(fork, {0, 0, 0});
  const auto b = PolicyBranch::stationary(fork, {1, 0, 0});
  const auto policy = GoalConditionedPolicy::over_skills({a, b});
  const auto mix = mixture_policy(policy, GoalDistribution::uniform(2));
  const auto law = state_law(fork, mix, 0, 1);
  EXPECT_DOUBLE_EQ(law[1], 0.5);
  EXPECT_DOUBLE_EQ(law[2], 0.5);
}

TEST(Mixture, PathEventsAverageOverBranches) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto m = random_mdp(3 + seed % 2, 2, 2, seed);
    const std::size_t n = m.num_states();
    const auto policy = uniform_random_policy(m, ConditioningDomain::kGoals, n, 3, seed + 100);
    const auto p = random_goal_distribution(n, seed);
    const auto mix = mixture_policy(policy, p);
    const std::size_t K = 3;
    std::map<std::vector<StateIndex>, double> expected;
    for (std::size_t g = 0; g < n; ++g) {
      for (const auto& path : enumerate_state_paths(m, policy.branch(g), 0, K, enumeration_cap())) expected[path.states] += p[g] * path.prob;
    }
    double total = 0.0;
    for (const auto& tr : enumerate_trajectories(m, mix, 0, K, enumeration_cap())) total += tr.prob;
    EXPECT_NEAR(total, 1.0, 1e-12);
    std::map<std::vector<StateIndex>, double> got;
    for (const auto& tr : enumerate_trajectories(m, mix, 0, K, enumeration_cap())) got[tr.states] += tr.prob;
    for (const auto& [path, prob] : expected) EXPECT_NEAR(got[path], prob, 1e-12);
  }
}

TEST(StateLaw, MatchesDirectStepping) {
  const auto m = random_mdp(4, 3, 3, 17);
  const auto b = PolicyBranch::random(m, 2, 4);
  auto law = oracle::point(4, 1);
  for (std::size_t t = 0; t < 6; ++t) {
    const auto lib = state_law(m, b, 1, t);
    for (StateIndex s = 0; s < 4; ++s) EXPECT_NEAR(lib[s], law[s], 1e-15);
    law = oracle::step(m, b, t, law);
  }
}

TEST(PolicyText, RoundTripGoalAndSkillPolicies) {
  const auto m = random_mdp(3, 2, 2, 1);
  const auto goals = uniform_random_policy(m, ConditioningDomain::kGoals, 3, 2, 7);
  const auto back = parse_policy(m, policy_to_text(m, goals));
  EXPECT_EQ(back.domain(), ConditioningDomain::kGoals);
  EXPECT_EQ(back, goals);

  const auto skills = random_deterministic_policy(m, ConditioningDomain::kSkills, 2, 1, 7);
  const auto sback = parse_policy(m, policy_to_text(m, skills));
  EXPECT_EQ(sback.domain(), ConditioningDomain::kSkills);
  EXPECT_EQ(sback, skills);
  EXPECT_EQ(policy_to_text(m, sback), policy_to_text(m, skills));
}

TEST(PolicyText, RejectsBadInput) {
  const auto m = random_mdp(2, 2, 2, 1);
  EXPECT_THROW(parse_policy(m, "policy v1\np z0 0 s0 nope 1\n"), Error);
  EXPECT_THROW(parse_policy(m, "policy v2\n"), ParseError);
  EXPECT_THROW(parse_policy(m, "policy v1\np z0 * s0 a0 0.5\np z0 * s1 a0 1\n"), Error);
}
