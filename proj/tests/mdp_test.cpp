#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "gclab/format.hpp"
#include "gclab/mdp.hpp"
#include "gclab/mdp_io.hpp"
#include "gclab/rng.hpp"

using namespace gclab;

namespace {

FiniteMdp self_loop() { return FiniteMdp({"x"}, {{"stay"}}, {{{1.0}}}); }

bool has_kind(const ValidationResult& r, Violation::Kind k) {
  for (const auto& v : r.violations) {
    if (v.kind == k) return true;
  }
  return false;
}

}  // namespace

TEST(Validate, SelfLoopIsValid) { EXPECT_TRUE(validate(self_loop()).ok()); }

TEST(Validate, ShortRowIsReportedWithItsCell) {
  FiniteMdp m({"a", "b"}, {{"go"}, {"stay"}}, {{{0.5, 0.48}}, {{0.0, 1.0}}});
  const auto r = validate(m);
  ASSERT_TRUE(has_kind(r, Violation::Kind::kRowSum));
  EXPECT_EQ(r.violations[0].state, 0u);
  EXPECT_EQ(r.violations[0].action, 0u);
  EXPECT_NEAR(r.violations[0].value, 0.98, 1e-15);
  EXPECT_NE(r.violations[0].message.find("0.98"), std::string::npos);
}

TEST(Validate, NegativeEntry) {
  FiniteMdp m({"a", "b"}, {{"go"}, {"stay"}}, {{{1.1, -0.1}}, {{0.0, 1.0}}});
  EXPECT_TRUE(has_kind(validate(m), Violation::Kind::kNegativeProbability));
}

TEST(Validate, MissingActionsAndDuplicates) {
  FiniteMdp m({"a", "a"}, {{}, {"x", "x"}}, {{}, {{0.0, 1.0}, {0.0, 1.0}}});
  const auto r = validate(m);
  EXPECT_TRUE(has_kind(r, Violation::Kind::kEmptyActionSet));
  EXPECT_TRUE(has_kind(r, Violation::Kind::kDuplicateState));
  EXPECT_TRUE(has_kind(r, Violation::Kind::kDuplicateAction));
}

TEST(Validate, NormalizedRescalesRowsWithinTolerance) {
  FiniteMdp m({"a", "b"}, {{"go"}, {"stay"}}, {{{0.5, 0.5 + 5e-10}}, {{0.0, 1.0}}});
  const auto n = normalized(m);
  EXPECT_NEAR(n.prob(0, 0, 0) + n.prob(0, 0, 1), 1.0, 1e-15);
  FiniteMdp bad({"a", "b"}, {{"go"}, {"stay"}}, {{{0.5, 0.4}}, {{0.0, 1.0}}});
  EXPECT_THROW(normalized(bad), ValidationError);
}

TEST(River, KernelAndPredicates) {
  const auto m = build_river_env(0.08, 0.2);
  ASSERT_TRUE(validate(m).ok());
  const StateIndex s1 = m.state_index("s1");
  const ActionIndex aj = m.find_action(s1, "a_j").value();
  EXPECT_EQ(m.prob(s1, aj, m.state_index("g")), 0.08);
  const auto pred = env_predicates(m);
  EXPECT_FALSE(pred.deterministic);
  EXPECT_FALSE(pred.has_waiting_actions);
  for (const char* absorbing : {"g", "T"}) {
    const StateIndex s = m.state_index(absorbing);
    EXPECT_EQ(m.num_actions(s), 1u);
    EXPECT_EQ(m.prob(s, 0, s), 1.0);
  }
}

TEST(River, ZeroJumpSuccessAlwaysTraps) {
  const auto m = build_river_env(0.0, 0.0);
  const StateIndex T = m.state_index("T");
  for (const char* s : {"s1", "s2"}) {
    const StateIndex i = m.state_index(s);
    EXPECT_EQ(m.prob(i, m.find_action(i, "a_j").value(), T), 1.0);
  }
}

TEST(River, GammaWindowIsNonEmpty) {
  const double e1 = 0.08, e2 = 0.2;
  EXPECT_LT(e1, e2);
  EXPECT_LT(e2 * e2, e1);
  EXPECT_LT(std::max(std::sqrt(e1), e2), e1 / e2);
  EXPECT_GT(0.35, std::max(std::sqrt(e1), e2));
  EXPECT_LT(0.35, e1 / e2);
}

TEST(River, ValidForRandomParameters) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    EXPECT_TRUE(validate(build_river_env(rng.uniform(), rng.uniform())).ok());
  }
  EXPECT_TRUE(validate(build_river_env(1.0, 1.0)).ok());
}

TEST(Grid, SizesAndOneStepReach) {
  const auto g1 = deterministic_grid(1);
  EXPECT_EQ(g1.num_states(), 1u);
  for (ActionIndex a = 0; a < g1.num_actions(0); ++a) EXPECT_EQ(g1.prob(0, a, 0), 1.0);

  const auto g2 = deterministic_grid(2);
  EXPECT_EQ(g2.num_states(), 4u);
  const auto reach = reachable_by_time(g2, 0, 1);
  EXPECT_EQ(std::count(reach[1].begin(), reach[1].end(), true), 3);
  EXPECT_TRUE(reach[1][0] && reach[1][1] && reach[1][2]);

  const auto g3 = deterministic_grid(3);
  const auto r3 = reachable_by_time(g3, 4, 1);
  EXPECT_EQ(std::count(r3[1].begin(), r3[1].end(), true), 5);
}

TEST(Grid, DeterministicWithWaitingActions) {
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto p = env_predicates(deterministic_grid(n));
    EXPECT_TRUE(p.deterministic);
    EXPECT_TRUE(p.has_waiting_actions);
  }
  const auto p = env_predicates(self_loop());
  EXPECT_TRUE(p.deterministic && p.has_waiting_actions);
}

TEST(RandomMdp, PureFunctionOfArguments) {
  EXPECT_EQ(random_mdp(4, 2, 2, 7), random_mdp(4, 2, 2, 7));
  EXPECT_NE(random_mdp(4, 2, 2, 7), random_mdp(4, 2, 2, 8));
  EXPECT_TRUE(validate(random_mdp(4, 2, 2, 7)).ok());
  const auto one = random_mdp(1, 1, 1, 0);
  EXPECT_EQ(one.prob(0, 0, 0), 1.0);
}

TEST(RandomMdp, BranchingControlsSupport) {
  for (std::size_t b = 1; b <= 4; ++b) {
    const auto m = random_mdp(4, 3, b, 100 + b);
    ASSERT_TRUE(validate(m).ok());
    for (StateIndex s = 0; s < 4; ++s) {
      for (ActionIndex a = 0; a < 3; ++a) {
        std::size_t support = 0;
        for (StateIndex j = 0; j < 4; ++j) support += m.prob(s, a, j) > 0.0;
        EXPECT_EQ(support, b);
      }
    }
  }
}

TEST(RandomMdp, WaitingVariantHasSelfLoops) {
  const auto m = random_waiting_mdp(5, 2, 2, 3);
  EXPECT_TRUE(env_predicates(m).has_waiting_actions);
  for (StateIndex s = 0; s < 5; ++s) {
    const ActionIndex w = m.find_action(s, "wait").value();
    EXPECT_EQ(m.prob(s, w, s), 1.0);
  }
}

TEST(Generators, StarForkSlippery) {
  const auto star = star_mdp(4);
  EXPECT_TRUE(env_predicates(star).deterministic);
  for (ActionIndex a = 0; a < 4; ++a) EXPECT_EQ(deterministic_successor(star, 0, a), a);

  const auto fork = fork_mdp();
  EXPECT_EQ(fork.num_states(), 3u);
  EXPECT_EQ(deterministic_successor(fork, 0, 0), 1u);
  EXPECT_EQ(deterministic_successor(fork, 0, 1), 2u);

  const auto slip = slippery_complete_mdp(3, 0.3);
  ASSERT_TRUE(validate(slip).ok());
  EXPECT_NEAR(slip.prob(0, 2, 2), 0.7 + 0.1, 1e-15);
  EXPECT_NEAR(slip.prob(0, 2, 1), 0.1, 1e-15);
}

TEST(GoalDistribution, UniformAndRandom) {
  const auto u = GoalDistribution::uniform(4);
  EXPECT_TRUE(u.is_uniform());
  EXPECT_EQ(u.min(), 0.25);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto p = random_goal_distribution(6, seed);
    double total = 0.0;
    for (std::size_t g = 0; g < 6; ++g) total += p[g];
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_GE(p.min(), 1e-3);
  }
  EXPECT_THROW(GoalDistribution({0.5, 0.0, 0.5}), InvalidArgument);
}

TEST(MdpText, RoundTripIsByteIdentical) {
  const auto river = build_river_env(0.08, 0.2);
  const std::string text = to_text(river);
  EXPECT_EQ(to_text(parse_mdp(text)), text);
  EXPECT_EQ(parse_mdp(text), river);

  const auto dir = std::filesystem::temp_directory_path() / "gclab_mdp_test";
  std::filesystem::create_directories(dir);
  save_mdp(dir / "river.mdp", river);
  EXPECT_EQ(read_file(dir / "river.mdp"), text);
  EXPECT_EQ(to_text(load_mdp(dir / "river.mdp")), text);
  std::filesystem::remove_all(dir);
}

TEST(MdpText, RandomKernelsRoundTripExactly) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = random_mdp(5, 3, 3, seed);
    EXPECT_EQ(parse_mdp(to_text(m)), m);
  }
}

TEST(MdpText, MissingHeaderIsLineOne) {
  try {
    parse_mdp("states: a\nactions a: x\nt a x a 1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(MdpText, BadTokenReportsPosition) {
  try {
    parse_mdp("mdp v1\nstates: a b\nactions a: x\nactions b: y\nt a x b oops\nt b y b 1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
    EXPECT_GT(e.column(), 1u);
  }
}

TEST(MdpText, ShortRowNamesStateAndAction) {
  try {
    parse_mdp("mdp v1\nstates: a b\nactions a: x\nactions b: y\nt a x b 0.9\nt b y b 1\n");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("(a,x)"), std::string::npos) << what;
  }
}

TEST(MdpText, CommentBeforeHeaderIsRejected) {
  EXPECT_THROW(parse_mdp("# note\nmdp v1\nstates: a\nactions a: stay\nt a stay a 1\n"), ParseError);
}

TEST(MdpText, CommentsAreIgnored) {
  const auto m = parse_mdp("mdp v1 # trailing\n# comment line\nstates: a\nactions a: stay\nt a stay a 1\n");
  EXPECT_EQ(m, FiniteMdp({"a"}, {{"stay"}}, {{{1.0}}}));
}
