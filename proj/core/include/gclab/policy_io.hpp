#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gclab/mdp.hpp"
#include "gclab/policy.hpp"

namespace gclab {

/// Text form:
///   policy v1
///   p <cond> <time|*> <state> <action> <prob>
/// `*` addresses the stationary tail slot. Zero entries are omitted.
/// A policy whose conditions are exactly the state names is read back as
/// goal-conditioned (branches in state order); otherwise conditions are
/// skills in order of first appearance.
std::string policy_to_text(const FiniteMdp& mdp, const GoalConditionedPolicy& policy);

GoalConditionedPolicy parse_policy(const FiniteMdp& mdp, std::string_view text);

GoalConditionedPolicy load_policy(const FiniteMdp& mdp, const std::filesystem::path& path);
void save_policy(const std::filesystem::path& path, const FiniteMdp& mdp,
                 const GoalConditionedPolicy& policy);

}  // namespace gclab
