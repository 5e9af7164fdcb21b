#pragma once

#include <cstdint>
#include <vector>

#include "gclab/mdp.hpp"
#include "gclab/policy.hpp"

namespace gclab {

/// A_0 S_1 A_1 ... A_{K-1} S_K with its probability from a fixed s0.
struct Trajectory {
  std::vector<ActionIndex> actions;
  std::vector<StateIndex> states;
  double prob = 0.0;
};

/// S_1 ... S_K with its probability from a fixed s0.
struct StatePath {
  std::vector<StateIndex> states;
  double prob = 0.0;
};

/// All length-K trajectories with positive probability, in lexicographic
/// order. Throws CapExceeded if more than `cap` would be produced.
std::vector<Trajectory> enumerate_trajectories(const FiniteMdp& mdp, const PolicyBranch& branch,
                                               StateIndex s0, std::size_t K, std::uint64_t cap);

/// Trajectory law of the latent-goal mixture; identical trajectories from
/// different components are merged.
std::vector<Trajectory> enumerate_trajectories(const FiniteMdp& mdp, const MixturePolicy& mixture,
                                               StateIndex s0, std::size_t K, std::uint64_t cap);

/// All state paths with positive probability; trajectories that differ only
/// in their actions are merged.
std::vector<StatePath> enumerate_state_paths(const FiniteMdp& mdp, const PolicyBranch& branch,
                                             StateIndex s0, std::size_t K, std::uint64_t cap);

}  // namespace gclab
