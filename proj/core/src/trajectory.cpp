#include "gclab/trajectory.hpp"

#include <map>

#include "gclab/error.hpp"

namespace gclab {
namespace {

void expand(const FiniteMdp& mdp, const PolicyBranch& branch, std::size_t K, std::uint64_t cap,
            StateIndex s, std::size_t t, double prob, Trajectory& cur,
            std::vector<Trajectory>& out) {
  if (t == K) {
    if (out.size() >= cap) throw CapExceeded("trajectory enumeration", out.size() + 1, cap);
    out.push_back(Trajectory{cur.actions, cur.states, prob});
    return;
  }
  auto pi = branch.action_probs(t, s);
  for (ActionIndex a = 0; a < pi.size(); ++a) {
    if (pi[a] == 0.0) continue;
    auto row = mdp.row(s, a);
    for (StateIndex j = 0; j < row.size(); ++j) {
      if (row[j] == 0.0) continue;
      cur.actions.push_back(a);
      cur.states.push_back(j);
      expand(mdp, branch, K, cap, j, t + 1, prob * pi[a] * row[j], cur, out);
      cur.actions.pop_back();
      cur.states.pop_back();
    }
  }
}

}  // namespace

std::vector<Trajectory> enumerate_trajectories(const FiniteMdp& mdp, const PolicyBranch& branch,
                                               StateIndex s0, std::size_t K, std::uint64_t cap) {
  if (s0 >= mdp.num_states()) throw InvalidArgument("enumerate_trajectories: bad start state");
  std::vector<Trajectory> out;
  Trajectory cur;
  expand(mdp, branch, K, cap, s0, 0, 1.0, cur, out);
  return out;
}

std::vector<Trajectory> enumerate_trajectories(const FiniteMdp& mdp, const MixturePolicy& mixture,
                                               StateIndex s0, std::size_t K, std::uint64_t cap) {
  using Key = std::pair<std::vector<ActionIndex>, std::vector<StateIndex>>;
  std::map<Key, double> merged;
  for (std::size_t c = 0; c < mixture.components.size(); ++c) {
    for (auto& tr : enumerate_trajectories(mdp, mixture.components.branch(c), s0, K, cap)) {
      merged[{tr.actions, tr.states}] += mixture.weights[c] * tr.prob;
      if (merged.size() > cap) throw CapExceeded("trajectory enumeration", merged.size(), cap);
    }
  }
  std::vector<Trajectory> out;
  for (auto& [key, p] : merged) out.push_back(Trajectory{key.first, key.second, p});
  return out;
}

std::vector<StatePath> enumerate_state_paths(const FiniteMdp& mdp, const PolicyBranch& branch,
                                             StateIndex s0, std::size_t K, std::uint64_t cap) {
  if (s0 >= mdp.num_states()) throw InvalidArgument("enumerate_state_paths: bad start state");
  // Forward over distinct state prefixes, so action multiplicity never counts.
  std::map<std::vector<StateIndex>, double> frontier{{{}, 1.0}};
  for (std::size_t t = 0; t < K; ++t) {
    std::map<std::vector<StateIndex>, double> next;
    for (const auto& [prefix, p] : frontier) {
      const StateIndex s = prefix.empty() ? s0 : prefix.back();
      auto pi = branch.action_probs(t, s);
      for (ActionIndex a = 0; a < pi.size(); ++a) {
        if (pi[a] == 0.0) continue;
        auto row = mdp.row(s, a);
        for (StateIndex j = 0; j < row.size(); ++j) {
          if (row[j] == 0.0) continue;
          auto ext = prefix;
          ext.push_back(j);
          next[ext] += p * pi[a] * row[j];
          if (next.size() > cap) throw CapExceeded("state path enumeration", next.size(), cap);
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<StatePath> out;
  for (auto& [states, p] : frontier) out.push_back(StatePath{states, p});
  return out;
}

}  // namespace gclab
