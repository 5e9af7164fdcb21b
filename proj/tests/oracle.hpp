#pragma once

// Independent reference computations used as test oracles. Nothing here calls
// the library's evaluators; only the MDP and policy containers are shared.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "gclab/mdp.hpp"
#include "gclab/policy.hpp"

namespace oracle {

using gclab::ActionIndex;
using gclab::FiniteMdp;
using gclab::PolicyBranch;
using gclab::StateIndex;

inline std::vector<double> step(const FiniteMdp& mdp, const PolicyBranch& b, std::size_t t,
                                const std::vector<double>& law) {
  std::vector<double> next(mdp.num_states(), 0.0);
  for (StateIndex s = 0; s < mdp.num_states(); ++s) {
    if (law[s] == 0.0) continue;
    const auto pi = b.action_probs(t, s);
    for (ActionIndex a = 0; a < pi.size(); ++a) {
      for (StateIndex j = 0; j < mdp.num_states(); ++j) next[j] += law[s] * pi[a] * mdp.prob(s, a, j);
    }
  }
  return next;
}

inline std::vector<double> point(std::size_t n, StateIndex s) {
  std::vector<double> d(n, 0.0);
  d[s] = 1.0;
  return d;
}

/// P(S_K = g).
inline double et_value(const FiniteMdp& mdp, const PolicyBranch& b, StateIndex s0, StateIndex g, std::size_t K) {
  auto law = point(mdp.num_states(), s0);
  for (std::size_t t = 0; t < K; ++t) law = step(mdp, b, t, law);
  return law[g];
}

/// E[gamma^(T_g - 1) 1{T_g <= K}] by a killed forward recursion.
inline double ow_value(const FiniteMdp& mdp, const PolicyBranch& b, StateIndex s0, StateIndex g, std::size_t K,
                       double gamma) {
  auto law = point(mdp.num_states(), s0);
  double value = 0.0;
  double w = 1.0;
  for (std::size_t t = 0; t < K; ++t) {
    law = step(mdp, b, t, law);
    value += w * law[g];
    law[g] = 0.0;
    w *= gamma;
  }
  return value;
}

/// sum_{t>=1} (1-gamma) gamma^(t-1) P(S_t = g), truncated once the weight is negligible.
inline double pe_value(const FiniteMdp& mdp, const PolicyBranch& b, StateIndex s0, StateIndex g, double gamma) {
  auto law = point(mdp.num_states(), s0);
  double value = 0.0;
  double w = 1.0 - gamma;
  for (std::size_t t = 0; w > 1e-18 || t < 2; ++t) {
    law = step(mdp, b, t, law);
    value += w * law[g];
    w *= gamma;
    if (t > 200000) break;
  }
  return value;
}

/// Every deterministic branch with `horizon` explicit slots plus a tail slot,
/// by an odometer over all (slot, state) cells.
inline void for_each_branch(const FiniteMdp& mdp, std::size_t horizon,
                            const std::function<void(const PolicyBranch&)>& visit) {
  const std::size_t n = mdp.num_states();
  std::vector<std::vector<ActionIndex>> choice(horizon + 1, std::vector<ActionIndex>(n, 0));
  while (true) {
    visit(PolicyBranch::deterministic(mdp, horizon, choice));
    bool done = true;
    for (std::size_t cell = 0; cell < (horizon + 1) * n; ++cell) {
      auto& c = choice[cell / n][cell % n];
      if (++c < mdp.num_actions(cell % n)) {
        done = false;
        break;
      }
      c = 0;
    }
    if (done) return;
  }
}

inline double mutual_information(const std::vector<double>& prior, const std::vector<std::vector<double>>& cond) {
  const std::size_t m = cond.empty() ? 0 : cond[0].size();
  std::vector<double> marg(m, 0.0);
  for (std::size_t c = 0; c < prior.size(); ++c) {
    for (std::size_t o = 0; o < m; ++o) marg[o] += prior[c] * cond[c][o];
  }
  double mi = 0.0;
  for (std::size_t c = 0; c < prior.size(); ++c) {
    for (std::size_t o = 0; o < m; ++o) {
      const double p = cond[c][o];
      if (p > 0.0 && prior[c] > 0.0) mi += prior[c] * p * std::log(p / marg[o]);
    }
  }
  return mi;
}

/// Samples S_1..S_K from s0 under one branch.
inline std::vector<StateIndex> rollout(const FiniteMdp& mdp, const PolicyBranch& b, StateIndex s0, std::size_t K,
                                       std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&](std::span<const double> p) {
    double x = u(rng);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if ((x -= p[i]) < 0.0) return i;
    }
    std::size_t last = p.size() - 1;
    while (last > 0 && p[last] == 0.0) --last;
    return last;
  };
  std::vector<StateIndex> path;
  StateIndex s = s0;
  for (std::size_t t = 0; t < K; ++t) {
    const ActionIndex a = draw(b.action_probs(t, s));
    s = draw(mdp.row(s, a));
    path.push_back(s);
  }
  return path;
}

}  // namespace oracle
