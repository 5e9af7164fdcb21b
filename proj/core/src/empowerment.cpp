#include <algorithm>
#include <cmath>
#include <map>

#include "gclab/caps.hpp"
#include "gclab/info.hpp"
#include "gclab/sensitivity.hpp"

namespace gclab {

EmpowermentResult klyubin_empowerment(const FiniteMdp& mdp, StateIndex s0, std::size_t K,
                                      const EmpowermentOptions& options) {
  if (s0 >= mdp.num_states()) throw InvalidArgument("klyubin_empowerment: bad start state");
  EmpowermentResult out;
  const auto reach = reachable_by_time(mdp, s0, K);
  if (options.allow_deterministic_shortcut && env_predicates(mdp).deterministic) {
    const auto count = std::count(reach[K].begin(), reach[K].end(), true);
    out.value = out.upper = std::log(static_cast<double>(count));
    out.converged = true;
    out.shortcut = true;
    return out;
  }
  const std::size_t n = mdp.num_states();
  std::vector<std::size_t> alphabet(K, 1);
  std::uint64_t count = 1;
  for (std::size_t t = 0; t < K; ++t) {
    for (StateIndex s = 0; s < n; ++s) {
      if (reach[t][s]) alphabet[t] = std::max(alphabet[t], mdp.num_actions(s));
    }
    count = saturating_mul(count, alphabet[t]);
  }
  const std::uint64_t cap = options.cap == 0 ? enumeration_cap() : options.cap;
  if (count > cap) throw CapExceeded("action sequence enumeration", count, cap);
  out.sequences = count;

  std::map<std::vector<double>, std::size_t> distinct;
  std::vector<std::size_t> seq(K, 0);
  while (true) {
    std::vector<double> law(n, 0.0);
    law[s0] = 1.0;
    for (std::size_t t = 0; t < K; ++t) {
      std::vector<double> next(n, 0.0);
      for (StateIndex s = 0; s < n; ++s) {
        if (law[s] == 0.0) continue;
        const ActionIndex a = std::min(seq[t], mdp.num_actions(s) - 1);
        auto row = mdp.row(s, a);
        for (StateIndex j = 0; j < n; ++j) next[j] += law[s] * row[j];
      }
      law = std::move(next);
    }
    ++distinct[law];
    std::size_t k = 0;
    for (; k < K; ++k) {
      if (++seq[k] < alphabet[k]) break;
      seq[k] = 0;
    }
    if (k == K) break;
  }
  std::vector<std::vector<double>> rows;
  for (auto& [row, mult] : distinct) rows.push_back(row);
  const std::size_t m = rows.size();
  std::vector<double> r(m, 1.0 / static_cast<double>(m));
  std::vector<double> D(m, 0.0);
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    out.iterations = it;
    std::vector<double> q(n, 0.0);
    for (std::size_t x = 0; x < m; ++x) {
      for (StateIndex j = 0; j < n; ++j) q[j] += r[x] * rows[x][j];
    }
    double low = 0.0, up = 0.0;
    for (std::size_t x = 0; x < m; ++x) {
      D[x] = kl_divergence(rows[x], q);
      low += r[x] * D[x];
      up = std::max(up, D[x]);
    }
    out.value = low;
    out.upper = up;
    if (up - low <= options.tolerance) {
      out.converged = true;
      break;
    }
    double z = 0.0;
    for (std::size_t x = 0; x < m; ++x) {
      r[x] *= std::exp(D[x]);
      z += r[x];
    }
    for (double& v : r) v /= z;
  }
  return out;
}

}  // namespace gclab
