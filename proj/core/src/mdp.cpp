#include "gclab/mdp.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "gclab/rng.hpp"

namespace gclab {
namespace {

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), [](char c) {
    return c == '#' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  });
}

std::string where(const FiniteMdp& mdp, StateIndex s, ActionIndex a) {
  return "(" + mdp.state_name(s) + "," + mdp.action_name(s, a) + ")";
}

std::string short_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

FiniteMdp::FiniteMdp(std::vector<std::string> states,
                     std::vector<std::vector<std::string>> actions,
                     std::vector<std::vector<Row>> kernel)
    : states_(std::move(states)), actions_(std::move(actions)), kernel_(std::move(kernel)) {
  if (actions_.size() != states_.size() || kernel_.size() != states_.size()) {
    throw InvalidArgument("FiniteMdp: states, actions and kernel sizes differ");
  }
  for (std::size_t s = 0; s < states_.size(); ++s) {
    if (kernel_[s].size() != actions_[s].size()) {
      throw InvalidArgument("FiniteMdp: kernel rows for state " + states_[s] +
                            " do not match its action count");
    }
    for (const Row& r : kernel_[s]) {
      if (r.size() != states_.size()) {
        throw InvalidArgument("FiniteMdp: kernel row for state " + states_[s] +
                              " has wrong length");
      }
    }
  }
}

std::size_t FiniteMdp::max_actions() const noexcept {
  std::size_t m = 0;
  for (const auto& a : actions_) m = std::max(m, a.size());
  return m;
}

std::size_t FiniteMdp::total_actions() const noexcept {
  std::size_t m = 0;
  for (const auto& a : actions_) m += a.size();
  return m;
}

std::span<const double> FiniteMdp::row(StateIndex s, ActionIndex a) const {
  const Row& r = kernel_.at(s).at(a);
  return {r.data(), r.size()};
}

std::optional<StateIndex> FiniteMdp::find_state(std::string_view name) const {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<ActionIndex> FiniteMdp::find_action(StateIndex s, std::string_view name) const {
  const auto& acts = actions_.at(s);
  for (std::size_t i = 0; i < acts.size(); ++i) {
    if (acts[i] == name) return i;
  }
  return std::nullopt;
}

StateIndex FiniteMdp::state_index(std::string_view name) const {
  auto s = find_state(name);
  if (!s) throw InvalidArgument("unknown state '" + std::string(name) + "'");
  return *s;
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error([&] {
        std::string msg = "invalid MDP";
        for (const auto& v : violations) msg += "; " + v.message;
        return msg;
      }()),
      violations_(std::move(violations)) {}

ValidationResult validate(const FiniteMdp& mdp) {
  ValidationResult out;
  auto add = [&](Violation::Kind k, std::optional<StateIndex> s, std::optional<ActionIndex> a,
                 double value, std::string msg) {
    out.violations.push_back(Violation{k, s, a, value, std::move(msg)});
  };
  const std::size_t n = mdp.num_states();
  if (n == 0) {
    add(Violation::Kind::kEmptyStateSet, std::nullopt, std::nullopt, 0.0, "empty state set");
    return out;
  }
  std::set<std::string> seen;
  for (StateIndex s = 0; s < n; ++s) {
    const auto& name = mdp.state_name(s);
    if (!valid_name(name)) {
      add(Violation::Kind::kBadName, s, std::nullopt, 0.0, "bad state name '" + name + "'");
    }
    if (!seen.insert(name).second) {
      add(Violation::Kind::kDuplicateState, s, std::nullopt, 0.0, "duplicate state " + name);
    }
  }
  for (StateIndex s = 0; s < n; ++s) {
    const std::size_t na = mdp.num_actions(s);
    if (na == 0) {
      add(Violation::Kind::kEmptyActionSet, s, std::nullopt, 0.0,
          "empty action set at " + mdp.state_name(s));
      continue;
    }
    std::set<std::string> acts;
    for (ActionIndex a = 0; a < na; ++a) {
      const auto& an = mdp.action_name(s, a);
      if (!valid_name(an)) {
        add(Violation::Kind::kBadName, s, a, 0.0, "bad action name '" + an + "'");
      }
      if (!acts.insert(an).second) {
        add(Violation::Kind::kDuplicateAction, s, a, 0.0, "duplicate action " + where(mdp, s, a));
      }
      auto row = mdp.row(s, a);
      double sum = 0.0;
      bool finite = true;
      for (StateIndex j = 0; j < n; ++j) {
        const double p = row[j];
        if (!std::isfinite(p)) {
          finite = false;
          add(Violation::Kind::kNonFiniteProbability, s, a, p,
              "non-finite probability at " + where(mdp, s, a));
        } else if (p < 0.0) {
          add(Violation::Kind::kNegativeProbability, s, a, p,
              "negative probability " + short_number(p) + " at " + where(mdp, s, a));
        }
        sum += p;
      }
      if (finite && std::fabs(sum - 1.0) > kRowSumTolerance) {
        add(Violation::Kind::kRowSum, s, a, sum,
            "row-sum " + short_number(sum) + " at " + where(mdp, s, a));
      }
    }
  }
  return out;
}

FiniteMdp normalized(const FiniteMdp& mdp) {
  auto result = validate(mdp);
  if (!result.ok()) throw ValidationError(std::move(result.violations));
  const std::size_t n = mdp.num_states();
  std::vector<std::vector<std::string>> actions;
  std::vector<std::vector<FiniteMdp::Row>> kernel(n);
  for (StateIndex s = 0; s < n; ++s) {
    actions.push_back(mdp.action_names(s));
    for (ActionIndex a = 0; a < mdp.num_actions(s); ++a) {
      auto r = mdp.row(s, a);
      FiniteMdp::Row row(r.begin(), r.end());
      const double sum = std::accumulate(row.begin(), row.end(), 0.0);
      if (std::fabs(sum - 1.0) > 4.0 * DBL_EPSILON * static_cast<double>(n)) {
        for (double& p : row) p /= sum;
      }
      kernel[s].push_back(std::move(row));
    }
  }
  return FiniteMdp(mdp.state_names(), std::move(actions), std::move(kernel));
}

GoalDistribution GoalDistribution::uniform(std::size_t n) {
  if (n == 0) throw InvalidArgument("GoalDistribution: empty support");
  return GoalDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

GoalDistribution::GoalDistribution(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidArgument("GoalDistribution: empty support");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("GoalDistribution: weights must be positive and finite");
    }
    sum += w;
  }
  if (std::fabs(sum - 1.0) > kRowSumTolerance) {
    throw InvalidArgument("GoalDistribution: weights sum to " + short_number(sum));
  }
}

double GoalDistribution::min() const { return *std::min_element(weights_.begin(), weights_.end()); }
double GoalDistribution::max() const { return *std::max_element(weights_.begin(), weights_.end()); }

bool GoalDistribution::is_uniform(double tol) const {
  const double u = 1.0 / static_cast<double>(weights_.size());
  return std::all_of(weights_.begin(), weights_.end(),
                     [&](double w) { return std::fabs(w - u) <= tol; });
}

GoalDistribution random_goal_distribution(std::size_t n, std::uint64_t seed, double floor) {
  if (n == 0) throw InvalidArgument("random_goal_distribution: n must be positive");
  if (!(floor > 0.0) || floor * static_cast<double>(n) >= 1.0) {
    throw InvalidArgument("random_goal_distribution: floor must lie in (0, 1/n)");
  }
  Rng rng(seed);
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& x : w) {
    x = rng.uniform_positive();
    sum += x;
  }
  const double spare = 1.0 - floor * static_cast<double>(n);
  for (double& x : w) x = floor + spare * x / sum;
  return GoalDistribution(std::move(w));
}

FiniteMdp build_river_env(double eps1, double eps2) {
  for (double e : {eps1, eps2}) {
    if (!(e >= 0.0 && e <= 1.0)) throw InvalidArgument("river: eps must lie in [0,1]");
  }
  enum { S1, S2, S3, G, T };
  auto unit = [](std::size_t j) {
    FiniteMdp::Row r(5, 0.0);
    r[j] = 1.0;
    return r;
  };
  auto jump = [](double e) {
    FiniteMdp::Row r(5, 0.0);
    r[G] = e;
    r[T] = 1.0 - e;
    return r;
  };
  return FiniteMdp({"s1", "s2", "s3", "g", "T"},
                   {{"a_f", "a_j"}, {"a_f", "a_j"}, {"a_f"}, {"stay"}, {"stay"}},
                   {{unit(S2), jump(eps1)}, {unit(S3), jump(eps2)}, {unit(G)}, {unit(G)}, {unit(T)}});
}

FiniteMdp deterministic_grid(std::size_t n) {
  if (n == 0) throw InvalidArgument("deterministic_grid: n must be positive");
  const std::size_t ns = n * n;
  std::vector<std::string> states;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      states.push_back("r" + std::to_string(r) + "c" + std::to_string(c));
    }
  }
  const std::vector<std::string> names = {"up", "down", "left", "right", "stay"};
  std::vector<std::vector<std::string>> actions(ns, names);
  std::vector<std::vector<FiniteMdp::Row>> kernel(ns);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t targets[5] = {
          (r == 0 ? r : r - 1) * n + c,
          (r + 1 == n ? r : r + 1) * n + c,
          r * n + (c == 0 ? c : c - 1),
          r * n + (c + 1 == n ? c : c + 1),
          r * n + c,
      };
      for (std::size_t t : targets) {
        FiniteMdp::Row row(ns, 0.0);
        row[t] = 1.0;
        kernel[r * n + c].push_back(std::move(row));
      }
    }
  }
  return FiniteMdp(std::move(states), std::move(actions), std::move(kernel));
}

FiniteMdp random_mdp(std::size_t n_states, std::size_t n_actions, std::size_t branching,
                     std::uint64_t seed) {
  if (n_states == 0 || n_actions == 0) {
    throw InvalidArgument("random_mdp: sizes must be positive");
  }
  if (branching == 0 || branching > n_states) {
    throw InvalidArgument("random_mdp: branching must lie in [1, n_states]");
  }
  Rng rng(seed);
  std::vector<std::string> states;
  for (std::size_t i = 0; i < n_states; ++i) states.push_back("s" + std::to_string(i));
  std::vector<std::string> names;
  for (std::size_t a = 0; a < n_actions; ++a) names.push_back("a" + std::to_string(a));
  std::vector<std::vector<std::string>> actions(n_states, names);
  std::vector<std::vector<FiniteMdp::Row>> kernel(n_states);
  std::vector<std::size_t> perm(n_states);
  for (std::size_t s = 0; s < n_states; ++s) {
    for (std::size_t a = 0; a < n_actions; ++a) {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      for (std::size_t i = 0; i < branching; ++i) {
        std::swap(perm[i], perm[i + rng.below(n_states - i)]);
      }
      FiniteMdp::Row row(n_states, 0.0);
      double sum = 0.0;
      for (std::size_t i = 0; i < branching; ++i) {
        const double w = rng.uniform_positive();
        row[perm[i]] = w;
        sum += w;
      }
      for (double& p : row) p /= sum;
      kernel[s].push_back(std::move(row));
    }
  }
  return FiniteMdp(std::move(states), std::move(actions), std::move(kernel));
}

FiniteMdp random_waiting_mdp(std::size_t n_states, std::size_t n_actions, std::size_t branching,
                             std::uint64_t seed) {
  FiniteMdp base = random_mdp(n_states, n_actions, branching, seed);
  std::vector<std::vector<std::string>> actions;
  std::vector<std::vector<FiniteMdp::Row>> kernel(n_states);
  for (StateIndex s = 0; s < n_states; ++s) {
    auto names = base.action_names(s);
    names.push_back("wait");
    actions.push_back(std::move(names));
    for (ActionIndex a = 0; a < base.num_actions(s); ++a) {
      auto r = base.row(s, a);
      kernel[s].emplace_back(r.begin(), r.end());
    }
    FiniteMdp::Row stay(n_states, 0.0);
    stay[s] = 1.0;
    kernel[s].push_back(std::move(stay));
  }
  return FiniteMdp(base.state_names(), std::move(actions), std::move(kernel));
}

FiniteMdp star_mdp(std::size_t n_states) {
  if (n_states < 2) throw InvalidArgument("star_mdp: need at least two states");
  std::vector<std::string> states;
  for (std::size_t i = 0; i < n_states; ++i) states.push_back("x" + std::to_string(i));
  std::vector<std::vector<std::string>> actions(n_states);
  std::vector<std::vector<FiniteMdp::Row>> kernel(n_states);
  for (std::size_t i = 0; i < n_states; ++i) {
    actions[0].push_back("to_x" + std::to_string(i));
    FiniteMdp::Row row(n_states, 0.0);
    row[i] = 1.0;
    kernel[0].push_back(std::move(row));
  }
  for (std::size_t s = 1; s < n_states; ++s) {
    actions[s].push_back("stay");
    FiniteMdp::Row row(n_states, 0.0);
    row[s] = 1.0;
    kernel[s].push_back(std::move(row));
  }
  return FiniteMdp(std::move(states), std::move(actions), std::move(kernel));
}

FiniteMdp fork_mdp() {
  return FiniteMdp({"s", "g1", "g2"}, {{"a1", "a2"}, {"stay"}, {"stay"}},
                   {{{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}, {{0.0, 1.0, 0.0}}, {{0.0, 0.0, 1.0}}});
}

FiniteMdp slippery_complete_mdp(std::size_t n_states, double slip) {
  if (n_states == 0) throw InvalidArgument("slippery_complete_mdp: need at least one state");
  if (!(slip >= 0.0 && slip <= 1.0)) throw InvalidArgument("slippery_complete_mdp: slip must lie in [0, 1]");
  std::vector<std::string> states;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n_states; ++i) {
    states.push_back("s" + std::to_string(i));
    names.push_back("to_s" + std::to_string(i));
  }
  std::vector<std::vector<std::string>> actions(n_states, names);
  std::vector<std::vector<FiniteMdp::Row>> kernel(n_states);
  const double spread = slip / static_cast<double>(n_states);
  for (std::size_t s = 0; s < n_states; ++s) {
    for (std::size_t j = 0; j < n_states; ++j) {
      FiniteMdp::Row row(n_states, spread);
      row[j] += 1.0 - slip;
      kernel[s].push_back(std::move(row));
    }
  }
  return FiniteMdp(std::move(states), std::move(actions), std::move(kernel));
}

EnvPredicates env_predicates(const FiniteMdp& mdp) {
  EnvPredicates out;
  out.deterministic = true;
  out.has_waiting_actions = true;
  for (StateIndex s = 0; s < mdp.num_states(); ++s) {
    bool has_loop = false;
    for (ActionIndex a = 0; a < mdp.num_actions(s); ++a) {
      auto row = mdp.row(s, a);
      if (row[s] == 1.0) has_loop = true;
      if (std::count_if(row.begin(), row.end(), [](double p) { return p > 0.0; }) != 1) {
        out.deterministic = false;
      }
    }
    if (!has_loop) out.has_waiting_actions = false;
  }
  return out;
}

StateIndex deterministic_successor(const FiniteMdp& mdp, StateIndex s, ActionIndex a) {
  auto row = mdp.row(s, a);
  for (StateIndex j = 0; j < row.size(); ++j) {
    if (row[j] == 1.0) return j;
  }
  throw InvalidArgument("deterministic_successor: row " + where(mdp, s, a) +
                        " is not deterministic");
}

std::vector<std::vector<bool>> reachable_by_time(const FiniteMdp& mdp, StateIndex s0,
                                                 std::size_t horizon) {
  const std::size_t n = mdp.num_states();
  std::vector<std::vector<bool>> out(horizon + 1, std::vector<bool>(n, false));
  out[0].at(s0) = true;
  for (std::size_t t = 0; t < horizon; ++t) {
    for (StateIndex s = 0; s < n; ++s) {
      if (!out[t][s]) continue;
      for (ActionIndex a = 0; a < mdp.num_actions(s); ++a) {
        auto row = mdp.row(s, a);
        for (StateIndex j = 0; j < n; ++j) {
          if (row[j] > 0.0) out[t + 1][j] = true;
        }
      }
    }
  }
  return out;
}

}  // namespace gclab
