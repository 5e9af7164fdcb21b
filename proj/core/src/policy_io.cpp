#include "gclab/policy_io.hpp"

#include <charconv>
#include <map>
#include <set>
#include <tuple>
#include <algorithm>

#include "gclab/format.hpp"
#include "text.hpp"

namespace gclab {

std::string policy_to_text(const FiniteMdp& mdp, const GoalConditionedPolicy& policy) {
  std::string out = "policy v1\n";
  for (std::size_t c = 0; c < policy.size(); ++c) {
    const PolicyBranch& b = policy.branch(c);
    for (std::size_t slot = 0; slot <= b.horizon(); ++slot) {
      const std::string time = slot == b.horizon() ? "*" : std::to_string(slot);
      for (StateIndex s = 0; s < mdp.num_states(); ++s) {
        auto pi = b.action_probs(slot, s);
        for (ActionIndex a = 0; a < pi.size(); ++a) {
          if (pi[a] == 0.0) continue;
          out += "p " + policy.label(c) + " " + time + " " + mdp.state_name(s) + " " +
                 mdp.action_name(s, a) + " " + format_exact(pi[a]) + "\n";
        }
      }
    }
  }
  return out;
}

GoalConditionedPolicy parse_policy(const FiniteMdp& mdp, std::string_view text) {
  const auto lines = detail::tokenize(text);
  const auto& head = lines.front().tokens;
  if (head.size() != 2 || head[0].text != "policy" || head[1].text != "v1") {
    throw ParseError(1, head.empty() ? 1 : head[0].column, "expected header 'policy v1'");
  }
  constexpr std::size_t kTail = static_cast<std::size_t>(-1);
  struct Cell {
    std::vector<double> probs;
    bool seen = false;
  };
  // cond -> slot -> state -> action probabilities
  std::vector<std::string> order;
  std::map<std::string, std::map<std::size_t, std::vector<Cell>>, std::less<>> table;
  std::set<std::tuple<std::string, std::size_t, StateIndex, ActionIndex>> seen;

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& ln = lines[i];
    if (ln.tokens.empty()) continue;
    const auto& t = ln.tokens;
    if (t[0].text != "p") {
      throw ParseError(ln.number, t[0].column, "unknown directive '" + std::string(t[0].text) + "'");
    }
    if (t.size() != 6) {
      throw ParseError(ln.number, t.size() > 6 ? t[6].column : t.back().column,
                       "expected 'p <cond> <time|*> <state> <action> <prob>'");
    }
    std::string cond(t[1].text);
    std::size_t slot = kTail;
    if (t[2].text != "*") {
      auto res = std::from_chars(t[2].text.data(), t[2].text.data() + t[2].text.size(), slot);
      if (res.ec != std::errc{} || res.ptr != t[2].text.data() + t[2].text.size()) {
        throw ParseError(ln.number, t[2].column, "bad time '" + std::string(t[2].text) + "'");
      }
    }
    auto s = mdp.find_state(t[3].text);
    if (!s) throw ParseError(ln.number, t[3].column, "unknown state '" + std::string(t[3].text) + "'");
    auto a = mdp.find_action(*s, t[4].text);
    if (!a) throw ParseError(ln.number, t[4].column, "unknown action '" + std::string(t[4].text) + "'");
    double p = 0.0;
    if (!parse_double(t[5].text, p)) {
      throw ParseError(ln.number, t[5].column, "bad probability '" + std::string(t[5].text) + "'");
    }
    if (!seen.emplace(cond, slot, *s, *a).second) {
      throw ParseError(ln.number, t[1].column, "duplicate policy entry");
    }
    if (!table.count(cond)) order.push_back(cond);
    auto& cells = table[cond][slot];
    if (cells.empty()) cells.resize(mdp.num_states());
    Cell& cell = cells[*s];
    if (!cell.seen) {
      cell.probs.assign(mdp.num_actions(*s), 0.0);
      cell.seen = true;
    }
    cell.probs[*a] = p;
  }
  if (order.empty()) throw ParseError(lines.back().number, 1, "policy has no entries");

  std::set<std::string> labels(order.begin(), order.end());
  std::set<std::string> names(mdp.state_names().begin(), mdp.state_names().end());
  const bool over_goals = labels == names;
  if (over_goals) order = mdp.state_names();

  std::vector<PolicyBranch> branches;
  for (const auto& cond : order) {
    const auto& slots = table.at(cond);
    if (!slots.count(kTail)) {
      throw InvalidArgument("policy condition " + cond + " has no '*' tail slot");
    }
    std::size_t horizon = 0;
    for (const auto& [slot, cells] : slots) {
      if (slot != kTail) horizon = std::max(horizon, slot + 1);
    }
    std::vector<std::vector<std::vector<double>>> probs(horizon + 1);
    for (std::size_t slot = 0; slot <= horizon; ++slot) {
      const std::size_t key = slot == horizon ? kTail : slot;
      auto it = slots.find(key);
      if (it == slots.end()) {
        throw InvalidArgument("policy condition " + cond + " is missing time " + std::to_string(slot));
      }
      for (StateIndex s = 0; s < mdp.num_states(); ++s) {
        if (!it->second[s].seen) {
          throw InvalidArgument("policy condition " + cond + " has no action distribution for " +
                                mdp.state_name(s));
        }
        probs[slot].push_back(it->second[s].probs);
      }
    }
    branches.emplace_back(mdp, horizon, probs);
  }
  if (over_goals) return GoalConditionedPolicy::over_goals(mdp, std::move(branches));
  return GoalConditionedPolicy(ConditioningDomain::kSkills, order, std::move(branches));
}

GoalConditionedPolicy load_policy(const FiniteMdp& mdp, const std::filesystem::path& path) {
  return parse_policy(mdp, read_file(path));
}

void save_policy(const std::filesystem::path& path, const FiniteMdp& mdp,
                 const GoalConditionedPolicy& policy) {
  write_file_atomic(path, policy_to_text(mdp, policy));
}

}  // namespace gclab
