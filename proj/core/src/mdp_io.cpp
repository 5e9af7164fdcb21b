#include "gclab/mdp_io.hpp"

#include <map>
#include <set>
#include <tuple>

#include "gclab/format.hpp"
#include "text.hpp"

namespace gclab {

using detail::Line;
using detail::Token;

std::string to_text(const FiniteMdp& mdp) {
  std::string out = "mdp v1\nstates:";
  for (const auto& s : mdp.state_names()) out += " " + s;
  out += "\n";
  for (StateIndex s = 0; s < mdp.num_states(); ++s) {
    out += "actions " + mdp.state_name(s) + ":";
    for (const auto& a : mdp.action_names(s)) out += " " + a;
    out += "\n";
  }
  for (StateIndex s = 0; s < mdp.num_states(); ++s) {
    for (ActionIndex a = 0; a < mdp.num_actions(s); ++a) {
      auto row = mdp.row(s, a);
      for (StateIndex j = 0; j < row.size(); ++j) {
        if (row[j] == 0.0) continue;
        out += "t " + mdp.state_name(s) + " " + mdp.action_name(s, a) + " " + mdp.state_name(j) +
               " " + format_exact(row[j]) + "\n";
      }
    }
  }
  return out;
}

FiniteMdp parse_mdp(std::string_view text) {
  const std::vector<Line> lines = detail::tokenize(text);
  const auto& head = lines.front().tokens;
  if (head.size() != 2 || head[0].text != "mdp" || head[1].text != "v1") {
    throw ParseError(1, head.empty() ? 1 : head[0].column, "expected header 'mdp v1'");
  }

  std::vector<std::string> states;
  std::map<std::string, StateIndex, std::less<>> state_ids;
  std::vector<std::vector<std::string>> actions;
  std::vector<bool> actions_seen;
  struct Entry {
    StateIndex s;
    std::string action;
    StateIndex next;
    double p;
    std::size_t line;
    std::size_t column;
  };
  std::vector<Entry> entries;
  bool have_states = false;

  auto lookup_state = [&](const Line& ln, const Token& tok) {
    auto it = state_ids.find(tok.text);
    if (it == state_ids.end()) {
      throw ParseError(ln.number, tok.column, "unknown state '" + std::string(tok.text) + "'");
    }
    return it->second;
  };

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& ln = lines[i];
    if (ln.tokens.empty()) continue;
    const Token& kw = ln.tokens[0];
    if (kw.text == "states:") {
      if (have_states) throw ParseError(ln.number, kw.column, "duplicate 'states:' line");
      have_states = true;
      for (std::size_t k = 1; k < ln.tokens.size(); ++k) {
        std::string name(ln.tokens[k].text);
        if (!state_ids.emplace(name, states.size()).second) {
          throw ParseError(ln.number, ln.tokens[k].column, "duplicate state '" + name + "'");
        }
        states.push_back(std::move(name));
      }
      if (states.empty()) throw ParseError(ln.number, kw.column, "empty state list");
      actions.assign(states.size(), {});
      actions_seen.assign(states.size(), false);
    } else if (kw.text == "actions") {
      if (!have_states) throw ParseError(ln.number, kw.column, "'actions' before 'states:'");
      if (ln.tokens.size() < 2 || ln.tokens[1].text.size() < 2 || ln.tokens[1].text.back() != ':') {
        throw ParseError(ln.number, ln.tokens.size() < 2 ? kw.column : ln.tokens[1].column,
                         "expected 'actions <state>:'");
      }
      Token st{ln.tokens[1].text.substr(0, ln.tokens[1].text.size() - 1), ln.tokens[1].column};
      const StateIndex s = lookup_state(ln, st);
      if (actions_seen[s]) {
        throw ParseError(ln.number, st.column, "duplicate action list for " + states[s]);
      }
      actions_seen[s] = true;
      std::set<std::string_view> names;
      for (std::size_t k = 2; k < ln.tokens.size(); ++k) {
        if (!names.insert(ln.tokens[k].text).second) {
          throw ParseError(ln.number, ln.tokens[k].column,
                           "duplicate action '" + std::string(ln.tokens[k].text) + "'");
        }
        actions[s].emplace_back(ln.tokens[k].text);
      }
    } else if (kw.text == "t") {
      if (!have_states) throw ParseError(ln.number, kw.column, "'t' before 'states:'");
      if (ln.tokens.size() != 5) {
        const std::size_t col = ln.tokens.size() > 5 ? ln.tokens[5].column : ln.tokens.back().column;
        throw ParseError(ln.number, col, "expected 't <state> <action> <state> <prob>'");
      }
      Entry e;
      e.s = lookup_state(ln, ln.tokens[1]);
      e.action = std::string(ln.tokens[2].text);
      e.next = lookup_state(ln, ln.tokens[3]);
      if (!parse_double(ln.tokens[4].text, e.p)) {
        throw ParseError(ln.number, ln.tokens[4].column,
                         "bad probability '" + std::string(ln.tokens[4].text) + "'");
      }
      e.line = ln.number;
      e.column = ln.tokens[2].column;
      entries.push_back(std::move(e));
    } else {
      throw ParseError(ln.number, kw.column, "unknown directive '" + std::string(kw.text) + "'");
    }
  }
  if (!have_states) throw ParseError(lines.back().number, 1, "missing 'states:' line");

  std::vector<std::vector<FiniteMdp::Row>> kernel(states.size());
  for (StateIndex s = 0; s < states.size(); ++s) {
    kernel[s].assign(actions[s].size(), FiniteMdp::Row(states.size(), 0.0));
  }
  std::set<std::tuple<StateIndex, std::size_t, StateIndex>> seen;
  for (const Entry& e : entries) {
    std::size_t a = actions[e.s].size();
    for (std::size_t k = 0; k < actions[e.s].size(); ++k) {
      if (actions[e.s][k] == e.action) a = k;
    }
    if (a == actions[e.s].size()) {
      throw ParseError(e.line, e.column,
                       "unknown action '" + e.action + "' at state " + states[e.s]);
    }
    if (!seen.emplace(e.s, a, e.next).second) {
      throw ParseError(e.line, e.column, "duplicate transition");
    }
    kernel[e.s][a][e.next] = e.p;
  }
  return normalized(FiniteMdp(std::move(states), std::move(actions), std::move(kernel)));
}

FiniteMdp load_mdp(const std::filesystem::path& path) { return parse_mdp(read_file(path)); }

void save_mdp(const std::filesystem::path& path, const FiniteMdp& mdp) {
  write_file_atomic(path, to_text(mdp));
}

}  // namespace gclab
