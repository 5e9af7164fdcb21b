#include "gclab/formulation.hpp"

#include <cmath>

#include "gclab/error.hpp"
#include "gclab/format.hpp"
#include "overloaded.hpp"

namespace gclab {
namespace {

using detail::Overloaded;

void check_table(const StateGoalTable& t, std::size_t n, const char* what) {
  if (t.size() != n) throw InvalidArgument(std::string("General: ") + what + " has wrong shape");
  for (const auto& row : t) {
    if (row.size() != n) throw InvalidArgument(std::string("General: ") + what + " has wrong shape");
    for (double v : row) {
      if (!std::isfinite(v)) throw InvalidArgument(std::string("General: ") + what + " is not finite");
    }
  }
}

void check_discounts(const StateGoalTable& t, double upper, bool strict, const char* what) {
  for (const auto& row : t) {
    for (double v : row) {
      if (v < 0.0 || v > upper || (strict && v >= upper)) {
        throw InvalidArgument(std::string("General: ") + what + " out of range");
      }
    }
  }
}

StateGoalTable filled(std::size_t n, double v) {
  return StateGoalTable(n, std::vector<double>(n, v));
}

StateGoalTable indicator(std::size_t n, double v) {
  StateGoalTable t = filled(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) t[s][s] = v;
  return t;
}

}  // namespace

bool General::nonnegative_rewards() const {
  auto nonneg = [](const StateGoalTable& t) {
    for (const auto& row : t) {
      for (double v : row) {
        if (v < 0.0) return false;
      }
    }
    return true;
  };
  for (std::size_t t = 1; t < rewards.size(); ++t) {
    if (!nonneg(rewards[t])) return false;
  }
  return nonneg(reward_tail);
}

void validate_formulation(const Formulation& f, std::size_t n_states) {
  std::visit(Overloaded{
                 [](const Pe& pe) {
                   if (!(pe.gamma >= 0.0 && pe.gamma < 1.0)) {
                     throw InvalidArgument("pe: gamma must lie in [0, 1)");
                   }
                 },
                 [](const ET& et) {
                   if (et.K == 0) throw InvalidArgument("et: K must be at least 1");
                 },
                 [](const OW& ow) {
                   if (ow.K == 0) throw InvalidArgument("ow: K must be at least 1");
                   if (!(ow.gamma >= 0.0 && ow.gamma <= 1.0)) {
                     throw InvalidArgument("ow: gamma must lie in [0, 1]");
                   }
                 },
                 [n_states](const General& g) {
                   if (g.rewards.size() != g.horizon + 1 || g.discounts.size() != g.horizon + 1) {
                     throw InvalidArgument("General: need horizon + 1 reward and discount tables");
                   }
                   for (std::size_t t = 1; t <= g.horizon; ++t) {
                     check_table(g.rewards[t], n_states, "reward");
                     check_table(g.discounts[t], n_states, "discount");
                     check_discounts(g.discounts[t], 1.0, false, "discount");
                   }
                   check_table(g.reward_tail, n_states, "tail reward");
                   check_table(g.discount_tail, n_states, "tail discount");
                   check_discounts(g.discount_tail, 1.0, true, "tail discount");
                 },
             },
             f);
}

std::string describe(const Formulation& f) {
  return std::visit(Overloaded{
                        [](const Pe& pe) { return "pe(" + format_number(pe.gamma) + ")"; },
                        [](const ET& et) { return "et(" + std::to_string(et.K) + ")"; },
                        [](const OW& ow) {
                          return "ow(" + std::to_string(ow.K) + "," + format_number(ow.gamma) + ")";
                        },
                        [](const General& g) {
                          return "general(" + std::to_string(g.horizon) + ")";
                        },
                    },
                    f);
}

General as_general(const Formulation& f, std::size_t n) {
  validate_formulation(f, n);
  return std::visit(
      Overloaded{
          [n](const Pe& pe) {
            General g;
            g.horizon = 0;
            g.rewards = {filled(n, 0.0)};
            g.discounts = {filled(n, 1.0)};
            g.reward_tail = indicator(n, 1.0 - pe.gamma);
            g.discount_tail = filled(n, pe.gamma);
            return g;
          },
          [n](const ET& et) {
            General g;
            g.horizon = et.K;
            g.rewards.assign(et.K + 1, filled(n, 0.0));
            g.rewards[et.K] = indicator(n, 1.0);
            g.discounts.assign(et.K + 1, filled(n, 1.0));
            g.discounts[et.K] = filled(n, 0.0);
            g.reward_tail = filled(n, 0.0);
            g.discount_tail = filled(n, 0.0);
            return g;
          },
          [n](const OW& ow) {
            General g;
            g.horizon = ow.K;
            g.rewards.assign(ow.K + 1, indicator(n, 1.0));
            StateGoalTable disc = filled(n, ow.gamma);
            for (std::size_t s = 0; s < n; ++s) disc[s][s] = 0.0;
            g.discounts.assign(ow.K + 1, disc);
            g.reward_tail = filled(n, 0.0);
            g.discount_tail = filled(n, 0.0);
            return g;
          },
          [](const General& g) { return g; },
      },
      f);
}

}  // namespace gclab
