#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace gclab {

/// Dense table indexed [state][goal].
using StateGoalTable = std::vector<std::vector<double>>;

/// Discounted occupancy: J = P(S_{gamma,+} = g), gamma in [0, 1).
struct Pe {
  double gamma = 0.0;
};

/// Exact time: J = P(S_K = g), K >= 1.
struct ET {
  std::size_t K = 1;
};

/// First visit within K steps: J = E[gamma^(T_g - 1) 1{T_g <= K}], gamma in [0, 1].
struct OW {
  std::size_t K = 1;
  double gamma = 1.0;
};

/// J = E sum_{t>=1} R_t(S_t; g) prod_{k<t} gamma_k(S_k; g), with gamma_0 = 1.
///
/// rewards[t] and discounts[t] are explicit for t = 1..horizon (index 0 is
/// unused); every later step uses the tail tables. Tail discounts must stay
/// strictly below 1 so that the series converges.
struct General {
  std::size_t horizon = 0;
  std::vector<StateGoalTable> rewards;
  std::vector<StateGoalTable> discounts;
  StateGoalTable reward_tail;
  StateGoalTable discount_tail;

  bool nonnegative_rewards() const;
};

using Formulation = std::variant<Pe, ET, OW, General>;

/// Throws InvalidArgument on out-of-range parameters or mis-shaped tables.
void validate_formulation(const Formulation& f, std::size_t n_states);

/// Short tag such as "pe(0.35)" or "ow(2,0.35)".
std::string describe(const Formulation& f);

/// Rewrites Pe, ET or OW in the general (R_t, gamma_t) form; General is returned as is.
General as_general(const Formulation& f, std::size_t n_states);

}  // namespace gclab
