#include "gclab/search.hpp"

namespace gclab {

// Found by counterexample_search(kOwControlVsOptimal, SearchConfig{}, 1).
const FrozenOwWitness& frozen_ow_witness() {
  static const FrozenOwWitness w{
      "mdp v1\n"
      "states: s0 s1 s2\n"
      "actions s0: a0 a1\n"
      "actions s1: a0 a1\n"
      "actions s2: a0 a1\n"
      "t s0 a0 s0 0.3652759778689503\n"
      "t s0 a0 s1 0.6347240221310496\n"
      "t s0 a1 s0 0.5658106152852499\n"
      "t s0 a1 s2 0.4341893847147501\n"
      "t s1 a0 s0 0.466249895947389\n"
      "t s1 a0 s1 0.5337501040526109\n"
      "t s1 a1 s1 0.05713709504846565\n"
      "t s1 a1 s2 0.9428629049515345\n"
      "t s2 a0 s0 0.628216019005736\n"
      "t s2 a0 s2 0.37178398099426413\n"
      "t s2 a1 s1 0.658424887623611\n"
      "t s2 a1 s2 0.3415751123763891\n",
      2, 1.0, 0, 1};
  return w;
}

}  // namespace gclab
