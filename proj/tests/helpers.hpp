#ifndef BSG_TEST_HELPERS_HPP
#define BSG_TEST_HELPERS_HPP

#include <random>

#include "bsg/bribery.hpp"
#include "bsg/core.hpp"
#include "bsg/rng.hpp"

namespace bsg::testing {

// The running example from the introduction: six types of a 3-candidate
// election, listed here in the source's own numbering (abc, bac, bca, cba,
// cab, acb), weights [21, 10, 10, 21, 42, 42]. Candidates a=0, b=1, c=2.
inline SocietyGraph example_graph() {
  const std::vector<std::vector<int>> orders = {
      {0, 1, 2}, {1, 0, 2}, {1, 2, 0}, {2, 1, 0}, {2, 0, 1}, {0, 2, 1}};
  std::vector<VoterType> types;
  for (size_t i = 0; i < orders.size(); ++i)
    types.push_back({static_cast<int>(i), PreferenceOrder(orders[i]), {}});
  return build_society_graph(types, {21, 10, 10, 21, 42, 42});
}

// Same society, but with types in canonical id order.
inline SocietyGraph example_graph_canonical() {
  return make_canonical_graph(3, {21, 42, 10, 10, 42, 21});
}

inline Society random_society(std::mt19937_64& gen, int tau, Weight total) {
  Society s(tau, 0);
  for (Weight v = 0; v < total; ++v)
    ++s[uniform_below(gen, static_cast<std::uint64_t>(tau))];
  return s;
}

inline BsgInstance canonical_instance(int m, Society weights, VotingRule rule,
                                      int p) {
  BsgInstance inst;
  inst.graph = make_canonical_graph(m, std::move(weights));
  inst.rule = std::move(rule);
  inst.preferred = p;
  inst.cost = shift_cost_matrix(inst.graph.types, p);
  return inst;
}

}  // namespace bsg::testing

#endif
