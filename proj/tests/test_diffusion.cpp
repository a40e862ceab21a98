#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bsg/diffusion.hpp"
#include "helpers.hpp"

using namespace bsg;

TEST_CASE("synchronous steps on the running example") {
  auto g = testing::example_graph();
  auto [s1, e1] = sync_step(g);
  CHECK(s1 == Society{10, 0, 0, 10, 63, 63});
  CHECK(e1.size() == 4);
  g.society = s1;
  auto [s2, e2] = sync_step(g);
  CHECK(s2 == Society{0, 0, 0, 0, 73, 73});
  g.society = s2;
  CHECK(sync_step(g).first == s2);  // fixed point
}

TEST_CASE("isolated vertices never move") {
  auto types = std::vector<VoterType>{{0, PreferenceOrder({0, 1}), {}},
                                      {1, PreferenceOrder({1, 0}), {}}};
  AdjacencyPolicy policy;
  policy.swap1 = false;
  auto g = build_society_graph(types, {1, 100}, policy);
  CHECK(sync_step(g).first == g.society);
  CHECK(is_stable(g));
}

TEST_CASE("run_sync reaches the converged state of the running example") {
  const auto trace = run_sync(testing::example_graph());
  REQUIRE(trace.states.size() == 3);
  CHECK(trace.states[0] == Society{21, 10, 10, 21, 42, 42});
  CHECK(trace.states[1] == Society{10, 0, 0, 10, 63, 63});
  CHECK(trace.states[2] == Society{0, 0, 0, 0, 73, 73});
  CHECK(trace.converged);
  CHECK(trace.steps() == 2);

  auto stable = testing::example_graph();
  stable.society = {0, 0, 0, 0, 73, 73};
  CHECK(run_sync(stable).states.size() == 1);
}

TEST_CASE("sync diffusion conserves weight and converges within tau steps") {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 300; ++trial) {
    auto g = testing::example_graph_canonical();
    g.society = testing::random_society(gen, 6, 1 + trial % 100);
    const Weight n = total_weight(g.society);
    const auto trace = run_sync(g);
    CHECK(trace.steps() <= 6);
    for (const auto& s : trace.states) CHECK(total_weight(s) == n);
    // Once drained, a type stays drained.
    for (size_t t = 1; t < trace.states.size(); ++t)
      for (int v = 0; v < 6; ++v)
        if (trace.states[t - 1][v] == 0) CHECK(trace.states[t][v] == 0);
  }
}

TEST_CASE("asynchronous steps follow the narrated example") {
  auto g = testing::example_graph();
  // Index 2 hands its 10 voters to index 3 (1-based types 3 and 4).
  auto [next, redundant] = async_step(g, 2);
  CHECK_FALSE(redundant);
  CHECK(next == Society{21, 10, 0, 31, 42, 42});
  // Type 5 (index 4) has no dominant neighbor.
  CHECK(async_step(g, 4).second);
  g.society[1] = 0;
  CHECK(async_step(g, 1).second);  // nothing to move
  CHECK_THROWS_AS(async_step(g, 6), ReferenceError);
}

TEST_CASE("asynchronous orders can change the winner") {
  const auto g = testing::example_graph();
  // Update order (3,4,6,2) in 1-based ids, zero-based (2,3,5,1).
  const auto t1 = run_async(g, {2, 3, 5, 1});
  CHECK(t1.final_state() == Society{31, 0, 0, 0, 115, 0});
  CHECK(t1.converged);
  CHECK(winners(VotingRule::plurality(), g.types, t1.final_state()) ==
        std::set<int>{2});
  // Update order (2,1,5,3) in 1-based ids, zero-based (1,0,4,2).
  const auto t2 = run_async(g, {1, 0, 4, 2});
  CHECK(t2.final_state() == Society{0, 0, 0, 31, 0, 115});
  CHECK(t2.converged);
  CHECK(winners(VotingRule::plurality(), g.types, t2.final_state()) ==
        std::set<int>{0});
  // Empty order: nothing happens and the start state is not stable.
  const auto t3 = run_async(g, {});
  CHECK(t3.final_state() == g.society);
  CHECK_FALSE(t3.converged);
}

TEST_CASE("redundant steps do not change the outcome") {
  const auto g = testing::example_graph();
  const std::vector<int> order = {2, 3, 5, 1};
  // Before each effective step, splice in every step that is currently
  // redundant; the trace must end in the same place.
  std::vector<int> padded;
  auto cur = g;
  for (int v : order) {
    for (int u = 0; u < 6; ++u)
      if (async_step(cur, u).second) padded.push_back(u);
    padded.push_back(v);
    cur.society = async_step(cur, v).first;
  }
  CHECK(padded.size() > order.size());
  const auto lean = run_async(g, order);
  const auto fat = run_async(g, padded);
  CHECK(lean.final_state() == fat.final_state());
}

TEST_CASE("exploration finds every convergent outcome") {
  const auto g = testing::example_graph();
  const auto result = explore_async(g, 100000);
  CHECK(result.complete);
  CHECK(result.converged.contains(Society{31, 0, 0, 0, 115, 0}));
  CHECK(result.converged.contains(Society{0, 0, 0, 31, 0, 115}));
  CHECK(result.max_irredundant_length <= 6);

  auto stable = g;
  stable.society = {0, 0, 0, 0, 73, 73};
  const auto single = explore_async(stable, 1000);
  CHECK(single.converged == std::set<Society>{stable.society});
}

TEST_CASE("exploration respects its state budget") {
  const auto result = explore_async(testing::example_graph(), 3);
  CHECK_FALSE(result.complete);
}

TEST_CASE("irredundant sequences stay within tau steps") {
  std::mt19937_64 gen(29);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = testing::example_graph_canonical();
    g.society = testing::random_society(gen, 6, 12);
    const auto result = explore_async(g, 200000);
    REQUIRE(result.complete);
    CHECK(result.max_irredundant_length <= 6);
  }
}

TEST_CASE("influence coefficients") {
  InfluenceParams params;
  params.age_coeff[{"M", "M"}] = 1;
  params.age_coeff[{"O", "Y"}] = 0;
  params.age_coeff[{"Y", "Y"}] = Rational(6, 5);
  params.stubbornness["persuadable"] = 1;
  params.stubbornness["stubborn"] = Rational(1, 2);

  VoterType self{0, PreferenceOrder({0, 1, 2}), {{"age", "M"}}};
  CHECK(influence_coefficient(self, self, 3, params) == Rational(1));

  VoterType old{1, PreferenceOrder({0, 1, 2}), {{"age", "O"}}};
  VoterType young{2, PreferenceOrder({1, 0, 2}), {{"age", "Y"}}};
  CHECK(influence_coefficient(old, young, 1, params) == Rational(0));

  VoterType m1{3, PreferenceOrder({0, 1, 2}),
               {{"age", "M"}, {"stubbornness", "persuadable"}}};
  VoterType m2{4, PreferenceOrder({1, 0, 2}),
               {{"age", "M"}, {"stubbornness", "persuadable"}}};
  CHECK(influence_coefficient(m1, m2, 2, params) == Rational(1, 4));

  VoterType s2{5, PreferenceOrder({1, 0, 2}),
               {{"age", "M"}, {"stubbornness", "stubborn"}}};
  CHECK(influence_coefficient(m1, s2, 2, params) == Rational(1, 8));
  CHECK_THROWS_AS(influence_coefficient(m1, m2, 0, params), SpecError);
}

TEST_CASE("generalized basic-majority matches the synchronous step") {
  std::mt19937_64 gen(31);
  ProcessSpec spec;
  spec.kind = ProcessSpec::Kind::BasicMajority;
  for (int trial = 0; trial < 100; ++trial) {
    auto g = testing::example_graph_canonical();
    g.society = testing::random_society(gen, 6, 20);
    auto [gg, ge] = generalized_step(g, spec, 1);
    auto [ss, se] = sync_step(g);
    CHECK(gg.society == ss);
    CHECK(ge == se);
  }
  const auto trace = run_generalized(testing::example_graph(), spec);
  CHECK(trace.final_state() == Society{0, 0, 0, 0, 73, 73});
  CHECK(trace.converged);
  CHECK_FALSE(trace.cycle.has_value());
}

TEST_CASE("weighted majority honors arc weights") {
  // One heavy neighbor connected by a feather-weight arc: no assimilation
  // under weighted majority, assimilation under basic majority.
  auto types = std::vector<VoterType>{{0, PreferenceOrder({0, 1}), {}},
                                      {1, PreferenceOrder({1, 0}), {}}};
  AdjacencyPolicy policy;
  policy.swap1 = false;
  policy.explicit_arcs.push_back({0, 1, Rational(1, 100)});
  auto g = build_society_graph(types, {3, 100}, policy);

  ProcessSpec weighted;
  weighted.kind = ProcessSpec::Kind::WeightedMajority;
  weighted.max_rounds = 4;
  CHECK(generalized_step(g, weighted, 1).first.society == Society{3, 100});

  auto unit = g;
  unit.arcs[0].weight = 1;
  CHECK(generalized_step(unit, weighted, 1).first.society == Society{0, 103});
}

TEST_CASE("custom tables can oscillate") {
  // Three orders, young and old cohorts; the young always adopt the next
  // order around the cycle while the old never move.
  const std::vector<std::vector<int>> orders = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  std::vector<VoterType> types;
  for (int i = 0; i < 3; ++i)
    types.push_back({i, PreferenceOrder(orders[i]), {{"age", "Y"}}});
  for (int i = 0; i < 3; ++i)
    types.push_back({3 + i, PreferenceOrder(orders[i]), {{"age", "O"}}});
  AdjacencyPolicy policy;
  policy.swap1 = false;
  auto g = build_society_graph(types, {1, 0, 0, 5, 5, 5}, policy);

  ProcessSpec spec;
  spec.kind = ProcessSpec::Kind::CustomTable;
  spec.max_rounds = 9;
  spec.adoption_table = {1, 2, 0, -1, -1, -1};
  spec.mobility.attribute = "age";
  spec.mobility.immobile_values = {"O"};

  const auto trace = run_generalized(g, spec);
  REQUIRE(trace.cycle.has_value());
  CHECK(trace.cycle->first == 0);
  CHECK(trace.cycle->second == 3);
  CHECK(trace.states[1] == Society{0, 1, 0, 5, 5, 5});
  CHECK(trace.states[3] == trace.states[0]);
}

TEST_CASE("local elections move types to the winning ranking") {
  // Everyone mid-aged and persuadable; overwhelming weight on one order pulls
  // a lone dissenting type over to it.
  InfluenceParams params;
  params.age_coeff[{"M", "M"}] = 1;
  params.stubbornness["persuadable"] = 1;

  std::vector<VoterType> types;
  const auto all = enumerate_orders(3);
  for (size_t i = 0; i < all.size(); ++i)
    types.push_back({static_cast<int>(i), all[i],
                     {{"age", "M"}, {"stubbornness", "persuadable"}}});
  AdjacencyPolicy policy;
  policy.swap1 = false;
  auto g = build_society_graph(types, {1, 0, 0, 0, 0, 60}, policy);

  ProcessSpec spec;
  spec.kind = ProcessSpec::Kind::LocalElection;
  spec.local_rule = VotingRule::borda();
  spec.influence = params;
  spec.max_rounds = 1;

  const auto [out, events] = generalized_step(g, spec, 1);
  REQUIRE(events.size() == 1);
  CHECK(events[0].from == 0);
  CHECK(events[0].to == 5);
  CHECK(out.society == Society{0, 0, 0, 0, 0, 61});
}

TEST_CASE("kemeny neighborhood adoption") {
  const auto base = testing::example_graph_canonical();
  auto g = base;
  g.society = {1, 0, 0, 0, 0, 40};  // 012 dwarfed by neighboring 210
  ProcessSpec spec;
  spec.kind = ProcessSpec::Kind::KemenyNeighborhood;
  spec.max_rounds = 3;
  const auto trace = run_generalized(g, spec);
  // Type 0's neighborhood is dominated by its own order (type 5 is not
  // adjacent), so nothing moves.
  CHECK(trace.states.size() == 1);

  g.society = {1, 40, 0, 0, 0, 0};  // 021 is adjacent to 012
  const auto pulled = run_generalized(g, spec);
  CHECK(pulled.final_state()[1] == 41);
}

TEST_CASE("process specs are validated") {
  const auto g = testing::example_graph_canonical();
  ProcessSpec spec;
  spec.kind = ProcessSpec::Kind::CustomTable;
  spec.max_rounds = 1;
  spec.adoption_table = {0, 1};  // wrong size
  CHECK_THROWS_AS(spec.validate(g), SpecError);
  spec.adoption_table = {9, 0, 0, 0, 0, 0};
  CHECK_THROWS_AS(spec.validate(g), SpecError);
  ProcessSpec no_rounds;
  no_rounds.kind = ProcessSpec::Kind::WeightedMajority;
  CHECK_THROWS_AS(no_rounds.validate(g), SpecError);
}

TEST_CASE("cycle detection on traces") {
  DiffusionTrace trace;
  trace.states = {{1, 0}, {0, 1}, {1, 0}};
  const auto cycle = detect_cycle(trace);
  REQUIRE(cycle.has_value());
  CHECK(*cycle == std::pair<int, int>{0, 2});
  DiffusionTrace flat;
  flat.states = {{1, 0}, {0, 1}};
  CHECK_FALSE(detect_cycle(flat).has_value());
}
