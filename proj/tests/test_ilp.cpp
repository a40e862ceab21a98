#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "bsg/ilp.hpp"
#include "bsg/oracle.hpp"
#include "helpers.hpp"

using namespace bsg;

namespace {

IlpModel pigeonhole(int pigeons, int holes) {
  IlpModel m;
  std::vector<std::vector<int>> v(pigeons, std::vector<int>(holes));
  for (int i = 0; i < pigeons; ++i)
    for (int j = 0; j < holes; ++j)
      v[i][j] = m.add_var("p_" + std::to_string(i) + "_" + std::to_string(j), 0, 1);
  for (int i = 0; i < pigeons; ++i) {
    LinExpr row;
    for (int j = 0; j < holes; ++j) row.add(1, v[i][j]);
    m.add_con(std::move(row), Sense::Eq, 1);
  }
  for (int j = 0; j < holes; ++j) {
    LinExpr col;
    for (int i = 0; i < pigeons; ++i) col.add(1, v[i][j]);
    m.add_con(std::move(col), Sense::Le, 1);
  }
  return m;
}

BsgInstance random_borda_instance(std::mt19937_64& gen, Weight n) {
  auto inst = testing::canonical_instance(
      3, bsg::testing::random_society(gen, 6, n), VotingRule::borda(), 0);
  // Target whichever candidate currently scores lowest.
  const auto sc = scores(inst.rule, inst.graph.types, inst.graph.society);
  inst.preferred = static_cast<int>(
      std::min_element(sc.begin(), sc.end()) - sc.begin());
  inst.cost = shift_cost_matrix(inst.graph.types, inst.preferred);
  return inst;
}

}  // namespace

TEST_CASE("solver finds simple optima") {
  IlpModel m;
  const int x = m.add_var("x", 0, 5);
  const int y = m.add_var("y", 0, 5);
  m.add_con(LinExpr().add(1, x).add(1, y), Sense::Ge, 3);
  m.objective.add(1, x).add(1, y);
  const auto res = solve(m);
  REQUIRE(res.status == SolveResult::Status::Optimal);
  CHECK(res.objective == 3);
  CHECK(res.assignment[x] + res.assignment[y] == 3);
}

TEST_CASE("solver detects infeasibility") {
  IlpModel m;
  const int x = m.add_var("x", 0, 10);
  m.add_con(LinExpr().add(1, x), Sense::Ge, 2);
  m.add_con(LinExpr().add(1, x), Sense::Le, 1);
  CHECK(solve(m).status == SolveResult::Status::Infeasible);
  CHECK(solve(pigeonhole(3, 2)).status == SolveResult::Status::Infeasible);
}

TEST_CASE("solver handles equalities and negative coefficients") {
  IlpModel m;
  const int x = m.add_var("x", 0, 10);
  const int y = m.add_var("y", 0, 10);
  m.add_con(LinExpr().add(2, x).add(3, y), Sense::Eq, 12);
  m.objective.add(1, x).add(1, y);
  const auto res = solve(m);
  REQUIRE(res.status == SolveResult::Status::Optimal);
  CHECK(res.objective == 4);  // x = 0, y = 4
  CHECK(res.assignment[x] == 0);
  CHECK(res.assignment[y] == 4);

  IlpModel neg;
  const int w = neg.add_var("w", 0, 7);
  neg.objective.add(-1, w);
  const auto nres = solve(neg);
  REQUIRE(nres.status == SolveResult::Status::Optimal);
  CHECK(nres.objective == -7);
}

TEST_CASE("solver picks cheap binaries") {
  IlpModel m;
  const int z1 = m.add_var("z1", 0, 1);
  const int z2 = m.add_var("z2", 0, 1);
  m.add_con(LinExpr().add(1, z1).add(1, z2), Sense::Eq, 1);
  m.objective.add(2, z1).add(1, z2);
  const auto res = solve(m);
  REQUIRE(res.status == SolveResult::Status::Optimal);
  CHECK(res.objective == 1);
  CHECK(res.assignment[z2] == 1);
}

TEST_CASE("both search strategies agree") {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 20; ++trial) {
    IlpModel m;
    std::vector<int> v;
    for (int i = 0; i < 5; ++i) {
      v.push_back(m.add_var("v" + std::to_string(i), 0, 4));
      m.objective.add(1 + static_cast<Weight>(uniform_below(gen, 5)), v[i]);
    }
    for (int c = 0; c < 3; ++c) {
      LinExpr e;
      for (int i = 0; i < 5; ++i)
        e.add(static_cast<Weight>(uniform_below(gen, 4)), v[i]);
      m.add_con(std::move(e), Sense::Ge,
                static_cast<Weight>(uniform_below(gen, 12)));
    }
    SolveParams deepening;
    SolveParams incumbent;
    incumbent.strategy = SolveParams::Strategy::IncumbentDfs;
    const auto a = solve(m, deepening);
    const auto b = solve(m, incumbent);
    REQUIRE(a.status == b.status);
    if (a.status == SolveResult::Status::Optimal)
      CHECK(a.objective == b.objective);
  }
}

TEST_CASE("node limit surfaces as a search limit") {
  SolveParams tight;
  tight.node_limit = 1;
  CHECK(solve(pigeonhole(6, 5), tight).status ==
        SolveResult::Status::SearchLimit);
}

TEST_CASE("model evaluation helpers") {
  IlpModel m;
  const int x = m.add_var("x", 0, 3);
  const int y = m.add_var("y", 0, 3);
  m.add_con(LinExpr().add(1, x).add(-1, y), Sense::Le, 0);
  m.add_con(LinExpr().add(1, x).add(1, y), Sense::Ge, 4);
  CHECK(m.eval(m.cons[0].expr, {2, 1}) == 1);
  CHECK_FALSE(m.satisfied(m.cons[0], {2, 1}));
  CHECK(m.first_violated({2, 1}) == 0);
  CHECK(m.first_violated({1, 3}) == -1);
  CHECK(m.first_violated({1, 1}) == 1);
  CHECK_THROWS_AS(m.add_var("bad", 2, 1), SpecError);
}

TEST_CASE("LP export contains every section") {
  IlpModel m;
  const int x = m.add_var("x", 0, 9);
  const int z = m.add_var("z", 0, 1);
  m.add_con(LinExpr().add(3, x).add(-2, z), Sense::Le, 7);
  m.add_con(LinExpr().add(1, x), Sense::Ge, 1);
  m.objective.add(5, x).add(1, z);
  std::ostringstream out;
  export_lp(m, out);
  const std::string lp = out.str();
  CHECK(lp.find("Minimize") != std::string::npos);
  CHECK(lp.find("obj: 5 x + z") != std::string::npos);
  CHECK(lp.find("Subject To") != std::string::npos);
  CHECK(lp.find("c1: 3 x - 2 z <= 7") != std::string::npos);
  CHECK(lp.find("c2: x >= 1") != std::string::npos);
  CHECK(lp.find("Bounds") != std::string::npos);
  CHECK(lp.find("0 <= x <= 9") != std::string::npos);
  CHECK(lp.find("Generals") != std::string::npos);
  CHECK(lp.find("Binaries") != std::string::npos);
  CHECK(lp.find("End") != std::string::npos);
}

TEST_CASE("solution import verifies assignments") {
  IlpModel m;
  const int x = m.add_var("x", 0, 9);
  m.add_var("y", 0, 9);
  m.add_con(LinExpr().add(1, x), Sense::Ge, 2);
  m.objective.add(1, x);

  std::istringstream good("# solver log\nx 2\n");
  const auto res = import_solution(m, good);
  REQUIRE(res.status == SolveResult::Status::Optimal);
  CHECK(res.objective == 2);
  CHECK(res.assignment == std::vector<Weight>{2, 0});  // y defaults to 0

  std::istringstream bad("x 1\n");
  CHECK_THROWS_AS(import_solution(m, bad), VerificationError);
  std::istringstream unknown("q 3\n");
  CHECK_THROWS_AS(import_solution(m, unknown), ParseError);
  std::istringstream out_of_bounds("x 12\n");
  CHECK_THROWS_AS(import_solution(m, out_of_bounds), VerificationError);
}

TEST_CASE("exported models round-trip through solution files") {
  auto inst = testing::canonical_instance(3, {0, 2, 0, 0, 0, 0},
                                          VotingRule::plurality(), 2);
  const auto bm = build_sync_bsg_model(inst);
  const auto direct = solve(bm.ilp);
  REQUIRE(direct.status == SolveResult::Status::Optimal);

  std::ostringstream lp;
  export_lp(bm.ilp, lp);
  CHECK(lp.str().find("b_1_4") != std::string::npos);

  std::ostringstream sol;
  for (size_t v = 0; v < bm.ilp.vars.size(); ++v)
    sol << bm.ilp.vars[v].name << " " << direct.assignment[v] << "\n";
  std::istringstream in(sol.str());
  const auto imported = import_solution(bm.ilp, in);
  REQUIRE(imported.status == SolveResult::Status::Optimal);
  CHECK(imported.objective == direct.objective);
}

TEST_CASE("canonical universe detection and canonicalization") {
  CHECK(is_canonical_universe(testing::example_graph_canonical()));
  CHECK_FALSE(is_canonical_universe(testing::example_graph()));

  BsgInstance inst;
  inst.graph = testing::example_graph();
  inst.rule = VotingRule::borda();
  inst.preferred = 0;
  inst.cost = shift_cost_matrix(inst.graph.types, 0);
  const auto canon = canonicalize_instance(inst);
  CHECK(is_canonical_universe(canon.graph));
  CHECK(canon.graph.society == Society{21, 42, 10, 10, 42, 21});
  CHECK(canon.cost.tau == 6);
  // Same election, same scores.
  CHECK(scores(canon.rule, canon.graph.types, canon.graph.society) ==
        scores(inst.rule, inst.graph.types, inst.graph.society));
}

TEST_CASE("layer count overrides are validated") {
  auto inst = testing::canonical_instance(3, {1, 1, 1, 1, 1, 1},
                                          VotingRule::borda(), 0);
  CHECK_THROWS_AS(build_sync_bsg_model(inst, 0), SpecError);
  CHECK_THROWS_AS(build_sync_bsg_model(inst, 7), SpecError);
  CHECK_NOTHROW(build_sync_bsg_model(inst, 2));
  inst.mode = DiffusionMode::AsyncOptimistic;
  CHECK_THROWS_AS(build_async_optimistic_model(inst, 0), SpecError);
  inst.mode = DiffusionMode::Sync;
  inst.rule = VotingRule::stv();
  CHECK_NOTHROW(build_sync_bsg_model(inst));
}

TEST_CASE("zero-budget model mirrors plain diffusion") {
  // After convergence the running example ties a and c and leaves b with
  // nothing, so a zero-budget campaign is free for a and hopeless for b.
  auto inst = testing::canonical_instance(3, {21, 42, 10, 10, 42, 21},
                                          VotingRule::borda(), 0);
  inst.budget = 0;
  const auto bm = build_sync_bsg_model(inst);
  const auto res = solve(bm.ilp);
  REQUIRE(res.status == SolveResult::Status::Optimal);
  CHECK(res.objective == 0);

  const auto layers = bm.decode_layers(res.assignment);
  const auto trace = run_sync(inst.graph);
  REQUIRE(static_cast<int>(layers.size()) == bm.k + 1);
  for (int l = 0; l <= bm.k; ++l) {
    const size_t s = std::min<size_t>(l, trace.states.size() - 1);
    CHECK(layers[l] == trace.states[s]);
  }

  auto hopeless = inst;
  hopeless.preferred = 1;
  hopeless.cost = shift_cost_matrix(hopeless.graph.types, 1);
  CHECK(solve(build_sync_bsg_model(hopeless).ilp).status ==
        SolveResult::Status::Infeasible);
}

TEST_CASE("optimum and decoded plan agree with the exhaustive search") {
  std::mt19937_64 gen(43);
  int solved = 0;
  for (int trial = 0; trial < 12; ++trial) {
    auto inst = random_borda_instance(gen, 4 + trial % 5);
    if (trial % 2) inst.rule = VotingRule::plurality();

    const auto oracle = brute_force_optimal(inst);
    const auto bm = build_sync_bsg_model(inst);
    const auto res = solve(bm.ilp);
    if (oracle.status == OracleResult::Status::Found) {
      REQUIRE(res.status == SolveResult::Status::Optimal);
      CHECK(res.objective == oracle.cost);

      // The decoded plan must be valid, priced correctly, and its diffusion
      // must reproduce the model's layer values.
      const auto plan = bm.decode_plan(res.assignment);
      const auto [bribed, paid] =
          apply_plan(inst.graph.society, plan, inst.cost);
      CHECK(paid == res.objective);
      const auto layers = bm.decode_layers(res.assignment);
      auto g = inst.graph;
      g.society = bribed;
      const auto trace = run_sync(g);
      for (int l = 0; l <= bm.k; ++l) {
        const size_t s = std::min<size_t>(l, trace.states.size() - 1);
        CHECK(layers[l] == trace.states[s]);
      }
      ++solved;
    } else {
      REQUIRE(oracle.status == OracleResult::Status::Infeasible);
      CHECK(res.status == SolveResult::Status::Infeasible);
    }
  }
  CHECK(solved > 0);
}

TEST_CASE("budget row caps the spend") {
  // One voter of cba must climb two steps for a to tie under Borda.
  auto inst = testing::canonical_instance(3, {0, 0, 0, 0, 0, 1},
                                          VotingRule::borda(), 0);
  const auto unbounded = solve(build_sync_bsg_model(inst).ilp);
  REQUIRE(unbounded.status == SolveResult::Status::Optimal);
  CHECK(unbounded.objective == 2);
  inst.budget = 1;
  CHECK(solve(build_sync_bsg_model(inst).ilp).status ==
        SolveResult::Status::Infeasible);
}

TEST_CASE("STV constraints agree with direct evaluation") {
  std::mt19937_64 gen(47);
  for (int trial = 0; trial < 12; ++trial) {
    auto inst = testing::canonical_instance(
        3, testing::random_society(gen, 6, 3 + trial),
        VotingRule::stv(), static_cast<int>(uniform_below(gen, 3)));
    if (total_weight(inst.graph.society) == 0) continue;
    inst.budget = 0;
    const auto res = solve(build_sync_bsg_model(inst).ilp);
    auto g = inst.graph;
    g.society = run_sync(g).final_state();
    const bool wins = stv_winner(g.types, g.society) == inst.preferred;
    CHECK((res.status == SolveResult::Status::Optimal) == wins);
  }
}

TEST_CASE("async-optimistic feasibility matches order exploration") {
  std::mt19937_64 gen(53);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = testing::canonical_instance(
        3, testing::random_society(gen, 6, 3 + trial % 6),
        VotingRule::plurality(), static_cast<int>(uniform_below(gen, 3)));
    if (total_weight(inst.graph.society) == 0) continue;
    inst.mode = DiffusionMode::AsyncOptimistic;
    inst.budget = 0;
    const auto truth = async_decide(inst, AsyncMode::Optimistic);
    REQUIRE(truth.has_value());
    const auto res = solve(build_async_optimistic_model(inst).ilp);
    CHECK((res.status == SolveResult::Status::Optimal) == *truth);
  }
}
