#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bsg/experiments.hpp"
#include "bsg/ilp.hpp"
#include "bsg/json_io.hpp"

namespace {

constexpr int kOk = 0, kUsage = 1, kFailure = 2, kResourceLimit = 3;

bsg::BsgInstance read_instance(const std::string& path) {
  if (path == "-") return bsg::load_instance(std::cin);
  std::ifstream in(path);
  if (!in) throw bsg::ParseError("cannot open " + path);
  return bsg::load_instance(in);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw bsg::ParseError("cannot open " + path + " for writing");
  return out;
}

// Writes to the path, or stdout for "-".
template <typename F>
void with_sink(const std::string& path, F f) {
  if (path == "-") {
    f(std::cout);
  } else {
    auto out = open_out(path);
    f(out);
  }
}

int cmd_generate(const std::string& kind, int m, bsg::Weight n,
                 std::uint64_t seed, const std::string& rule_name, int p,
                 int vertices, const std::vector<std::string>& edges, int k,
                 const std::string& out_path) {
  bsg::BsgInstance inst;
  if (kind == "ic") {
    inst.graph =
        bsg::make_canonical_graph(m, bsg::impartial_culture(m, n, seed));
    inst.rule = bsg::rule_from_json(bsg::Json(rule_name));
    inst.preferred = p;
  } else {  // gadget
    bsg::SimpleGraph g;
    g.n = vertices;
    for (const std::string& e : edges) {
      const auto dash = e.find('-');
      if (dash == std::string::npos)
        throw bsg::ParseError("edge must look like u-v: " + e);
      g.edges.emplace_back(std::stoi(e.substr(0, dash)),
                           std::stoi(e.substr(dash + 1)));
    }
    auto [graph, preferred] = bsg::vc_gadget(g, k);
    inst.graph = std::move(graph);
    inst.preferred = preferred;
    inst.rule = bsg::VotingRule::plurality();
    inst.mode = bsg::DiffusionMode::AsyncOptimistic;
  }
  inst.cost = bsg::shift_cost_matrix(inst.graph.types, inst.preferred);
  with_sink(out_path, [&](std::ostream& out) { bsg::save_instance(inst, out); });
  return kOk;
}

int cmd_diffuse(const std::string& in_path, const std::string& mode,
                const std::vector<int>& order, const std::string& out_path) {
  const bsg::BsgInstance inst = read_instance(in_path);
  bsg::DiffusionTrace trace;
  if (mode == "sync") {
    trace = bsg::run_sync(inst.graph);
  } else if (mode == "async") {
    trace = bsg::run_async(inst.graph, order);
  } else if (mode == "generalized") {
    if (!inst.process)
      throw bsg::SpecError("generalized diffusion needs a process spec");
    trace = bsg::run_generalized(inst.graph, *inst.process);
  } else {
    throw bsg::ParseError("unknown mode: " + mode);
  }
  with_sink(out_path, [&](std::ostream& out) { bsg::write_trace(trace, out); });
  return kOk;
}

int cmd_solve(const std::string& in_path, const std::string& backend,
              const std::string& lp_path, const std::string& solution_path,
              std::optional<int> layers, unsigned long long node_limit,
              const std::string& out_path) {
  bsg::BsgInstance inst = read_instance(in_path);
  if (!bsg::is_canonical_universe(inst.graph))
    inst = bsg::canonicalize_instance(inst);
  const bsg::BsgModel model =
      inst.mode == bsg::DiffusionMode::AsyncOptimistic
          ? bsg::build_async_optimistic_model(inst, layers)
          : bsg::build_sync_bsg_model(inst, layers);

  if (backend == "lp-export") {
    with_sink(lp_path, [&](std::ostream& out) { bsg::export_lp(model.ilp, out); });
    if (solution_path.empty()) return kOk;
    std::ifstream sol(solution_path);
    if (!sol) throw bsg::ParseError("cannot open " + solution_path);
    const bsg::SolveResult res = bsg::import_solution(model.ilp, sol);
    bsg::Json j{{"cost", res.objective},
                {"plan", bsg::plan_to_json(model.decode_plan(res.assignment))}};
    with_sink(out_path, [&](std::ostream& out) { out << j.dump(2) << "\n"; });
    return kOk;
  }

  bsg::SolveParams params;
  params.node_limit = node_limit;
  const bsg::SolveResult res = bsg::solve(model.ilp, params);
  if (res.status == bsg::SolveResult::Status::SearchLimit) {
    std::cerr << "node limit reached after " << res.nodes << " nodes\n";
    return kResourceLimit;
  }
  if (res.status == bsg::SolveResult::Status::Infeasible) {
    std::cerr << "infeasible\n";
    return kFailure;
  }
  bsg::Json j{{"cost", res.objective},
              {"nodes", res.nodes},
              {"wall_ms", res.wall_ms},
              {"plan", bsg::plan_to_json(model.decode_plan(res.assignment))}};
  with_sink(out_path, [&](std::ostream& out) { out << j.dump(2) << "\n"; });
  return kOk;
}

int cmd_heuristic(const std::string& in_path, const std::string& method,
                  std::optional<bsg::Weight> budget, bool search,
                  const bsg::SaParams& sa, std::optional<bsg::Weight> cap,
                  const std::string& out_path) {
  bsg::BsgInstance inst = read_instance(in_path);
  if (!bsg::is_canonical_universe(inst.graph))
    inst = bsg::canonicalize_instance(inst);
  bsg::ShiftMatrix plan;
  bool success = false;
  bsg::Weight cost = 0;
  if (search) {
    const bsg::Decider decide = method == "greedy" ? bsg::greedy_decider()
                                                   : bsg::sa_decider(sa);
    try {
      bsg::BudgetSearchResult res = bsg::budget_search(decide, inst, cap);
      plan = std::move(res.plan);
      cost = res.budget;
      success = true;
    } catch (const bsg::SearchFailureError& e) {
      std::cerr << e.what() << "\n";
      return kFailure;
    }
  } else {
    if (!budget) throw bsg::ParseError("need --budget or --search");
    auto [p, ok] = method == "greedy"
                       ? bsg::greedy_decision(inst, *budget)
                       : bsg::sa_decision(inst, *budget, sa);
    plan = std::move(p);
    success = ok;
    cost = plan.cost();
  }
  bsg::Json j{{"cost", cost},
              {"success", success},
              {"plan", bsg::shift_matrix_to_json(plan)}};
  with_sink(out_path, [&](std::ostream& out) { out << j.dump(2) << "\n"; });
  return success ? kOk : kFailure;
}

int cmd_oracle(const std::string& in_path, const std::string& async_mode,
               bsg::Weight max_cost, std::size_t max_states,
               const std::string& out_path) {
  const bsg::BsgInstance inst = read_instance(in_path);
  bsg::OracleLimits limits;
  if (max_cost > 0) limits.max_cost = max_cost;
  limits.max_states = max_states;
  if (!async_mode.empty()) {
    const auto mode = async_mode == "pessimistic" ? bsg::AsyncMode::Pessimistic
                                                  : bsg::AsyncMode::Optimistic;
    const std::optional<bool> verdict = bsg::async_decide(inst, mode, limits);
    if (!verdict) {
      std::cerr << "state budget exhausted\n";
      return kResourceLimit;
    }
    with_sink(out_path, [&](std::ostream& out) {
      out << bsg::Json{{"mode", async_mode}, {"wins", *verdict}}.dump(2) << "\n";
    });
    return kOk;
  }
  const bsg::OracleResult res = bsg::brute_force_optimal(inst, limits);
  if (res.status == bsg::OracleResult::Status::LimitReached) {
    std::cerr << "limits reached; cost frontier " << res.frontier << "\n";
    return kResourceLimit;
  }
  if (res.status == bsg::OracleResult::Status::Infeasible) {
    std::cerr << "infeasible within budget\n";
    return kFailure;
  }
  bsg::Json j{{"cost", res.cost},
              {"plan", bsg::shift_matrix_to_json(res.plan)}};
  with_sink(out_path, [&](std::ostream& out) { out << j.dump(2) << "\n"; });
  return kOk;
}

int cmd_experiment(const std::string& config_path, const std::string& out_path) {
  bsg::Json j;
  if (config_path == "-") {
    std::cin >> j;
  } else {
    std::ifstream in(config_path);
    if (!in) throw bsg::ParseError("cannot open " + config_path);
    in >> j;
  }
  const bsg::ExperimentConfig config = bsg::experiment_config_from_json(j);
  with_sink(out_path, [&](std::ostream& out) { bsg::run_experiment(config, out); });
  return kOk;
}

int cmd_plot(const std::string& in_path, const std::string& x,
             const std::string& y, const std::string& out_path) {
  std::vector<bsg::ExperimentRecord> records;
  if (in_path == "-") {
    records = bsg::read_csv(std::cin);
  } else {
    std::ifstream in(in_path);
    if (!in) throw bsg::ParseError("cannot open " + in_path);
    records = bsg::read_csv(in);
  }
  with_sink(out_path, [&](std::ostream& out) {
    bsg::plot_scatter(records, x, y, out);
  });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shift bribery on society graphs"};
  app.require_subcommand(1);

  std::string in_path = "-", out_path = "-";

  auto* gen = app.add_subcommand("generate", "Generate an instance");
  std::string kind = "ic", rule_name = "borda";
  int m = 3, p = 0, vertices = 0, k = 0;
  bsg::Weight n = 20;
  std::uint64_t seed = 1;
  std::vector<std::string> edges;
  gen->add_option("--kind", kind)->check(CLI::IsMember({"ic", "gadget"}));
  gen->add_option("--m", m);
  gen->add_option("--n", n);
  gen->add_option("--seed", seed);
  gen->add_option("--rule", rule_name);
  gen->add_option("--p", p);
  gen->add_option("--vertices", vertices);
  gen->add_option("--edge", edges, "Edge u-v (repeatable)");
  gen->add_option("--k", k, "Cover size for the gadget");
  gen->add_option("-o,--out", out_path);

  auto* diff = app.add_subcommand("diffuse", "Run diffusion, print a trace");
  std::string mode = "sync";
  std::vector<int> order;
  diff->add_option("-i,--instance", in_path);
  diff->add_option("--mode", mode)
      ->check(CLI::IsMember({"sync", "async", "generalized"}));
  diff->add_option("--order", order, "Async update order (type ids)");
  diff->add_option("-o,--out", out_path);

  auto* solve_cmd = app.add_subcommand("solve", "Exact minimum-cost bribery");
  std::string backend = "builtin", lp_path = "-", solution_path;
  int layers = 0;
  unsigned long long node_limit = 200'000'000ull;
  solve_cmd->add_option("-i,--instance", in_path);
  solve_cmd->add_option("--backend", backend)
      ->check(CLI::IsMember({"builtin", "lp-export"}));
  solve_cmd->add_option("--lp", lp_path, "LP file path for lp-export");
  solve_cmd->add_option("--solution", solution_path,
                        "Solution file to import and verify");
  solve_cmd->add_option("--layers", layers,
                        "Override the diffusion depth k (expert use)");
  solve_cmd->add_option("--node-limit", node_limit);
  solve_cmd->add_option("-o,--out", out_path);

  auto* heur = app.add_subcommand("heuristic", "Greedy / simulated annealing");
  std::string method = "greedy";
  bsg::Weight budget = -1, cap = -1;
  bool search = false;
  bsg::SaParams sa;
  heur->add_option("-i,--instance", in_path);
  heur->add_option("--method", method)->check(CLI::IsMember({"greedy", "sa"}));
  heur->add_option("--budget", budget);
  heur->add_flag("--search", search, "Search for the minimal budget");
  heur->add_option("--budget-cap", cap);
  heur->add_option("--sa-iters", sa.iterations);
  heur->add_option("--sa-p0", sa.p0);
  heur->add_option("--seed", sa.seed);
  heur->add_option("-o,--out", out_path);

  auto* orc = app.add_subcommand("oracle", "Brute-force ground truth");
  std::string async_mode;
  bsg::Weight max_cost = 0;
  std::size_t max_states = 1'000'000;
  orc->add_option("-i,--instance", in_path);
  orc->add_option("--async", async_mode)
      ->check(CLI::IsMember({"optimistic", "pessimistic"}));
  orc->add_option("--max-cost", max_cost);
  orc->add_option("--max-states", max_states);
  orc->add_option("-o,--out", out_path);

  auto* exp = app.add_subcommand("experiment", "Batch runs to CSV");
  std::string config_path;
  exp->add_option("--config", config_path)->required();
  exp->add_option("-o,--out", out_path);

  auto* plot = app.add_subcommand("plot", "CSV to SVG scatter");
  std::string x_metric = "instance", y_metric = "cost";
  plot->add_option("-i,--in", in_path);
  plot->add_option("--x", x_metric);
  plot->add_option("--y", y_metric);
  plot->add_option("-o,--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsage;
  }

  try {
    if (gen->parsed())
      return cmd_generate(kind, m, n, seed, rule_name, p, vertices, edges, k,
                          out_path);
    if (diff->parsed()) return cmd_diffuse(in_path, mode, order, out_path);
    if (solve_cmd->parsed())
      return cmd_solve(in_path, backend, lp_path, solution_path,
                       layers > 0 ? std::optional<int>(layers) : std::nullopt,
                       node_limit, out_path);
    if (heur->parsed())
      return cmd_heuristic(in_path, method,
                           budget >= 0 ? std::optional<bsg::Weight>(budget)
                                       : std::nullopt,
                           search, sa,
                           cap >= 0 ? std::optional<bsg::Weight>(cap)
                                    : std::nullopt,
                           out_path);
    if (orc->parsed())
      return cmd_oracle(in_path, async_mode, max_cost, max_states, out_path);
    if (exp->parsed()) return cmd_experiment(config_path, out_path);
    if (plot->parsed()) return cmd_plot(in_path, x_metric, y_metric, out_path);
  } catch (const bsg::SizeLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const bsg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
