#ifndef BSG_EXPERIMENTS_HPP
#define BSG_EXPERIMENTS_HPP

#include "bsg/json_io.hpp"
#include "bsg/oracle.hpp"

namespace bsg {

/// Plain undirected graph, input to the hardness gadget.
struct SimpleGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

/// n voters drawn uniformly over the m! orders, tallied per canonical type.
Society impartial_culture(int m, Weight n, std::uint64_t seed);

/// Society graph in which p can win under some asynchronous diffusion order
/// iff the input graph (max degree 3) has a vertex cover of size <= k.
/// Returns the graph and the preferred candidate.
std::pair<SocietyGraph, int> vc_gadget(const SimpleGraph& g, int k);

/// Exhaustive check, for cross-validating the gadget on small graphs.
bool has_vertex_cover(const SimpleGraph& g, int k);

struct ExperimentConfig {
  int m = 3;
  Weight n = 20;
  int count = 10;
  VotingRule rule = VotingRule::borda();
  std::uint64_t seed = 1;
  std::vector<std::string> methods = {"ilp"};  // ilp | greedy | sa | oracle
  std::optional<int> preferred;  // default: lowest-scoring candidate
  Weight oracle_n_limit = 50;
  SaParams sa;
  std::optional<Weight> budget_cap;
};

ExperimentConfig experiment_config_from_json(const Json& j);

struct ExperimentRecord {
  std::string instance_id;
  std::uint64_t seed = 0;
  std::string method;
  Weight cost = 0;
  std::string success;  // "true" | "false" | "skipped"
  double wall_ms = 0;
  std::string plan_digest;
};

/// The index-th instance of a config, reproducible in isolation.
BsgInstance make_ic_instance(const ExperimentConfig& config, int index);

/// Runs every enabled method on every generated instance, appending CSV rows
/// (header first) as instances finish, ordered by instance then method.
/// SOCIETY_BSG_THREADS caps the worker pool.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config,
                                             std::ostream& csv);

void write_csv(const std::vector<ExperimentRecord>& records, std::ostream& out);
std::vector<ExperimentRecord> read_csv(std::istream& in);

/// Scatter plot as a self-contained SVG; metrics: "cost", "wall_ms",
/// "instance". One color per method.
void plot_scatter(const std::vector<ExperimentRecord>& records,
                  const std::string& x_metric, const std::string& y_metric,
                  std::ostream& out);

}  // namespace bsg

#endif
