#ifndef BSG_ILP_HPP
#define BSG_ILP_HPP

#include <iosfwd>
#include <map>
#include <tuple>

#include "bsg/bribery.hpp"
#include "bsg/core.hpp"

namespace bsg {

enum class Sense { Le, Ge, Eq };

struct IlpVariable {
  std::string name;
  Weight lb = 0;
  Weight ub = 0;
};

struct LinExpr {
  std::vector<std::pair<Weight, int>> terms;  // (coefficient, variable index)

  LinExpr& add(Weight coeff, int var) {
    if (coeff != 0) terms.emplace_back(coeff, var);
    return *this;
  }
};

struct IlpConstraint {
  LinExpr expr;
  Sense sense = Sense::Le;
  Weight rhs = 0;
};

/// Bounded pure-integer linear program, minimization sense. Every variable
/// must carry finite bounds.
struct IlpModel {
  std::vector<IlpVariable> vars;
  std::vector<IlpConstraint> cons;
  LinExpr objective;
  std::vector<int> branch_priority;  // branch these first, in order

  int add_var(std::string name, Weight lb, Weight ub);
  void add_con(LinExpr expr, Sense sense, Weight rhs);

  bool is_binary(int v) const { return vars[v].lb >= 0 && vars[v].ub <= 1; }
  Weight eval(const LinExpr& e, const std::vector<Weight>& a) const;
  bool satisfied(const IlpConstraint& c, const std::vector<Weight>& a) const;
  /// Index of the first violated constraint, or -1 when feasible.
  int first_violated(const std::vector<Weight>& a) const;
};

struct SolveResult {
  enum class Status { Optimal, Infeasible, SearchLimit };
  Status status = Status::Infeasible;
  Weight objective = 0;
  std::vector<Weight> assignment;
  unsigned long long nodes = 0;
  double wall_ms = 0;
};

struct SolveParams {
  unsigned long long node_limit = 200'000'000ull;
  /// Objective deepening solves a sequence of feasibility problems with the
  /// objective capped at successive values; incumbent mode is one DFS that
  /// tightens the cap whenever a better solution is found.
  enum class Strategy { ObjectiveDeepening, IncumbentDfs };
  Strategy strategy = Strategy::ObjectiveDeepening;
};

/// Depth-first branch and bound with integer bound propagation. Exact: the
/// returned optimum is re-verified against every constraint.
SolveResult solve(const IlpModel& model, const SolveParams& params = {});

/// Winner constraints for the final-layer society variables xk. For STV this
/// enumerates elimination orders ending in p (m <= 4) behind selector
/// binaries; returns the selector variable indices.
std::vector<int> add_rule_constraints(IlpModel& model, const VotingRule& rule,
                                      const std::vector<int>& xk,
                                      const std::vector<VoterType>& types,
                                      int p, Weight n);

/// Layered encoding of synchronous bribery followed by diffusion.
struct BsgModel {
  IlpModel ilp;
  int tau = 0;
  int k = 0;
  Weight n = 0;
  std::vector<std::vector<int>> x;     // x[l][i], l = 0..k
  std::vector<std::vector<int>> beta;  // beta[i][j]
  std::map<std::tuple<int, int, int>, int> z;     // (i, j, l)
  std::map<std::tuple<int, int, int>, int> t;     // (i, j, l)
  std::map<std::tuple<int, int, int>, int> zhat;  // async only
  std::vector<std::vector<int>> y;     // async only: y[l][i]
  std::vector<int> rule_selectors;

  BriberyPlan decode_plan(const std::vector<Weight>& assignment) const;
  std::vector<Society> decode_layers(const std::vector<Weight>& assignment) const;
};

/// Requires the canonical type universe (see canonicalize_instance).
/// k_override < m! trades correctness guarantees for size; callers must
/// opt in explicitly.
BsgModel build_sync_bsg_model(const BsgInstance& inst,
                              std::optional<int> k_override = std::nullopt);

BsgModel build_async_optimistic_model(const BsgInstance& inst,
                                      std::optional<int> k_override = std::nullopt);

/// Rewrites the instance over all m! canonical types (weights mapped by
/// order, swap-1 arcs, shift costs recomputed for the preferred candidate).
BsgInstance canonicalize_instance(const BsgInstance& inst);

/// True when the graph already is the canonical swap-1 universe.
bool is_canonical_universe(const SocietyGraph& g);

void export_lp(const IlpModel& model, std::ostream& out);
SolveResult import_solution(const IlpModel& model, std::istream& in);

}  // namespace bsg

#endif
