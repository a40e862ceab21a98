#include "bsg/oracle.hpp"

#include <chrono>

namespace bsg {
namespace {

struct Cell {
  int type = 0;
  int shift = 0;   // per-unit cost
  int target = 0;  // type index after the shift
};

class Enumerator {
 public:
  Enumerator(const BsgInstance& inst, const OracleLimits& limits)
      : inst_(inst), limits_(limits), start_(std::chrono::steady_clock::now()) {
    const int tau = inst.graph.num_types();
    const int m = inst.graph.num_candidates();
    for (int i = 0; i < tau; ++i) {
      const int max_shift = inst.graph.types[i].order.rank_of(inst.preferred) - 1;
      for (int j = 1; j <= max_shift && j < m; ++j) {
        const PreferenceOrder shifted =
            shift_up(inst.graph.types[i].order, inst.preferred, j);
        for (int t = 0; t < tau; ++t)
          if (inst.graph.types[t].order == shifted) {
            cells_.push_back({i, j, t});
            break;
          }
      }
    }
    // Max spend still possible from cell c onward, for exact-cost pruning.
    suffix_.assign(cells_.size() + 1, 0);
    for (size_t c = cells_.size(); c-- > 0;)
      suffix_[c] = suffix_[c + 1] +
                   inst.graph.society[cells_[c].type] * cells_[c].shift;
  }

  OracleResult run() {
    OracleResult res;
    Weight ceiling = std::min(limits_.max_cost, suffix_.empty() ? 0 : suffix_[0]);
    if (inst_.budget) ceiling = std::min(ceiling, *inst_.budget);
    plan_ = ShiftMatrix(inst_.graph.num_types(), inst_.graph.num_candidates());
    row_used_.assign(inst_.graph.num_types(), 0);
    for (Weight level = 0; level <= ceiling; ++level) {
      if (dfs(0, level)) {
        res.status = OracleResult::Status::Found;
        res.cost = level;
        res.plan = plan_;
        res.frontier = level;
        return res;
      }
      if (out_of_time_) {
        res.status = OracleResult::Status::LimitReached;
        res.frontier = level - 1;
        return res;
      }
      res.frontier = level;
    }
    res.status = limits_.max_cost < suffix_[0] && (!inst_.budget || limits_.max_cost < *inst_.budget)
                     ? OracleResult::Status::LimitReached
                     : OracleResult::Status::Infeasible;
    return res;
  }

 private:
  bool succeeds() {
    SocietyGraph g = inst_.graph;
    for (int i = 0; i < plan_.tau; ++i) g.society[i] -= row_used_[i];
    for (const Cell& c : cells_) {
      const Weight v = plan_.at(c.type, c.shift);
      g.society[c.target] += v;
    }
    const DiffusionTrace trace = run_sync(g);
    return winners(inst_.rule, g.types, trace.final_state())
        .contains(inst_.preferred);
  }

  // Fill cells_[c..] spending exactly `remaining`; values ascending gives
  // lexicographic order within the cost level.
  bool dfs(size_t c, Weight remaining) {
    if ((++ticks_ & 0x3ff) == 0 && over_time()) {
      out_of_time_ = true;
      return false;
    }
    if (remaining > suffix_[c]) return false;
    if (c == cells_.size()) return succeeds();
    const Cell& cell = cells_[c];
    const Weight cap_by_row =
        inst_.graph.society[cell.type] - row_used_[cell.type];
    const Weight cap = std::min(cap_by_row, remaining / cell.shift);
    for (Weight v = 0; v <= cap; ++v) {
      plan_.at(cell.type, cell.shift) = v;
      row_used_[cell.type] += v;
      if (dfs(c + 1, remaining - v * cell.shift)) return true;
      row_used_[cell.type] -= v;
      plan_.at(cell.type, cell.shift) = 0;
      if (out_of_time_) return false;
    }
    return false;
  }

  bool over_time() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
               .count() > limits_.time_budget_ms;
  }

  const BsgInstance& inst_;
  const OracleLimits& limits_;
  std::chrono::steady_clock::time_point start_;
  std::vector<Cell> cells_;
  std::vector<Weight> suffix_;
  ShiftMatrix plan_;
  std::vector<Weight> row_used_;
  unsigned long long ticks_ = 0;
  bool out_of_time_ = false;
};

}  // namespace

OracleResult brute_force_optimal(const BsgInstance& inst,
                                 const OracleLimits& limits) {
  inst.validate();
  return Enumerator(inst, limits).run();
}

std::optional<bool> async_decide(const BsgInstance& inst, AsyncMode mode,
                                 const OracleLimits& limits) {
  inst.validate();
  const ExploreResult ex = explore_async(inst.graph, limits.max_states);
  bool any_win = false, any_loss = false;
  for (const Society& s : ex.converged) {
    if (winners(inst.rule, inst.graph.types, s).contains(inst.preferred))
      any_win = true;
    else
      any_loss = true;
  }
  if (mode == AsyncMode::Optimistic) {
    if (any_win) return true;  // a witness is sound even on a truncated search
    if (ex.complete) return false;
  } else {
    if (any_loss) return false;
    if (ex.complete) return true;
  }
  return std::nullopt;
}

}  // namespace bsg
