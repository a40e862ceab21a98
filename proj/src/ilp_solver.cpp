#include <algorithm>
#include <chrono>

#include "bsg/ilp.hpp"

namespace bsg {
namespace {

// Solver-internal row form: sum of terms <= rhs.
struct Row {
  std::vector<std::pair<Weight, int>> terms;
  Weight rhs = 0;
};

Weight floor_div(Weight a, Weight b) {  // b > 0
  Weight q = a / b;
  return a % b < 0 ? q - 1 : q;
}

Weight ceil_div(Weight a, Weight b) {  // b > 0
  Weight q = a / b;
  return a % b > 0 ? q + 1 : q;
}

class Search {
 public:
  Search(const IlpModel& model, const SolveParams& params)
      : model_(model), params_(params) {
    for (const auto& c : model.cons) {
      if (c.sense != Sense::Ge) push_row(c.expr, c.rhs, false);
      if (c.sense != Sense::Le) push_row(c.expr, c.rhs, true);
    }
    lb0_.reserve(model.vars.size());
    ub0_.reserve(model.vars.size());
    for (const auto& v : model.vars) {
      lb0_.push_back(v.lb);
      ub0_.push_back(v.ub);
    }
    std::vector<bool> seen(model.vars.size(), false);
    for (int v : model.branch_priority)
      if (!seen[v]) {
        seen[v] = true;
        order_.push_back(v);
      }
    for (size_t v = 0; v < model.vars.size(); ++v)
      if (!seen[v]) order_.push_back(static_cast<int>(v));
  }

  SolveResult run() {
    const auto start = std::chrono::steady_clock::now();
    SolveResult res;
    if (params_.strategy == SolveParams::Strategy::IncumbentDfs ||
        model_.objective.terms.empty()) {
      run_incumbent(res);
    } else {
      run_deepening(res);
    }
    res.nodes = nodes_;
    res.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    if (res.status == SolveResult::Status::Optimal) {
      if (model_.first_violated(res.assignment) != -1)
        throw VerificationError("solver returned an infeasible assignment");
      res.objective = model_.eval(model_.objective, res.assignment);
    }
    return res;
  }

 private:
  void push_row(const LinExpr& e, Weight rhs, bool flip) {
    Row r;
    for (auto [c, v] : e.terms) r.terms.emplace_back(flip ? -c : c, v);
    r.rhs = flip ? -rhs : rhs;
    rows_.push_back(std::move(r));
  }

  // Appends "objective <= cap" as a removable extra row.
  void set_cap(Weight cap) {
    if (!has_cap_) {
      push_row(model_.objective, cap, false);
      has_cap_ = true;
    } else {
      rows_.back().rhs = cap;
    }
  }

  void run_deepening(SolveResult& res) {
    // One uncapped pass settles feasibility and supplies an upper bound.
    std::vector<Weight> lb = lb0_, ub = ub0_;
    std::vector<Weight> best;
    if (!dfs(lb, ub, best)) {
      res.status = limit_hit_ ? SolveResult::Status::SearchLimit
                              : SolveResult::Status::Infeasible;
      return;
    }
    Weight upper = model_.eval(model_.objective, best);
    Weight lower = 0;
    for (auto [c, v] : model_.objective.terms)
      lower += c > 0 ? c * lb0_[v] : c * ub0_[v];
    // Bisect on the cap: infeasible below the optimum, feasible at it.
    while (lower < upper) {
      const Weight cap = lower + (upper - lower) / 2;
      set_cap(cap);
      lb = lb0_;
      ub = ub0_;
      std::vector<Weight> sol;
      if (dfs(lb, ub, sol)) {
        best = std::move(sol);
        upper = model_.eval(model_.objective, best);
      } else if (limit_hit_) {
        res.status = SolveResult::Status::SearchLimit;
        return;
      } else {
        lower = cap + 1;
      }
    }
    res.status = SolveResult::Status::Optimal;
    res.assignment = std::move(best);
  }

  void run_incumbent(SolveResult& res) {
    std::vector<Weight> lb = lb0_, ub = ub0_;
    dfs_all(lb, ub, res);
    if (res.assignment.empty())
      res.status = limit_hit_ ? SolveResult::Status::SearchLimit
                              : SolveResult::Status::Infeasible;
    else
      res.status = limit_hit_ ? SolveResult::Status::SearchLimit
                              : SolveResult::Status::Optimal;
  }

  bool propagate(std::vector<Weight>& lb, std::vector<Weight>& ub) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Row& row : rows_) {
        Weight min_act = 0;
        for (auto [c, v] : row.terms) min_act += c > 0 ? c * lb[v] : c * ub[v];
        if (min_act > row.rhs) return false;
        for (auto [c, v] : row.terms) {
          const Weight others =
              min_act - (c > 0 ? c * lb[v] : c * ub[v]);
          const Weight slack = row.rhs - others;  // c * v <= slack
          if (c > 0) {
            const Weight nb = floor_div(slack, c);
            if (nb < ub[v]) {
              if (nb < lb[v]) return false;
              ub[v] = nb;
              changed = true;
            }
          } else {
            const Weight nb = ceil_div(-slack, -c);
            if (nb > lb[v]) {
              if (nb > ub[v]) return false;
              lb[v] = nb;
              changed = true;
            }
          }
        }
      }
    }
    return true;
  }

  int pick_var(const std::vector<Weight>& lb,
               const std::vector<Weight>& ub) const {
    for (int v : order_)
      if (lb[v] < ub[v]) return v;
    return -1;
  }

  bool tick() {
    if (limit_hit_) return false;
    if (++nodes_ > params_.node_limit) {
      limit_hit_ = true;
      return false;
    }
    return true;
  }

  // Finds one feasible completion; true on success.
  bool dfs(std::vector<Weight>& lb, std::vector<Weight>& ub,
           std::vector<Weight>& out) {
    if (!tick()) return false;
    if (!propagate(lb, ub)) return false;
    const int v = pick_var(lb, ub);
    if (v < 0) {
      out = lb;
      return true;
    }
    if (ub[v] - lb[v] <= 15) {
      for (Weight val = lb[v]; val <= ub[v]; ++val) {
        auto clb = lb, cub = ub;
        clb[v] = cub[v] = val;
        if (dfs(clb, cub, out)) return true;
        if (limit_hit_) return false;
      }
    } else {
      const Weight mid = lb[v] + (ub[v] - lb[v]) / 2;
      {
        auto clb = lb, cub = ub;
        cub[v] = mid;
        if (dfs(clb, cub, out)) return true;
        if (limit_hit_) return false;
      }
      {
        auto clb = lb, cub = ub;
        clb[v] = mid + 1;
        if (dfs(clb, cub, out)) return true;
      }
    }
    return false;
  }

  // Exhaustive search that keeps tightening the objective cap.
  void dfs_all(std::vector<Weight>& lb, std::vector<Weight>& ub,
               SolveResult& res) {
    if (!tick()) return;
    if (!propagate(lb, ub)) return;
    const int v = pick_var(lb, ub);
    if (v < 0) {
      const Weight obj = model_.eval(model_.objective, lb);
      if (res.assignment.empty() || obj < res.objective) {
        res.assignment = lb;
        res.objective = obj;
        if (!model_.objective.terms.empty()) set_cap(obj - 1);
      }
      return;
    }
    if (ub[v] - lb[v] <= 15) {
      for (Weight val = lb[v]; val <= ub[v] && !limit_hit_; ++val) {
        auto clb = lb, cub = ub;
        clb[v] = cub[v] = val;
        dfs_all(clb, cub, res);
      }
    } else {
      const Weight mid = lb[v] + (ub[v] - lb[v]) / 2;
      {
        auto clb = lb, cub = ub;
        cub[v] = mid;
        dfs_all(clb, cub, res);
      }
      if (!limit_hit_) {
        auto clb = lb, cub = ub;
        clb[v] = mid + 1;
        dfs_all(clb, cub, res);
      }
    }
  }

  const IlpModel& model_;
  SolveParams params_;
  std::vector<Row> rows_;
  std::vector<Weight> lb0_, ub0_;
  std::vector<int> order_;
  unsigned long long nodes_ = 0;
  bool has_cap_ = false;
  bool limit_hit_ = false;
};

}  // namespace

SolveResult solve(const IlpModel& model, const SolveParams& params) {
  for (const auto& v : model.vars)
    if (v.lb > v.ub) {
      SolveResult res;
      res.status = SolveResult::Status::Infeasible;
      return res;
    }
  return Search(model, params).run();
}

}  // namespace bsg
