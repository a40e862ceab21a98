#ifndef BSG_HEURISTICS_HPP
#define BSG_HEURISTICS_HPP

#include <cstdint>
#include <functional>

#include "bsg/bribery.hpp"

namespace bsg {

/// a[i][j] = voters of type i whose preferred candidate is shifted up j
/// positions. Column 0 is unused; unshifted voters are the implicit
/// remainder of each row.
struct ShiftMatrix {
  int tau = 0;
  int m = 0;
  std::vector<Weight> a;  // dense tau x m, row-major

  ShiftMatrix() = default;
  ShiftMatrix(int tau_, int m_)
      : tau(tau_), m(m_), a(static_cast<size_t>(tau_) * m_, 0) {}

  Weight& at(int i, int j) { return a[static_cast<size_t>(i) * m + j]; }
  Weight at(int i, int j) const { return a[static_cast<size_t>(i) * m + j]; }

  Weight cost() const;
  /// Voters of type i not shifted at all.
  Weight unshifted(int i, const Society& w) const;
  void validate(const BsgInstance& inst) const;
  /// Expand into a full bribery plan over the instance's types.
  BriberyPlan to_bribery_plan(const BsgInstance& inst) const;
};

struct SaParams {
  long long iterations = 10000;
  double p0 = 0.2;
  std::uint64_t seed = 0;
};

/// Margin of victory of the preferred candidate after applying the shifts and
/// running synchronous diffusion to convergence. Scoring rules only.
Weight evaluate_plan(const BsgInstance& inst, const ShiftMatrix& plan);

std::pair<ShiftMatrix, bool> greedy_decision(const BsgInstance& inst, Weight b);

std::pair<ShiftMatrix, bool> sa_decision(const BsgInstance& inst, Weight b,
                                         const SaParams& params);

using Decider =
    std::function<std::pair<ShiftMatrix, bool>(const BsgInstance&, Weight)>;

Decider greedy_decider();
/// Per-probe seed is derived from (instance hash, budget, base seed).
Decider sa_decider(SaParams base);

struct BudgetSearchResult {
  Weight budget = 0;
  ShiftMatrix plan;
};

/// Doubling then bisection over the budget; returns the lattice-minimal
/// success. Throws SearchFailureError when nothing succeeds up to the cap
/// (default 2 n (m - 1)).
BudgetSearchResult budget_search(const Decider& decide, const BsgInstance& inst,
                                 std::optional<Weight> cap = std::nullopt);

std::uint64_t instance_hash(const BsgInstance& inst);

}  // namespace bsg

#endif
