#include "bsg/bribery.hpp"

#include <algorithm>

namespace bsg {

BriberyPlan BriberyPlan::identity(const Society& w) {
  BriberyPlan plan(static_cast<int>(w.size()));
  for (int i = 0; i < plan.tau; ++i) plan.at(i, i) = w[i];
  return plan;
}

void BsgInstance::validate() const {
  const int m = graph.num_candidates();
  if (preferred < 0 || preferred >= m)
    throw ReferenceError("preferred candidate out of range");
  if (budget && *budget < 0) throw SpecError("negative budget");
  if (cost.tau != graph.num_types())
    throw DimensionError("cost matrix dimensions do not match type count");
  if (mode == DiffusionMode::Generalized && !process)
    throw SpecError("generalized mode requires a process spec");
}

PreferenceOrder shift_up(const PreferenceOrder& o, int p, int k) {
  const int pos = o.rank_of(p) - 1;  // 0-based
  if (k < 0 || k > pos) throw PlanError("shift amount out of range");
  std::vector<int> r = o.ranking;
  std::rotate(r.begin() + (pos - k), r.begin() + pos, r.begin() + pos + 1);
  return PreferenceOrder(std::move(r));
}

CostModel shift_cost_matrix(const std::vector<VoterType>& types, int p) {
  const int tau = static_cast<int>(types.size());
  CostModel cost(tau);
  for (int i = 0; i < tau; ++i) {
    const int max_shift = types[i].order.rank_of(p) - 1;
    for (int k = 1; k <= max_shift; ++k) {
      PreferenceOrder shifted = shift_up(types[i].order, p, k);
      for (int j = 0; j < tau; ++j)
        if (types[j].order == shifted) cost.at(i, j) = k;
    }
  }
  return cost;
}

std::pair<Society, Weight> apply_plan(const Society& s, const BriberyPlan& plan,
                                      const CostModel& cost) {
  const int tau = static_cast<int>(s.size());
  if (plan.tau != tau || cost.tau != tau)
    throw DimensionError("plan/cost dimensions do not match society");
  Society out(tau, 0);
  Weight total_cost = 0;
  for (int i = 0; i < tau; ++i) {
    Weight row = 0;
    for (int j = 0; j < tau; ++j) {
      const Weight b = plan.at(i, j);
      if (b < 0) throw PlanError("negative plan entry");
      if (b == 0) continue;
      if (cost.at(i, j) == kInfiniteCost)
        throw InfeasibleActionError("plan uses an infinite-cost action");
      row += b;
      out[j] += b;
      total_cost += cost.at(i, j) * b;
    }
    if (row != s[i])
      throw ConservationError("plan row sum does not match society weight");
  }
  return {std::move(out), total_cost};
}

}  // namespace bsg
