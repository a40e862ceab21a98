#ifndef BSG_BRIBERY_HPP
#define BSG_BRIBERY_HPP

#include "bsg/core.hpp"
#include "bsg/diffusion.hpp"

namespace bsg {

inline constexpr Weight kInfiniteCost = std::numeric_limits<Weight>::max();

/// Per-unit cost of turning a type-i voter into a type-j voter. c_ii = 0;
/// unreachable transformations are kInfiniteCost.
struct CostModel {
  int tau = 0;
  std::vector<Weight> c;  // dense tau x tau, row-major

  CostModel() = default;
  explicit CostModel(int tau_)
      : tau(tau_), c(static_cast<size_t>(tau_) * tau_, kInfiniteCost) {
    for (int i = 0; i < tau; ++i) at(i, i) = 0;
  }
  Weight& at(int i, int j) { return c[static_cast<size_t>(i) * tau + j]; }
  Weight at(int i, int j) const { return c[static_cast<size_t>(i) * tau + j]; }
};

/// beta_ij = voters moved from type i to type j (beta_ii = untouched).
struct BriberyPlan {
  int tau = 0;
  std::vector<Weight> beta;  // dense tau x tau, row-major

  BriberyPlan() = default;
  explicit BriberyPlan(int tau_)
      : tau(tau_), beta(static_cast<size_t>(tau_) * tau_, 0) {}
  static BriberyPlan identity(const Society& w);

  Weight& at(int i, int j) { return beta[static_cast<size_t>(i) * tau + j]; }
  Weight at(int i, int j) const { return beta[static_cast<size_t>(i) * tau + j]; }
};

enum class DiffusionMode { Sync, AsyncOptimistic, AsyncPessimistic, Generalized };

struct BsgInstance {
  SocietyGraph graph;
  VotingRule rule;
  int preferred = 0;  // p
  CostModel cost;
  std::optional<Weight> budget;
  DiffusionMode mode = DiffusionMode::Sync;
  std::optional<ProcessSpec> process;  // Generalized mode only

  void validate() const;
};

/// p moved up k positions; relative order of all other candidates unchanged.
PreferenceOrder shift_up(const PreferenceOrder& o, int p, int k);

/// c_ij = k when order_j = shift_up(order_i, p, k), else infinity.
CostModel shift_cost_matrix(const std::vector<VoterType>& types, int p);

/// New society x0_j = sum_i beta_ij and the plan's total cost.
std::pair<Society, Weight> apply_plan(const Society& s, const BriberyPlan& plan,
                                      const CostModel& cost);

}  // namespace bsg

#endif
