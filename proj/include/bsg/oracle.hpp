#ifndef BSG_ORACLE_HPP
#define BSG_ORACLE_HPP

#include "bsg/heuristics.hpp"

namespace bsg {

struct OracleLimits {
  Weight max_cost = std::numeric_limits<Weight>::max();
  std::size_t max_states = 1'000'000;
  double time_budget_ms = 300'000;
};

struct OracleResult {
  enum class Status { Found, Infeasible, LimitReached };
  Status status = Status::Infeasible;
  Weight cost = 0;
  ShiftMatrix plan;
  Weight frontier = 0;  // highest cost level fully enumerated
};

/// Exhaustive minimum-cost search: shift plans in non-decreasing cost order
/// (lexicographic within a level), each simulated through synchronous
/// diffusion. The first success is a true optimum.
OracleResult brute_force_optimal(const BsgInstance& inst,
                                 const OracleLimits& limits = {});

enum class AsyncMode { Optimistic, Pessimistic };

/// Does p win for some (optimistic) / every (pessimistic) convergent
/// asynchronous order, without bribery? nullopt when the state budget ran out
/// before the answer was forced.
std::optional<bool> async_decide(const BsgInstance& inst, AsyncMode mode,
                                 const OracleLimits& limits = {});

}  // namespace bsg

#endif
