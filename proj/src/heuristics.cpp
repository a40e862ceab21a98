#include "bsg/heuristics.hpp"

#include "bsg/ilp.hpp"
#include "bsg/rng.hpp"

namespace bsg {

Weight ShiftMatrix::cost() const {
  Weight total = 0;
  for (int i = 0; i < tau; ++i)
    for (int j = 1; j < m; ++j) total += at(i, j) * j;
  return total;
}

Weight ShiftMatrix::unshifted(int i, const Society& w) const {
  Weight moved = 0;
  for (int j = 1; j < m; ++j) moved += at(i, j);
  return w[i] - moved;
}

void ShiftMatrix::validate(const BsgInstance& inst) const {
  if (tau != inst.graph.num_types() || m != inst.graph.num_candidates())
    throw DimensionError("shift matrix dimensions do not match instance");
  for (int i = 0; i < tau; ++i) {
    const int max_shift = inst.graph.types[i].order.rank_of(inst.preferred) - 1;
    if (at(i, 0) != 0)
      throw PlanError("column 0 of a shift matrix must stay zero");
    for (int j = 1; j < m; ++j) {
      if (at(i, j) < 0) throw PlanError("negative shift matrix entry");
      if (j > max_shift && at(i, j) != 0)
        throw PlanError("shift past the top of a ranking");
    }
    if (unshifted(i, inst.graph.society) < 0)
      throw PlanError("shift matrix row exceeds the type's weight");
  }
}

BriberyPlan ShiftMatrix::to_bribery_plan(const BsgInstance& inst) const {
  validate(inst);
  BriberyPlan plan(tau);
  for (int i = 0; i < tau; ++i) {
    plan.at(i, i) = unshifted(i, inst.graph.society);
    for (int j = 1; j < m; ++j) {
      if (at(i, j) == 0) continue;
      const PreferenceOrder target =
          shift_up(inst.graph.types[i].order, inst.preferred, j);
      plan.at(i, canonical_type_id(target)) += at(i, j);
    }
  }
  return plan;
}

Weight evaluate_plan(const BsgInstance& inst, const ShiftMatrix& plan) {
  if (!inst.rule.is_scoring())
    throw UnsupportedRuleError("heuristics require a scoring rule");
  if (!is_canonical_universe(inst.graph))
    throw PreconditionError(
        "heuristics need the canonical type universe; call "
        "canonicalize_instance first");
  plan.validate(inst);
  SocietyGraph g = inst.graph;
  g.society.assign(g.num_types(), 0);
  for (int i = 0; i < plan.tau; ++i) {
    g.society[i] += plan.unshifted(i, inst.graph.society);
    for (int j = 1; j < plan.m; ++j) {
      if (plan.at(i, j) == 0) continue;
      const PreferenceOrder target =
          shift_up(inst.graph.types[i].order, inst.preferred, j);
      g.society[canonical_type_id(target)] += plan.at(i, j);
    }
  }
  const DiffusionTrace trace = run_sync(g);
  return margin_of_victory(inst.rule, g.types, trace.final_state(),
                           inst.preferred);
}

std::pair<ShiftMatrix, bool> greedy_decision(const BsgInstance& inst, Weight b) {
  const int tau = inst.graph.num_types();
  const int m = inst.graph.num_candidates();
  ShiftMatrix plan(tau, m);
  Weight margin = evaluate_plan(inst, plan);
  for (Weight iter = 0; iter < b && margin < 0; ++iter) {
    Weight best_margin = 0;
    int best_i = -1, best_s = -1;
    for (int i = 0; i < tau; ++i) {
      const int max_shift =
          inst.graph.types[i].order.rank_of(inst.preferred) - 1;
      for (int s = 0; s + 1 <= max_shift; ++s) {
        const Weight avail =
            s == 0 ? plan.unshifted(i, inst.graph.society) : plan.at(i, s);
        if (avail <= 0) continue;
        if (s > 0) plan.at(i, s) -= 1;
        plan.at(i, s + 1) += 1;
        const Weight trial = evaluate_plan(inst, plan);
        if (s > 0) plan.at(i, s) += 1;
        plan.at(i, s + 1) -= 1;
        if (best_i < 0 || trial > best_margin) {
          best_margin = trial;
          best_i = i;
          best_s = s;
        }
      }
    }
    if (best_i < 0) break;  // no voter can move p further up
    if (best_s > 0) plan.at(best_i, best_s) -= 1;
    plan.at(best_i, best_s + 1) += 1;
    margin = best_margin;
  }
  return {std::move(plan), margin >= 0};
}

namespace {

bool flip(std::mt19937_64& gen, double prob) {
  constexpr std::uint64_t kScale = 1ull << 32;
  if (prob <= 0) return false;
  if (prob >= 1) return true;
  return uniform_below(gen, kScale) <
         static_cast<std::uint64_t>(prob * kScale);
}

}  // namespace

std::pair<ShiftMatrix, bool> sa_decision(const BsgInstance& inst, Weight b,
                                         const SaParams& params) {
  const int tau = inst.graph.num_types();
  const int m = inst.graph.num_candidates();
  ShiftMatrix plan(tau, m);
  Weight margin = evaluate_plan(inst, plan);
  if (margin >= 0 || b == 0) return {std::move(plan), margin >= 0};

  std::mt19937_64 gen(params.seed);
  auto max_shift = [&](int i) {
    return inst.graph.types[i].order.rank_of(inst.preferred) - 1;
  };

  // Random fills until the budget is spent; give up after a full window of
  // consecutive rejections so zero-weight or p-first rows cannot stall us.
  const long long reject_window = static_cast<long long>(tau) * m;
  long long rejects = 0;
  while (plan.cost() < b && rejects < reject_window) {
    const int i = static_cast<int>(uniform_below(gen, tau));
    const int j = 1 + static_cast<int>(uniform_below(gen, m - 1));
    const Weight avail = plan.unshifted(i, inst.graph.society);
    if (j > max_shift(i) || avail <= 0) {
      ++rejects;
      continue;
    }
    const Weight v = 1 + static_cast<Weight>(uniform_below(
                             gen, static_cast<std::uint64_t>(avail)));
    if (plan.cost() + v * j > b) {
      ++rejects;
      continue;
    }
    plan.at(i, j) += v;
    rejects = 0;
  }

  margin = evaluate_plan(inst, plan);
  ShiftMatrix best = plan;
  Weight best_margin = margin;

  double p1 = params.p0;
  for (long long it = 0; it < params.iterations; ++it, p1 -= params.p0 / params.iterations) {
    // Free one unit at (k, j1), spend it at (i, j2); cost-neutral.
    int k = -1, j1 = 0, i = -1, j2 = 0;
    for (int tries = 0; tries < 4 * tau * m; ++tries) {
      const int ck = static_cast<int>(uniform_below(gen, tau));
      const int cj = 1 + static_cast<int>(uniform_below(gen, m - 1));
      if (plan.at(ck, cj) > 0) {
        k = ck;
        j1 = cj;
        break;
      }
    }
    if (k < 0) break;  // nothing placed; no move exists
    plan.at(k, j1) -= 1;
    if (j1 > 1) plan.at(k, j1 - 1) += 1;
    for (int tries = 0; tries < 4 * tau * m; ++tries) {
      const int ci = static_cast<int>(uniform_below(gen, tau));
      const int cj = 1 + static_cast<int>(uniform_below(gen, m - 1));
      if (cj > max_shift(ci)) continue;
      const Weight from = cj == 1 ? plan.unshifted(ci, inst.graph.society)
                                  : plan.at(ci, cj - 1);
      if (from > 0) {
        i = ci;
        j2 = cj;
        break;
      }
    }
    if (i < 0) {  // undo the release and stop
      if (j1 > 1) plan.at(k, j1 - 1) -= 1;
      plan.at(k, j1) += 1;
      break;
    }
    if (j2 > 1) plan.at(i, j2 - 1) -= 1;
    plan.at(i, j2) += 1;

    const Weight trial = evaluate_plan(inst, plan);
    const bool accept = trial > margin ? flip(gen, 1 - p1) : flip(gen, p1);
    if (accept) {
      margin = trial;
      if (trial > best_margin) {
        best = plan;
        best_margin = trial;
      }
    } else {  // roll back
      if (j2 > 1) plan.at(i, j2 - 1) += 1;
      plan.at(i, j2) -= 1;
      if (j1 > 1) plan.at(k, j1 - 1) -= 1;
      plan.at(k, j1) += 1;
    }
  }
  return {std::move(best), best_margin >= 0};
}

std::uint64_t instance_hash(const BsgInstance& inst) {
  Fnv1a h;
  h.word(static_cast<std::uint64_t>(inst.graph.num_candidates()));
  h.word(static_cast<std::uint64_t>(inst.preferred));
  h.word(static_cast<std::uint64_t>(inst.rule.kind));
  for (Weight s : inst.rule.vector) h.word(static_cast<std::uint64_t>(s));
  for (const auto& t : inst.graph.types)
    for (int c : t.order.ranking) h.word(static_cast<std::uint64_t>(c));
  for (Weight w : inst.graph.society) h.word(static_cast<std::uint64_t>(w));
  return h.digest();
}

Decider greedy_decider() {
  return [](const BsgInstance& inst, Weight b) {
    return greedy_decision(inst, b);
  };
}

Decider sa_decider(SaParams base) {
  return [base](const BsgInstance& inst, Weight b) {
    SaParams p = base;
    p.seed = Fnv1a{}
                 .word(instance_hash(inst))
                 .word(static_cast<std::uint64_t>(b))
                 .word(base.seed)
                 .digest();
    return sa_decision(inst, b, p);
  };
}

BudgetSearchResult budget_search(const Decider& decide, const BsgInstance& inst,
                                 std::optional<Weight> cap) {
  const Weight limit = cap.value_or(
      2 * total_weight(inst.graph.society) * (inst.graph.num_candidates() - 1));
  ShiftMatrix empty(inst.graph.num_types(), inst.graph.num_candidates());
  if (evaluate_plan(inst, empty) >= 0) return {0, std::move(empty)};

  Weight hi = 1;
  auto [plan, ok] = decide(inst, hi);
  while (!ok) {
    if (hi >= limit)
      throw SearchFailureError("no success up to the budget cap");
    hi = std::min(hi * 2, limit);
    std::tie(plan, ok) = decide(inst, hi);
  }
  Weight lo = hi / 2;  // decider known to fail at lo (or lo == 0)
  while (lo + 1 < hi) {
    const Weight mid = lo + (hi - lo) / 2;
    auto [mid_plan, mid_ok] = decide(inst, mid);
    if (mid_ok) {
      hi = mid;
      plan = std::move(mid_plan);
    } else {
      lo = mid;
    }
  }
  return {hi, std::move(plan)};
}

}  // namespace bsg
