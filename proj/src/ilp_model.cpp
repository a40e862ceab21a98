#include <algorithm>
#include <map>

#include "bsg/ilp.hpp"

namespace bsg {

int IlpModel::add_var(std::string name, Weight lb, Weight ub) {
  if (lb > ub) throw SpecError("variable with empty domain: " + name);
  vars.push_back({std::move(name), lb, ub});
  return static_cast<int>(vars.size()) - 1;
}

void IlpModel::add_con(LinExpr expr, Sense sense, Weight rhs) {
  cons.push_back({std::move(expr), sense, rhs});
}

Weight IlpModel::eval(const LinExpr& e, const std::vector<Weight>& a) const {
  Weight v = 0;
  for (auto [c, i] : e.terms) v += c * a[i];
  return v;
}

bool IlpModel::satisfied(const IlpConstraint& c, const std::vector<Weight>& a) const {
  const Weight v = eval(c.expr, a);
  switch (c.sense) {
    case Sense::Le: return v <= c.rhs;
    case Sense::Ge: return v >= c.rhs;
    case Sense::Eq: return v == c.rhs;
  }
  return false;
}

int IlpModel::first_violated(const std::vector<Weight>& a) const {
  for (size_t i = 0; i < vars.size(); ++i)
    if (a[i] < vars[i].lb || a[i] > vars[i].ub) return static_cast<int>(i);
  for (size_t i = 0; i < cons.size(); ++i)
    if (!satisfied(cons[i], a)) return static_cast<int>(i);
  return -1;
}

namespace {

// Accumulates coefficients so repeated variables merge into one term.
class ExprBuilder {
 public:
  void add(Weight c, int v) { coeffs_[v] += c; }
  LinExpr build() const {
    LinExpr e;
    for (auto [v, c] : coeffs_) e.add(c, v);
    return e;
  }

 private:
  std::map<int, Weight> coeffs_;
};

std::vector<std::vector<int>> open_neighbors(const SocietyGraph& g) {
  std::vector<std::vector<int>> nbrs(g.num_types());
  for (const Arc& a : g.arcs) {
    nbrs[a.to].push_back(a.from);
    if (!g.directed) nbrs[a.from].push_back(a.to);
  }
  for (auto& v : nbrs) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return nbrs;
}

}  // namespace

bool is_canonical_universe(const SocietyGraph& g) {
  const int m = g.num_candidates();
  if (m < 1 || m > 8) return false;
  long long fact = 1;
  for (int i = 2; i <= m; ++i) fact *= i;
  if (g.num_types() != fact || g.directed) return false;
  for (int i = 0; i < g.num_types(); ++i) {
    const auto& t = g.types[i];
    if (t.id != i || !t.attributes.empty() || canonical_type_id(t.order) != i)
      return false;
  }
  int swap1_arcs = 0;
  for (const Arc& a : g.arcs) {
    if (a.weight != Rational(1) ||
        swap_distance(g.types[a.from].order, g.types[a.to].order) != 1)
      return false;
    ++swap1_arcs;
  }
  // Permutohedron edge count: m! * (m-1) / 2.
  return swap1_arcs == fact * (m - 1) / 2;
}

BsgInstance canonicalize_instance(const BsgInstance& inst) {
  const int m = inst.graph.num_candidates();
  for (const auto& t : inst.graph.types)
    if (!t.attributes.empty())
      throw UnsupportedRuleError(
          "ILP encoding supports order-only voter types");
  auto orders = enumerate_orders(m);
  Society weights(orders.size(), 0);
  for (int i = 0; i < inst.graph.num_types(); ++i)
    weights[canonical_type_id(inst.graph.types[i].order)] +=
        inst.graph.society[i];
  BsgInstance out = inst;
  out.graph = make_canonical_graph(m, weights);
  out.cost = shift_cost_matrix(out.graph.types, inst.preferred);
  return out;
}

std::vector<int> add_rule_constraints(IlpModel& model, const VotingRule& rule,
                                      const std::vector<int>& xk,
                                      const std::vector<VoterType>& types,
                                      int p, Weight n) {
  const int m = types.front().order.num_candidates();
  if (rule.is_scoring()) {
    const auto s = rule.scoring_vector(m);
    for (int c = 0; c < m; ++c) {
      if (c == p) continue;
      ExprBuilder e;
      for (size_t j = 0; j < types.size(); ++j) {
        const auto& o = types[j].order;
        e.add(s[o.rank_of(c) - 1] - s[o.rank_of(p) - 1], static_cast<int>(j));
      }
      model.add_con(e.build(), Sense::Le, 0);
    }
    // Re-map onto the final-layer variables.
    auto& last = model.cons;
    for (size_t ci = last.size() - (m - 1); ci < last.size(); ++ci)
      for (auto& [coeff, var] : last[ci].expr.terms) var = xk[var];
    return {};
  }

  // STV: one selector per elimination order ending in p; the order's
  // inequality block is big-M-gated by its selector.
  if (m > 4) throw SizeLimitError("STV encoding requires m <= 4");
  const Weight M = 4 * n + 4;

  // F(c | eliminated): x-vars of types ranking c first among the remaining.
  auto first_expr = [&](int c, const std::vector<bool>& eliminated) {
    ExprBuilder e;
    for (size_t j = 0; j < types.size(); ++j) {
      for (int cand : types[j].order.ranking) {
        if (eliminated[cand]) continue;
        if (cand == c) e.add(1, xk[j]);
        break;
      }
    }
    return e;
  };

  std::vector<int> selectors;
  std::vector<int> others;
  for (int c = 0; c < m; ++c)
    if (c != p) others.push_back(c);

  // All ordered sequences of eliminated candidates (subsets of C \ {p}).
  std::vector<std::vector<int>> sequences = {{}};
  for (size_t qi = 0; qi < sequences.size(); ++qi) {
    auto seq = sequences[qi];
    for (int c : others)
      if (std::find(seq.begin(), seq.end(), c) == seq.end()) {
        auto ext = seq;
        ext.push_back(c);
        sequences.push_back(std::move(ext));
      }
  }

  for (const auto& elim_seq : sequences) {
    const int sel =
        model.add_var("s_" + std::to_string(selectors.size()), 0, 1);
    selectors.push_back(sel);
    auto gate = [&](ExprBuilder e, Weight rhs) {
      e.add(M, sel);
      model.add_con(e.build(), Sense::Le, rhs + M);
    };

    std::vector<bool> eliminated(m, false);
    for (size_t round = 0; round < elim_seq.size(); ++round) {
      const int out = elim_seq[round];
      for (int c = 0; c < m; ++c) {
        if (eliminated[c]) continue;
        // No candidate may hold a strict majority before the final round.
        ExprBuilder maj = first_expr(c, eliminated);
        ExprBuilder twice;
        for (auto [coeff, var] : maj.build().terms) twice.add(2 * coeff, var);
        gate(std::move(twice), n);
        if (c == out) continue;
        // The eliminated candidate has the lowest plurality score; ties go
        // to the lower index.
        ExprBuilder diff = first_expr(out, eliminated);
        for (auto [coeff, var] : first_expr(c, eliminated).build().terms)
          diff.add(-coeff, var);
        gate(std::move(diff), c < out ? -1 : 0);
      }
      eliminated[out] = true;
    }
    // p reaches a strict majority in the final round.
    ExprBuilder fin;
    for (auto [coeff, var] : first_expr(p, eliminated).build().terms)
      fin.add(-2 * coeff, var);
    gate(std::move(fin), -(n + 1));
  }

  LinExpr one;
  for (int s : selectors) one.add(1, s);
  model.add_con(std::move(one), Sense::Eq, 1);
  return selectors;
}

namespace {

struct ModelSkeleton {
  std::vector<std::vector<int>> nbrs;
  Weight n = 0;
  int tau = 0;
};

ModelSkeleton start_bsg_model(const BsgInstance& inst, BsgModel& bm) {
  inst.validate();
  if (!is_canonical_universe(inst.graph))
    throw PreconditionError(
        "BSG model needs the canonical type universe; call "
        "canonicalize_instance first");
  ModelSkeleton sk;
  sk.nbrs = open_neighbors(inst.graph);
  sk.tau = inst.graph.num_types();
  sk.n = total_weight(inst.graph.society);
  bm.tau = sk.tau;
  bm.n = sk.n;

  for (int i = 0; i < sk.tau; ++i)
    if (inst.cost.at(i, i) != 0)
      throw SpecError("cost matrix diagonal must be zero");

  // Bribery variables and the post-bribery society x^0.
  bm.x.assign(bm.k + 1, std::vector<int>(sk.tau));
  for (int i = 0; i < sk.tau; ++i)
    bm.x[0][i] =
        bm.ilp.add_var("x_" + std::to_string(i) + "_0", 0, sk.n);
  bm.beta.assign(sk.tau, std::vector<int>(sk.tau));
  for (int i = 0; i < sk.tau; ++i)
    for (int j = 0; j < sk.tau; ++j) {
      const Weight ub =
          inst.cost.at(i, j) == kInfiniteCost ? 0 : inst.graph.society[i];
      bm.beta[i][j] = bm.ilp.add_var(
          "b_" + std::to_string(i) + "_" + std::to_string(j), 0, ub);
    }

  for (int i = 0; i < sk.tau; ++i) {
    LinExpr row;
    for (int j = 0; j < sk.tau; ++j) row.add(1, bm.beta[i][j]);
    bm.ilp.add_con(std::move(row), Sense::Eq, inst.graph.society[i]);  // (1)
  }
  for (int j = 0; j < sk.tau; ++j) {
    LinExpr col;
    for (int i = 0; i < sk.tau; ++i) col.add(1, bm.beta[i][j]);
    col.add(-1, bm.x[0][j]);
    bm.ilp.add_con(std::move(col), Sense::Eq, 0);  // (2)
  }

  for (int i = 0; i < sk.tau; ++i)
    for (int j = 0; j < sk.tau; ++j) {
      const Weight c = inst.cost.at(i, j);
      if (i != j && c != kInfiniteCost && c > 0)
        bm.ilp.objective.add(c, bm.beta[i][j]);
    }
  if (inst.budget) {
    LinExpr cap = bm.ilp.objective;
    bm.ilp.add_con(std::move(cap), Sense::Le, *inst.budget);
  }

  // Branch on the off-diagonal bribery variables first.
  for (int i = 0; i < sk.tau; ++i)
    for (int j = 0; j < sk.tau; ++j)
      if (i != j && bm.ilp.vars[bm.beta[i][j]].ub > 0)
        bm.ilp.branch_priority.push_back(bm.beta[i][j]);
  return sk;
}

// Indicator pair for "z = 1 iff 2 x_j > sum over N[i] of x_a", with both
// sides doubled so all coefficients stay integral.
void add_majority_indicator(IlpModel& ilp, const std::vector<int>& x_prev,
                            const std::vector<int>& nbrs_i, int i, int j,
                            int z, Weight M) {
  ExprBuilder lhs;
  lhs.add(2, x_prev[j]);
  lhs.add(-1, x_prev[i]);
  for (int a : nbrs_i) lhs.add(-1, x_prev[a]);
  {
    ExprBuilder e = lhs;
    e.add(-M, z);
    ilp.add_con(e.build(), Sense::Ge, 1 - M);  // z = 1 forces the majority
  }
  {
    ExprBuilder e = lhs;
    e.add(-M, z);
    ilp.add_con(e.build(), Sense::Le, 0);  // majority forces z = 1
  }
}

// t = z * x, for binary z and 0 <= x <= n.
void add_product(IlpModel& ilp, int t, int z, int x, Weight n) {
  ilp.add_con(LinExpr{}.add(1, t).add(-n, z), Sense::Le, 0);
  ilp.add_con(LinExpr{}.add(1, t).add(-1, x), Sense::Le, 0);
  ilp.add_con(LinExpr{}.add(1, t).add(-1, x).add(-n, z), Sense::Ge, -n);
}

}  // namespace

BsgModel build_sync_bsg_model(const BsgInstance& inst,
                              std::optional<int> k_override) {
  if (inst.mode != DiffusionMode::Sync)
    throw SpecError("instance diffusion mode is not sync");
  if (!inst.rule.is_scoring() && inst.rule.kind != VotingRule::Kind::Stv)
    throw UnsupportedRuleError("rule is not ILP-expressible in this build");
  BsgModel bm;
  bm.k = k_override.value_or(inst.graph.num_types());
  if (bm.k < 1 || bm.k > inst.graph.num_types())
    throw SpecError("layer count must be in [1, tau]");
  ModelSkeleton sk = start_bsg_model(inst, bm);
  const Weight M = 2 * sk.n + 1;

  for (int l = 1; l <= bm.k; ++l) {
    const std::string ls = std::to_string(l);
    for (int i = 0; i < sk.tau; ++i)
      bm.x[l][i] = bm.ilp.add_var("x_" + std::to_string(i) + "_" + ls, 0, sk.n);
    for (int i = 0; i < sk.tau; ++i) {
      const std::string is = std::to_string(i);
      LinExpr exactly_one;
      for (int j : sk.nbrs[i]) {
        int z = bm.ilp.add_var("z_" + is + "_" + std::to_string(j) + "_" + ls,
                               0, 1);
        bm.z[{i, j, l}] = z;
        add_majority_indicator(bm.ilp, bm.x[l - 1], sk.nbrs[i], i, j, z, M);  // (3)
        exactly_one.add(1, z);
      }
      int zii = bm.ilp.add_var("z_" + is + "_" + is + "_" + ls, 0, 1);
      bm.z[{i, i, l}] = zii;
      exactly_one.add(1, zii);
      bm.ilp.add_con(std::move(exactly_one), Sense::Eq, 1);  // (4)
    }
    for (int i = 0; i < sk.tau; ++i) {
      const std::string is = std::to_string(i);
      auto make_t = [&](int j) {
        int t = bm.ilp.add_var("t_" + is + "_" + std::to_string(j) + "_" + ls,
                               0, sk.n);
        bm.t[{i, j, l}] = t;
        add_product(bm.ilp, t, bm.z[{i, j, l}], bm.x[l - 1][i], sk.n);  // (5)
        return t;
      };
      for (int j : sk.nbrs[i]) make_t(j);
      make_t(i);
    }
    for (int j = 0; j < sk.tau; ++j) {
      LinExpr inflow;
      inflow.add(-1, bm.x[l][j]);
      inflow.add(1, bm.t[{j, j, l}]);
      for (int i : sk.nbrs[j]) inflow.add(1, bm.t[{i, j, l}]);
      bm.ilp.add_con(std::move(inflow), Sense::Eq, 0);  // (6)
    }
  }

  bm.rule_selectors = add_rule_constraints(bm.ilp, inst.rule, bm.x[bm.k],
                                           inst.graph.types, inst.preferred,
                                           sk.n);  // (7)
  for (int s : bm.rule_selectors) bm.ilp.branch_priority.push_back(s);
  return bm;
}

BsgModel build_async_optimistic_model(const BsgInstance& inst,
                                      std::optional<int> k_override) {
  if (inst.mode != DiffusionMode::AsyncOptimistic)
    throw SpecError("instance diffusion mode is not async-optimistic");
  if (!inst.rule.is_scoring() && inst.rule.kind != VotingRule::Kind::Stv)
    throw UnsupportedRuleError("rule is not ILP-expressible in this build");
  BsgModel bm;
  bm.k = k_override.value_or(inst.graph.num_types());
  if (bm.k < 1 || bm.k > inst.graph.num_types())
    throw SpecError("layer count must be in [1, tau]");
  ModelSkeleton sk = start_bsg_model(inst, bm);
  const Weight M = 2 * sk.n + 1;

  bm.y.assign(bm.k + 1, {});
  for (int l = 1; l <= bm.k; ++l) {
    const std::string ls = std::to_string(l);
    for (int i = 0; i < sk.tau; ++i)
      bm.x[l][i] = bm.ilp.add_var("x_" + std::to_string(i) + "_" + ls, 0, sk.n);

    bm.y[l].resize(sk.tau);
    LinExpr one_update;
    for (int i = 0; i < sk.tau; ++i) {
      bm.y[l][i] = bm.ilp.add_var("y_" + std::to_string(i) + "_" + ls, 0, 1);
      one_update.add(1, bm.y[l][i]);
      bm.ilp.branch_priority.push_back(bm.y[l][i]);
    }
    bm.ilp.add_con(std::move(one_update), Sense::Eq, 1);

    for (int i = 0; i < sk.tau; ++i) {
      const std::string is = std::to_string(i);
      LinExpr departures;
      for (int j : sk.nbrs[i]) {
        const std::string js = std::to_string(j);
        int z = bm.ilp.add_var("z_" + is + "_" + js + "_" + ls, 0, 1);
        bm.z[{i, j, l}] = z;
        add_majority_indicator(bm.ilp, bm.x[l - 1], sk.nbrs[i], i, j, z, M);
        int zh = bm.ilp.add_var("zh_" + is + "_" + js + "_" + ls, 0, 1);
        bm.zhat[{i, j, l}] = zh;
        bm.ilp.branch_priority.push_back(zh);
        bm.ilp.add_con(LinExpr{}.add(1, zh).add(-1, z), Sense::Le, 0);
        bm.ilp.add_con(LinExpr{}.add(1, zh).add(-1, bm.y[l][i]), Sense::Le, 0);
        departures.add(1, zh);

        int t = bm.ilp.add_var("t_" + is + "_" + js + "_" + ls, 0, sk.n);
        bm.t[{i, j, l}] = t;
        add_product(bm.ilp, t, zh, bm.x[l - 1][i], sk.n);
      }
      bm.ilp.add_con(LinExpr{departures}, Sense::Le, 1);

      // Own weight stays unless some departure fires: t_ii = (1 - sum zh) x_i.
      int tii = bm.ilp.add_var("t_" + is + "_" + is + "_" + ls, 0, sk.n);
      bm.t[{i, i, l}] = tii;
      bm.ilp.add_con(LinExpr{}.add(1, tii).add(-1, bm.x[l - 1][i]), Sense::Le, 0);
      {
        LinExpr e{departures};
        for (auto& [c, v] : e.terms) c *= sk.n;
        e.add(1, tii);
        bm.ilp.add_con(std::move(e), Sense::Le, sk.n);
      }
      {
        LinExpr e{departures};
        for (auto& [c, v] : e.terms) c *= sk.n;
        e.add(1, tii);
        e.add(-1, bm.x[l - 1][i]);
        bm.ilp.add_con(std::move(e), Sense::Ge, 0);
      }
    }
    for (int j = 0; j < sk.tau; ++j) {
      LinExpr inflow;
      inflow.add(-1, bm.x[l][j]);
      inflow.add(1, bm.t[{j, j, l}]);
      for (int i : sk.nbrs[j]) inflow.add(1, bm.t[{i, j, l}]);
      bm.ilp.add_con(std::move(inflow), Sense::Eq, 0);
    }
  }

  // After the k-th step no occupied vertex may still have a dominant
  // neighbor. s_i = 1 whenever x_i^k > 0; empty vertices are exempt.
  for (int i = 0; i < sk.tau; ++i) {
    const int occupied =
        bm.ilp.add_var("s_" + std::to_string(i), 0, 1);
    bm.ilp.add_con(
        LinExpr{}.add(1, bm.x[bm.k][i]).add(-sk.n, occupied), Sense::Le, 0);
    for (int j : sk.nbrs[i]) {
      ExprBuilder e;
      e.add(2, bm.x[bm.k][j]);
      e.add(-1, bm.x[bm.k][i]);
      for (int a : sk.nbrs[i]) e.add(-1, bm.x[bm.k][a]);
      e.add(2 * sk.n, occupied);
      bm.ilp.add_con(e.build(), Sense::Le, 2 * sk.n);
    }
  }

  bm.rule_selectors = add_rule_constraints(bm.ilp, inst.rule, bm.x[bm.k],
                                           inst.graph.types, inst.preferred,
                                           sk.n);
  for (int s : bm.rule_selectors) bm.ilp.branch_priority.push_back(s);
  return bm;
}

BriberyPlan BsgModel::decode_plan(const std::vector<Weight>& assignment) const {
  BriberyPlan plan(tau);
  for (int i = 0; i < tau; ++i)
    for (int j = 0; j < tau; ++j) plan.at(i, j) = assignment[beta[i][j]];
  return plan;
}

std::vector<Society> BsgModel::decode_layers(
    const std::vector<Weight>& assignment) const {
  std::vector<Society> out;
  for (int l = 0; l <= k; ++l) {
    Society s(tau, 0);
    for (int i = 0; i < tau; ++i) s[i] = assignment[x[l][i]];
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace bsg
