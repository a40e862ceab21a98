#include "bsg/core.hpp"

#include <algorithm>
#include <numeric>

namespace bsg {

PreferenceOrder::PreferenceOrder(std::vector<int> r) : ranking(std::move(r)) {
  std::vector<bool> seen(ranking.size(), false);
  for (int c : ranking) {
    if (c < 0 || c >= static_cast<int>(ranking.size()) || seen[c])
      throw DimensionError("ranking is not a permutation of 0..m-1");
    seen[c] = true;
  }
}

int PreferenceOrder::rank_of(int c) const {
  for (int i = 0; i < num_candidates(); ++i)
    if (ranking[i] == c) return i + 1;
  throw ReferenceError("candidate not in ranking");
}

Weight total_weight(const Society& s) {
  return std::accumulate(s.begin(), s.end(), Weight{0});
}

std::vector<std::pair<int, Rational>> SocietyGraph::in_neighbors(int v) const {
  if (v < 0 || v >= num_types()) throw ReferenceError("unknown type id");
  std::vector<std::pair<int, Rational>> out;
  for (const Arc& a : arcs) {
    if (a.to == v) out.emplace_back(a.from, a.weight);
    if (!directed && a.from == v) out.emplace_back(a.to, a.weight);
  }
  return out;
}

void SocietyGraph::check_arcs() const {
  for (const Arc& a : arcs) {
    if (a.from < 0 || a.from >= num_types() || a.to < 0 || a.to >= num_types())
      throw ReferenceError("arc references unknown type id");
    if (a.weight < 0) throw SpecError("negative arc weight");
  }
}

std::vector<Weight> VotingRule::scoring_vector(int m) const {
  switch (kind) {
    case Kind::Plurality: {
      std::vector<Weight> s(m, 0);
      if (m > 0) s[0] = 1;
      return s;
    }
    case Kind::Borda: {
      std::vector<Weight> s(m);
      for (int i = 0; i < m; ++i) s[i] = m - 1 - i;
      return s;
    }
    case Kind::Scoring:
      if (static_cast<int>(vector.size()) != m)
        throw DimensionError("scoring vector length does not match m");
      return vector;
    case Kind::Stv:
      throw UnsupportedRuleError("STV has no scoring vector");
  }
  throw UnsupportedRuleError("unknown rule kind");
}

std::vector<PreferenceOrder> enumerate_orders(int m) {
  if (m < 1 || m > 8) throw SizeLimitError("enumerate_orders requires 1 <= m <= 8");
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<PreferenceOrder> out;
  do {
    out.push_back(PreferenceOrder(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

int canonical_type_id(const PreferenceOrder& order) {
  // Lehmer code: lexicographic index of the permutation.
  const int m = order.num_candidates();
  long long fact = 1;
  for (int i = 2; i <= m; ++i) fact *= i;
  long long idx = 0;
  for (int i = 0; i < m; ++i) {
    fact /= (m - i);
    int smaller = 0;
    for (int j = i + 1; j < m; ++j)
      if (order.ranking[j] < order.ranking[i]) ++smaller;
    idx += smaller * fact;
  }
  return static_cast<int>(idx);
}

int swap_distance(const PreferenceOrder& a, const PreferenceOrder& b) {
  const int m = a.num_candidates();
  if (m != b.num_candidates())
    throw DimensionError("swap_distance: mismatched number of candidates");
  int d = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      int ci = a.ranking[i], cj = a.ranking[j];
      if (b.rank_of(ci) > b.rank_of(cj)) ++d;
    }
  return d;
}

SocietyGraph build_society_graph(const std::vector<VoterType>& types,
                                 const Society& society,
                                 const AdjacencyPolicy& policy) {
  if (types.size() != society.size())
    throw DimensionError("types and society size mismatch");
  SocietyGraph g;
  g.types = types;
  g.society = society;
  if (policy.swap1) {
    g.directed = false;
    const int tau = g.num_types();
    for (int i = 0; i < tau; ++i)
      for (int j = i + 1; j < tau; ++j)
        if (swap_distance(types[i].order, types[j].order) == 1)
          g.arcs.push_back({i, j, Rational{1}});
  } else {
    g.directed = policy.directed;
    g.arcs = policy.explicit_arcs;
  }
  g.check_arcs();
  return g;
}

SocietyGraph make_canonical_graph(int m, const Society& weights) {
  auto orders = enumerate_orders(m);
  std::vector<VoterType> types(orders.size());
  for (size_t i = 0; i < orders.size(); ++i)
    types[i] = {static_cast<int>(i), orders[i], {}};
  return build_society_graph(types, weights, {});
}

std::vector<Weight> scores(const VotingRule& rule,
                           const std::vector<VoterType>& types,
                           const Society& society) {
  if (!rule.is_scoring())
    throw UnsupportedRuleError("scores: rule is not a scoring rule");
  if (types.size() != society.size())
    throw DimensionError("types and society size mismatch");
  const int m = types.empty() ? 0 : types.front().order.num_candidates();
  const auto s = rule.scoring_vector(m);
  std::vector<Weight> out(m, 0);
  for (size_t j = 0; j < types.size(); ++j) {
    if (society[j] == 0) continue;
    const auto& r = types[j].order.ranking;
    for (int pos = 0; pos < m; ++pos) out[r[pos]] += s[pos] * society[j];
  }
  return out;
}

namespace {

// One STV round on the remaining candidate set: returns the majority winner
// if one exists, otherwise the candidate to eliminate (lex-lowest among the
// minimum plurality scores).
struct StvRound {
  std::optional<int> winner;
  int eliminated = -1;
};

StvRound stv_round(const std::vector<VoterType>& types, const Society& society,
                   const std::vector<bool>& remaining, int m, Weight n) {
  std::vector<Weight> first(m, 0);
  for (size_t j = 0; j < types.size(); ++j) {
    if (society[j] == 0) continue;
    for (int c : types[j].order.ranking)
      if (remaining[c]) {
        first[c] += society[j];
        break;
      }
  }
  StvRound round;
  for (int c = 0; c < m; ++c)
    if (remaining[c] && 2 * first[c] > n) {
      round.winner = c;
      return round;
    }
  Weight best = std::numeric_limits<Weight>::max();
  for (int c = 0; c < m; ++c)
    if (remaining[c] && first[c] < best) {
      best = first[c];
      round.eliminated = c;
    }
  return round;
}

}  // namespace

int stv_winner(const std::vector<VoterType>& types, const Society& society) {
  const Weight n = total_weight(society);
  if (n == 0) throw DegenerateElectionError("all-zero society");
  const int m = types.front().order.num_candidates();
  std::vector<bool> remaining(m, true);
  int left = m;
  while (left > 1) {
    StvRound round = stv_round(types, society, remaining, m, n);
    if (round.winner) return *round.winner;
    remaining[round.eliminated] = false;
    --left;
  }
  for (int c = 0; c < m; ++c)
    if (remaining[c]) return c;
  throw DegenerateElectionError("no candidates");
}

std::set<int> winners(const VotingRule& rule,
                      const std::vector<VoterType>& types,
                      const Society& society) {
  if (total_weight(society) == 0)
    throw DegenerateElectionError("all-zero society");
  if (rule.kind == VotingRule::Kind::Stv) return {stv_winner(types, society)};
  const auto sc = scores(rule, types, society);
  const Weight best = *std::max_element(sc.begin(), sc.end());
  std::set<int> out;
  for (size_t c = 0; c < sc.size(); ++c)
    if (sc[c] == best) out.insert(static_cast<int>(c));
  return out;
}

Weight margin_of_victory(const VotingRule& rule,
                         const std::vector<VoterType>& types,
                         const Society& society, int p) {
  if (!rule.is_scoring())
    throw UnsupportedRuleError("margin_of_victory: scoring rules only");
  const auto sc = scores(rule, types, society);
  if (p < 0 || p >= static_cast<int>(sc.size()))
    throw ReferenceError("unknown candidate");
  if (sc.size() == 1) return kUnopposedMargin;
  Weight rival = std::numeric_limits<Weight>::min();
  for (size_t c = 0; c < sc.size(); ++c)
    if (static_cast<int>(c) != p) rival = std::max(rival, sc[c]);
  return sc[p] - rival;
}

PreferenceOrder kemeny_ranking(const std::vector<VoterType>& types,
                               const Society& society, int m) {
  if (m > 6) throw SizeLimitError("kemeny_ranking: exact enumeration needs m <= 6");
  auto all = enumerate_orders(m);
  if (total_weight(society) == 0) return all.front();
  const PreferenceOrder* best = nullptr;
  long long best_cost = 0;
  for (const auto& r : all) {
    long long cost = 0;
    for (size_t j = 0; j < types.size(); ++j)
      if (society[j] != 0) cost += society[j] * swap_distance(r, types[j].order);
    if (!best || cost < best_cost) {  // lexicographic tie-break: keep first
      best = &r;
      best_cost = cost;
    }
  }
  return *best;
}

}  // namespace bsg
