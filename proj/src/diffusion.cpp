#include "bsg/diffusion.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>
#include <unordered_set>

namespace bsg {

namespace {

std::vector<std::vector<int>> neighbor_lists(const SocietyGraph& g) {
  std::vector<std::vector<int>> nbrs(g.num_types());
  for (const Arc& a : g.arcs) {
    nbrs[a.to].push_back(a.from);
    if (!g.directed) nbrs[a.from].push_back(a.to);
  }
  return nbrs;
}

// Basic-majority rule: the unique in-neighbor x of v with
// 2 w_x > sum over the closed neighborhood, or -1 if none.
int dominant_neighbor(const Society& w, int v, const std::vector<int>& nbrs) {
  Weight closed = w[v];
  for (int u : nbrs) closed += w[u];
  int found = -1;
  for (int u : nbrs)
    if (2 * w[u] > closed) {
      assert(found == -1 && "strict majority dominator must be unique");
      found = u;
    }
  return found;
}

struct WeightedAdj {
  std::vector<std::vector<std::pair<int, Rational>>> in;
};

WeightedAdj weighted_adjacency(const SocietyGraph& g) {
  WeightedAdj adj;
  adj.in.resize(g.num_types());
  for (const Arc& a : g.arcs) {
    adj.in[a.to].emplace_back(a.from, a.weight);
    if (!g.directed) adj.in[a.from].emplace_back(a.to, a.weight);
  }
  return adj;
}

int dominant_neighbor_weighted(const Society& w, int v,
                               const std::vector<std::pair<int, Rational>>& in) {
  Rational closed{w[v]};
  for (const auto& [u, aw] : in) closed += aw * w[u];
  int found = -1;
  for (const auto& [u, aw] : in)
    if (2 * aw * w[u] > closed) {
      assert(found == -1);
      found = u;
    }
  return found;
}

}  // namespace

bool MobilityPredicate::mobile(const VoterType& t) const {
  if (attribute.empty()) return true;
  auto it = t.attributes.find(attribute);
  if (it == t.attributes.end()) return true;
  return !immobile_values.count(it->second);
}

void ProcessSpec::validate(const SocietyGraph& g) const {
  if (kind != Kind::BasicMajority && max_rounds < 1)
    throw SpecError("process spec requires max_rounds >= 1");
  if (kind == Kind::CustomTable) {
    if (adoption_table.size() != g.types.size())
      throw SpecError("adoption table size does not match type count");
    for (int t : adoption_table)
      if (t < -1 || t >= g.num_types())
        throw SpecError("adoption table references unknown type id");
  }
  if (kind == Kind::LocalElection && !local_rule.is_scoring())
    throw SpecError("local election requires a scoring rule");
}

std::pair<Society, std::vector<Assimilation>> sync_step(const SocietyGraph& g) {
  const auto nbrs = neighbor_lists(g);
  const int tau = g.num_types();
  Society next(tau, 0);
  std::vector<Assimilation> events;
  for (int v = 0; v < tau; ++v) {
    int x = dominant_neighbor(g.society, v, nbrs[v]);
    if (x >= 0 && g.society[v] > 0) {
      next[x] += g.society[v];
      events.push_back({v, x, g.society[v]});
    } else {
      next[v] += g.society[v];
    }
  }
  return {std::move(next), std::move(events)};
}

DiffusionTrace run_sync(const SocietyGraph& g) {
  DiffusionTrace trace;
  trace.states.push_back(g.society);
  SocietyGraph cur = g;
  while (true) {
    auto [next, events] = sync_step(cur);
    if (next == cur.society) break;
    trace.events.push_back(std::move(events));
    trace.states.push_back(next);
    cur.society = std::move(next);
  }
  trace.converged = true;
  return trace;
}

std::pair<Society, bool> async_step(const SocietyGraph& g, int v) {
  if (v < 0 || v >= g.num_types()) throw ReferenceError("unknown type id");
  const auto nbrs = neighbor_lists(g);
  Society next = g.society;
  int x = dominant_neighbor(g.society, v, nbrs[v]);
  if (x < 0 || g.society[v] == 0) return {std::move(next), true};
  next[x] += next[v];
  next[v] = 0;
  return {std::move(next), false};
}

bool is_stable(const SocietyGraph& g) {
  const auto nbrs = neighbor_lists(g);
  for (int v = 0; v < g.num_types(); ++v)
    if (g.society[v] > 0 && dominant_neighbor(g.society, v, nbrs[v]) >= 0)
      return false;
  return true;
}

DiffusionTrace run_async(const SocietyGraph& g, const std::vector<int>& order) {
  const auto nbrs = neighbor_lists(g);
  DiffusionTrace trace;
  trace.states.push_back(g.society);
  Society cur = g.society;
  for (int v : order) {
    if (v < 0 || v >= g.num_types()) throw ReferenceError("unknown type id");
    int x = dominant_neighbor(cur, v, nbrs[v]);
    std::vector<Assimilation> events;
    Society next = cur;
    if (x >= 0 && cur[v] > 0) {
      next[x] += next[v];
      next[v] = 0;
      events.push_back({v, x, cur[v]});
    }
    trace.events.push_back(std::move(events));
    trace.states.push_back(next);
    cur = std::move(next);
  }
  bool stable = true;
  for (int v = 0; v < g.num_types() && stable; ++v)
    if (cur[v] > 0 && dominant_neighbor(cur, v, nbrs[v]) >= 0) stable = false;
  trace.converged = stable;
  return trace;
}

namespace {

struct SocietyHash {
  std::size_t operator()(const Society& s) const {
    std::size_t h = 1469598103934665603ull;
    for (Weight w : s) {
      h ^= static_cast<std::size_t>(w);
      h *= 1099511628211ull;
    }
    return h;
  }
};

void explore_rec(const std::vector<std::vector<int>>& nbrs, const Society& cur,
                 int depth, std::size_t budget,
                 std::unordered_set<Society, SocietyHash>& visited,
                 ExploreResult& result) {
  const int tau = static_cast<int>(cur.size());
  result.max_irredundant_length = std::max(result.max_irredundant_length, depth);
  bool any = false;
  for (int v = 0; v < tau; ++v) {
    if (cur[v] == 0) continue;
    int x = dominant_neighbor(cur, v, nbrs[v]);
    if (x < 0) continue;
    any = true;
    if (!result.complete) return;
    Society next = cur;
    next[x] += next[v];
    next[v] = 0;
    if (visited.count(next)) continue;
    if (visited.size() >= budget) {
      result.complete = false;
      return;
    }
    visited.insert(next);
    ++result.states_explored;
    explore_rec(nbrs, next, depth + 1, budget, visited, result);
  }
  if (!any) result.converged.insert(cur);
}

}  // namespace

ExploreResult explore_async(const SocietyGraph& g, std::size_t state_budget) {
  const auto nbrs = neighbor_lists(g);
  ExploreResult result;
  std::unordered_set<Society, SocietyHash> visited;
  visited.insert(g.society);
  result.states_explored = 1;
  explore_rec(nbrs, g.society, 0, state_budget, visited, result);
  return result;
}

Rational influence_coefficient(const VoterType& t, const VoterType& t2,
                               int round, const InfluenceParams& params) {
  if (round < 1) throw SpecError("round must be >= 1");
  if (t.id == t2.id) return Rational{1};
  Rational c{1};
  if (params.round_damping) c /= round;
  long long denom = 1;
  const int d = swap_distance(t.order, t2.order);
  for (int i = 0; i < d; ++i) denom *= params.distance_base;
  c /= denom;
  auto s_it = t2.attributes.find(params.stubbornness_attribute);
  if (s_it != t2.attributes.end()) {
    auto f = params.stubbornness.find(s_it->second);
    c *= (f != params.stubbornness.end()) ? f->second : Rational{1};
  }
  auto g1 = t.attributes.find(params.age_attribute);
  auto g2 = t2.attributes.find(params.age_attribute);
  if (g1 != t.attributes.end() && g2 != t2.attributes.end()) {
    auto f = params.age_coeff.find({g1->second, g2->second});
    c *= (f != params.age_coeff.end()) ? f->second : Rational{0};
  }
  return c;
}

namespace {

// Local-election target order: candidates sorted by score, ties going to the
// higher index (i beats i' when s_i > s_i', or s_i = s_i' and i > i').
PreferenceOrder ranking_by_scores(const std::vector<Rational>& s) {
  std::vector<int> cand(s.size());
  for (size_t i = 0; i < s.size(); ++i) cand[i] = static_cast<int>(i);
  std::stable_sort(cand.begin(), cand.end(), [&](int a, int b) {
    if (s[a] != s[b]) return s[a] > s[b];
    return a > b;
  });
  return PreferenceOrder(cand);
}

// Index of the type with the given order and attributes, or -1.
int find_type(const SocietyGraph& g, const PreferenceOrder& order,
              const std::map<std::string, std::string>& attrs) {
  for (const auto& t : g.types)
    if (t.order == order && t.attributes == attrs) return t.id;
  return -1;
}

int materialize_type(SocietyGraph& g, const PreferenceOrder& order,
                     const std::map<std::string, std::string>& attrs) {
  int id = find_type(g, order, attrs);
  if (id >= 0) return id;
  id = g.num_types();
  g.types.push_back({id, order, attrs});
  g.society.push_back(0);
  return id;
}

}  // namespace

std::pair<SocietyGraph, std::vector<Assimilation>> generalized_step(
    const SocietyGraph& g, const ProcessSpec& spec, int round) {
  spec.validate(g);
  if (round < 1) throw SpecError("round must be >= 1");
  SocietyGraph out = g;
  const int tau = g.num_types();
  const int m = g.num_candidates();
  std::vector<int> target(tau, -1);  // -1 = stay

  switch (spec.kind) {
    case ProcessSpec::Kind::BasicMajority: {
      const auto nbrs = neighbor_lists(g);
      for (int v = 0; v < tau; ++v)
        target[v] = dominant_neighbor(g.society, v, nbrs[v]);
      break;
    }
    case ProcessSpec::Kind::WeightedMajority: {
      const auto adj = weighted_adjacency(g);
      for (int v = 0; v < tau; ++v)
        if (spec.mobility.mobile(g.types[v]))
          target[v] = dominant_neighbor_weighted(g.society, v, adj.in[v]);
      break;
    }
    case ProcessSpec::Kind::LocalElection: {
      const auto sv = spec.local_rule.scoring_vector(m);
      for (int v = 0; v < tau; ++v) {
        if (!spec.mobility.mobile(g.types[v])) continue;
        std::vector<Rational> s(m, Rational{0});
        for (int t = 0; t < tau; ++t) {
          if (g.society[t] == 0 && t != v) continue;
          Rational c = influence_coefficient(g.types[t], g.types[v], round,
                                            spec.influence);
          if (c == Rational(0)) continue;
          for (int pos = 0; pos < m; ++pos)
            s[g.types[t].order.ranking[pos]] += c * sv[pos] * g.society[t];
        }
        PreferenceOrder r = ranking_by_scores(s);
        if (r == g.types[v].order) continue;  // electing own ranking is a no-op
        target[v] = materialize_type(out, r, g.types[v].attributes);
      }
      break;
    }
    case ProcessSpec::Kind::KemenyNeighborhood: {
      const auto adj = weighted_adjacency(g);
      for (int v = 0; v < tau; ++v) {
        if (!spec.mobility.mobile(g.types[v])) continue;
        Society local(tau, 0);
        local[v] = g.society[v];
        for (const auto& [u, aw] : adj.in[v]) local[u] += g.society[u];
        PreferenceOrder r = kemeny_ranking(g.types, local, m);
        if (r == g.types[v].order) continue;
        target[v] = materialize_type(out, r, g.types[v].attributes);
      }
      break;
    }
    case ProcessSpec::Kind::CustomTable: {
      for (int v = 0; v < tau; ++v)
        if (spec.mobility.mobile(g.types[v])) target[v] = spec.adoption_table[v];
      break;
    }
  }

  Society next(out.num_types(), 0);
  std::vector<Assimilation> events;
  for (int v = 0; v < tau; ++v) {
    int x = target[v];
    if (x >= 0 && x != v && g.society[v] > 0) {
      next[x] += g.society[v];
      events.push_back({v, x, g.society[v]});
    } else {
      next[v] += g.society[v];
    }
  }
  out.society = std::move(next);
  return {std::move(out), std::move(events)};
}

DiffusionTrace run_generalized(const SocietyGraph& g, const ProcessSpec& spec) {
  spec.validate(g);
  const int k = spec.kind == ProcessSpec::Kind::BasicMajority && spec.max_rounds == 0
                    ? g.num_types()
                    : spec.max_rounds;
  DiffusionTrace trace;
  trace.states.push_back(g.society);
  SocietyGraph cur = g;
  for (int round = 1; round <= k; ++round) {
    auto [next, events] = generalized_step(cur, spec, round);
    // Fixed point: same weights (allowing freshly materialized zero types).
    bool same = next.society.size() >= cur.society.size();
    for (size_t i = 0; same && i < next.society.size(); ++i) {
      Weight prev = i < cur.society.size() ? cur.society[i] : 0;
      same = next.society[i] == prev;
    }
    if (same) {
      trace.converged = true;
      break;
    }
    trace.events.push_back(std::move(events));
    trace.states.push_back(next.society);
    cur = std::move(next);
  }
  trace.cycle = detect_cycle(trace);
  return trace;
}

std::optional<std::pair<int, int>> detect_cycle(const DiffusionTrace& trace) {
  size_t width = 0;
  for (const auto& s : trace.states) width = std::max(width, s.size());
  std::unordered_map<Society, int, SocietyHash> seen;
  for (size_t i = 0; i < trace.states.size(); ++i) {
    Society padded = trace.states[i];
    padded.resize(width, 0);
    auto [it, inserted] = seen.emplace(std::move(padded), static_cast<int>(i));
    if (!inserted)
      return std::make_pair(it->second, static_cast<int>(i) - it->second);
  }
  return std::nullopt;
}

}  // namespace bsg
