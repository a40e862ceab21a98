#ifndef BSG_CORE_HPP
#define BSG_CORE_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace bsg {

using Weight = long long;
using Rational = boost::rational<long long>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SizeLimitError : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };
struct ReferenceError : Error { using Error::Error; };
struct DegenerateElectionError : Error { using Error::Error; };
struct UnsupportedRuleError : Error { using Error::Error; };
struct ConservationError : Error { using Error::Error; };
struct InfeasibleActionError : Error { using Error::Error; };
struct PlanError : Error { using Error::Error; };
struct SpecError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct VerificationError : Error { using Error::Error; };
struct SearchFailureError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };

/// A ranking of m candidates, most-preferred first. Candidates are dense
/// indices 0..m-1; index order doubles as the lexicographic tie-break order.
struct PreferenceOrder {
  std::vector<int> ranking;

  PreferenceOrder() = default;
  explicit PreferenceOrder(std::vector<int> r);

  int num_candidates() const { return static_cast<int>(ranking.size()); }

  /// 1-based position of candidate c.
  int rank_of(int c) const;

  bool operator==(const PreferenceOrder& o) const { return ranking == o.ranking; }
  bool operator!=(const PreferenceOrder& o) const { return ranking != o.ranking; }
  bool operator<(const PreferenceOrder& o) const { return ranking < o.ranking; }
};

struct VoterType {
  int id = 0;
  PreferenceOrder order;
  std::map<std::string, std::string> attributes;
};

/// Number of voters per type; index j is the type id.
using Society = std::vector<Weight>;

Weight total_weight(const Society& s);

struct Arc {
  int from = 0;
  int to = 0;
  Rational weight{1};
};

/// Weighted graph over voter types. In the basic model arcs are symmetric
/// unit arcs between orders at swap distance one; no self-arcs.
struct SocietyGraph {
  std::vector<VoterType> types;
  Society society;
  std::vector<Arc> arcs;
  bool directed = false;

  int num_types() const { return static_cast<int>(types.size()); }
  int num_candidates() const {
    return types.empty() ? 0 : types.front().order.num_candidates();
  }

  /// Open in-neighborhood of v: sources that influence v, with arc weights.
  /// For undirected graphs every arc counts both ways.
  std::vector<std::pair<int, Rational>> in_neighbors(int v) const;

  void check_arcs() const;
};

struct VotingRule {
  enum class Kind { Scoring, Plurality, Borda, Stv };
  Kind kind = Kind::Plurality;
  std::vector<Weight> vector;  // only for Kind::Scoring

  bool is_scoring() const { return kind != Kind::Stv; }
  /// Scoring vector s_1 >= ... >= s_m for an m-candidate election.
  std::vector<Weight> scoring_vector(int m) const;

  static VotingRule plurality() { return {Kind::Plurality, {}}; }
  static VotingRule borda() { return {Kind::Borda, {}}; }
  static VotingRule stv() { return {Kind::Stv, {}}; }
  static VotingRule scoring(std::vector<Weight> v) {
    return {Kind::Scoring, std::move(v)};
  }
};

inline constexpr Weight kUnopposedMargin = std::numeric_limits<Weight>::max();

/// All m! preference orders in lexicographic order; list position is the
/// canonical type id. Guard: 1 <= m <= 8.
std::vector<PreferenceOrder> enumerate_orders(int m);

/// Canonical type id of an order (its lexicographic index among all m! orders).
int canonical_type_id(const PreferenceOrder& order);

/// Kendall-tau distance: number of candidate pairs the two orders disagree on.
int swap_distance(const PreferenceOrder& a, const PreferenceOrder& b);

struct AdjacencyPolicy {
  bool swap1 = true;               // symmetric unit arcs at swap distance 1
  std::vector<Arc> explicit_arcs;  // used when swap1 is false
  bool directed = false;
};

SocietyGraph build_society_graph(const std::vector<VoterType>& types,
                                 const Society& society,
                                 const AdjacencyPolicy& policy = {});

/// Convenience: canonical type universe (all m! orders) with the given weights.
SocietyGraph make_canonical_graph(int m, const Society& weights);

std::vector<Weight> scores(const VotingRule& rule,
                           const std::vector<VoterType>& types,
                           const Society& society);

std::set<int> winners(const VotingRule& rule,
                      const std::vector<VoterType>& types,
                      const Society& society);

int stv_winner(const std::vector<VoterType>& types, const Society& society);

Weight margin_of_victory(const VotingRule& rule,
                         const std::vector<VoterType>& types,
                         const Society& society, int p);

/// Permutation minimizing the weighted sum of swap distances to the voters;
/// ties broken lexicographically. All-zero society yields the canonical order.
PreferenceOrder kemeny_ranking(const std::vector<VoterType>& types,
                               const Society& society, int m);

}  // namespace bsg

#endif
