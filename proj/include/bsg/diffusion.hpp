#ifndef BSG_DIFFUSION_HPP
#define BSG_DIFFUSION_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <utility>

#include "bsg/core.hpp"

namespace bsg {

struct Assimilation {
  int from = 0;
  int to = 0;
  Weight weight = 0;
  bool operator==(const Assimilation&) const = default;
};

struct DiffusionTrace {
  std::vector<Society> states;                     // states[0] is the input
  std::vector<std::vector<Assimilation>> events;   // events[l]: step l -> l+1
  bool converged = false;
  std::optional<std::pair<int, int>> cycle;        // (start, period)

  const Society& final_state() const { return states.back(); }
  int steps() const { return static_cast<int>(states.size()) - 1; }
};

struct InfluenceParams {
  // f(G(t), G(t')): influence of age group G(t) on G(t'); missing pairs are 0.
  std::map<std::pair<std::string, std::string>, Rational> age_coeff;
  // S(t'): stubbornness factor by level label (persuadable 1, stubborn 1/2).
  std::map<std::string, Rational> stubbornness;
  long long distance_base = 2;   // influence damps as 1/base^d
  bool round_damping = true;     // multiply by 1/l in round l
  std::string age_attribute = "age";
  std::string stubbornness_attribute = "stubbornness";
};

struct MobilityPredicate {
  // Types whose attribute value is listed here never change; empty = all mobile.
  std::string attribute;
  std::set<std::string> immobile_values;

  bool mobile(const VoterType& t) const;
};

struct ProcessSpec {
  enum class Kind {
    BasicMajority,
    WeightedMajority,
    LocalElection,
    KemenyNeighborhood,
    CustomTable,
  };
  Kind kind = Kind::BasicMajority;
  int max_rounds = 0;  // k; required (>= 1) for every kind except BasicMajority
  VotingRule local_rule = VotingRule::borda();  // LocalElection only
  InfluenceParams influence;                    // LocalElection only
  std::vector<int> adoption_table;              // CustomTable: target per type, -1 = none
  MobilityPredicate mobility;

  void validate(const SocietyGraph& g) const;
};

/// One synchronous basic-majority step. All majority tests read the pre-step
/// weights; a vertex may lose its own weight and receive others' in the same
/// step.
std::pair<Society, std::vector<Assimilation>> sync_step(const SocietyGraph& g);

/// Iterate sync_step to a fixed point (at most tau steps).
DiffusionTrace run_sync(const SocietyGraph& g);

/// Asynchronous basic-majority step at vertex v; second member is true when
/// the step is redundant (graph unchanged).
std::pair<Society, bool> async_step(const SocietyGraph& g, int v);

DiffusionTrace run_async(const SocietyGraph& g, const std::vector<int>& order);

/// True when no asynchronous step changes the graph.
bool is_stable(const SocietyGraph& g);

struct ExploreResult {
  std::set<Society> converged;
  bool complete = true;        // false when the state budget was exhausted
  std::size_t states_explored = 0;
  int max_irredundant_length = 0;
};

/// All societies reachable by maximal irredundant asynchronous sequences.
ExploreResult explore_async(const SocietyGraph& g, std::size_t state_budget);

/// Coefficient of influence of type t on type t2 in round l (1 for t == t2).
Rational influence_coefficient(const VoterType& t, const VoterType& t2,
                               int round, const InfluenceParams& params);

/// One generalized diffusion round. May append weight-0 types to the graph
/// when a local election produces an order not yet present.
std::pair<SocietyGraph, std::vector<Assimilation>> generalized_step(
    const SocietyGraph& g, const ProcessSpec& spec, int round);

DiffusionTrace run_generalized(const SocietyGraph& g, const ProcessSpec& spec);

/// First repeated state and its period, if any.
std::optional<std::pair<int, int>> detect_cycle(const DiffusionTrace& trace);

}  // namespace bsg

#endif
