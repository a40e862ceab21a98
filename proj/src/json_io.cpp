#include "bsg/json_io.hpp"

#include <istream>
#include <ostream>

#include "bsg/ilp.hpp"

namespace bsg {
namespace {

const std::map<std::string, DiffusionMode> kModeNames = {
    {"sync", DiffusionMode::Sync},
    {"async-optimistic", DiffusionMode::AsyncOptimistic},
    {"async-pessimistic", DiffusionMode::AsyncPessimistic},
    {"generalized", DiffusionMode::Generalized},
};

std::string mode_name(DiffusionMode m) {
  for (const auto& [name, mode] : kModeNames)
    if (mode == m) return name;
  throw SpecError("unknown diffusion mode");
}

const std::map<std::string, ProcessSpec::Kind> kKindNames = {
    {"basic-majority", ProcessSpec::Kind::BasicMajority},
    {"weighted-majority", ProcessSpec::Kind::WeightedMajority},
    {"local-election", ProcessSpec::Kind::LocalElection},
    {"kemeny-neighborhood", ProcessSpec::Kind::KemenyNeighborhood},
    {"custom-table", ProcessSpec::Kind::CustomTable},
};

template <typename M>
typename M::mapped_type lookup(const M& names, const std::string& key,
                               const char* what) {
  auto it = names.find(key);
  if (it == names.end())
    throw ParseError(std::string("unknown ") + what + ": " + key);
  return it->second;
}

}  // namespace

Json rational_to_json(const Rational& r) {
  if (r.denominator() == 1) return r.numerator();
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(std::stoll(s));
      return Rational(std::stoll(s.substr(0, slash)),
                      std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
      throw ParseError("bad rational: " + s);
    }
  }
  throw ParseError("rational must be an integer or \"a/b\" string");
}

Json rule_to_json(const VotingRule& rule) {
  switch (rule.kind) {
    case VotingRule::Kind::Plurality: return "plurality";
    case VotingRule::Kind::Borda: return "borda";
    case VotingRule::Kind::Stv: return "stv";
    case VotingRule::Kind::Scoring: return Json{{"scoring", rule.vector}};
  }
  throw SpecError("unknown rule kind");
}

VotingRule rule_from_json(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "plurality") return VotingRule::plurality();
    if (s == "borda") return VotingRule::borda();
    if (s == "stv") return VotingRule::stv();
    throw ParseError("unknown rule: " + s);
  }
  if (j.is_object() && j.contains("scoring"))
    return VotingRule::scoring(j.at("scoring").get<std::vector<Weight>>());
  throw ParseError("rule must be a name or {\"scoring\": [...]}");
}

Json process_to_json(const ProcessSpec& spec) {
  Json j;
  for (const auto& [name, kind] : kKindNames)
    if (kind == spec.kind) j["kind"] = name;
  j["max_rounds"] = spec.max_rounds;
  if (spec.kind == ProcessSpec::Kind::LocalElection) {
    j["local_rule"] = rule_to_json(spec.local_rule);
    Json inf;
    inf["age_coeff"] = Json::array();
    for (const auto& [pair, r] : spec.influence.age_coeff)
      inf["age_coeff"].push_back(
          Json::array({pair.first, pair.second, rational_to_json(r)}));
    inf["stubbornness"] = Json::object();
    for (const auto& [label, r] : spec.influence.stubbornness)
      inf["stubbornness"][label] = rational_to_json(r);
    inf["distance_base"] = spec.influence.distance_base;
    inf["round_damping"] = spec.influence.round_damping;
    inf["age_attribute"] = spec.influence.age_attribute;
    inf["stubbornness_attribute"] = spec.influence.stubbornness_attribute;
    j["influence"] = std::move(inf);
  }
  if (spec.kind == ProcessSpec::Kind::CustomTable)
    j["adoption_table"] = spec.adoption_table;
  if (!spec.mobility.attribute.empty()) {
    j["mobility"] = {
        {"attribute", spec.mobility.attribute},
        {"immobile",
         std::vector<std::string>(spec.mobility.immobile_values.begin(),
                                  spec.mobility.immobile_values.end())}};
  }
  return j;
}

ProcessSpec process_from_json(const Json& j) {
  ProcessSpec spec;
  spec.kind = lookup(kKindNames, j.at("kind").get<std::string>(), "process kind");
  spec.max_rounds = j.value("max_rounds", 0);
  if (j.contains("local_rule")) spec.local_rule = rule_from_json(j.at("local_rule"));
  if (j.contains("influence")) {
    const Json& inf = j.at("influence");
    for (const Json& triple : inf.value("age_coeff", Json::array()))
      spec.influence.age_coeff[{triple.at(0).get<std::string>(),
                                triple.at(1).get<std::string>()}] =
          rational_from_json(triple.at(2));
    if (inf.contains("stubbornness"))
      for (const auto& [label, r] : inf.at("stubbornness").items())
        spec.influence.stubbornness[label] = rational_from_json(r);
    spec.influence.distance_base = inf.value("distance_base", 2LL);
    spec.influence.round_damping = inf.value("round_damping", true);
    spec.influence.age_attribute = inf.value("age_attribute", "age");
    spec.influence.stubbornness_attribute =
        inf.value("stubbornness_attribute", "stubbornness");
  }
  if (j.contains("adoption_table"))
    spec.adoption_table = j.at("adoption_table").get<std::vector<int>>();
  if (j.contains("mobility")) {
    spec.mobility.attribute = j.at("mobility").at("attribute").get<std::string>();
    for (const Json& v : j.at("mobility").value("immobile", Json::array()))
      spec.mobility.immobile_values.insert(v.get<std::string>());
  }
  return spec;
}

Json instance_to_json(const BsgInstance& inst) {
  Json j;
  j["m"] = inst.graph.num_candidates();
  j["types"] = Json::array();
  for (const auto& t : inst.graph.types) {
    Json tj{{"id", t.id}, {"order", t.order.ranking}};
    if (!t.attributes.empty()) tj["attributes"] = t.attributes;
    j["types"].push_back(std::move(tj));
  }
  j["weights"] = inst.graph.society;
  if (is_canonical_universe(inst.graph)) {
    j["policy"] = "swap1";
  } else {
    j["arcs"] = Json::array();
    for (const Arc& a : inst.graph.arcs)
      j["arcs"].push_back(
          Json::array({a.from, a.to, rational_to_json(a.weight)}));
    if (inst.graph.directed) j["directed"] = true;
  }
  j["rule"] = rule_to_json(inst.rule);
  j["p"] = inst.preferred;
  if (inst.budget) j["budget"] = *inst.budget;
  j["diffusion"] = mode_name(inst.mode);
  if (inst.process) j["process"] = process_to_json(*inst.process);
  return j;
}

BsgInstance instance_from_json(const Json& j) {
  BsgInstance inst;
  const int m = j.at("m").get<int>();
  std::vector<VoterType> types;
  for (const Json& tj : j.at("types")) {
    VoterType t;
    t.id = tj.at("id").get<int>();
    t.order = PreferenceOrder(tj.at("order").get<std::vector<int>>());
    if (t.order.num_candidates() != m)
      throw ParseError("type order length does not match m");
    if (tj.contains("attributes"))
      t.attributes = tj.at("attributes").get<std::map<std::string, std::string>>();
    types.push_back(std::move(t));
  }
  Society weights = j.at("weights").get<Society>();
  AdjacencyPolicy policy;
  if (j.contains("arcs")) {
    policy.swap1 = false;
    for (const Json& aj : j.at("arcs"))
      policy.explicit_arcs.push_back({aj.at(0).get<int>(), aj.at(1).get<int>(),
                                      aj.size() > 2 ? rational_from_json(aj.at(2))
                                                    : Rational(1)});
    policy.directed = j.value("directed", false);
  } else if (j.value("policy", "swap1") != "swap1") {
    throw ParseError("unknown adjacency policy");
  }
  inst.graph = build_society_graph(types, weights, policy);
  inst.rule = j.contains("rule") ? rule_from_json(j.at("rule"))
                                 : VotingRule::plurality();
  inst.preferred = j.value("p", 0);
  if (j.contains("budget")) inst.budget = j.at("budget").get<Weight>();
  inst.mode = lookup(kModeNames, j.value("diffusion", "sync"), "diffusion mode");
  if (j.contains("process")) inst.process = process_from_json(j.at("process"));
  inst.cost = shift_cost_matrix(inst.graph.types, inst.preferred);
  inst.validate();
  return inst;
}

BsgInstance load_instance(std::istream& in) {
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad instance JSON: ") + e.what());
  }
  return instance_from_json(j);
}

void save_instance(const BsgInstance& inst, std::ostream& out) {
  out << instance_to_json(inst).dump(2) << "\n";
}

void write_trace(const DiffusionTrace& trace, std::ostream& out) {
  for (size_t s = 0; s < trace.states.size(); ++s) {
    Json j{{"step", s}, {"weights", trace.states[s]}};
    if (s > 0 && s - 1 < trace.events.size()) {
      j["events"] = Json::array();
      for (const Assimilation& a : trace.events[s - 1])
        j["events"].push_back(
            Json{{"from", a.from}, {"to", a.to}, {"weight", a.weight}});
    }
    if (s + 1 == trace.states.size()) {
      j["converged"] = trace.converged;
      if (trace.cycle)
        j["cycle"] = Json{{"start", trace.cycle->first},
                          {"period", trace.cycle->second}};
    }
    out << j.dump() << "\n";
  }
}

Json plan_to_json(const BriberyPlan& plan) {
  Json rows = Json::array();
  for (int i = 0; i < plan.tau; ++i) {
    Json row = Json::array();
    for (int j = 0; j < plan.tau; ++j) row.push_back(plan.at(i, j));
    rows.push_back(std::move(row));
  }
  return Json{{"tau", plan.tau}, {"beta", std::move(rows)}};
}

BriberyPlan plan_from_json(const Json& j) {
  BriberyPlan plan(j.at("tau").get<int>());
  const Json& rows = j.at("beta");
  if (static_cast<int>(rows.size()) != plan.tau)
    throw ParseError("plan row count does not match tau");
  for (int i = 0; i < plan.tau; ++i)
    for (int jj = 0; jj < plan.tau; ++jj)
      plan.at(i, jj) = rows.at(i).at(jj).get<Weight>();
  return plan;
}

Json shift_matrix_to_json(const ShiftMatrix& plan) {
  Json rows = Json::array();
  for (int i = 0; i < plan.tau; ++i) {
    Json row = Json::array();
    for (int j = 0; j < plan.m; ++j) row.push_back(plan.at(i, j));
    rows.push_back(std::move(row));
  }
  return Json{{"tau", plan.tau}, {"m", plan.m}, {"shifts", std::move(rows)}};
}

ShiftMatrix shift_matrix_from_json(const Json& j) {
  ShiftMatrix plan(j.at("tau").get<int>(), j.at("m").get<int>());
  const Json& rows = j.at("shifts");
  if (static_cast<int>(rows.size()) != plan.tau)
    throw ParseError("shift matrix row count does not match tau");
  for (int i = 0; i < plan.tau; ++i)
    for (int jj = 0; jj < plan.m; ++jj)
      plan.at(i, jj) = rows.at(i).at(jj).get<Weight>();
  return plan;
}

}  // namespace bsg
