#ifndef BSG_JSON_IO_HPP
#define BSG_JSON_IO_HPP

#include <iosfwd>

#include <json.hpp>

#include "bsg/bribery.hpp"
#include "bsg/heuristics.hpp"

namespace bsg {

using Json = nlohmann::json;

Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json rule_to_json(const VotingRule& rule);
VotingRule rule_from_json(const Json& j);

Json process_to_json(const ProcessSpec& spec);
ProcessSpec process_from_json(const Json& j);

Json instance_to_json(const BsgInstance& inst);
BsgInstance instance_from_json(const Json& j);

BsgInstance load_instance(std::istream& in);
void save_instance(const BsgInstance& inst, std::ostream& out);

/// JSON lines: one object per state with step index, weights, and the
/// assimilations that produced it.
void write_trace(const DiffusionTrace& trace, std::ostream& out);

Json plan_to_json(const BriberyPlan& plan);
BriberyPlan plan_from_json(const Json& j);

Json shift_matrix_to_json(const ShiftMatrix& plan);
ShiftMatrix shift_matrix_from_json(const Json& j);

}  // namespace bsg

#endif
