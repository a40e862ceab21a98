#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "bsg/ilp.hpp"

namespace bsg {
namespace {

void write_expr(std::ostream& out, const LinExpr& e,
                const std::vector<IlpVariable>& vars) {
  if (e.terms.empty()) {
    out << "0 " << vars.front().name;
    return;
  }
  bool first = true;
  for (auto [c, v] : e.terms) {
    if (first) {
      if (c < 0) out << "- ";
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    const Weight a = c < 0 ? -c : c;
    if (a != 1) out << a << " ";
    out << vars[v].name;
  }
}

}  // namespace

void export_lp(const IlpModel& model, std::ostream& out) {
  out << "Minimize\n obj: ";
  write_expr(out, model.objective, model.vars);
  out << "\nSubject To\n";
  for (size_t i = 0; i < model.cons.size(); ++i) {
    const auto& c = model.cons[i];
    out << " c" << i + 1 << ": ";
    write_expr(out, c.expr, model.vars);
    switch (c.sense) {
      case Sense::Le: out << " <= "; break;
      case Sense::Ge: out << " >= "; break;
      case Sense::Eq: out << " = "; break;
    }
    out << c.rhs << "\n";
  }
  out << "Bounds\n";
  for (const auto& v : model.vars)
    out << " " << v.lb << " <= " << v.name << " <= " << v.ub << "\n";
  bool any_general = false, any_binary = false;
  for (size_t i = 0; i < model.vars.size(); ++i)
    (model.is_binary(static_cast<int>(i)) ? any_binary : any_general) = true;
  if (any_general) {
    out << "Generals\n";
    for (size_t i = 0; i < model.vars.size(); ++i)
      if (!model.is_binary(static_cast<int>(i)))
        out << " " << model.vars[i].name << "\n";
  }
  if (any_binary) {
    out << "Binaries\n";
    for (size_t i = 0; i < model.vars.size(); ++i)
      if (model.is_binary(static_cast<int>(i)))
        out << " " << model.vars[i].name << "\n";
  }
  out << "End\n";
}

SolveResult import_solution(const IlpModel& model, std::istream& in) {
  std::unordered_map<std::string, int> index;
  for (size_t i = 0; i < model.vars.size(); ++i)
    index[model.vars[i].name] = static_cast<int>(i);

  SolveResult res;
  res.assignment.assign(model.vars.size(), 0);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue;
    Weight value;
    if (!(ls >> value))
      throw ParseError("solution line has no value: " + line);
    auto it = index.find(name);
    if (it == index.end())
      throw ParseError("unknown variable in solution: " + name);
    res.assignment[it->second] = value;
  }
  const int bad = model.first_violated(res.assignment);
  if (bad != -1)
    throw VerificationError("solution violates constraint/bound " +
                            std::to_string(bad));
  res.status = SolveResult::Status::Optimal;
  res.objective = model.eval(model.objective, res.assignment);
  return res;
}

}  // namespace bsg
