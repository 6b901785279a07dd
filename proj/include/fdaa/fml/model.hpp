#pragma once

// In-memory model of a fuzzy system described in the FML dialect used by
// the assessment knowledge bases: trapezoidal terms, Mamdani rule base.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fdaa/error.hpp"

namespace fdaa::fml {

struct TrapezoidMF {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  bool ordered() const { return a <= b && b <= c && c <= d; }

  // Piecewise-linear evaluation. Degenerate ramps (a == b or c == d) are
  // vertical edges: the plateau value wins at the shared point.
  double operator()(double x) const {
    if (x < a || x > d) return 0.0;
    if (x >= b && x <= c) return 1.0;
    if (x < b) return (x - a) / (b - a);
    return (d - x) / (d - c);
  }

  // Centroid of the unclipped trapezoid, used for label tie-breaking.
  double centroid() const {
    const double top = c - b;
    const double base = d - a;
    if (base <= 0.0) return a;
    // Decompose into left triangle, rectangle, right triangle.
    const double left_area = 0.5 * (b - a);
    const double mid_area = top;
    const double right_area = 0.5 * (d - c);
    const double area = left_area + mid_area + right_area;
    const double left_c = a + 2.0 * (b - a) / 3.0;
    const double mid_c = 0.5 * (b + c);
    const double right_c = c + (d - c) / 3.0;
    return (left_area * left_c + mid_area * mid_c + right_area * right_c) / area;
  }

  friend bool operator==(const TrapezoidMF&, const TrapezoidMF&) = default;
};

struct FuzzyTerm {
  std::string name;
  TrapezoidMF mf;
  bool complement = false;

  double degree(double x) const {
    const double mu = mf(x);
    return complement ? 1.0 - mu : mu;
  }

  friend bool operator==(const FuzzyTerm&, const FuzzyTerm&) = default;
};

enum class VariableType { input, output };

struct FuzzyVariable {
  std::string name;
  std::string scale;
  double domain_left = 0.0;
  double domain_right = 1.0;
  VariableType type = VariableType::input;
  std::string accumulation = "MAX";
  std::string defuzzifier = "COG";
  double default_value = 0.0;
  std::string network_address;
  std::vector<FuzzyTerm> terms;

  bool contains(double x) const { return x >= domain_left && x <= domain_right; }

  const FuzzyTerm* find_term(std::string_view term_name) const {
    auto it = std::find_if(terms.begin(), terms.end(),
                           [&](const FuzzyTerm& t) { return t.name == term_name; });
    return it == terms.end() ? nullptr : &*it;
  }

  friend bool operator==(const FuzzyVariable&, const FuzzyVariable&) = default;
};

struct RuleClause {
  std::string variable;
  std::string term;

  friend bool operator==(const RuleClause&, const RuleClause&) = default;
};

enum class Connector { and_, or_ };

struct FuzzyRule {
  std::string name;
  Connector connector = Connector::and_;
  std::string and_method = "MIN";
  std::string or_method = "MAX";
  double weight = 1.0;
  std::string network_address;
  std::vector<RuleClause> antecedent;
  std::vector<RuleClause> consequent;

  friend bool operator==(const FuzzyRule&, const FuzzyRule&) = default;
};

struct MamdaniRuleBase {
  std::string name = "ruleBase1";
  std::string activation_method = "MIN";
  std::string and_method = "MIN";
  std::string or_method = "MAX";
  std::string network_address;
  std::vector<FuzzyRule> rules;

  friend bool operator==(const MamdaniRuleBase&, const MamdaniRuleBase&) = default;
};

struct FuzzySystem {
  std::string name;
  std::string network_address;
  std::string kb_network_address;
  std::vector<FuzzyVariable> knowledge_base;
  MamdaniRuleBase rule_base;

  const FuzzyVariable* find_variable(std::string_view var_name) const {
    auto it = std::find_if(knowledge_base.begin(), knowledge_base.end(),
                           [&](const FuzzyVariable& v) { return v.name == var_name; });
    return it == knowledge_base.end() ? nullptr : &*it;
  }

  const FuzzyVariable& variable(std::string_view var_name) const {
    if (const auto* v = find_variable(var_name)) return *v;
    throw FmlError("unknown fuzzy variable '" + std::string(var_name) + "'");
  }

  std::vector<const FuzzyVariable*> variables_of(VariableType type) const {
    std::vector<const FuzzyVariable*> out;
    for (const auto& v : knowledge_base)
      if (v.type == type) out.push_back(&v);
    return out;
  }

  friend bool operator==(const FuzzySystem&, const FuzzySystem&) = default;
};

// Throws FmlError describing the first violated invariant.
inline void validate(const FuzzySystem& system) {
  std::map<std::string, const FuzzyVariable*> by_name;
  for (const auto& v : system.knowledge_base) {
    if (!by_name.emplace(v.name, &v).second)
      throw FmlError("duplicate fuzzy variable '" + v.name + "'");
    if (!(v.domain_left < v.domain_right))
      throw FmlError("variable '" + v.name + "': domainleft must be below domainright");
    if (!v.contains(v.default_value))
      throw FmlError("variable '" + v.name + "': defaultValue outside domain");
    std::map<std::string, int> seen;
    for (const auto& t : v.terms) {
      if (seen[t.name]++)
        throw FmlError("variable '" + v.name + "': duplicate term '" + t.name + "'");
      if (!t.mf.ordered())
        throw FmlError("variable '" + v.name + "' term '" + t.name +
                       "': trapezoid parameters must be non-decreasing");
      if (t.mf.a < v.domain_left || t.mf.d > v.domain_right)
        throw FmlError("variable '" + v.name + "' term '" + t.name +
                       "': trapezoid lies outside the variable domain");
    }
  }

  auto resolve = [&](const FuzzyRule& rule, const RuleClause& clause,
                     const char* part) -> const FuzzyVariable& {
    auto it = by_name.find(clause.variable);
    if (it == by_name.end())
      throw FmlError("rule '" + rule.name + "' " + part + " clause references undeclared variable '" +
                     clause.variable + "'");
    if (!it->second->find_term(clause.term))
      throw FmlError("rule '" + rule.name + "' " + part + " clause references undeclared term '" +
                     clause.term + "' of variable '" + clause.variable + "'");
    return *it->second;
  };

  for (const auto& rule : system.rule_base.rules) {
    if (rule.antecedent.empty()) throw FmlError("rule '" + rule.name + "' has an empty antecedent");
    if (rule.consequent.empty()) throw FmlError("rule '" + rule.name + "' has an empty consequent");
    if (!(rule.weight >= 0.0 && rule.weight <= 1.0))
      throw FmlError("rule '" + rule.name + "' weight must lie in [0,1]");
    for (const auto& c : rule.antecedent) resolve(rule, c, "antecedent");
    for (const auto& c : rule.consequent) {
      if (resolve(rule, c, "consequent").type != VariableType::output)
        throw FmlError("rule '" + rule.name + "' consequent references input variable '" +
                       c.variable + "'");
    }
  }
}

}  // namespace fdaa::fml
