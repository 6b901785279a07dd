#pragma once

// Mamdani inference: MIN activation, MIN/MAX connectors, MAX accumulation,
// centre-of-gravity defuzzification on a fixed 1001-point grid.

#include <algorithm>
#include <cmath>
#include <tuple>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "fdaa/fml/model.hpp"

namespace fdaa::fml {

inline constexpr int kCogSamples = 1001;

struct InferenceResult {
  std::string variable;
  double crisp = 0.0;
  std::string label;
  std::map<std::string, double> term_memberships;
  std::map<std::string, double> fired_rules;

  friend bool operator==(const InferenceResult&, const InferenceResult&) = default;
};

using Inputs = std::map<std::string, double>;

inline double membership(const FuzzyVariable& variable, const FuzzyTerm& term, double x) {
  if (!variable.contains(x))
    throw DomainError("value " + std::to_string(x) + " outside the domain of '" + variable.name + "'");
  return term.degree(x);
}

// Sum of x*mu(x) over sum of mu(x) on `samples` evenly spaced points with
// inclusive endpoints; zero mass falls back to the variable default.
inline double defuzzify_cog(const std::function<double(double)>& aggregate,
                            const FuzzyVariable& variable, int samples = kCogSamples) {
  const double lo = variable.domain_left;
  const double step = (variable.domain_right - lo) / static_cast<double>(samples - 1);
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = (i == samples - 1) ? variable.domain_right : lo + step * i;
    const double mu = aggregate(x);
    num += x * mu;
    den += mu;
  }
  if (den <= 0.0) return variable.default_value;
  return std::clamp(num / den, variable.domain_left, variable.domain_right);
}

// Output term with the highest membership at `crisp`. Ties prefer
// UncertainSituation, then the term whose centroid is closest, then the
// lexicographically smallest name.
inline std::string label_at(const FuzzyVariable& output, double crisp,
                            std::map<std::string, double>* memberships = nullptr) {
  constexpr double kTie = 1e-12;
  const FuzzyTerm* best = nullptr;
  double best_mu = -1.0;
  for (const auto& t : output.terms) {
    const double mu = t.degree(crisp);
    if (memberships) (*memberships)[t.name] = mu;
    if (!best || mu > best_mu + kTie) {
      best = &t;
      best_mu = mu;
      continue;
    }
    if (mu < best_mu - kTie) continue;
    auto rank = [&](const FuzzyTerm& term) {
      return std::tuple(term.name == "UncertainSituation" ? 0 : 1,
                        std::abs(term.mf.centroid() - crisp), term.name);
    };
    if (rank(t) < rank(*best)) {
      best = &t;
      best_mu = std::max(best_mu, mu);
    }
  }
  return best ? best->name : std::string{};
}

// Clip level per output term after MAX accumulation over all rules.
using ClipLevels = std::map<std::string, double>;

inline double aggregate_at(const FuzzyVariable& output, const ClipLevels& levels, double x) {
  double mu = 0.0;
  for (const auto& t : output.terms) {
    auto it = levels.find(t.name);
    if (it == levels.end() || it->second <= 0.0) continue;
    mu = std::max(mu, std::min(it->second, t.degree(x)));
  }
  return mu;
}

inline double rule_strength(const FuzzySystem& system, const FuzzyRule& rule, const Inputs& inputs) {
  double strength = rule.connector == Connector::and_ ? 1.0 : 0.0;
  for (const auto& clause : rule.antecedent) {
    const auto& var = system.variable(clause.variable);
    auto it = inputs.find(clause.variable);
    if (it == inputs.end())
      throw InferenceError("missing input value for variable '" + clause.variable + "'");
    const double mu = membership(var, *var.find_term(clause.term), it->second);
    strength = rule.connector == Connector::and_ ? std::min(strength, mu) : std::max(strength, mu);
  }
  return strength * rule.weight;
}

inline InferenceResult infer(const FuzzySystem& system, const Inputs& inputs,
                             std::string_view output_name = {}) {
  const FuzzyVariable* output = nullptr;
  if (output_name.empty()) {
    auto outs = system.variables_of(VariableType::output);
    if (outs.empty()) throw InferenceError("fuzzy system has no output variable");
    output = outs.front();
  } else {
    output = &system.variable(output_name);
  }

  for (const auto& [name, value] : inputs) {
    const auto* var = system.find_variable(name);
    if (var && var->type == VariableType::input && !var->contains(value))
      throw DomainError("input " + name + "=" + std::to_string(value) + " outside [" +
                        std::to_string(var->domain_left) + ", " +
                        std::to_string(var->domain_right) + "]");
  }

  InferenceResult result;
  result.variable = output->name;
  ClipLevels levels;
  for (const auto& rule : system.rule_base.rules) {
    const double strength = rule_strength(system, rule, inputs);
    if (strength <= 0.0) continue;
    result.fired_rules[rule.name] = strength;
    for (const auto& c : rule.consequent) {
      if (c.variable != output->name) continue;
      auto& level = levels[c.term];
      level = std::max(level, strength);
    }
  }

  result.crisp = defuzzify_cog([&](double x) { return aggregate_at(*output, levels, x); }, *output);
  result.label = label_at(*output, result.crisp, &result.term_memberships);
  return result;
}

}  // namespace fdaa::fml
