#pragma once

// Rule-base generation by weighted scoring. Each input term carries a weight,
// each variable a relation weight; a rule's consequent comes from bucketing
// S_black - S_white at four breakpoints.

#include <json.hpp>

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "fdaa/assessment/knowledge_base.hpp"

namespace fdaa::assessment {

struct RuleGenScheme {
  std::map<std::string, double> relation_weights;
  std::map<std::string, std::map<std::string, double>> term_weights;
  std::array<double, 4> thresholds{};

  void validate() const {
    for (std::size_t i = 1; i < thresholds.size(); ++i)
      if (!(thresholds[i - 1] < thresholds[i]))
        throw AssessmentError("rule-generation thresholds must be strictly increasing");
    for (const auto& in : kInputs) {
      const std::string name(in.name);
      if (!relation_weights.count(name)) throw AssessmentError("no relation weight for " + name);
      auto it = term_weights.find(name);
      if (it == term_weights.end()) throw AssessmentError("no term weights for " + name);
      for (int t = 0; t < in.term_count; ++t)
        if (!it->second.count(std::string(term_name(in.term_count, t))))
          throw AssessmentError("no weight for " + name + "/" + std::string(term_name(in.term_count, t)));
    }
  }

  // Black-minus-white score of an antecedent given as (variable, term) pairs.
  double score(const std::vector<fml::RuleClause>& antecedent) const {
    double d = 0.0;
    for (const auto& c : antecedent) {
      const auto spec = std::find_if(kInputs.begin(), kInputs.end(), [&](const InputSpec& s) { return s.name == c.variable; });
      if (spec == kInputs.end()) throw AssessmentError("unknown input variable " + c.variable);
      const double w = relation_weights.at(c.variable) * term_weights.at(c.variable).at(c.term);
      d += spec->side == go::Color::black ? w : -w;
    }
    return d;
  }

  CgsLabel classify(double d) const {
    for (std::size_t i = 0; i < thresholds.size(); ++i)
      if (d < thresholds[i]) return static_cast<CgsLabel>(i);
    return CgsLabel::black_obvious;
  }

  friend bool operator==(const RuleGenScheme&, const RuleGenScheme&) = default;
};

// Rules the generated six-input base must reproduce verbatim.
struct ReferenceRule {
  int number;
  std::array<int, 6> terms;  // term indices per input, Low = 0
  CgsLabel label;
};

inline constexpr std::array<ReferenceRule, 20> kReferenceRules{{
    {1, {0, 0, 0, 0, 0, 0}, CgsLabel::uncertain},
    {2, {0, 0, 0, 0, 0, 1}, CgsLabel::uncertain},
    {3, {0, 0, 0, 0, 1, 0}, CgsLabel::uncertain},
    {4, {0, 0, 0, 0, 1, 1}, CgsLabel::uncertain},
    {5, {0, 0, 0, 1, 0, 0}, CgsLabel::uncertain},
    {6, {0, 0, 0, 1, 0, 1}, CgsLabel::white_possible},
    {7, {0, 0, 0, 1, 1, 0}, CgsLabel::uncertain},
    {8, {0, 0, 0, 1, 1, 1}, CgsLabel::uncertain},
    {9, {0, 0, 0, 2, 0, 0}, CgsLabel::white_possible},
    {10, {0, 0, 0, 2, 0, 1}, CgsLabel::white_possible},
    {315, {2, 2, 2, 0, 1, 0}, CgsLabel::black_possible},
    {316, {2, 2, 2, 0, 1, 1}, CgsLabel::black_possible},
    {317, {2, 2, 2, 1, 0, 0}, CgsLabel::black_possible},
    {318, {2, 2, 2, 1, 0, 1}, CgsLabel::uncertain},
    {319, {2, 2, 2, 1, 1, 0}, CgsLabel::black_possible},
    {320, {2, 2, 2, 1, 1, 1}, CgsLabel::black_possible},
    {321, {2, 2, 2, 2, 0, 0}, CgsLabel::uncertain},
    {322, {2, 2, 2, 2, 0, 1}, CgsLabel::uncertain},
    {323, {2, 2, 2, 2, 1, 0}, CgsLabel::uncertain},
    {324, {2, 2, 2, 2, 1, 1}, CgsLabel::uncertain},
}};

inline constexpr std::array<double, 6> kRelationWeights{2.5, 2.5, 2.0, 2.0, 1.0, 1.0};

// Term weights as listed alongside the relation weights, Low first.
inline const std::array<std::vector<double>, 6>& listed_term_weights() {
  static const std::array<std::vector<double>, 6> w{
      {{1, 2, 3}, {1, 2, 3}, {3, 2, 1}, {1, 2, 3}, {2, 1}, {1, 2}}};
  return w;
}

// 1-based rule number of a term-index tuple, last input varying fastest.
inline int rule_number(const std::vector<int>& terms) {
  int idx = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) idx = idx * kInputs[i].term_count + terms[i];
  return idx + 1;
}

inline std::vector<fml::RuleClause> antecedent_of(const std::vector<int>& terms) {
  std::vector<fml::RuleClause> out;
  for (std::size_t i = 0; i < terms.size(); ++i)
    out.push_back({std::string(kInputs[i].name), std::string(term_name(kInputs[i].term_count, terms[i]))});
  return out;
}

// All term-index tuples over the first `n` inputs in rule order.
inline std::vector<std::vector<int>> enumerate_terms(int n) {
  std::vector<std::vector<int>> out{{}};
  for (int i = 0; i < n; ++i) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : out)
      for (int t = 0; t < kInputs[static_cast<std::size_t>(i)].term_count; ++t) {
        auto v = prefix;
        v.push_back(t);
        next.push_back(std::move(v));
      }
    out = std::move(next);
  }
  return out;
}

inline std::vector<fml::FuzzyRule> generate_rulebase(const RuleGenScheme& scheme, int variables) {
  if (variables != 4 && variables != 6) throw AssessmentError("rule generation supports 4 or 6 inputs");
  scheme.validate();
  std::vector<fml::FuzzyRule> rules;
  for (const auto& terms : enumerate_terms(variables)) {
    fml::FuzzyRule r;
    r.name = "rule-" + std::to_string(rule_number(terms));
    r.network_address = "127.0.0.1";
    r.antecedent = antecedent_of(terms);
    r.consequent = {{std::string(kOutputName), to_string(scheme.classify(scheme.score(r.antecedent)))}};
    rules.push_back(std::move(r));
  }
  if (variables == 6) {
    std::ostringstream bad;
    for (const auto& ref : kReferenceRules) {
      const auto& rule = rules[static_cast<std::size_t>(ref.number - 1)];
      const auto got = rule.consequent.front().term;
      if (got != to_string(ref.label)) bad << " " << ref.number << " (" << got << ", expected " << to_string(ref.label) << ")";
    }
    if (!bad.str().empty()) throw AssessmentError("generated rule base violates reference rules:" + bad.str());
  }
  return rules;
}

// Share of rules whose colour-swapped antecedent carries the mirrored label.
inline double mirror_fraction(const std::vector<fml::FuzzyRule>& rules) {
  std::map<std::vector<std::pair<std::string, std::string>>, std::string> by_antecedent;
  auto key = [](const std::vector<fml::RuleClause>& a) {
    std::vector<std::pair<std::string, std::string>> k;
    for (const auto& c : a) k.emplace_back(c.variable, c.term);
    std::sort(k.begin(), k.end());
    return k;
  };
  for (const auto& r : rules) by_antecedent[key(r.antecedent)] = r.consequent.front().term;
  auto swap_color = [](std::string v) {
    v[0] = v[0] == 'B' ? 'W' : 'B';
    return v;
  };
  if (rules.empty()) return 0.0;
  int ok = 0;
  for (const auto& r : rules) {
    auto swapped = r.antecedent;
    for (auto& c : swapped) c.variable = swap_color(c.variable);
    auto it = by_antecedent.find(key(swapped));
    if (it != by_antecedent.end() &&
        it->second == to_string(mirror(parse_cgs_label(r.consequent.front().term))))
      ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(rules.size());
}

struct FitResult {
  RuleGenScheme scheme;
  double margin = 0.0;
  int listed_agreement = 0;  // inputs whose orientation matches the listed weights
  double mirror = 0.0;
  int candidates = 0;
  int feasible = 0;
};

// Exhaustive search over the orderings of each input's listed term weights.
// Only monotone orderings are kept; a candidate must separate the reference
// labels by score. Preference: widest margin, then agreement with the listed
// orientation, then mirror fraction, then enumeration order. Inner
// breakpoints sit mid-gap; outer ones halve the remaining score range.
inline FitResult fit_scheme() {
  std::array<std::vector<std::vector<double>>, 6> options;
  for (std::size_t i = 0; i < 6; ++i) {
    auto base = listed_term_weights()[i];
    std::sort(base.begin(), base.end());
    do options[i].push_back(base);
    while (std::next_permutation(base.begin(), base.end()));
  }
  auto monotone = [](const std::vector<double>& w) {
    return std::is_sorted(w.begin(), w.end()) || std::is_sorted(w.rbegin(), w.rend());
  };
  const auto all_terms = enumerate_terms(6);

  FitResult best;
  bool have = false;
  int candidates = 0;
  int feasible = 0;
  std::array<std::size_t, 6> pick{};
  const std::size_t total = std::accumulate(options.begin(), options.end(), std::size_t{1},
                                            [](std::size_t acc, const auto& o) { return acc * o.size(); });
  for (std::size_t n = 0; n < total; ++n) {
    std::size_t rem = n;
    for (std::size_t i = 6; i-- > 0;) {
      pick[i] = rem % options[i].size();
      rem /= options[i].size();
    }
    ++candidates;
    bool mono = true;
    for (std::size_t i = 0; i < 6; ++i) mono = mono && monotone(options[i][pick[i]]);
    if (!mono) continue;

    auto score = [&](const auto& terms) {
      double d = 0.0;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const double w = kRelationWeights[i] * options[i][pick[i]][static_cast<std::size_t>(terms[i])];
        d += kInputs[i].side == go::Color::black ? w : -w;
      }
      return d;
    };
    std::array<double, 5> lo, hi;
    lo.fill(1e300);
    hi.fill(-1e300);
    for (const auto& ref : kReferenceRules) {
      const auto k = static_cast<std::size_t>(ref.label);
      const double d = score(ref.terms);
      lo[k] = std::min(lo[k], d);
      hi[k] = std::max(hi[k], d);
    }
    const auto wp = static_cast<std::size_t>(CgsLabel::white_possible);
    const auto us = static_cast<std::size_t>(CgsLabel::uncertain);
    const auto bp = static_cast<std::size_t>(CgsLabel::black_possible);
    const double gap1 = lo[us] - hi[wp];
    const double gap2 = lo[bp] - hi[us];
    if (!(gap1 > 0 && gap2 > 0)) continue;
    ++feasible;

    RuleGenScheme s;
    for (std::size_t i = 0; i < 6; ++i) {
      const std::string name(kInputs[i].name);
      s.relation_weights[name] = kRelationWeights[i];
      for (int t = 0; t < kInputs[i].term_count; ++t)
        s.term_weights[name][std::string(term_name(kInputs[i].term_count, t))] =
            options[i][pick[i]][static_cast<std::size_t>(t)];
    }
    double dmin = 1e300, dmax = -1e300;
    for (const auto& t : all_terms) {
      dmin = std::min(dmin, score(t));
      dmax = std::max(dmax, score(t));
    }
    const double t1 = (hi[wp] + lo[us]) / 2;
    const double t2 = (hi[us] + lo[bp]) / 2;
    s.thresholds = {(dmin + t1) / 2, t1, t2, (t2 + dmax) / 2};

    FitResult cand;
    cand.scheme = s;
    cand.margin = std::min(gap1, gap2);
    for (std::size_t i = 0; i < 6; ++i) cand.listed_agreement += options[i][pick[i]] == listed_term_weights()[i];

    if (have && std::tie(cand.margin, cand.listed_agreement) < std::tie(best.margin, best.listed_agreement))
      continue;
    cand.mirror = mirror_fraction(generate_rulebase(s, 6));
    if (have && std::tie(cand.margin, cand.listed_agreement, cand.mirror) <=
                    std::tie(best.margin, best.listed_agreement, best.mirror))
      continue;
    best = cand;
    have = true;
  }
  best.candidates = candidates;
  best.feasible = feasible;
  if (!have) throw AssessmentError("no term-weight orientation reproduces the reference rules");
  return best;
}

inline const RuleGenScheme& fitted_scheme() {
  static const RuleGenScheme s = fit_scheme().scheme;
  return s;
}

inline nlohmann::json scheme_to_json(const RuleGenScheme& s) {
  nlohmann::json j;
  j["version"] = 1;
  j["relation_weights"] = nlohmann::json::object();
  j["term_weights"] = nlohmann::json::object();
  for (const auto& in : kInputs) {
    const std::string name(in.name);
    j["relation_weights"][name] = s.relation_weights.at(name);
    for (int t = 0; t < in.term_count; ++t) {
      const std::string term(term_name(in.term_count, t));
      j["term_weights"][name][term] = s.term_weights.at(name).at(term);
    }
  }
  j["thresholds"] = s.thresholds;
  j["labels"] = kCgsLabelNames;
  return j;
}

inline RuleGenScheme scheme_from_json(const nlohmann::json& j) {
  RuleGenScheme s;
  try {
    for (const auto& [k, v] : j.at("relation_weights").items()) s.relation_weights[k] = v.get<double>();
    for (const auto& [k, v] : j.at("term_weights").items())
      for (const auto& [t, w] : v.items()) s.term_weights[k][t] = w.get<double>();
    const auto th = j.at("thresholds");
    if (!th.is_array() || th.size() != 4) throw AssessmentError("scheme needs exactly four thresholds");
    for (std::size_t i = 0; i < 4; ++i) s.thresholds[i] = th[i].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw AssessmentError(std::string("malformed rule-generation scheme: ") + e.what());
  }
  s.validate();
  return s;
}

// Full system for a variant: default knowledge base plus generated rules.
inline fml::FuzzySystem build_system(FmlVariant variant, const RuleGenScheme& scheme = fitted_scheme()) {
  auto sys = build_default_kb(kCollectedStats, variant);
  sys.rule_base.rules = generate_rulebase(scheme, input_count(variant));
  fml::validate(sys);
  return sys;
}

}  // namespace fdaa::assessment
