#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "fdaa/fml/model.hpp"
#include "fdaa/go/coord.hpp"

namespace fdaa::assessment {

// Ordinal order matters: rule generation maps score buckets onto it.
enum class CgsLabel { white_obvious, white_possible, uncertain, black_possible, black_obvious };

inline constexpr std::array<std::string_view, 5> kCgsLabelNames{
    "WhiteObviousAdvantage", "WhitePossibleAdvantage", "UncertainSituation", "BlackPossibleAdvantage",
    "BlackObviousAdvantage"};

inline std::string to_string(CgsLabel label) { return std::string(kCgsLabelNames[static_cast<int>(label)]); }

inline CgsLabel parse_cgs_label(std::string_view name) {
  for (std::size_t i = 0; i < kCgsLabelNames.size(); ++i)
    if (kCgsLabelNames[i] == name) return static_cast<CgsLabel>(i);
  throw AssessmentError("unknown CGS label '" + std::string(name) + "'");
}

inline CgsLabel mirror(CgsLabel label) { return static_cast<CgsLabel>(4 - static_cast<int>(label)); }

inline std::optional<go::Color> side_of(CgsLabel label) {
  switch (label) {
    case CgsLabel::white_obvious:
    case CgsLabel::white_possible:
      return go::Color::white;
    case CgsLabel::black_possible:
    case CgsLabel::black_obvious:
      return go::Color::black;
    case CgsLabel::uncertain:
      break;
  }
  return std::nullopt;
}

enum class FmlVariant { fml1, fml2 };

inline int input_count(FmlVariant v) { return v == FmlVariant::fml1 ? 4 : 6; }

inline std::string to_string(FmlVariant v) { return v == FmlVariant::fml1 ? "FML-1" : "FML-2"; }

inline FmlVariant parse_fml_variant(std::string_view s) {
  if (s == "1" || s == "FML-1" || s == "fml-1") return FmlVariant::fml1;
  if (s == "2" || s == "FML-2" || s == "fml-2") return FmlVariant::fml2;
  throw AssessmentError("unknown FML variant '" + std::string(s) + "'");
}

inline constexpr std::string_view kOutputName = "CGS";

// Input variables in rule-enumeration order. FML-1 uses the first four.
struct InputSpec {
  std::string_view name;
  go::Color side;
  int term_count;
};

inline constexpr std::array<InputSpec, 6> kInputs{{{"BSN", go::Color::black, 3},
                                                   {"WSN", go::Color::white, 3},
                                                   {"BWR", go::Color::black, 3},
                                                   {"WWR", go::Color::white, 3},
                                                   {"BTMR", go::Color::black, 2},
                                                   {"WTMR", go::Color::white, 2}}};

inline constexpr std::array<std::string_view, 3> kThreeTerms{"Low", "Medium", "High"};
inline constexpr std::array<std::string_view, 2> kTwoTerms{"Low", "High"};

inline std::string_view term_name(int term_count, int index) {
  return term_count == 3 ? kThreeTerms.at(static_cast<std::size_t>(index))
                         : kTwoTerms.at(static_cast<std::size_t>(index));
}

struct VariableStats {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
  double std1 = 0.0;
  double std2 = 0.0;
  double std3 = 0.0;
};

struct KbStats {
  VariableStats sn;
  VariableStats wr;
  VariableStats tmr;
};

inline constexpr KbStats kCollectedStats{{3420, 9883, 14999, 2762, 1421.56, 1450.62},
                                         {0.2, 0.49, 0.6, 0.09, 0.07, 0.05},
                                         {0, 0.382, 0.5, 0.11, 0.09, 0.03}};

namespace detail {

inline void check_stats(const VariableStats& s, std::string_view what) {
  if (!(s.min < s.max))
    throw AssessmentError("degenerate " + std::string(what) + " statistics: min equals max");
  if (!(s.min <= s.mean && s.mean <= s.max))
    throw AssessmentError(std::string(what) + " statistics must satisfy min <= mean <= max");
}

inline fml::FuzzyVariable make_variable(std::string_view name, double lo, double hi,
                                        std::vector<std::pair<std::string_view, fml::TrapezoidMF>> terms) {
  fml::FuzzyVariable v;
  v.name = std::string(name);
  v.domain_left = lo;
  v.domain_right = hi;
  v.type = fml::VariableType::input;
  v.default_value = 0.0;
  v.network_address = "127.0.0.1";
  for (auto& [term, mf] : terms) v.terms.push_back({std::string(term), mf, false});
  return v;
}

}  // namespace detail

inline fml::FuzzyVariable sn_variable(std::string_view name) {
  return detail::make_variable(name, 0, 20000,
                               {{"Low", {0, 0, 2556, 7122}},
                                {"Medium", {2556, 7122, 12637, 17203}},
                                {"High", {12637, 17203, 20000, 20000}}});
}

inline fml::FuzzyVariable wr_variable(std::string_view name) {
  return detail::make_variable(name, 0, 1,
                               {{"Low", {0, 0, 0.40, 0.44}},
                                {"Medium", {0.40, 0.44, 0.54, 0.58}},
                                {"High", {0.54, 0.58, 1, 1}}});
}

inline fml::FuzzyVariable tmr_variable(std::string_view name) {
  return detail::make_variable(name, 0, 100, {{"Low", {0, 0, 30, 45}}, {"High", {30, 45, 100, 100}}});
}

inline fml::FuzzyVariable cgs_variable() {
  auto v = detail::make_variable(kOutputName, 0, 100,
                                 {{kCgsLabelNames[0], {0, 0, 15, 25}},
                                  {kCgsLabelNames[1], {15, 25, 37.5, 47.5}},
                                  {kCgsLabelNames[2], {37.5, 47.5, 52.5, 62.5}},
                                  {kCgsLabelNames[3], {52.5, 62.5, 75, 85}},
                                  {kCgsLabelNames[4], {75, 85, 100, 100}}});
  v.type = fml::VariableType::output;
  v.default_value = 50.0;
  return v;
}

// Knowledge base only; the rule base is left empty. The shipped fuzzy sets
// are fixed, the statistics are validated but do not move them.
inline fml::FuzzySystem build_default_kb(const KbStats& stats, FmlVariant variant = FmlVariant::fml2) {
  detail::check_stats(stats.sn, "SN");
  detail::check_stats(stats.wr, "WR");
  detail::check_stats(stats.tmr, "TMR");

  fml::FuzzySystem sys;
  sys.name = "GameSystem";
  sys.network_address = "127.0.0.1";
  sys.kb_network_address = "127.0.0.1";
  sys.rule_base.network_address = "127.0.0.1";
  const int n = input_count(variant);
  for (int i = 0; i < n; ++i) {
    const auto name = kInputs[static_cast<std::size_t>(i)].name;
    if (i < 2) {
      sys.knowledge_base.push_back(sn_variable(name));
    } else if (i < 4) {
      sys.knowledge_base.push_back(wr_variable(name));
    } else {
      sys.knowledge_base.push_back(tmr_variable(name));
    }
  }
  sys.knowledge_base.push_back(cgs_variable());
  return sys;
}

}  // namespace fdaa::assessment
