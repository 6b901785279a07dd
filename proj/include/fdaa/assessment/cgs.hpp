#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fdaa/assessment/features.hpp"
#include "fdaa/assessment/rulegen.hpp"
#include "fdaa/fml/inference.hpp"
#include "fdaa/go/sgf.hpp"

namespace fdaa::assessment {

inline constexpr int kAssessmentStart = 10;  // assessment runs for move_no > this

struct CgsRecord {
  int move_no = 0;
  std::array<double, 6> inputs{};  // BSN, WSN, BWR, WWR, BTMR, WTMR after clamping
  double crisp = 0.0;
  CgsLabel label = CgsLabel::uncertain;
  std::vector<std::string> clamped;  // inputs that were pulled back into their domain

  friend bool operator==(const CgsRecord&, const CgsRecord&) = default;
};

inline std::optional<CgsRecord> assess_move(const std::optional<MoveFeatures>& black,
                                            const std::optional<MoveFeatures>& white,
                                            const fml::FuzzySystem& system, int move_no) {
  if (move_no <= kAssessmentStart) return std::nullopt;
  if (!black || !white) throw AssessmentError("both colours need an analysed move before assessment");

  CgsRecord rec;
  rec.move_no = move_no;
  const std::array<double, 6> raw{static_cast<double>(black->sn), static_cast<double>(white->sn),
                                  black->wr,  white->wr, black->tmr_after[0], white->tmr_after[0]};
  fml::Inputs inputs;
  for (std::size_t i = 0; i < kInputs.size(); ++i) {
    const std::string name(kInputs[i].name);
    double x = raw[i];
    if (const auto* var = system.find_variable(name)) {
      const double c = std::clamp(x, var->domain_left, var->domain_right);
      if (c != x || std::isnan(x)) rec.clamped.push_back(name);
      x = std::isnan(x) ? var->domain_left : c;
      inputs[name] = x;
    }
    rec.inputs[i] = x;
  }
  const auto result = fml::infer(system, inputs, kOutputName);
  rec.crisp = result.crisp;
  rec.label = parse_cgs_label(result.label);
  return rec;
}

enum class OgsKind { favorable_to_black, favorable_to_white, uncertain, undecided };

inline std::string to_string(OgsKind k) {
  switch (k) {
    case OgsKind::favorable_to_black:
      return "FavorableToBlack";
    case OgsKind::favorable_to_white:
      return "FavorableToWhite";
    case OgsKind::uncertain:
      return "UncertainSituation";
    case OgsKind::undecided:
      return "Undecided";
  }
  return "Undecided";
}

inline OgsKind parse_ogs_kind(std::string_view s) {
  for (auto k : {OgsKind::favorable_to_black, OgsKind::favorable_to_white, OgsKind::uncertain, OgsKind::undecided})
    if (to_string(k) == s) return k;
  throw AssessmentError("unknown OGS verdict '" + std::string(s) + "'");
}

struct OgsVerdict {
  int method = 1;
  OgsKind verdict = OgsKind::undecided;
  std::optional<bool> correct;
  std::vector<int> window;  // move numbers of the records that decided the verdict

  friend bool operator==(const OgsVerdict&, const OgsVerdict&) = default;
};

namespace detail {

inline OgsKind kind_of(CgsLabel label) {
  const auto side = side_of(label);
  if (!side) return OgsKind::uncertain;
  return *side == go::Color::black ? OgsKind::favorable_to_black : OgsKind::favorable_to_white;
}

}  // namespace detail

inline OgsVerdict decide_ogs_method1(const std::vector<CgsRecord>& series, const std::optional<std::string>& result) {
  if (series.empty()) throw AssessmentError("OGS needs at least one CGS record");
  OgsVerdict v;
  v.method = 1;
  v.verdict = detail::kind_of(series.back().label);
  v.window = {series.back().move_no};
  if (result) {
    const auto winner = go::winner_of(*result);
    const auto side = side_of(series.back().label);
    v.correct = winner ? side == winner : v.verdict == OgsKind::uncertain;
  }
  return v;
}

// Collects the last five non-Uncertain records scanning backward; the
// verdict is their majority side and is correct if any of them names the
// winner. Fewer than five such records leave the game Undecided.
inline OgsVerdict decide_ogs_method2(const std::vector<CgsRecord>& series, const std::optional<std::string>& result) {
  constexpr std::size_t kWindow = 5;
  if (series.empty()) throw AssessmentError("OGS needs at least one CGS record");
  OgsVerdict v;
  v.method = 2;
  std::vector<const CgsRecord*> picked;
  for (auto it = series.rbegin(); it != series.rend() && picked.size() < kWindow; ++it)
    if (it->label != CgsLabel::uncertain) picked.push_back(&*it);

  const auto winner = result ? go::winner_of(*result) : std::nullopt;
  if (picked.size() < kWindow) {
    v.verdict = OgsKind::undecided;
    if (result) v.correct = false;
    return v;
  }
  int black = 0;
  int white = 0;
  bool any_match = false;
  for (const auto* r : picked) {
    v.window.push_back(r->move_no);
    const auto side = side_of(r->label);
    (*side == go::Color::black ? black : white) += 1;
    if (winner && side == winner) any_match = true;
  }
  std::reverse(v.window.begin(), v.window.end());
  v.verdict = black > white   ? OgsKind::favorable_to_black
              : white > black ? OgsKind::favorable_to_white
                              : OgsKind::uncertain;
  if (result) v.correct = winner ? any_match : v.verdict == OgsKind::uncertain;
  return v;
}

inline OgsVerdict decide_ogs(int method, const std::vector<CgsRecord>& series, const std::optional<std::string>& result) {
  if (method == 1) return decide_ogs_method1(series, result);
  if (method == 2) return decide_ogs_method2(series, result);
  throw AssessmentError("OGS method must be 1 or 2");
}

// Shared, immutable systems built from the fitted scheme.
inline std::shared_ptr<const fml::FuzzySystem> shared_system(FmlVariant variant) {
  static const auto one = std::make_shared<const fml::FuzzySystem>(build_system(FmlVariant::fml1));
  static const auto two = std::make_shared<const fml::FuzzySystem>(build_system(FmlVariant::fml2));
  return variant == FmlVariant::fml1 ? one : two;
}

// Per-game pipeline state: feeds each (pre-move analysis, played move) pair
// through feature extraction and, past the opening, CGS inference.
class GameAssessor {
 public:
  struct Step {
    MoveFeatures features;
    std::optional<CgsRecord> cgs;
  };

  explicit GameAssessor(std::shared_ptr<const fml::FuzzySystem> system) : system_(std::move(system)) {
    tmr_[1].color = go::Color::white;
  }

  Step observe(const engine::MoveAnalysis& analysis, const go::Move& actual) {
    const auto c = index(actual.color);
    auto [f, next] = extract_features(analysis, actual, tmr_[c]);
    std::array<std::optional<MoveFeatures>, 2> latest = latest_;
    latest[c] = f;
    auto cgs = assess_move(latest[0], latest[1], *system_, actual.number);
    tmr_[c] = next;
    latest_ = latest;
    features_.push_back(f);
    if (cgs) series_.push_back(*cgs);
    return {f, cgs};
  }

  const fml::FuzzySystem& system() const { return *system_; }
  const std::vector<MoveFeatures>& features() const { return features_; }
  const std::vector<CgsRecord>& series() const { return series_; }
  const TmrState& tmr(go::Color color) const { return tmr_[index(color)]; }
  const std::optional<MoveFeatures>& latest(go::Color color) const { return latest_[index(color)]; }

 private:
  static std::size_t index(go::Color c) { return c == go::Color::black ? 0 : 1; }

  std::shared_ptr<const fml::FuzzySystem> system_;
  std::array<TmrState, 2> tmr_{};
  std::array<std::optional<MoveFeatures>, 2> latest_{};
  std::vector<MoveFeatures> features_;
  std::vector<CgsRecord> series_;
};

}  // namespace fdaa::assessment
