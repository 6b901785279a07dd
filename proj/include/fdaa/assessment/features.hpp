#pragma once

#include <optional>
#include <utility>

#include "fdaa/assessment/tmr.hpp"
#include "fdaa/engine/types.hpp"

namespace fdaa::assessment {

struct MoveFeatures {
  int move_no = 0;
  go::Color color = go::Color::black;
  go::Coord coord;
  std::optional<int> matched_rank;  // 1..5, nullopt when the move missed the top five
  int sn = 0;
  double wr = 0.0;
  std::array<double, 3> tmr_after{};  // profiles #1..#3, percent

  friend bool operator==(const MoveFeatures&, const MoveFeatures&) = default;
};

// Matches the played move against the analysis taken before it. A miss
// falls back to the first suggestion's sn/wr so every feature stays defined.
inline std::pair<MoveFeatures, TmrState> extract_features(const engine::MoveAnalysis& analysis,
                                                          const go::Move& actual, TmrState state) {
  if (analysis.suggestions.empty()) throw AssessmentError("analysis has no suggestions");
  if (analysis.color != actual.color)
    throw AssessmentError("analysis is for " + go::to_string(analysis.color) + " but " +
                          go::to_string(actual.color) + " moved");
  if (analysis.move_no != actual.number)
    throw AssessmentError("analysis is for move " + std::to_string(analysis.move_no) + ", not move " +
                          std::to_string(actual.number));
  if (state.color != actual.color) throw AssessmentError("top-move state belongs to the other colour");

  MoveFeatures f;
  f.move_no = actual.number;
  f.color = actual.color;
  f.coord = actual.coord;
  const auto& top = analysis.suggestions;
  const engine::Suggestion* chosen = &top.front();
  for (std::size_t k = 0; k < top.size() && k < engine::kMaxSuggestions; ++k) {
    if (top[k].coord == actual.coord) {
      f.matched_rank = static_cast<int>(k) + 1;
      chosen = &top[k];
      break;
    }
  }
  if (f.matched_rank) {
    ++state.matched[*f.matched_rank - 1];
  } else {
    ++state.missed;
  }
  ++state.n;
  f.sn = chosen->sn;
  f.wr = chosen->wr;
  for (std::size_t p = 0; p < kTmrProfiles.size(); ++p) f.tmr_after[p] = compute_tmr(state, kTmrProfiles[p]);
  return {f, state};
}

}  // namespace fdaa::assessment
