#pragma once

// Top-move rate: weighted share of a player's moves that landed on one of
// the engine's five suggestions, in percent.

#include <array>
#include <numeric>

#include "fdaa/error.hpp"
#include "fdaa/go/coord.hpp"

namespace fdaa::assessment {

struct TmrProfile {
  std::array<double, 5> rank_weights{};  // w1..w5
  double miss_weight = 0.0;              // w6, subtracted

  friend bool operator==(const TmrProfile&, const TmrProfile&) = default;
};

inline constexpr TmrProfile kTmrProfile1{{1.0, 1.0, 1.0, 1.0, 1.0}, 0.0};
inline constexpr TmrProfile kTmrProfile2{{1.0, 0.8, 0.6, 0.4, 0.2}, 0.1};
inline constexpr TmrProfile kTmrProfile3{{1.0, 0.8, 0.6, 0.4, 0.2}, -0.1};
inline constexpr std::array<TmrProfile, 3> kTmrProfiles{kTmrProfile1, kTmrProfile2, kTmrProfile3};

struct TmrState {
  go::Color color = go::Color::black;
  std::array<int, 5> matched{};  // x1..x5
  int missed = 0;                // x6
  int n = 0;                     // analysed moves of this colour

  bool consistent() const { return n == std::accumulate(matched.begin(), matched.end(), 0) + missed; }

  friend bool operator==(const TmrState&, const TmrState&) = default;
};

inline double compute_tmr(const TmrState& state, const TmrProfile& profile) {
  if (state.n <= 0) throw AssessmentError("top-move rate is undefined before the first analysed move");
  const double n = static_cast<double>(state.n);
  double sum = 0.0;
  for (std::size_t i = 0; i < 5; ++i) sum += state.matched[i] / n * profile.rank_weights[i];
  sum -= state.missed / n * profile.miss_weight;
  return sum * 100.0;
}

}  // namespace fdaa::assessment
