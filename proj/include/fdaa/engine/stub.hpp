#pragma once

// Deterministic stand-in for a real analysis engine. Output is a pure
// function of (seed, position, ply, simulation setting, options).

#include <algorithm>
#include <cmath>
#include <random>

#include "fdaa/engine/types.hpp"

namespace fdaa::engine {

namespace detail {

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t state = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  return go::detail::splitmix64(state);
}

}  // namespace detail

// Per-ply advantage toward Black implied by the seed when no drift is set.
inline double stub_drift(std::uint64_t seed, const StubOptions& options) {
  if (options.drift) return *options.drift;
  const std::uint64_t h = detail::mix(seed, 0xD41F7ULL);
  const double magnitude = 0.003 + static_cast<double>(h % 1000) / 1000.0 * 0.002;
  return (h >> 32) & 1 ? magnitude : -magnitude;
}

// Black's expected win rate at a given ply.
inline double stub_black_win_rate(std::uint64_t seed, int ply, const StubOptions& options) {
  constexpr double kCap = 0.28;
  const double drift = stub_drift(seed, options);
  auto advantage_at = [&](int p) { return std::clamp(drift * p, -kCap, kCap); };
  double adv = advantage_at(ply);
  if (options.settle_ply > 0 && ply >= options.settle_ply) {
    const double fade = std::max(0.0, 1.0 - (ply - options.settle_ply) / 10.0);
    adv = advantage_at(options.settle_ply) * fade;
  }
  return 0.5 + adv;
}

inline MoveAnalysis stub_analyze(std::uint64_t seed, const go::BoardState& board,
                                 int simulation_setting, const StubOptions& options = {}) {
  std::uint64_t key = detail::mix(seed, board.position_hash);
  key = detail::mix(key, static_cast<std::uint64_t>(board.ply));
  key = detail::mix(key, static_cast<std::uint64_t>(simulation_setting));
  // Hand-rolled draws: std distributions differ between standard libraries.
  std::mt19937_64 rng(key);
  auto unit = [](std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; };

  MoveAnalysis out;
  out.move_no = board.ply + 1;
  out.color = board.to_move;

  auto legal = go::legal_moves(board);
  legal.pop_back();  // PASS is only suggested when nothing else is legal
  if (legal.empty()) {
    out.suggestions.push_back({go::Coord::pass(), simulation_setting / 2, 0.5});
    return out;
  }

  const std::size_t k = std::min(kMaxSuggestions, legal.size());
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (legal.size() - i));
    std::swap(legal[i], legal[j]);
  }

  // Visit budget: a dominant first choice, geometric-ish tail.
  const double budget = simulation_setting * (0.55 + 0.40 * unit(rng));
  std::vector<double> shares(k);
  shares[0] = 0.45 + 0.30 * unit(rng);
  double rest = 1.0 - shares[0];
  for (std::size_t i = 1; i < k; ++i) {
    const double take = (i + 1 == k) ? rest : rest * (0.35 + 0.30 * unit(rng));
    shares[i] = take;
    rest -= take;
  }
  std::sort(shares.begin() + 1, shares.end(), std::greater<>());

  const double black_wr = stub_black_win_rate(seed, board.ply, options);
  const double mover_wr = board.to_move == go::Color::black ? black_wr : 1.0 - black_wr;
  for (std::size_t i = 0; i < k; ++i) {
    Suggestion s;
    s.coord = legal[i];
    s.sn = static_cast<int>(std::floor(budget * shares[i]));
    const double noise = (unit(rng) - 0.5) * 0.04;
    const double wr = std::clamp(mover_wr - 0.01 * static_cast<double>(i) + noise, 0.2, 0.8);
    s.wr = std::round(wr * 1e5) / 1e5;
    out.suggestions.push_back(s);
  }
  std::stable_sort(out.suggestions.begin(), out.suggestions.end(),
                   [](const Suggestion& a, const Suggestion& b) { return a.sn > b.sn; });
  return out;
}

}  // namespace fdaa::engine
