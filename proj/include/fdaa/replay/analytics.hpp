#pragma once

// Hint-usage aggregates over replayed games: mean top-move rate per player
// and per rank bucket, and how often each suggestion rank was followed.

#include <cctype>

#include "fdaa/replay/replay.hpp"

namespace fdaa::replay {

inline std::string rank_bucket(std::string_view rank) {
  if (rank.empty()) return "unknown";
  switch (std::tolower(static_cast<unsigned char>(rank.back()))) {
    case 'k': return "kyu";
    case 'd': return "dan";
    case 'p': return "pro";
    default: return "unknown";
  }
}

struct PlayerStats {
  std::string rank;
  int games = 0;
  std::array<double, 3> tmr_sum{};
  std::array<int, 6> matches{};  // ranks 1..5, then misses
};

struct HintAnalytics {
  std::map<std::string, PlayerStats> players;
  std::map<std::string, std::pair<int, double>> buckets;  // games, tmr#1 sum
};

inline HintAnalytics hint_analytics(const std::vector<GameReport>& reports) {
  HintAnalytics a;
  for (const auto& r : reports) {
    for (go::Color c : {go::Color::black, go::Color::white}) {
      const bool black = c == go::Color::black;
      const auto name_it = r.players.find(black ? "PB" : "PW");
      const auto rank_it = r.players.find(black ? "BR" : "WR");
      const std::string name = name_it == r.players.end() ? r.game_id + (black ? ":black" : ":white") : name_it->second;
      const std::string rank = rank_it == r.players.end() ? "" : rank_it->second;
      const auto& tmr = black ? r.btmr : r.wtmr;
      auto& p = a.players[name];
      if (!rank.empty()) p.rank = rank;
      ++p.games;
      for (std::size_t i = 0; i < 3; ++i) p.tmr_sum[i] += tmr[i];
      for (const auto& f : r.features)
        if (f.color == c) ++p.matches[f.matched_rank ? static_cast<std::size_t>(*f.matched_rank - 1) : 5];
      auto& b = a.buckets[rank_bucket(rank)];
      ++b.first;
      b.second += tmr[0];
    }
  }
  return a;
}

inline void write_hint_analytics(const HintAnalytics& a, const fs::path& dir) {
  fs::create_directories(dir);
  std::ostringstream players, buckets, hist;
  players << "player,rank,games,mean_tmr1,mean_tmr2,mean_tmr3\n";
  hist << "player,rank1,rank2,rank3,rank4,rank5,miss\n";
  for (const auto& [name, p] : a.players) {
    players << name << "," << p.rank << "," << p.games;
    for (double s : p.tmr_sum) players << "," << util::shortest(s / p.games);
    players << "\n";
    hist << name;
    for (int m : p.matches) hist << "," << m;
    hist << "\n";
  }
  buckets << "bucket,games,mean_tmr1\n";
  for (const auto& [bucket, v] : a.buckets)
    buckets << bucket << "," << v.first << "," << util::shortest(v.second / v.first) << "\n";
  write_text(dir / "hint_players.csv", players.str());
  write_text(dir / "hint_rank_buckets.csv", buckets.str());
  write_text(dir / "hint_match_histogram.csv", hist.str());
}

}  // namespace fdaa::replay
