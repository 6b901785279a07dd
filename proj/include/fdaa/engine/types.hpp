#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fdaa/error.hpp"
#include "fdaa/go/board.hpp"

namespace fdaa::engine {

inline constexpr std::size_t kMaxSuggestions = 5;

struct Suggestion {
  go::Coord coord;
  int sn = 0;     // MCTS simulation count
  double wr = 0;  // win rate for the side to move

  friend bool operator==(const Suggestion&, const Suggestion&) = default;
};

struct MoveAnalysis {
  int move_no = 1;  // ply about to be played
  go::Color color = go::Color::black;
  std::vector<Suggestion> suggestions;  // sn descending, at most five

  friend bool operator==(const MoveAnalysis&, const MoveAnalysis&) = default;
};

enum class EngineKind { stub, gtp, http };

inline std::string to_string(EngineKind k) {
  switch (k) {
    case EngineKind::stub: return "stub";
    case EngineKind::gtp: return "gtp";
    case EngineKind::http: return "http";
  }
  return "stub";
}

inline EngineKind parse_engine_kind(const std::string& s) {
  if (s == "stub") return EngineKind::stub;
  if (s == "gtp" || s == "gtp-subprocess") return EngineKind::gtp;
  if (s == "http" || s == "remote-http") return EngineKind::http;
  throw Error("unknown engine kind '" + s + "'");
}

// Knobs of the built-in stub engine. `drift` is the per-ply win-rate shift
// toward Black (negative favours White); unset derives one from the seed.
// From `settle_ply` on (0 disables) the advantage decays back to even over
// ten plies, which produces games that finish on an uncertain note.
struct StubOptions {
  std::optional<double> drift;
  int settle_ply = 0;

  friend bool operator==(const StubOptions&, const StubOptions&) = default;
};

struct EngineConfig {
  EngineKind kind = EngineKind::stub;
  std::string endpoint;              // http: base URL, e.g. http://127.0.0.1:8080
  std::vector<std::string> command;  // gtp: argv of the engine process
  int simulation_setting = 20000;
  std::chrono::milliseconds timeout{5000};
  std::uint64_t stub_seed = 42;
  StubOptions stub;
  double komi = 7.5;

  void validate() const {
    if (simulation_setting <= 0) throw Error("simulation setting must be positive");
    if (kind == EngineKind::gtp && command.empty()) throw Error("gtp engine needs a command line");
    if (kind == EngineKind::http && endpoint.empty()) throw Error("http engine needs an endpoint");
  }

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

// Enforces the MoveAnalysis invariants on raw engine output: drops
// duplicate and illegal points, sorts by sn descending (stable), keeps five.
inline MoveAnalysis normalize_analysis(std::vector<Suggestion> raw, const go::BoardState& board) {
  MoveAnalysis out;
  out.move_no = board.ply + 1;
  out.color = board.to_move;
  std::stable_sort(raw.begin(), raw.end(),
                   [](const Suggestion& a, const Suggestion& b) { return a.sn > b.sn; });
  std::set<go::Coord> seen;
  for (auto& s : raw) {
    if (s.sn < 0 || !(s.wr >= 0.0 && s.wr <= 1.0)) continue;
    if (!seen.insert(s.coord).second) continue;
    if (!s.coord.is_pass() && !go::is_legal(board, s.coord)) continue;
    out.suggestions.push_back(s);
    if (out.suggestions.size() == kMaxSuggestions) break;
  }
  if (out.suggestions.empty())
    throw EngineError(EngineError::Kind::malformed, "engine returned no usable suggestions");
  return out;
}

}  // namespace fdaa::engine
