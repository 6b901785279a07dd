#pragma once

// Synthetic game records played against the stub: each move follows one of
// the stub's suggestions with the configured probabilities, otherwise it is
// a random legal point.

#include <random>

#include "fdaa/replay/replay.hpp"

namespace fdaa::replay {

struct SynthOptions {
  std::uint64_t seed = 1;  // move choice; the engine seed lives in `engine`
  int moves = 120;
  engine::EngineConfig engine;
  std::array<double, 5> follow{0.40, 0.15, 0.10, 0.05, 0.05};
  std::optional<std::string> result;  // unset: favoured side of the stub drift, by resignation
  bool omit_result = false;
  std::map<std::string, std::string> metadata;
};

inline go::GameRecord synthesize_game(const SynthOptions& opt) {
  if (opt.moves < 0) throw Error("move count must be non-negative");
  auto session = engine::open_session(opt.engine);
  std::mt19937_64 rng(opt.seed ^ 0xA5A5F00DULL);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  go::GameRecord game;
  game.komi = opt.engine.komi;
  game.metadata = opt.metadata;
  for (int i = 0; i < opt.moves; ++i) {
    const auto analysis = session.request_analysis();
    const auto& board = session.board();
    go::Coord choice = go::Coord::pass();
    double u = unit();
    bool followed = false;
    for (std::size_t k = 0; k < analysis.suggestions.size() && k < opt.follow.size(); ++k) {
      if (u < opt.follow[k]) {
        choice = analysis.suggestions[k].coord;
        followed = true;
        break;
      }
      u -= opt.follow[k];
    }
    if (!followed) {
      auto legal = go::legal_moves(board);
      legal.pop_back();
      if (!legal.empty()) choice = legal[static_cast<std::size_t>(rng() % legal.size())];
    }
    go::Move m{board.to_move, choice, board.ply + 1};
    session.play_move(m);
    game.moves.push_back(m);
  }
  if (opt.result) {
    game.result = opt.result;
  } else if (!opt.omit_result && opt.engine.kind == engine::EngineKind::stub) {
    game.result = engine::stub_drift(opt.engine.stub_seed, opt.engine.stub) >= 0 ? "B+R" : "W+R";
  }
  return game;
}

struct Suite {
  std::vector<GameEntry> games;
  std::vector<std::string> results;
  int settled = 0;  // games whose advantage fades before the end
};

// Twenty-game stub suite for the method comparison. Every fourth game (and
// one more) has its advantage fade out shortly before the end, so the last
// records turn uncertain while the earlier window still names the winner.
inline Suite build_method_suite(const fs::path& dir, int count = 20, int moves = 120, int simulations = 3000) {
  fs::create_directories(dir);
  Suite suite;
  for (int g = 0; g < count; ++g) {
    const bool settle = g % 4 == 0 || g == count - 1;
    const double drift = (g % 2 == 0 ? 1.0 : -1.0) * (0.0035 + 0.0001 * (g % 5));
    GameEntry e;
    e.seed = 9000 + static_cast<std::uint64_t>(g);
    e.drift = drift;
    if (settle) e.settle_ply = moves - 24;
    SynthOptions opt;
    opt.seed = 500 + static_cast<std::uint64_t>(g);
    opt.moves = moves;
    opt.engine.simulation_setting = simulations;
    opt.engine.stub_seed = *e.seed;
    opt.engine.stub.drift = drift;
    opt.engine.stub.settle_ply = e.settle_ply.value_or(0);
    opt.metadata = {{"PB", "synthetic-black-" + std::to_string(g)}, {"PW", "synthetic-white-" + std::to_string(g)}};
    const auto game = synthesize_game(opt);
    e.path = (dir / ("suite-" + std::to_string(g) + ".sgf")).string();
    write_text(e.path, go::serialize_sgf(game));
    suite.games.push_back(e);
    suite.results.push_back(game.result.value_or(""));
    suite.settled += settle;
  }
  return suite;
}

}  // namespace fdaa::replay
