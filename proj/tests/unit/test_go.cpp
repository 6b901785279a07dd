#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fdaa/go/sgf.hpp"

using namespace fdaa;
using namespace fdaa::go;

namespace {

BoardState setup(std::initializer_list<std::pair<int, int>> black, std::initializer_list<std::pair<int, int>> white,
                 Color to_move = Color::black) {
  auto s = empty_board();
  for (auto [c, r] : black) s = place_setup_stone(s, Color::black, Coord(c, r));
  for (auto [c, r] : white) s = place_setup_stone(s, Color::white, Coord(c, r));
  return with_to_move(s, to_move);
}

int stones(const BoardState& s) { return s.stone_count(); }

bool every_group_breathes(const BoardState& s) {
  for (int p = 0; p < kPoints; ++p)
    if (s.grid[p] != Stone::empty && !group_has_liberty(s, p)) return false;
  return true;
}

// Reference legality: copy the board and try the move.
std::set<Coord> legal_by_filter(const BoardState& s) {
  std::set<Coord> out{Coord::pass()};
  for (int p = 0; p < kPoints; ++p) {
    try {
      apply_move(s, {s.to_move, Coord::from_index(p), s.ply + 1});
      out.insert(Coord::from_index(p));
    } catch (const IllegalMove&) {
    }
  }
  return out;
}

BoardState random_position(std::mt19937_64& rng, int plies, std::vector<Move>* record = nullptr) {
  auto s = empty_board();
  for (int i = 0; i < plies; ++i) {
    auto legal = legal_moves(s);
    Coord c = legal[rng() % legal.size()];
    if (c.is_pass() && legal.size() > 1 && rng() % 8 != 0) c = legal[rng() % (legal.size() - 1)];
    Move m{s.to_move, c, s.ply + 1};
    s = apply_move(s, m);
    if (record) record->push_back(m);
  }
  return s;
}

}  // namespace

TEST(GoBoard, CaptureRemovesGroupAndCounts) {
  // White pair on the edge, last liberty at (2,0)
  auto s = setup({{0, 1}, {1, 1}}, {{0, 0}, {1, 0}});
  s = apply_move(s, {Color::black, Coord(2, 0), 1});
  EXPECT_EQ(s.at(Coord(0, 0)), Stone::empty);
  EXPECT_EQ(s.at(Coord(1, 0)), Stone::empty);
  EXPECT_EQ(s.captures_black, 2);
  EXPECT_EQ(s.captures_white, 0);
  EXPECT_EQ(s.to_move, Color::white);
}

TEST(GoBoard, SuicideRejected) {
  const auto s = setup({}, {{1, 0}, {0, 1}});
  try {
    apply_move(s, {Color::black, Coord(0, 0), 1});
    FAIL();
  } catch (const IllegalMove& e) {
    EXPECT_EQ(e.reason(), IllegalMove::Reason::suicide);
  }
}

TEST(GoBoard, KoRecaptureRejected) {
  auto s = setup({{0, 1}, {1, 0}, {1, 2}}, {{1, 1}, {3, 1}, {2, 0}, {2, 2}});
  s = apply_move(s, {Color::black, Coord(2, 1), 1});
  ASSERT_TRUE(s.ko_point.has_value());
  EXPECT_EQ(*s.ko_point, Coord(1, 1));
  try {
    apply_move(s, {Color::white, Coord(1, 1), 2});
    FAIL();
  } catch (const IllegalMove& e) {
    EXPECT_EQ(e.reason(), IllegalMove::Reason::ko);
  }
  const auto legal = legal_moves(s);
  EXPECT_EQ(std::count(legal.begin(), legal.end(), Coord(1, 1)), 0);
  // after a tenuki the ko may be retaken
  s = apply_move(s, {Color::white, Coord(18, 18), 2});
  s = apply_move(s, {Color::black, Coord(17, 18), 3});
  EXPECT_NO_THROW(apply_move(s, {Color::white, Coord(1, 1), 4}));
}

TEST(GoBoard, OccupiedAndWrongColor) {
  auto s = apply_move(empty_board(), {Color::black, Coord(3, 3), 1});
  EXPECT_THROW(apply_move(s, {Color::white, Coord(3, 3), 2}), IllegalMove);
  EXPECT_THROW(apply_move(s, {Color::black, Coord(4, 4), 2}), IllegalMove);
}

TEST(GoBoard, EmptyBoardLegalMoves) {
  const auto legal = legal_moves(empty_board());
  EXPECT_EQ(legal.size(), 362u);
  EXPECT_TRUE(legal.back().is_pass());
  EXPECT_EQ(std::set<Coord>(legal.begin(), legal.end()).size(), 362u);
}

TEST(GoBoard, LegalMovesMatchFilterOnRandomPositions) {
  std::mt19937_64 rng(2024);
  for (int g = 0; g < 50; ++g) {
    const auto s = random_position(rng, 20 + static_cast<int>(rng() % 260));
    const auto fast = legal_moves(s);
    EXPECT_EQ(std::set<Coord>(fast.begin(), fast.end()), legal_by_filter(s)) << "position " << g;
    const auto other = with_to_move(s, opponent(s.to_move));
    const auto fast_other = legal_moves(s, opponent(s.to_move));
    EXPECT_EQ(std::set<Coord>(fast_other.begin(), fast_other.end()), legal_by_filter(other));
  }
}

TEST(GoBoard, InvariantsAlongRandomGames) {
  std::mt19937_64 rng(99);
  for (int g = 0; g < 20; ++g) {
    auto s = empty_board();
    for (int i = 0; i < 250; ++i) {
      auto legal = legal_moves(s);
      const Coord c = legal[rng() % (legal.size() > 1 ? legal.size() - 1 : 1)];
      const auto next = apply_move(s, {s.to_move, c, s.ply + 1});
      ASSERT_TRUE(every_group_breathes(next));
      if (!c.is_pass()) {
        const int captured = (next.captures_black - s.captures_black) + (next.captures_white - s.captures_white);
        ASSERT_EQ(stones(s) + 1 - captured, stones(next));
      }
      ASSERT_EQ(next.position_hash, compute_hash(next));
      s = next;
    }
  }
}

TEST(GoBoard, HashIndependentOfOrder) {
  auto a = empty_board();
  a = apply_move(a, {Color::black, Coord(3, 3), 1});
  a = apply_move(a, {Color::white, Coord(15, 15), 2});
  a = apply_move(a, {Color::black, Coord(2, 2), 3});
  auto b = empty_board();
  b = apply_move(b, {Color::black, Coord(2, 2), 1});
  b = apply_move(b, {Color::white, Coord(15, 15), 2});
  b = apply_move(b, {Color::black, Coord(3, 3), 3});
  EXPECT_EQ(a.position_hash, b.position_hash);
  const auto c = setup({{3, 3}, {2, 2}}, {{15, 15}}, Color::white);
  EXPECT_EQ(c.position_hash, a.position_hash);
  EXPECT_NE(with_to_move(c, Color::black).position_hash, a.position_hash);
}

TEST(GoCoord, GtpVertexCases) {
  EXPECT_EQ(parse_gtp_vertex("F7"), Coord(5, 6));
  EXPECT_EQ(parse_gtp_vertex("f7"), Coord(5, 6));
  EXPECT_EQ(parse_gtp_vertex("J1"), Coord(8, 0));
  EXPECT_EQ(parse_gtp_vertex("T19"), Coord(18, 18));
  EXPECT_TRUE(parse_gtp_vertex("PASS").is_pass());
  EXPECT_THROW(parse_gtp_vertex("I5"), Error);
  EXPECT_THROW(parse_gtp_vertex("U1"), Error);
  EXPECT_THROW(parse_gtp_vertex("A20"), Error);
  EXPECT_THROW(parse_gtp_vertex("A0"), Error);
  EXPECT_THROW(parse_gtp_vertex("A05"), Error);
  EXPECT_THROW(parse_gtp_vertex(""), Error);
}

TEST(GoCoord, GtpRoundTripAllPoints) {
  std::set<std::string> texts;
  for (int p = 0; p < kPoints; ++p) {
    const auto c = Coord::from_index(p);
    const auto text = format_gtp_vertex(c);
    EXPECT_EQ(text.find('I'), std::string::npos);
    EXPECT_EQ(parse_gtp_vertex(text), c);
    texts.insert(text);
  }
  EXPECT_EQ(texts.size(), 361u);
  EXPECT_EQ(format_gtp_vertex(Coord::pass()), "pass");
  EXPECT_EQ(parse_gtp_vertex(format_gtp_vertex(Coord::pass())), Coord::pass());
}

TEST(GoCoord, SgfAndGtpAgree) {
  EXPECT_EQ(parse_sgf_point("fm"), parse_gtp_vertex("F7"));
  for (int p = 0; p < kPoints; ++p) {
    const auto c = Coord::from_index(p);
    EXPECT_EQ(parse_sgf_point(format_sgf_point(c)), c);
    EXPECT_EQ(parse_gtp_vertex(format_gtp_vertex(parse_sgf_point(format_sgf_point(c)))), c);
  }
  EXPECT_TRUE(parse_sgf_point("").is_pass());
  EXPECT_TRUE(parse_sgf_point("tt").is_pass());
  EXPECT_THROW(parse_sgf_point("zz"), SgfError);
}

TEST(GoSgf, ParsesSmallRecord) {
  const auto g = parse_sgf("(;FF[4]SZ[19]KM[7.5];B[pd];W[dp])");
  ASSERT_EQ(g.moves.size(), 2u);
  EXPECT_EQ(g.komi, 7.5);
  EXPECT_EQ(g.moves[0].color, Color::black);
  EXPECT_EQ(g.moves[0].coord, parse_gtp_vertex("Q16"));
  EXPECT_EQ(g.moves[1].coord, parse_gtp_vertex("D4"));
  EXPECT_EQ(g.moves[1].number, 2);
  EXPECT_FALSE(g.result.has_value());
}

TEST(GoSgf, PassConventions) {
  for (const char* text : {"(;SZ[19];B[])", "(;SZ[19];B[tt])"}) {
    const auto g = parse_sgf(text);
    ASSERT_EQ(g.moves.size(), 1u);
    EXPECT_EQ(g.moves[0].color, Color::black);
    EXPECT_TRUE(g.moves[0].coord.is_pass());
  }
}

TEST(GoSgf, MainLineOnlyAndAnnotationsDropped) {
  const auto g = parse_sgf("(;GM[1]PB[Cho \\] Chikun]RE[W+R];B[pd]C[nice];W[dp](;B[pp])(;B[dd]))");
  ASSERT_EQ(g.moves.size(), 3u);
  EXPECT_EQ(g.moves[2].coord, parse_gtp_vertex("Q4"));
  EXPECT_EQ(g.metadata.at("PB"), "Cho ] Chikun");
  EXPECT_EQ(g.result, "W+R");
  EXPECT_EQ(winner_of(*g.result), Color::white);
}

TEST(GoSgf, Errors) {
  EXPECT_THROW(parse_sgf("(;SZ[13];B[aa])"), SgfError);
  EXPECT_THROW(parse_sgf("(;SZ[19];B[pd];B[dp])"), SgfError);
  EXPECT_THROW(parse_sgf("(;SZ[19];B[pd];W[pd])"), SgfError);
  EXPECT_THROW(parse_sgf("(;SZ[19];W[pd])"), SgfError);
  EXPECT_THROW(parse_sgf("(;SZ[19];B[pd]"), SgfError);
  EXPECT_THROW(parse_sgf(""), SgfError);
  try {
    parse_sgf("(;SZ[19];B[pd];W[dd];B[dd])");
    FAIL();
  } catch (const SgfError& e) {
    EXPECT_NE(std::string(e.what()).find("ply 3"), std::string::npos) << e.what();
  }
}

TEST(GoSgf, HandicapWhiteFirst) {
  const auto g = parse_sgf("(;SZ[19]HA[2]AB[dd][pp];W[dp])");
  EXPECT_EQ(g.handicap, 2);
  EXPECT_EQ(g.setup_black.size(), 2u);
  EXPECT_EQ(initial_position(g).to_move, Color::white);
  EXPECT_EQ(parse_sgf(serialize_sgf(g)), g);
}

TEST(GoSgf, RoundTrip120Moves) {
  std::mt19937_64 rng(120);
  GameRecord g;
  g.komi = 7.5;
  g.result = "B+R";
  random_position(rng, 120, &g.moves);
  ASSERT_EQ(g.moves.size(), 120u);
  EXPECT_EQ(parse_sgf(serialize_sgf(g)), g);
}

TEST(GoSgf, RoundTripRandomCorpus) {
  std::mt19937_64 rng(100);
  const std::vector<std::string> results{"B+R", "W+0.5", "B+12.5", "Void", "0"};
  for (int i = 0; i < 100; ++i) {
    GameRecord g;
    g.komi = (static_cast<int>(rng() % 31) - 10) * 0.5;
    if (rng() % 3) g.result = results[rng() % results.size()];
    if (rng() % 2) g.metadata["PB"] = "player [" + std::to_string(i) + "] \\";
    if (rng() % 2) g.metadata["BR"] = std::to_string(1 + rng() % 9) + "d";
    random_position(rng, static_cast<int>(rng() % 200), &g.moves);
    const auto text = serialize_sgf(g);
    const auto back = parse_sgf(text);
    ASSERT_EQ(back, g) << text;
    ASSERT_EQ(serialize_sgf(back), text);
  }
}

TEST(GoSgf, WinnerOf) {
  EXPECT_EQ(winner_of("B+R"), Color::black);
  EXPECT_EQ(winner_of("W+0.5"), Color::white);
  EXPECT_FALSE(winner_of("0").has_value());
  EXPECT_FALSE(winner_of("Void").has_value());
  EXPECT_FALSE(winner_of("").has_value());
}
