#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fdaa/go/coord.hpp"

namespace fdaa::go {

enum class Stone : std::uint8_t { empty, black, white };

constexpr Stone stone_of(Color c) { return c == Color::black ? Stone::black : Stone::white; }

class IllegalMove : public Error {
 public:
  enum class Reason { occupied, suicide, ko, wrong_color };

  IllegalMove(Reason reason, const std::string& what) : Error(what), reason_(reason) {}
  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Zobrist {
  std::array<std::array<std::uint64_t, 2>, kPoints> stones{};
  std::uint64_t white_to_move = 0;
};

constexpr Zobrist make_zobrist() {
  Zobrist z;
  std::uint64_t state = 0x5eed'60b0'a7d0'0001ULL;
  for (auto& point : z.stones) {
    point[0] = splitmix64(state);
    point[1] = splitmix64(state);
  }
  z.white_to_move = splitmix64(state);
  return z;
}

inline constexpr Zobrist kZobrist = make_zobrist();

inline int neighbors(int index, std::array<int, 4>& out) {
  const int col = index % kBoardSize;
  const int row = index / kBoardSize;
  int n = 0;
  if (col > 0) out[n++] = index - 1;
  if (col < kBoardSize - 1) out[n++] = index + 1;
  if (row > 0) out[n++] = index - kBoardSize;
  if (row < kBoardSize - 1) out[n++] = index + kBoardSize;
  return n;
}

}  // namespace detail

// Immutable-by-convention snapshot; apply_move returns a fresh value.
struct BoardState {
  std::array<Stone, kPoints> grid{};
  Color to_move = Color::black;
  std::optional<Coord> ko_point;
  int captures_black = 0;  // stones captured by Black
  int captures_white = 0;  // stones captured by White
  std::uint64_t position_hash = 0;
  int ply = 0;  // moves applied so far, passes included

  Stone at(Coord c) const { return grid[c.index()]; }

  int stone_count() const {
    int n = 0;
    for (auto s : grid) n += s != Stone::empty;
    return n;
  }

  friend bool operator==(const BoardState&, const BoardState&) = default;
};

inline std::uint64_t compute_hash(const BoardState& state) {
  std::uint64_t h = 0;
  for (int i = 0; i < kPoints; ++i) {
    if (state.grid[i] == Stone::black) h ^= detail::kZobrist.stones[i][0];
    if (state.grid[i] == Stone::white) h ^= detail::kZobrist.stones[i][1];
  }
  if (state.to_move == Color::white) h ^= detail::kZobrist.white_to_move;
  return h;
}

inline BoardState empty_board() {
  BoardState s;
  s.position_hash = compute_hash(s);
  return s;
}

// Collects the group containing `index` and reports whether it has any liberty.
inline bool group_has_liberty(const BoardState& s, int index, std::vector<int>* members = nullptr) {
  const Stone color = s.grid[index];
  std::array<bool, kPoints> seen{};
  std::vector<int> stack{index};
  seen[index] = true;
  bool liberty = false;
  std::array<int, 4> nb{};
  while (!stack.empty()) {
    const int p = stack.back();
    stack.pop_back();
    if (members) members->push_back(p);
    const int n = detail::neighbors(p, nb);
    for (int k = 0; k < n; ++k) {
      const int q = nb[k];
      if (s.grid[q] == Stone::empty) {
        liberty = true;
        if (!members) return true;
      } else if (s.grid[q] == color && !seen[q]) {
        seen[q] = true;
        stack.push_back(q);
      }
    }
  }
  return liberty;
}

// Handicap or setup placement: no captures, no turn change.
inline BoardState place_setup_stone(BoardState s, Color color, Coord c) {
  if (c.is_pass()) throw Error("cannot place a setup stone at pass");
  s.grid[c.index()] = stone_of(color);
  s.position_hash = compute_hash(s);
  return s;
}

inline BoardState with_to_move(BoardState s, Color color) {
  if (s.to_move != color) {
    s.to_move = color;
    s.ko_point.reset();
    s.position_hash = compute_hash(s);
  }
  return s;
}

inline BoardState apply_move(BoardState s, const Move& move) {
  if (move.color != s.to_move)
    throw IllegalMove(IllegalMove::Reason::wrong_color,
                      "it is " + to_string(s.to_move) + "'s turn, not " + to_string(move.color) + "'s");
  if (move.coord.is_pass()) {
    s.to_move = opponent(s.to_move);
    s.ko_point.reset();
    s.position_hash = compute_hash(s);
    ++s.ply;
    return s;
  }
  const int p = move.coord.index();
  if (s.grid[p] != Stone::empty)
    throw IllegalMove(IllegalMove::Reason::occupied, format_gtp_vertex(move.coord) + " is occupied");
  if (s.ko_point && *s.ko_point == move.coord)
    throw IllegalMove(IllegalMove::Reason::ko, format_gtp_vertex(move.coord) + " retakes a ko");

  const Stone own = stone_of(move.color);
  const Stone other = stone_of(opponent(move.color));
  s.grid[p] = own;

  std::array<int, 4> nb{};
  const int n = detail::neighbors(p, nb);
  std::vector<int> captured;
  for (int k = 0; k < n; ++k) {
    const int q = nb[k];
    if (s.grid[q] != other) continue;
    std::vector<int> group;
    if (!group_has_liberty(s, q, &group)) {
      for (int g : group) {
        if (s.grid[g] == other) {
          s.grid[g] = Stone::empty;
          captured.push_back(g);
        }
      }
    }
  }

  std::vector<int> own_group;
  if (!group_has_liberty(s, p, &own_group))
    throw IllegalMove(IllegalMove::Reason::suicide, format_gtp_vertex(move.coord) + " is suicide");

  s.ko_point.reset();
  if (captured.size() == 1 && own_group.size() == 1) {
    int liberties = 0;
    for (int k = 0; k < n; ++k) liberties += s.grid[nb[k]] == Stone::empty;
    if (liberties == 1) s.ko_point = Coord::from_index(captured.front());
  }

  if (move.color == Color::black) {
    s.captures_black += static_cast<int>(captured.size());
  } else {
    s.captures_white += static_cast<int>(captured.size());
  }
  s.to_move = opponent(s.to_move);
  s.position_hash = compute_hash(s);
  ++s.ply;
  return s;
}

inline bool is_legal(const BoardState& s, Coord c) {
  try {
    apply_move(s, Move{s.to_move, c, s.ply + 1});
    return true;
  } catch (const IllegalMove&) {
    return false;
  }
}

// Legal points for the side to move, PASS last.
inline std::vector<Coord> legal_moves(const BoardState& s) {
  std::vector<Coord> out;
  std::array<int, 4> nb{};
  for (int p = 0; p < kPoints; ++p) {
    if (s.grid[p] != Stone::empty) continue;
    const Coord c = Coord::from_index(p);
    if (s.ko_point && *s.ko_point == c) continue;
    // Fast accept: an empty neighbour means the stone keeps a liberty.
    const int n = detail::neighbors(p, nb);
    bool quick = false;
    for (int k = 0; k < n && !quick; ++k) quick = s.grid[nb[k]] == Stone::empty;
    if (quick || is_legal(s, c)) out.push_back(c);
  }
  out.push_back(Coord::pass());
  return out;
}

inline std::vector<Coord> legal_moves(const BoardState& s, Color color) {
  return legal_moves(with_to_move(s, color));
}

}  // namespace fdaa::go
