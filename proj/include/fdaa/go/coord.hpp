#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "fdaa/error.hpp"

namespace fdaa::go {

inline constexpr int kBoardSize = 19;
inline constexpr int kPoints = kBoardSize * kBoardSize;

enum class Color : std::uint8_t { black, white };

constexpr Color opponent(Color c) { return c == Color::black ? Color::white : Color::black; }

inline std::string to_string(Color c) { return c == Color::black ? "black" : "white"; }
inline char color_letter(Color c) { return c == Color::black ? 'B' : 'W'; }

inline Color parse_color(std::string_view text) {
  std::string s;
  for (char ch : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (s == "b" || s == "black") return Color::black;
  if (s == "w" || s == "white") return Color::white;
  throw Error("unknown color '" + std::string(text) + "'");
}

// A board intersection, or the distinguished pass value. Rows count from
// the bottom edge (row 0 is GTP row 1), columns from the left.
class Coord {
 public:
  constexpr Coord() = default;
  constexpr Coord(int col, int row) : col_(col), row_(row) {
    if (col < 0 || col >= kBoardSize || row < 0 || row >= kBoardSize)
      throw Error("coordinate out of range");
  }

  static constexpr Coord pass() { return Coord{}; }
  static constexpr Coord from_index(int index) { return Coord(index % kBoardSize, index / kBoardSize); }

  constexpr bool is_pass() const { return col_ < 0; }
  constexpr int col() const { return col_; }
  constexpr int row() const { return row_; }
  constexpr int index() const { return row_ * kBoardSize + col_; }

  friend constexpr bool operator==(const Coord&, const Coord&) = default;
  friend constexpr auto operator<=>(const Coord&, const Coord&) = default;

 private:
  int col_ = -1;
  int row_ = -1;
};

struct Move {
  Color color = Color::black;
  Coord coord;
  int number = 1;

  friend bool operator==(const Move&, const Move&) = default;
};

// GTP vertex syntax: column letter A..T without I, row 1..19 from the bottom.
inline Coord parse_gtp_vertex(std::string_view text) {
  if (text.empty()) throw Error("empty GTP vertex");
  std::string s;
  for (char ch : text) s += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  if (s == "PASS") return Coord::pass();
  const char letter = s[0];
  if (letter < 'A' || letter > 'T' || letter == 'I')
    throw Error("invalid GTP vertex column in '" + std::string(text) + "'");
  const int col = letter - 'A' - (letter > 'I' ? 1 : 0);
  const auto digits = std::string_view(s).substr(1);
  if (digits.empty() || digits.size() > 2) throw Error("invalid GTP vertex row in '" + std::string(text) + "'");
  int row = 0;
  for (char ch : digits) {
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw Error("invalid GTP vertex row in '" + std::string(text) + "'");
    row = row * 10 + (ch - '0');
  }
  if (digits[0] == '0' || row < 1 || row > kBoardSize)
    throw Error("GTP vertex row out of range in '" + std::string(text) + "'");
  return Coord(col, row - 1);
}

inline std::string format_gtp_vertex(Coord c) {
  if (c.is_pass()) return "pass";
  char letter = static_cast<char>('A' + c.col());
  if (letter >= 'I') ++letter;
  return std::string(1, letter) + std::to_string(c.row() + 1);
}

// SGF point syntax: two lowercase letters, column then row counted from the
// top edge. Empty text and "tt" both denote a pass.
inline Coord parse_sgf_point(std::string_view text) {
  if (text.empty() || text == "tt") return Coord::pass();
  if (text.size() != 2) throw SgfError("invalid SGF point '" + std::string(text) + "'");
  const int col = text[0] - 'a';
  const int row_from_top = text[1] - 'a';
  if (col < 0 || col >= kBoardSize || row_from_top < 0 || row_from_top >= kBoardSize)
    throw SgfError("SGF point '" + std::string(text) + "' is off the 19x19 board");
  return Coord(col, kBoardSize - 1 - row_from_top);
}

inline std::string format_sgf_point(Coord c) {
  if (c.is_pass()) return "";
  return {static_cast<char>('a' + c.col()), static_cast<char>('a' + (kBoardSize - 1 - c.row()))};
}

}  // namespace fdaa::go
