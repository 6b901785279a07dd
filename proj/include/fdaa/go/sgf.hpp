#pragma once

// Main-line SGF (FF[3]/FF[4]) reading and canonical FF[4] writing.

#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fdaa/go/board.hpp"

namespace fdaa::go {

struct GameRecord {
  int board_size = kBoardSize;
  double komi = 0.0;
  int handicap = 0;
  std::vector<Coord> setup_black;  // AB
  std::vector<Coord> setup_white;  // AW
  std::vector<Move> moves;
  std::optional<std::string> result;
  std::map<std::string, std::string> metadata;  // remaining root properties

  friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

// Board before move 1: setup stones placed, side to move chosen from the
// first move (White when handicap stones are present and White opens).
inline BoardState initial_position(const GameRecord& game) {
  BoardState s = empty_board();
  for (auto c : game.setup_black) s = place_setup_stone(s, Color::black, c);
  for (auto c : game.setup_white) s = place_setup_stone(s, Color::white, c);
  if (!game.moves.empty()) {
    s = with_to_move(s, game.moves.front().color);
  } else if (game.handicap > 0) {
    s = with_to_move(s, Color::white);
  }
  return s;
}

// Replays the record, throwing SgfError naming the first illegal ply.
inline std::vector<BoardState> replay_positions(const GameRecord& game) {
  std::vector<BoardState> positions{initial_position(game)};
  if (!game.moves.empty() && game.moves.front().color == Color::white && game.setup_black.empty() &&
      game.handicap == 0)
    throw SgfError("illegal move sequence at ply 1: White moves first without handicap");
  for (const auto& m : game.moves) {
    try {
      positions.push_back(apply_move(positions.back(), m));
    } catch (const IllegalMove& e) {
      throw SgfError("illegal move sequence at ply " + std::to_string(m.number) + ": " + e.what());
    }
  }
  return positions;
}

namespace detail {

struct SgfNode {
  std::vector<std::pair<std::string, std::vector<std::string>>> props;
};

class SgfReader {
 public:
  explicit SgfReader(std::string_view text) : text_(text) {}

  // Returns the main line: first node of each first variation.
  std::vector<SgfNode> read_main_line() {
    skip_ws();
    if (!consume('(')) throw SgfError("SGF must start with '('");
    std::vector<SgfNode> nodes;
    read_sequence(nodes, /*main=*/true);
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ')') throw SgfError("unbalanced parentheses: stray ')'");
    return nodes;
  }

 private:
  void read_sequence(std::vector<SgfNode>& nodes, bool main) {
    bool first_child = true;
    while (true) {
      skip_ws();
      if (pos_ >= text_.size()) throw SgfError("unbalanced parentheses: unexpected end of SGF");
      const char ch = text_[pos_];
      if (ch == ';') {
        ++pos_;
        SgfNode node = read_node();
        if (main) nodes.push_back(std::move(node));
      } else if (ch == '(') {
        ++pos_;
        read_sequence(nodes, main && first_child);
        first_child = false;
      } else if (ch == ')') {
        ++pos_;
        return;
      } else {
        throw SgfError(std::string("unexpected character '") + ch + "' in SGF");
      }
    }
  }

  SgfNode read_node() {
    SgfNode node;
    while (true) {
      skip_ws();
      if (pos_ >= text_.size()) return node;
      const char ch = text_[pos_];
      if (!(ch >= 'A' && ch <= 'Z') && !(ch >= 'a' && ch <= 'z')) return node;
      std::string ident;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
        // FF[3] allows lowercase letters in identifiers; only capitals count.
        if (std::isupper(static_cast<unsigned char>(text_[pos_]))) ident += text_[pos_];
        ++pos_;
      }
      std::vector<std::string> values;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] == '[') {
        ++pos_;
        values.push_back(read_value());
        skip_ws();
      }
      if (values.empty()) throw SgfError("property '" + ident + "' without a value");
      node.props.emplace_back(std::move(ident), std::move(values));
    }
  }

  std::string read_value() {
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) throw SgfError("unterminated property value");
      const char ch = text_[pos_++];
      if (ch == ']') return out;
      if (ch == '\\') {
        if (pos_ >= text_.size()) throw SgfError("unterminated property value");
        const char next = text_[pos_++];
        if (next == '\n') continue;  // soft line break
        out += next;
      } else {
        out += ch;
      }
    }
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char ch) {
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline std::string escape_value(std::string_view v) {
  std::string out;
  for (char ch : v) {
    if (ch == ']' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

inline std::string format_komi(double komi) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, komi);
  return std::string(buf, ptr);
}

}  // namespace detail

inline GameRecord parse_sgf(std::string_view text) {
  detail::SgfReader reader(text);
  const auto nodes = reader.read_main_line();
  if (nodes.empty()) throw SgfError("SGF contains no nodes");

  GameRecord game;
  int number = 0;
  bool root = true;
  for (const auto& node : nodes) {
    for (const auto& [id, values] : node.props) {
      const std::string& v = values.front();
      if (id == "B" || id == "W") {
        const Color color = id == "B" ? Color::black : Color::white;
        game.moves.push_back(Move{color, parse_sgf_point(v), ++number});
      } else if (!root) {
        continue;  // per-move annotations are not kept
      } else if (id == "AB" || id == "AW") {
        for (const auto& pt : values) {
          const Coord c = parse_sgf_point(pt);
          if (c.is_pass()) throw SgfError("setup stone at pass point");
          (id == "AB" ? game.setup_black : game.setup_white).push_back(c);
        }
      } else if (id == "SZ") {
        if (v != "19") throw SgfError("unsupported board size " + v + " (only 19 is supported)");
      } else if (id == "FF" || id == "GM") {
        continue;
      } else if (id == "KM") {
        try {
          game.komi = std::stod(v);
        } catch (const std::exception&) {
          throw SgfError("invalid komi '" + v + "'");
        }
      } else if (id == "HA") {
        try {
          game.handicap = std::stoi(v);
        } catch (const std::exception&) {
          throw SgfError("invalid handicap '" + v + "'");
        }
        if (game.handicap < 0) throw SgfError("negative handicap");
      } else if (id == "RE") {
        game.result = v;
      } else {
        game.metadata[id] = v;
      }
    }
    root = false;
  }
  replay_positions(game);
  return game;
}

inline std::string serialize_sgf(const GameRecord& game) {
  std::string out = "(;FF[4]GM[1]SZ[19]KM[" + detail::format_komi(game.komi) + "]";
  if (game.handicap > 0) out += "HA[" + std::to_string(game.handicap) + "]";
  if (game.result) out += "RE[" + detail::escape_value(*game.result) + "]";
  for (const auto& [key, value] : game.metadata) out += key + "[" + detail::escape_value(value) + "]";
  if (!game.setup_black.empty()) {
    out += "AB";
    for (auto c : game.setup_black) out += "[" + format_sgf_point(c) + "]";
  }
  if (!game.setup_white.empty()) {
    out += "AW";
    for (auto c : game.setup_white) out += "[" + format_sgf_point(c) + "]";
  }
  for (const auto& m : game.moves) {
    out += ";";
    out += color_letter(m.color);
    out += "[" + format_sgf_point(m.coord) + "]";
  }
  out += ")\n";
  return out;
}

// Winner encoded in an SGF RE value ("B+R", "W+0.5"); nullopt for draws,
// voids and unknown results.
inline std::optional<Color> winner_of(std::string_view result) {
  if (result.size() >= 2 && result[1] == '+') {
    if (result[0] == 'B' || result[0] == 'b') return Color::black;
    if (result[0] == 'W' || result[0] == 'w') return Color::white;
  }
  return std::nullopt;
}

}  // namespace fdaa::go
