#pragma once

#include <algorithm>
#include <array>
#include <sstream>
#include <string>
#include <vector>

#include "fdaa/assessment/cgs.hpp"
#include "fdaa/util/text.hpp"

namespace fdaa::summary {

struct MoveValue {
  int move_no = 0;
  double value = 0.0;

  friend bool operator==(const MoveValue&, const MoveValue&) = default;
};

struct ColorSummary {
  go::Color color = go::Color::black;
  std::array<MoveValue, 3> highest_sn{};  // non-increasing
  std::array<MoveValue, 3> lowest_sn{};   // non-decreasing
  MoveValue highest_wr;
  MoveValue lowest_wr;
  double average_wr = 0.0;
  double tmr = 0.0;  // profile #1 after the colour's last move, percent

  friend bool operator==(const ColorSummary&, const ColorSummary&) = default;
};

struct Commentary {
  ColorSummary black;
  ColorSummary white;
  assessment::OgsKind ogs = assessment::OgsKind::uncertain;  // never undecided

  friend bool operator==(const Commentary&, const Commentary&) = default;
};

inline ColorSummary summarize_color(const std::vector<assessment::MoveFeatures>& all, go::Color color) {
  std::vector<const assessment::MoveFeatures*> mine;
  for (const auto& f : all)
    if (f.color == color) mine.push_back(&f);
  if (mine.size() < 3)
    throw AssessmentError("commentary needs at least 3 analysed " + go::to_string(color) + " moves");
  // Stable sorts on move order give the lower-move-first tie-break.
  std::stable_sort(mine.begin(), mine.end(), [](auto* a, auto* b) { return a->move_no < b->move_no; });

  ColorSummary s;
  s.color = color;
  auto by_sn = mine;
  std::stable_sort(by_sn.begin(), by_sn.end(), [](auto* a, auto* b) { return a->sn > b->sn; });
  for (std::size_t i = 0; i < 3; ++i) s.highest_sn[i] = {by_sn[i]->move_no, static_cast<double>(by_sn[i]->sn)};
  std::stable_sort(by_sn.begin(), by_sn.end(), [](auto* a, auto* b) { return a->sn < b->sn; });
  for (std::size_t i = 0; i < 3; ++i) s.lowest_sn[i] = {by_sn[i]->move_no, static_cast<double>(by_sn[i]->sn)};

  const auto* hi = mine.front();
  const auto* lo = mine.front();
  double sum = 0.0;
  for (const auto* f : mine) {
    if (f->wr > hi->wr) hi = f;
    if (f->wr < lo->wr) lo = f;
    sum += f->wr;
  }
  s.highest_wr = {hi->move_no, hi->wr};
  s.lowest_wr = {lo->move_no, lo->wr};
  s.average_wr = std::clamp(sum / static_cast<double>(mine.size()), lo->wr, hi->wr);
  s.tmr = mine.back()->tmr_after[0];
  return s;
}

inline Commentary summarize(const std::vector<assessment::MoveFeatures>& features, const assessment::OgsVerdict& ogs) {
  Commentary c;
  c.black = summarize_color(features, go::Color::black);
  c.white = summarize_color(features, go::Color::white);
  c.ogs = ogs.verdict == assessment::OgsKind::undecided ? assessment::OgsKind::uncertain : ogs.verdict;
  return c;
}

inline std::string ogs_phrase(assessment::OgsKind k) {
  switch (k) {
    case assessment::OgsKind::favorable_to_black:
      return "favorable to Black";
    case assessment::OgsKind::favorable_to_white:
      return "favorable to White";
    default:
      return "uncertain situation";
  }
}

namespace detail {

inline std::string move_token(go::Color color, const MoveValue& m) {
  return std::string(1, go::color_letter(color)) + std::to_string(m.move_no);
}

inline std::string sn_list(go::Color color, const std::array<MoveValue, 3>& v) {
  auto item = [&](const MoveValue& m) {
    return move_token(color, m) + " (" + std::to_string(static_cast<long long>(m.value)) + ")";
  };
  return item(v[0]) + ", " + item(v[1]) + ", and " + item(v[2]);
}

inline std::string percent(double fraction_or_percent, bool is_fraction) {
  return util::fixed2(is_fraction ? fraction_or_percent * 100.0 : fraction_or_percent) + "%";
}

inline std::string paragraph(const ColorSummary& s) {
  const std::string who = s.color == go::Color::black ? "Black" : "White";
  std::ostringstream os;
  os << who << ": The first 3 highest simulation numbers occurred at Moves " << sn_list(s.color, s.highest_sn)
     << ". The last 3 lowest simulation numbers occurred at Moves " << sn_list(s.color, s.lowest_sn)
     << ". The information of estimated possible win rate: The highest win rate is "
     << move_token(s.color, s.highest_wr) << " (" << percent(s.highest_wr.value, true)
     << "), the lowest win rate is " << move_token(s.color, s.lowest_wr) << " ("
     << percent(s.lowest_wr.value, true) << "), and the average win rate is " << percent(s.average_wr, true)
     << ". Top-move rate is " << percent(s.tmr, false) << ".";
  return os.str();
}

}  // namespace detail

inline std::string render_text(const Commentary& c) {
  return detail::paragraph(c.black) + "\n" + detail::paragraph(c.white) + "\nOverall game situation is " +
         ogs_phrase(c.ogs) + ".\n";
}

}  // namespace fdaa::summary
