#pragma once

// JSON encodings of the domain records, shared by the service wire format,
// the event log, and replay reports. Coordinates travel as GTP vertices.

#include <json.hpp>

#include "fdaa/assessment/cgs.hpp"
#include "fdaa/engine/types.hpp"
#include "fdaa/summary/commentary.hpp"

namespace fdaa::go {

inline void to_json(nlohmann::json& j, const Coord& c) { j = format_gtp_vertex(c); }
inline void from_json(const nlohmann::json& j, Coord& c) { c = parse_gtp_vertex(j.get<std::string>()); }

inline void to_json(nlohmann::json& j, const Color& c) { j = to_string(c); }
inline void from_json(const nlohmann::json& j, Color& c) { c = parse_color(j.get<std::string>()); }

inline void to_json(nlohmann::json& j, const Move& m) {
  j = {{"color", m.color}, {"vertex", m.coord}, {"number", m.number}};
}
inline void from_json(const nlohmann::json& j, Move& m) {
  m.color = j.at("color").get<Color>();
  m.coord = j.at("vertex").get<Coord>();
  m.number = j.value("number", 0);
}

}  // namespace fdaa::go

namespace fdaa::engine {

inline void to_json(nlohmann::json& j, const Suggestion& s) { j = {{"vertex", s.coord}, {"sn", s.sn}, {"wr", s.wr}}; }
inline void from_json(const nlohmann::json& j, Suggestion& s) {
  s.coord = j.at("vertex").get<go::Coord>();
  s.sn = j.at("sn").get<int>();
  s.wr = j.at("wr").get<double>();
}

inline void to_json(nlohmann::json& j, const MoveAnalysis& a) {
  j = {{"move_no", a.move_no}, {"color", a.color}, {"suggestions", a.suggestions}};
}
inline void from_json(const nlohmann::json& j, MoveAnalysis& a) {
  a.move_no = j.at("move_no").get<int>();
  a.color = j.at("color").get<go::Color>();
  a.suggestions = j.at("suggestions").get<std::vector<Suggestion>>();
}

inline void to_json(nlohmann::json& j, const EngineConfig& c) {
  j = {{"kind", to_string(c.kind)},
       {"endpoint", c.endpoint},
       {"command", c.command},
       {"simulation_setting", c.simulation_setting},
       {"timeout_ms", c.timeout.count()},
       {"seed", c.stub_seed},
       {"komi", c.komi},
       {"settle_ply", c.stub.settle_ply}};
  j["drift"] = c.stub.drift ? nlohmann::json(*c.stub.drift) : nlohmann::json(nullptr);
}
inline void from_json(const nlohmann::json& j, EngineConfig& c) {
  c = EngineConfig{};
  c.kind = parse_engine_kind(j.value("kind", std::string("stub")));
  c.endpoint = j.value("endpoint", std::string());
  c.command = j.value("command", std::vector<std::string>{});
  c.simulation_setting = j.value("simulation_setting", c.simulation_setting);
  c.timeout = std::chrono::milliseconds(j.value("timeout_ms", static_cast<long long>(c.timeout.count())));
  c.stub_seed = j.value("seed", c.stub_seed);
  c.komi = j.value("komi", c.komi);
  c.stub.settle_ply = j.value("settle_ply", 0);
  if (j.contains("drift") && !j["drift"].is_null()) c.stub.drift = j["drift"].get<double>();
}

}  // namespace fdaa::engine

namespace fdaa::assessment {

inline void to_json(nlohmann::json& j, const CgsLabel& l) { j = to_string(l); }
inline void from_json(const nlohmann::json& j, CgsLabel& l) { l = parse_cgs_label(j.get<std::string>()); }

inline void to_json(nlohmann::json& j, const OgsKind& k) { j = to_string(k); }
inline void from_json(const nlohmann::json& j, OgsKind& k) { k = parse_ogs_kind(j.get<std::string>()); }

inline void to_json(nlohmann::json& j, const MoveFeatures& f) {
  j = {{"move_no", f.move_no}, {"color", f.color}, {"vertex", f.coord}, {"sn", f.sn}, {"wr", f.wr},
       {"tmr", f.tmr_after}};
  j["matched_rank"] = f.matched_rank ? nlohmann::json(*f.matched_rank) : nlohmann::json(nullptr);
}
inline void from_json(const nlohmann::json& j, MoveFeatures& f) {
  f.move_no = j.at("move_no").get<int>();
  f.color = j.at("color").get<go::Color>();
  f.coord = j.at("vertex").get<go::Coord>();
  f.sn = j.at("sn").get<int>();
  f.wr = j.at("wr").get<double>();
  f.tmr_after = j.at("tmr").get<std::array<double, 3>>();
  f.matched_rank = j.at("matched_rank").is_null() ? std::nullopt : std::optional<int>(j["matched_rank"].get<int>());
}

inline void to_json(nlohmann::json& j, const CgsRecord& r) {
  j = {{"move_no", r.move_no}, {"inputs", r.inputs}, {"crisp", r.crisp}, {"label", r.label}, {"clamped", r.clamped}};
}
inline void from_json(const nlohmann::json& j, CgsRecord& r) {
  r.move_no = j.at("move_no").get<int>();
  r.inputs = j.at("inputs").get<std::array<double, 6>>();
  r.crisp = j.at("crisp").get<double>();
  r.label = j.at("label").get<CgsLabel>();
  r.clamped = j.value("clamped", std::vector<std::string>{});
}

inline void to_json(nlohmann::json& j, const OgsVerdict& v) {
  j = {{"method", v.method}, {"verdict", v.verdict}, {"window", v.window}};
  j["correct"] = v.correct ? nlohmann::json(*v.correct) : nlohmann::json(nullptr);
}
inline void from_json(const nlohmann::json& j, OgsVerdict& v) {
  v.method = j.at("method").get<int>();
  v.verdict = j.at("verdict").get<OgsKind>();
  v.window = j.value("window", std::vector<int>{});
  v.correct = j.at("correct").is_null() ? std::nullopt : std::optional<bool>(j["correct"].get<bool>());
}

}  // namespace fdaa::assessment

namespace fdaa::summary {

inline void to_json(nlohmann::json& j, const MoveValue& m) { j = {{"move_no", m.move_no}, {"value", m.value}}; }
inline void from_json(const nlohmann::json& j, MoveValue& m) {
  m.move_no = j.at("move_no").get<int>();
  m.value = j.at("value").get<double>();
}

inline void to_json(nlohmann::json& j, const ColorSummary& s) {
  j = {{"color", s.color},           {"highest_sn", s.highest_sn}, {"lowest_sn", s.lowest_sn},
       {"highest_wr", s.highest_wr}, {"lowest_wr", s.lowest_wr},   {"average_wr", s.average_wr},
       {"tmr", s.tmr}};
}
inline void from_json(const nlohmann::json& j, ColorSummary& s) {
  s.color = j.at("color").get<go::Color>();
  s.highest_sn = j.at("highest_sn").get<std::array<MoveValue, 3>>();
  s.lowest_sn = j.at("lowest_sn").get<std::array<MoveValue, 3>>();
  s.highest_wr = j.at("highest_wr").get<MoveValue>();
  s.lowest_wr = j.at("lowest_wr").get<MoveValue>();
  s.average_wr = j.at("average_wr").get<double>();
  s.tmr = j.at("tmr").get<double>();
}

inline void to_json(nlohmann::json& j, const Commentary& c) {
  j = {{"black", c.black}, {"white", c.white}, {"ogs", c.ogs}};
}
inline void from_json(const nlohmann::json& j, Commentary& c) {
  c.black = j.at("black").get<ColorSummary>();
  c.white = j.at("white").get<ColorSummary>();
  c.ogs = j.at("ogs").get<assessment::OgsKind>();
}

}  // namespace fdaa::summary
