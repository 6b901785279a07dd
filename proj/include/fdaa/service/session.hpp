#pragma once

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>

#include "fdaa/codec.hpp"
#include "fdaa/engine/session.hpp"
#include "fdaa/service/event_log.hpp"

namespace fdaa::service {

class ServiceError : public Error {
 public:
  enum class Kind { not_found, finished, illegal_move, bad_request, engine };
  ServiceError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct GameConfig {
  engine::EngineConfig engine;
  assessment::FmlVariant fml = assessment::FmlVariant::fml2;
  int ogs_method = 2;

  friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

inline nlohmann::json config_to_json(const GameConfig& c) {
  return {{"engine", c.engine}, {"fml", assessment::to_string(c.fml)}, {"ogs_method", c.ogs_method}};
}

inline GameConfig config_from_json(const nlohmann::json& j) {
  GameConfig c;
  try {
    if (j.contains("engine")) c.engine = j["engine"].get<engine::EngineConfig>();
    if (j.contains("fml")) c.fml = assessment::parse_fml_variant(j["fml"].get<std::string>());
    c.ogs_method = j.value("ogs_method", 2);
  } catch (const nlohmann::json::exception& e) {
    throw ServiceError(ServiceError::Kind::bad_request, std::string("bad game config: ") + e.what());
  } catch (const Error& e) {
    throw ServiceError(ServiceError::Kind::bad_request, std::string("bad game config: ") + e.what());
  }
  if (c.ogs_method != 1 && c.ogs_method != 2)
    throw ServiceError(ServiceError::Kind::bad_request, "ogs_method must be 1 or 2");
  try {
    c.engine.validate();
  } catch (const Error& e) {
    throw ServiceError(ServiceError::Kind::bad_request, e.what());
  }
  return c;
}

struct AssessmentFrame {
  int move_no = 0;
  go::Move move;
  engine::MoveAnalysis next;  // suggestions for the side now to move
  int sn = 0;
  double wr = 0.0;
  std::optional<int> matched_rank;
  std::array<double, 3> tmr{};
  std::optional<assessment::CgsRecord> cgs;
  std::int64_t ts = 0;

  friend bool operator==(const AssessmentFrame&, const AssessmentFrame&) = default;
};

inline nlohmann::json frame_to_json(const AssessmentFrame& f) {
  nlohmann::json j = {{"type", "frame"},
                      {"move_no", f.move_no},
                      {"move", f.move},
                      {"to_move", f.next.color},
                      {"next_move_no", f.next.move_no},
                      {"suggestions", f.next.suggestions},
                      {"sn", f.sn},
                      {"wr", f.wr},
                      {"tmr", f.tmr},
                      {"ts", f.ts}};
  j["matched_rank"] = f.matched_rank ? nlohmann::json(*f.matched_rank) : nlohmann::json(nullptr);
  j["cgs"] = f.cgs ? nlohmann::json(*f.cgs) : nlohmann::json(nullptr);
  return j;
}

inline AssessmentFrame frame_from_json(const nlohmann::json& j) {
  AssessmentFrame f;
  f.move_no = j.at("move_no").get<int>();
  f.move = j.at("move").get<go::Move>();
  f.next.color = j.at("to_move").get<go::Color>();
  f.next.move_no = j.at("next_move_no").get<int>();
  f.next.suggestions = j.at("suggestions").get<std::vector<engine::Suggestion>>();
  f.sn = j.at("sn").get<int>();
  f.wr = j.at("wr").get<double>();
  f.tmr = j.at("tmr").get<std::array<double, 3>>();
  f.ts = j.at("ts").get<std::int64_t>();
  if (!j.at("matched_rank").is_null()) f.matched_rank = j["matched_rank"].get<int>();
  if (!j.at("cgs").is_null()) f.cgs = j["cgs"].get<assessment::CgsRecord>();
  return f;
}

enum class GameStatus { open, finished };

struct FinishOutcome {
  std::optional<std::string> result;
  std::optional<assessment::OgsVerdict> method1;
  std::optional<assessment::OgsVerdict> method2;
  std::optional<summary::Commentary> commentary;
  std::string text;

  friend bool operator==(const FinishOutcome&, const FinishOutcome&) = default;
};

inline nlohmann::json finish_to_json(const FinishOutcome& f) {
  auto opt = [](const auto& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"type", "commentary"},        {"result", opt(f.result)},   {"method1", opt(f.method1)},
          {"method2", opt(f.method2)}, {"commentary", opt(f.commentary)}, {"text", f.text}};
}

inline FinishOutcome finish_from_json(const nlohmann::json& j) {
  FinishOutcome f;
  if (!j.at("result").is_null()) f.result = j["result"].get<std::string>();
  if (!j.at("method1").is_null()) f.method1 = j["method1"].get<assessment::OgsVerdict>();
  if (!j.at("method2").is_null()) f.method2 = j["method2"].get<assessment::OgsVerdict>();
  if (!j.at("commentary").is_null()) f.commentary = j["commentary"].get<summary::Commentary>();
  f.text = j.at("text").get<std::string>();
  return f;
}

// Comparable session state; identical for a live session and its log replay.
struct GameState {
  std::string id;
  GameConfig config;
  go::BoardState board = go::empty_board();
  std::vector<go::Move> moves;
  engine::MoveAnalysis pending;
  std::vector<AssessmentFrame> frames;
  std::vector<assessment::MoveFeatures> features;
  std::vector<assessment::CgsRecord> series;
  GameStatus status = GameStatus::open;
  std::optional<FinishOutcome> finish;

  friend bool operator==(const GameState&, const GameState&) = default;
};

inline nlohmann::json state_to_json(const GameState& s) {
  nlohmann::json black = nlohmann::json::array();
  nlohmann::json white = nlohmann::json::array();
  for (int i = 0; i < go::kPoints; ++i) {
    const auto st = s.board.grid[static_cast<std::size_t>(i)];
    if (st == go::Stone::black) black.push_back(go::Coord::from_index(i));
    if (st == go::Stone::white) white.push_back(go::Coord::from_index(i));
  }
  nlohmann::json j = {{"type", "snapshot"},
                      {"id", s.id},
                      {"status", s.status == GameStatus::open ? "open" : "finished"},
                      {"config", config_to_json(s.config)},
                      {"to_move", s.board.to_move},
                      {"move_count", s.moves.size()},
                      {"board", {{"black", black}, {"white", white}}},
                      {"captures", {{"black", s.board.captures_black}, {"white", s.board.captures_white}}},
                      {"moves", s.moves},
                      {"suggestions", s.pending.suggestions}};
  j["last_frame"] = s.frames.empty() ? nlohmann::json(nullptr) : frame_to_json(s.frames.back());
  j["finish"] = s.finish ? finish_to_json(*s.finish) : nlohmann::json(nullptr);
  return j;
}

// The deterministic part of a game: everything except the engine and I/O.
class GameCore {
 public:
  GameCore(std::string id, GameConfig config, engine::MoveAnalysis opening)
      : assessor_(assessment::shared_system(config.fml)) {
    state_.id = std::move(id);
    state_.config = std::move(config);
    state_.pending = std::move(opening);
  }

  const GameState& state() const { return state_; }

  // Throws go::IllegalMove without touching the state.
  go::Move validate(go::Color color, go::Coord coord) const {
    if (state_.status != GameStatus::open) throw ServiceError(ServiceError::Kind::finished, "game is finished");
    go::Move m{color, coord, state_.board.ply + 1};
    (void)go::apply_move(state_.board, m);
    return m;
  }

  AssessmentFrame advance(const go::Move& move, engine::MoveAnalysis next, std::int64_t ts) {
    auto board = go::apply_move(state_.board, move);
    const auto step = assessor_.observe(state_.pending, move);
    AssessmentFrame f;
    f.move_no = move.number;
    f.move = move;
    f.next = std::move(next);
    f.sn = step.features.sn;
    f.wr = step.features.wr;
    f.matched_rank = step.features.matched_rank;
    f.tmr = step.features.tmr_after;
    f.cgs = step.cgs;
    f.ts = ts;
    state_.board = board;
    state_.moves.push_back(move);
    state_.pending = f.next;
    state_.frames.push_back(f);
    state_.features = assessor_.features();
    state_.series = assessor_.series();
    return f;
  }

  FinishOutcome finish(const std::optional<std::string>& result) {
    if (state_.status != GameStatus::open) throw ServiceError(ServiceError::Kind::finished, "game is already finished");
    FinishOutcome out;
    out.result = result;
    const auto& series = assessor_.series();
    if (!series.empty()) {
      out.method1 = assessment::decide_ogs_method1(series, result);
      out.method2 = assessment::decide_ogs_method2(series, result);
    }
    try {
      assessment::OgsVerdict ogs;
      ogs.verdict = assessment::OgsKind::undecided;
      if (out.method1 && out.method2) ogs = state_.config.ogs_method == 1 ? *out.method1 : *out.method2;
      out.commentary = summary::summarize(assessor_.features(), ogs);
      out.text = summary::render_text(*out.commentary);
    } catch (const AssessmentError&) {
      // Too few analysed moves for a commentary.
    }
    state_.status = GameStatus::finished;
    state_.finish = out;
    return out;
  }

 private:
  GameState state_;
  assessment::GameAssessor assessor_;
};

// One stream reader. Bounded: on overflow the queue is replaced by a gap
// notice and the subscriber is dropped; the client resyncs from a snapshot.
class Subscriber {
 public:
  explicit Subscriber(std::size_t capacity) : capacity_(capacity) {}

  void push(const std::string& message, int last_move_no) {
    std::lock_guard lock(mu_);
    if (closed_ || dropped_) return;
    if (queue_.size() >= capacity_) {
      queue_.clear();
      queue_.push_back(nlohmann::json{{"type", "gap"}, {"last_move_no", last_move_no}}.dump());
      dropped_ = true;
    } else {
      queue_.push_back(message);
    }
    cv_.notify_all();
  }

  // Next message, or nullopt on timeout / once closed and drained.
  std::optional<std::string> pop(std::chrono::milliseconds wait) {
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, wait, [&] { return !queue_.empty() || closed_; });
    if (queue_.empty()) return std::nullopt;
    auto m = std::move(queue_.front());
    queue_.pop_front();
    return m;
  }

  void close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    cv_.notify_all();
  }

  bool finished() const {
    std::lock_guard lock(mu_);
    return closed_ || (dropped_ && queue_.empty());
  }

  bool dropped() const {
    std::lock_guard lock(mu_);
    return dropped_;
  }

 private:
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::string> queue_;
  bool dropped_ = false;
  bool closed_ = false;
};

struct Subscription {
  nlohmann::json snapshot;
  std::shared_ptr<Subscriber> subscriber;
};

// Rebuilds a session from its log without consulting an engine. Every
// logged frame must match the recomputed one.
inline GameState replay_log(const std::filesystem::path& path) {
  const auto entries = read_event_log(path);
  if (entries.front().kind != EventKind::created)
    throw IntegrityError(1, "event log " + path.string() + ": first entry is not 'created'");
  const auto& p0 = entries.front().payload;
  GameCore core(p0.at("id").get<std::string>(), config_from_json(p0.at("config")),
                p0.at("analysis").get<engine::MoveAnalysis>());
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const auto& e = entries[i];
    switch (e.kind) {
      case EventKind::move: {
        if (i + 1 >= entries.size() || entries[i + 1].kind != EventKind::frame)
          throw IntegrityError(e.seq + 1, "event log " + path.string() + ": sequence number " +
                                              std::to_string(e.seq + 1) + " missing (move without frame)");
        const auto logged = frame_from_json(entries[i + 1].payload);
        const auto move = e.payload.at("move").get<go::Move>();
        const auto produced = core.advance(move, logged.next, logged.ts);
        if (!(produced == logged))
          throw IntegrityError(entries[i + 1].seq, "event log " + path.string() + ": frame " +
                                                       std::to_string(entries[i + 1].seq) + " does not replay");
        ++i;
        break;
      }
      case EventKind::finished: {
        std::optional<std::string> result;
        if (!e.payload.at("result").is_null()) result = e.payload["result"].get<std::string>();
        const auto produced = core.finish(result);
        if (!(produced == finish_from_json(e.payload)))
          throw IntegrityError(e.seq, "event log " + path.string() + ": finish entry " + std::to_string(e.seq) +
                                          " does not replay");
        break;
      }
      default:
        throw IntegrityError(e.seq, "event log " + path.string() + ": unexpected '" + to_string(e.kind) +
                                        "' entry at sequence number " + std::to_string(e.seq));
    }
  }
  return core.state();
}

class SessionManager {
 public:
  explicit SessionManager(std::filesystem::path log_dir, std::size_t subscriber_capacity = 256)
      : log_dir_(std::move(log_dir)), capacity_(subscriber_capacity) {
    std::filesystem::create_directories(log_dir_);
  }

  std::string create_game(const GameConfig& config) {
    std::unique_ptr<engine::EngineSession> eng;
    engine::MoveAnalysis opening;
    try {
      eng = std::make_unique<engine::EngineSession>(engine::open_session(config.engine));
      opening = eng->request_analysis();
    } catch (const EngineError& e) {
      throw ServiceError(ServiceError::Kind::engine, std::string("engine failure: ") + e.what());
    }
    const auto id = new_id();
    auto game = std::make_shared<Live>(id, config, opening, log_dir_ / (id + ".jsonl"));
    game->engine = std::move(eng);
    game->log.append({{EventKind::created, {{"id", id}, {"config", config_to_json(config)}, {"analysis", opening}}}});
    std::lock_guard lock(mu_);
    games_.emplace(id, game);
    return id;
  }

  AssessmentFrame submit_move(const std::string& id, go::Color color, go::Coord coord) {
    auto g = find(id);
    std::lock_guard lock(g->mu);
    go::Move move;
    try {
      move = g->core.validate(color, coord);
    } catch (const go::IllegalMove& e) {
      throw ServiceError(ServiceError::Kind::illegal_move, e.what());
    }
    engine::MoveAnalysis next;
    try {
      if (g->needs_resync) resync(*g);
      g->engine->play_move(move);
      try {
        next = g->engine->request_analysis();
      } catch (...) {
        g->needs_resync = true;  // engine advanced, session did not
        throw;
      }
    } catch (const EngineError& e) {
      throw ServiceError(ServiceError::Kind::engine, std::string("engine failure: ") + e.what());
    }
    GameCore updated = g->core;
    const auto frame = updated.advance(move, std::move(next), now_ms());
    try {
      g->log.append({{EventKind::move, {{"move", move}}}, {EventKind::frame, frame_to_json(frame)}});
    } catch (...) {
      g->needs_resync = true;
      throw;
    }
    g->core = std::move(updated);
    broadcast(*g, frame_to_json(frame).dump(), frame.move_no);
    return frame;
  }

  FinishOutcome finish_game(const std::string& id, const std::optional<std::string>& result) {
    auto g = find(id);
    std::lock_guard lock(g->mu);
    GameCore updated = g->core;
    const auto out = updated.finish(result);
    g->log.append({{EventKind::finished, finish_to_json(out)}});
    g->core = std::move(updated);
    broadcast(*g, finish_to_json(out).dump(), static_cast<int>(g->core.state().moves.size()));
    for (auto& s : g->subscribers) s->close();
    g->subscribers.clear();
    return out;
  }

  GameState state(const std::string& id) const {
    auto g = find(id);
    std::lock_guard lock(g->mu);
    return g->core.state();
  }

  std::filesystem::path log_path(const std::string& id) const { return find(id)->log.path(); }

  GameState replay(const std::string& id) const { return replay_log(log_path(id)); }

  // Snapshot and registration happen under the session lock, so the
  // subscriber sees every frame after the snapshot and none before.
  Subscription subscribe(const std::string& id) {
    auto g = find(id);
    std::lock_guard lock(g->mu);
    Subscription sub{state_to_json(g->core.state()), std::make_shared<Subscriber>(capacity_)};
    if (g->core.state().status == GameStatus::open) {
      g->subscribers.push_back(sub.subscriber);
    } else {
      sub.subscriber->close();
    }
    return sub;
  }

  std::vector<std::string> ids() const {
    std::lock_guard lock(mu_);
    std::vector<std::string> out;
    for (const auto& [id, _] : games_) out.push_back(id);
    return out;
  }

  void close_all_subscribers() {
    std::lock_guard lock(mu_);
    for (auto& [_, g] : games_) {
      std::lock_guard glock(g->mu);
      for (auto& s : g->subscribers) s->close();
      g->subscribers.clear();
    }
  }

 private:
  struct Live {
    Live(const std::string& id, const GameConfig& config, const engine::MoveAnalysis& opening,
         std::filesystem::path path)
        : core(id, config, opening), log(std::move(path)) {}
    mutable std::mutex mu;
    GameCore core;
    std::unique_ptr<engine::EngineSession> engine;
    bool needs_resync = false;
    EventLog log;
    std::vector<std::shared_ptr<Subscriber>> subscribers;
  };

  std::shared_ptr<Live> find(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = games_.find(id);
    if (it == games_.end()) throw ServiceError(ServiceError::Kind::not_found, "no game '" + id + "'");
    return it->second;
  }

  static void resync(Live& g) {
    auto fresh = std::make_unique<engine::EngineSession>(engine::open_session(g.core.state().config.engine));
    for (const auto& m : g.core.state().moves) fresh->play_move(m);
    g.engine = std::move(fresh);
    g.needs_resync = false;
  }

  static void broadcast(Live& g, const std::string& message, int move_no) {
    for (auto& s : g.subscribers) s->push(message, move_no);
    std::erase_if(g.subscribers, [](const auto& s) { return s->finished() || s->dropped(); });
  }

  std::string new_id() {
    std::lock_guard lock(mu_);
    std::ostringstream os;
    os << std::hex << rng_() << std::hex << ++counter_;
    return os.str();
  }

  std::filesystem::path log_dir_;
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Live>> games_;
  std::mt19937_64 rng_{std::random_device{}()};
  std::uint64_t counter_ = 0;
};

}  // namespace fdaa::service
