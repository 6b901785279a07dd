#pragma once

// One conversation with an analysis engine. The session mirrors the board
// locally, so a failed exchange leaves it exactly as it was.

#include <httplib.h>
#include <json.hpp>

#include <memory>

#include "fdaa/engine/gtp.hpp"
#include "fdaa/engine/stub.hpp"

namespace fdaa::engine {

class EngineBackend {
 public:
  virtual ~EngineBackend() = default;
  virtual void start(double komi) = 0;
  virtual bool play(const go::Move& move) = 0;
  virtual std::vector<Suggestion> analyze(const go::BoardState& board) = 0;
};

class StubBackend final : public EngineBackend {
 public:
  StubBackend(std::uint64_t seed, int simulation_setting, StubOptions options)
      : seed_(seed), simulations_(simulation_setting), options_(options) {}

  void start(double) override {}
  bool play(const go::Move&) override { return true; }
  std::vector<Suggestion> analyze(const go::BoardState& board) override {
    return stub_analyze(seed_, board, simulations_, options_).suggestions;
  }

 private:
  std::uint64_t seed_;
  int simulations_;
  StubOptions options_;
};

class GtpBackend final : public EngineBackend {
 public:
  GtpBackend(std::unique_ptr<LineChannel> channel, std::chrono::milliseconds timeout)
      : channel_(std::move(channel)), timeout_(timeout) {}

  ~GtpBackend() override {
    try {
      channel_->write("quit\n");
    } catch (...) {
    }
  }

  void start(double komi) override {
    expect_ok("boardsize 19\n");
    expect_ok("clear_board\n");
    expect_ok("komi " + util::shortest(komi) + "\n");
  }

  bool play(const go::Move& move) override {
    return gtp_exchange(*channel_, gtp_play_command(move), timeout_).success;
  }

  std::vector<Suggestion> analyze(const go::BoardState& board) override {
    const auto reply = gtp_exchange(*channel_, "analyze " + go::to_string(board.to_move) + "\n", timeout_);
    if (!reply.success)
      throw EngineError(EngineError::Kind::rejected, "engine refused analysis: " + reply.body);
    return parse_gtp_analysis(reply.body);
  }

 private:
  void expect_ok(const std::string& command) {
    const auto reply = gtp_exchange(*channel_, command, timeout_);
    if (!reply.success)
      throw EngineError(EngineError::Kind::rejected, "engine rejected '" + command.substr(0, command.size() - 1) +
                                                         "': " + reply.body);
  }

  std::unique_ptr<LineChannel> channel_;
  std::chrono::milliseconds timeout_;
};

// JSON over HTTP: POST /engine {"command": ..., "color": ..., "vertex": ...}.
class HttpBackend final : public EngineBackend {
 public:
  HttpBackend(const std::string& endpoint, std::chrono::milliseconds timeout) : client_(endpoint) {
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
    client_.set_connection_timeout(secs.count(), usecs.count());
    client_.set_read_timeout(secs.count(), usecs.count());
    client_.set_write_timeout(secs.count(), usecs.count());
  }

  void start(double komi) override {
    expect_true(post({{"command", "clear_board"}}));
    expect_true(post({{"command", "komi"}, {"komi", komi}}));
  }

  bool play(const go::Move& move) override {
    const auto reply = post({{"command", "play"},
                             {"color", go::to_string(move.color)},
                             {"vertex", go::format_gtp_vertex(move.coord)}});
    if (!reply.contains("result") || !reply["result"].is_boolean())
      throw EngineError(EngineError::Kind::malformed, "play reply lacks a boolean result");
    return reply["result"].get<bool>();
  }

  std::vector<Suggestion> analyze(const go::BoardState& board) override {
    const auto reply = post({{"command", "analyze"}, {"color", go::to_string(board.to_move)}});
    std::vector<Suggestion> out;
    try {
      for (const auto& item : reply.at("suggestions")) {
        Suggestion s;
        s.coord = go::parse_gtp_vertex(item.at("vertex").get<std::string>());
        s.sn = item.at("sn").get<int>();
        s.wr = item.at("wr").get<double>();
        out.push_back(s);
      }
    } catch (const nlohmann::json::exception& e) {
      throw EngineError(EngineError::Kind::malformed, std::string("malformed analysis reply: ") + e.what());
    } catch (const EngineError&) {
      throw;
    } catch (const Error& e) {
      throw EngineError(EngineError::Kind::malformed, std::string("malformed analysis reply: ") + e.what());
    }
    return out;
  }

 private:
  nlohmann::json post(const nlohmann::json& body) {
    auto res = client_.Post("/engine", body.dump(), "application/json");
    if (!res) {
      const auto err = res.error();
      const auto kind = err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read
                            ? EngineError::Kind::timeout
                            : EngineError::Kind::connect;
      throw EngineError(kind, "engine endpoint unreachable: " + httplib::to_string(err));
    }
    if (res->status != 200)
      throw EngineError(EngineError::Kind::transport, "engine endpoint answered HTTP " + std::to_string(res->status));
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception&) {
      throw EngineError(EngineError::Kind::malformed, "engine reply is not JSON");
    }
  }

  static void expect_true(const nlohmann::json& reply) {
    if (!reply.value("result", false))
      throw EngineError(EngineError::Kind::rejected, "engine refused session setup");
  }

  httplib::Client client_;
};

class EngineSession {
 public:
  EngineSession(EngineConfig config, std::unique_ptr<EngineBackend> backend)
      : config_(std::move(config)), backend_(std::move(backend)), board_(go::empty_board()) {
    backend_->start(config_.komi);
  }

  const EngineConfig& config() const { return config_; }
  const go::BoardState& board() const { return board_; }

  // Handicap setup. The supported GTP/HTTP command sets have no setup
  // command, so only the stub can follow a non-empty start position.
  void set_position(const go::BoardState& board) {
    if (config_.kind != EngineKind::stub && board.stone_count() > 0)
      throw EngineError(EngineError::Kind::rejected, "setup stones are only supported by the stub engine");
    board_ = board;
  }

  void play_move(const go::Move& move) {
    go::BoardState next;
    try {
      next = go::apply_move(board_, move);
    } catch (const go::IllegalMove& e) {
      throw EngineError(EngineError::Kind::rejected, std::string("illegal move: ") + e.what());
    }
    if (!backend_->play(move))
      throw EngineError(EngineError::Kind::rejected,
                        "engine rejected " + go::to_string(move.color) + " " + go::format_gtp_vertex(move.coord));
    board_ = next;
  }

  MoveAnalysis request_analysis() { return normalize_analysis(backend_->analyze(board_), board_); }

 private:
  EngineConfig config_;
  std::unique_ptr<EngineBackend> backend_;
  go::BoardState board_;
};

inline EngineSession open_session(const EngineConfig& config) {
  config.validate();
  switch (config.kind) {
    case EngineKind::stub:
      return EngineSession(config, std::make_unique<StubBackend>(config.stub_seed, config.simulation_setting,
                                                                 config.stub));
    case EngineKind::gtp:
      return EngineSession(config, std::make_unique<GtpBackend>(
                                       std::make_unique<SubprocessChannel>(config.command), config.timeout));
    case EngineKind::http:
      return EngineSession(config, std::make_unique<HttpBackend>(config.endpoint, config.timeout));
  }
  throw Error("unknown engine kind");
}

}  // namespace fdaa::engine
