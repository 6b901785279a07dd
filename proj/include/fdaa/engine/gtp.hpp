#pragma once

// GTP v2 transport: a line channel to the engine (a child process in
// production, an in-memory double in tests) and the command/response codec.
//
// Analysis is requested with the extension command `analyze <color>`,
// answered on one line as repeated `<vertex> <sn> <wr>` triples.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cstring>
#include <chrono>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "fdaa/engine/types.hpp"
#include "fdaa/util/text.hpp"

namespace fdaa::engine {

class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void write(const std::string& bytes) = 0;
  // One line without the trailing newline; throws EngineError on timeout/EOF.
  virtual std::string read_line(std::chrono::milliseconds timeout) = 0;
};

class SubprocessChannel final : public LineChannel {
 public:
  explicit SubprocessChannel(const std::vector<std::string>& argv) {
    if (argv.empty()) throw EngineError(EngineError::Kind::connect, "empty engine command line");
    // A dead engine must surface as a write error, not kill the process.
    ::signal(SIGPIPE, SIG_IGN);
    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
      throw EngineError(EngineError::Kind::connect, "cannot create engine pipes");
    // Exec failure is reported through a close-on-exec status pipe.
    int status_pipe[2];
    if (pipe2(status_pipe, O_CLOEXEC) != 0)
      throw EngineError(EngineError::Kind::connect, "cannot create engine pipes");

    pid_ = fork();
    if (pid_ < 0) throw EngineError(EngineError::Kind::connect, "fork failed");
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[1]);
      close(from_child[0]);
      close(status_pipe[0]);
      std::vector<char*> args;
      for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
      args.push_back(nullptr);
      execvp(args[0], args.data());
      const int err = errno;
      (void)!::write(status_pipe[1], &err, sizeof err);
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    close(status_pipe[1]);
    in_ = to_child[1];
    out_ = from_child[0];

    int err = 0;
    const auto n = ::read(status_pipe[0], &err, sizeof err);
    close(status_pipe[0]);
    if (n == static_cast<ssize_t>(sizeof err)) {
      waitpid(pid_, nullptr, 0);
      pid_ = -1;
      throw EngineError(EngineError::Kind::connect,
                        "cannot spawn engine '" + argv.front() + "': " + std::strerror(err));
    }
  }

  ~SubprocessChannel() override {
    if (in_ >= 0) close(in_);
    if (out_ >= 0) close(out_);
    if (pid_ > 0) {
      for (int i = 0; i < 50; ++i) {
        if (waitpid(pid_, nullptr, WNOHANG) == pid_) return;
        usleep(10'000);
      }
      kill(pid_, SIGKILL);
      waitpid(pid_, nullptr, 0);
    }
  }

  SubprocessChannel(const SubprocessChannel&) = delete;
  SubprocessChannel& operator=(const SubprocessChannel&) = delete;

  void write(const std::string& bytes) override {
    std::size_t off = 0;
    while (off < bytes.size()) {
      const auto n = ::write(in_, bytes.data() + off, bytes.size() - off);
      if (n <= 0) throw EngineError(EngineError::Kind::transport, "engine pipe closed");
      off += static_cast<std::size_t>(n);
    }
  }

  std::string read_line(std::chrono::milliseconds timeout) override {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (true) {
      if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) throw EngineError(EngineError::Kind::timeout, "engine reply timed out");
      pollfd pfd{out_, POLLIN, 0};
      const int ready = poll(&pfd, 1, static_cast<int>(left.count()));
      if (ready == 0) throw EngineError(EngineError::Kind::timeout, "engine reply timed out");
      if (ready < 0 && errno == EINTR) continue;
      char chunk[4096];
      const auto n = ::read(out_, chunk, sizeof chunk);
      if (n <= 0) throw EngineError(EngineError::Kind::transport, "engine closed its output");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  pid_t pid_ = -1;
  int in_ = -1;
  int out_ = -1;
  std::string buffer_;
};

struct GtpReply {
  bool success = false;
  std::string body;
};

inline std::string gtp_play_command(const go::Move& move) {
  return "play " + go::to_string(move.color) + " " + go::format_gtp_vertex(move.coord) + "\n";
}

// Sends one command and collects the reply up to the terminating blank line.
inline GtpReply gtp_exchange(LineChannel& channel, const std::string& command,
                             std::chrono::milliseconds timeout) {
  channel.write(command);
  std::string first;
  do {
    first = channel.read_line(timeout);
  } while (first.empty());
  GtpReply reply;
  if (first[0] == '=') {
    reply.success = true;
  } else if (first[0] == '?') {
    reply.success = false;
  } else {
    throw EngineError(EngineError::Kind::malformed, "malformed GTP reply '" + first + "'");
  }
  std::string body = first.substr(1);
  // Optional numeric id after the status character.
  std::size_t i = 0;
  while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) ++i;
  body = body.substr(i);
  if (!body.empty() && body.front() == ' ') body.erase(0, 1);
  while (true) {
    std::string line = channel.read_line(timeout);
    if (line.empty()) break;
    body += "\n" + line;
  }
  reply.body = body;
  return reply;
}

inline std::vector<Suggestion> parse_gtp_analysis(const std::string& body) {
  std::istringstream in(body);
  std::vector<Suggestion> out;
  std::string vertex;
  while (in >> vertex) {
    Suggestion s;
    if (!(in >> s.sn >> s.wr))
      throw EngineError(EngineError::Kind::malformed, "malformed analysis reply '" + body + "'");
    try {
      s.coord = go::parse_gtp_vertex(vertex);
    } catch (const Error& e) {
      throw EngineError(EngineError::Kind::malformed, std::string("bad vertex in analysis: ") + e.what());
    }
    out.push_back(s);
  }
  return out;
}

inline std::string format_gtp_analysis(const MoveAnalysis& analysis) {
  std::ostringstream os;
  bool first = true;
  for (const auto& s : analysis.suggestions) {
    if (!first) os << ' ';
    first = false;
    os << go::format_gtp_vertex(s.coord) << ' ' << s.sn << ' ' << util::shortest(s.wr);
  }
  return os.str();
}

}  // namespace fdaa::engine
