#pragma once

// Append-only JSONL log, one file per game. Each line:
//   {"seq": n, "kind": "...", "ts": epoch-ms, "payload": {...}}

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include "fdaa/error.hpp"

namespace fdaa::service {

class IntegrityError : public Error {
 public:
  IntegrityError(std::int64_t missing_seq, const std::string& what)
      : Error(what), missing_seq_(missing_seq) {}
  std::int64_t missing_seq() const { return missing_seq_; }

 private:
  std::int64_t missing_seq_;
};

enum class EventKind { created, move, frame, finished };

inline std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::created: return "created";
    case EventKind::move: return "move";
    case EventKind::frame: return "frame";
    case EventKind::finished: return "finished";
  }
  return "created";
}

inline EventKind parse_event_kind(const std::string& s) {
  for (auto k : {EventKind::created, EventKind::move, EventKind::frame, EventKind::finished})
    if (to_string(k) == s) return k;
  throw Error("unknown event kind '" + s + "'");
}

struct EventLogEntry {
  std::int64_t seq = 0;
  EventKind kind = EventKind::created;
  nlohmann::json payload;
  std::int64_t ts = 0;
};

inline std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

class EventLog {
 public:
  explicit EventLog(std::filesystem::path path) : path_(std::move(path)) {}

  const std::filesystem::path& path() const { return path_; }
  std::int64_t last_seq() const { return last_seq_; }

  // Writes a batch atomically with respect to the in-memory sequence: either
  // every entry is flushed or the sequence counter is left untouched.
  std::vector<EventLogEntry> append(const std::vector<std::pair<EventKind, nlohmann::json>>& batch) {
    std::lock_guard lock(mu_);
    std::vector<EventLogEntry> out;
    std::string text;
    std::int64_t seq = last_seq_;
    const auto ts = now_ms();
    for (const auto& [kind, payload] : batch) {
      EventLogEntry e{++seq, kind, payload, ts};
      nlohmann::json line = {{"seq", e.seq}, {"kind", to_string(kind)}, {"ts", e.ts}, {"payload", payload}};
      text += line.dump() + "\n";
      out.push_back(std::move(e));
    }
    std::ofstream f(path_, std::ios::app | std::ios::binary);
    if (!f) throw Error("cannot open event log " + path_.string());
    f << text;
    f.flush();
    if (!f) throw Error("cannot write event log " + path_.string());
    last_seq_ = seq;
    return out;
  }

 private:
  std::filesystem::path path_;
  std::int64_t last_seq_ = 0;
  std::mutex mu_;
};

// Reads every entry, checking that sequence numbers run 1, 2, 3, ... A
// truncated or unparsable line counts as the missing entry.
inline std::vector<EventLogEntry> read_event_log(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open event log " + path.string());
  std::vector<EventLogEntry> out;
  std::string line;
  std::int64_t expect = 1;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      EventLogEntry e;
      e.seq = j.at("seq").get<std::int64_t>();
      e.kind = parse_event_kind(j.at("kind").get<std::string>());
      e.ts = j.at("ts").get<std::int64_t>();
      e.payload = j.at("payload");
      if (e.seq != expect)
        throw IntegrityError(expect, "event log " + path.string() + ": sequence number " + std::to_string(expect) +
                                         " missing (found " + std::to_string(e.seq) + ")");
      out.push_back(std::move(e));
      ++expect;
    } catch (const IntegrityError&) {
      throw;
    } catch (const std::exception&) {
      throw IntegrityError(expect, "event log " + path.string() + ": sequence number " + std::to_string(expect) +
                                       " missing (corrupt or truncated entry)");
    }
  }
  if (out.empty()) throw IntegrityError(1, "event log " + path.string() + ": sequence number 1 missing (empty log)");
  return out;
}

}  // namespace fdaa::service
