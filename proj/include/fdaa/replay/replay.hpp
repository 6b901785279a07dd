#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "fdaa/codec.hpp"
#include "fdaa/engine/session.hpp"

namespace fdaa::replay {

namespace fs = std::filesystem;

struct GameEntry {
  std::string path;
  // Stub overrides for this game only.
  std::optional<std::uint64_t> seed;
  std::optional<double> drift;
  std::optional<int> settle_ply;

  friend bool operator==(const GameEntry&, const GameEntry&) = default;
};

struct RunConfig {
  std::string name;
  engine::EngineConfig engine;  // simulation_setting lives here
  assessment::FmlVariant fml = assessment::FmlVariant::fml2;
  int ogs_method = 2;
  std::vector<GameEntry> games;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ExperimentConfig {
  std::vector<RunConfig> runs;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

inline engine::EngineConfig engine_for(const RunConfig& run, const GameEntry& g) {
  auto e = run.engine;
  if (g.seed) e.stub_seed = *g.seed;
  if (g.drift) e.stub.drift = *g.drift;
  if (g.settle_ply) e.stub.settle_ply = *g.settle_ply;
  return e;
}

inline nlohmann::json experiment_to_json(const ExperimentConfig& c) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : c.runs) {
    nlohmann::json games = nlohmann::json::array();
    for (const auto& g : r.games) {
      if (!g.seed && !g.drift && !g.settle_ply) {
        games.push_back(g.path);
        continue;
      }
      nlohmann::json jg = {{"path", g.path}};
      if (g.seed) jg["seed"] = *g.seed;
      if (g.drift) jg["drift"] = *g.drift;
      if (g.settle_ply) jg["settle_ply"] = *g.settle_ply;
      games.push_back(jg);
    }
    runs.push_back({{"name", r.name},
                    {"simulation_setting", r.engine.simulation_setting},
                    {"engine", r.engine},
                    {"fml_variant", assessment::to_string(r.fml)},
                    {"ogs_method", r.ogs_method},
                    {"games", games}});
  }
  return {{"runs", runs}};
}

// Relative game paths resolve against `base`.
inline ExperimentConfig experiment_from_json(const nlohmann::json& j, const fs::path& base = {}) {
  ExperimentConfig c;
  std::set<std::string> names;
  try {
    for (const auto& jr : j.at("runs")) {
      RunConfig r;
      r.name = jr.at("name").get<std::string>();
      if (!names.insert(r.name).second) throw Error("duplicate run name '" + r.name + "'");
      if (jr.contains("engine")) r.engine = jr["engine"].get<engine::EngineConfig>();
      if (jr.contains("simulation_setting")) r.engine.simulation_setting = jr["simulation_setting"].get<int>();
      r.fml = assessment::parse_fml_variant(jr.value("fml_variant", std::string("FML-2")));
      r.ogs_method = jr.value("ogs_method", 2);
      if (r.ogs_method != 1 && r.ogs_method != 2) throw Error("run '" + r.name + "': ogs_method must be 1 or 2");
      for (const auto& jg : jr.at("games")) {
        GameEntry g;
        if (jg.is_string()) {
          g.path = jg.get<std::string>();
        } else {
          g.path = jg.at("path").get<std::string>();
          if (jg.contains("seed")) g.seed = jg["seed"].get<std::uint64_t>();
          if (jg.contains("drift")) g.drift = jg["drift"].get<double>();
          if (jg.contains("settle_ply")) g.settle_ply = jg["settle_ply"].get<int>();
        }
        if (!base.empty() && fs::path(g.path).is_relative()) g.path = (base / g.path).lexically_normal().string();
        r.games.push_back(std::move(g));
      }
      r.engine.validate();
      c.runs.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed experiment config: ") + e.what());
  }
  return c;
}

inline ExperimentConfig load_experiment(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot read experiment config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw Error("experiment config " + path.string() + " is not JSON: " + e.what());
  }
  return experiment_from_json(j, path.parent_path());
}

struct GameReport {
  std::string game_id;
  std::string source;
  std::string fml;
  int ogs_method = 2;
  engine::EngineConfig engine;
  std::map<std::string, std::string> players;  // PB, PW, BR, WR when present
  std::optional<std::string> result;
  int total_moves = 0;
  std::optional<double> final_wr_black;
  std::optional<double> final_wr_white;
  std::array<double, 3> btmr{};
  std::array<double, 3> wtmr{};
  std::vector<assessment::MoveFeatures> features;
  std::vector<assessment::CgsRecord> series;
  std::optional<assessment::OgsVerdict> method1;
  std::optional<assessment::OgsVerdict> method2;
  std::optional<summary::Commentary> commentary;
  std::string commentary_text;
  bool partial = false;
  std::string error;
  double elapsed_ms = 0.0;  // wall clock, not part of the deterministic content

  bool same_content(const GameReport& o) const {
    auto a = *this;
    auto b = o;
    a.elapsed_ms = b.elapsed_ms = 0.0;
    return a == b;
  }

  friend bool operator==(const GameReport&, const GameReport&) = default;
};

inline nlohmann::json report_to_json(const GameReport& r, bool with_timing = true) {
  auto opt = [](const auto& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json j = {{"game_id", r.game_id},
                      {"source", r.source},
                      {"fml_variant", r.fml},
                      {"ogs_method", r.ogs_method},
                      {"engine", r.engine},
                      {"players", r.players},
                      {"result", opt(r.result)},
                      {"total_moves", r.total_moves},
                      {"final_wr", {{"black", opt(r.final_wr_black)}, {"white", opt(r.final_wr_white)}}},
                      {"btmr", r.btmr},
                      {"wtmr", r.wtmr},
                      {"features", r.features},
                      {"cgs", r.series},
                      {"method1", opt(r.method1)},
                      {"method2", opt(r.method2)},
                      {"commentary", opt(r.commentary)},
                      {"commentary_text", r.commentary_text},
                      {"partial", r.partial},
                      {"error", r.error}};
  if (with_timing) j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

inline GameReport report_from_json(const nlohmann::json& j) {
  GameReport r;
  try {
    r.game_id = j.at("game_id").get<std::string>();
    r.source = j.value("source", std::string());
    r.fml = j.at("fml_variant").get<std::string>();
    r.ogs_method = j.at("ogs_method").get<int>();
    r.engine = j.at("engine").get<engine::EngineConfig>();
    r.players = j.value("players", std::map<std::string, std::string>{});
    if (!j.at("result").is_null()) r.result = j["result"].get<std::string>();
    r.total_moves = j.at("total_moves").get<int>();
    const auto& wr = j.at("final_wr");
    if (!wr.at("black").is_null()) r.final_wr_black = wr["black"].get<double>();
    if (!wr.at("white").is_null()) r.final_wr_white = wr["white"].get<double>();
    r.btmr = j.at("btmr").get<std::array<double, 3>>();
    r.wtmr = j.at("wtmr").get<std::array<double, 3>>();
    r.features = j.at("features").get<std::vector<assessment::MoveFeatures>>();
    r.series = j.at("cgs").get<std::vector<assessment::CgsRecord>>();
    if (!j.at("method1").is_null()) r.method1 = j["method1"].get<assessment::OgsVerdict>();
    if (!j.at("method2").is_null()) r.method2 = j["method2"].get<assessment::OgsVerdict>();
    if (!j.at("commentary").is_null()) r.commentary = j["commentary"].get<summary::Commentary>();
    r.commentary_text = j.value("commentary_text", std::string());
    r.partial = j.value("partial", false);
    r.error = j.value("error", std::string());
    r.elapsed_ms = j.value("elapsed_ms", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed game report: ") + e.what());
  }
  return r;
}

inline GameReport load_report(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot read report " + path.string());
  try {
    return report_from_json(nlohmann::json::parse(f));
  } catch (const nlohmann::json::exception& e) {
    throw Error("report " + path.string() + " is not JSON: " + e.what());
  }
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("cannot write " + path.string());
}

inline std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path.string());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

struct ReplayOptions {
  engine::EngineConfig engine;
  assessment::FmlVariant fml = assessment::FmlVariant::fml2;
  int ogs_method = 2;
};

// Analysis before every move, then features, then CGS, then the move goes
// to the engine. Engine failures end the replay early with `partial` set.
inline GameReport replay_record(const go::GameRecord& game, const std::string& game_id, const ReplayOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  GameReport r;
  r.game_id = game_id;
  r.fml = assessment::to_string(opt.fml);
  r.ogs_method = opt.ogs_method;
  r.engine = opt.engine;
  r.result = game.result;
  r.total_moves = static_cast<int>(game.moves.size());
  for (const char* key : {"PB", "PW", "BR", "WR"})
    if (auto it = game.metadata.find(key); it != game.metadata.end()) r.players[key] = it->second;

  assessment::GameAssessor assessor(assessment::shared_system(opt.fml));
  try {
    auto session = engine::open_session(opt.engine);
    session.set_position(go::initial_position(game));
    for (const auto& move : game.moves) {
      const auto analysis = session.request_analysis();
      assessor.observe(analysis, move);
      session.play_move(move);
    }
  } catch (const EngineError& e) {
    r.partial = true;
    r.error = e.what();
  }

  r.features = assessor.features();
  r.series = assessor.series();
  if (const auto& b = assessor.latest(go::Color::black)) {
    r.final_wr_black = b->wr;
    r.btmr = b->tmr_after;
  }
  if (const auto& w = assessor.latest(go::Color::white)) {
    r.final_wr_white = w->wr;
    r.wtmr = w->tmr_after;
  }
  if (!r.series.empty()) {
    r.method1 = assessment::decide_ogs_method1(r.series, r.result);
    r.method2 = assessment::decide_ogs_method2(r.series, r.result);
    try {
      r.commentary = summary::summarize(r.features, opt.ogs_method == 1 ? *r.method1 : *r.method2);
      r.commentary_text = summary::render_text(*r.commentary);
    } catch (const AssessmentError&) {
    }
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline GameReport replay_game(const fs::path& sgf_path, const ReplayOptions& opt) {
  const auto game = go::parse_sgf(read_text(sgf_path));
  auto r = replay_record(game, sgf_path.stem().string(), opt);
  r.source = sgf_path.string();
  return r;
}

struct Tally {
  int correct = 0;
  int known = 0;
  double accuracy() const { return known == 0 ? 0.0 : static_cast<double>(correct) / known; }

  friend bool operator==(const Tally&, const Tally&) = default;
};

inline void tally(Tally& t, const std::optional<assessment::OgsVerdict>& v, bool has_result) {
  if (!has_result) return;
  ++t.known;
  if (v && v->correct.value_or(false)) ++t.correct;
}

struct RunResult {
  std::string name;
  std::string fml;
  int ogs_method = 2;
  std::vector<GameReport> reports;
  Tally method1;
  Tally method2;

  const Tally& selected() const { return ogs_method == 1 ? method1 : method2; }
};

// (fml variant, method) -> tally, pooled over runs.
using CrossTable = std::map<std::pair<std::string, int>, Tally>;

inline CrossTable cross_table(const std::vector<GameReport>& reports) {
  CrossTable t;
  for (const auto& r : reports) {
    tally(t[{r.fml, 1}], r.method1, r.result.has_value());
    tally(t[{r.fml, 2}], r.method2, r.result.has_value());
  }
  return t;
}

inline std::string cross_table_csv(const CrossTable& t) {
  std::ostringstream os;
  os << "fml_variant,ogs_method,correct,known,accuracy\n";
  for (const auto& [key, v] : t)
    os << key.first << "," << key.second << "," << v.correct << "," << v.known << "," << util::shortest(v.accuracy())
       << "\n";
  return os.str();
}

inline std::string cross_table_text(const CrossTable& t) {
  std::ostringstream os;
  os << "variant  method    correct/known  accuracy\n";
  for (const auto& [key, v] : t) {
    std::string frac = std::to_string(v.correct) + "/" + std::to_string(v.known);
    frac.resize(std::max<std::size_t>(frac.size(), 13), ' ');
    os << key.first << "    Method " << key.second << "  " << frac << "  " << util::fixed2(v.accuracy() * 100.0)
       << "%\n";
  }
  return os.str();
}

struct ExperimentResult {
  std::vector<RunResult> runs;
  CrossTable table;
};

// Games replay concurrently; results are joined in configuration order.
inline ExperimentResult run_experiments(const ExperimentConfig& config, const std::optional<fs::path>& out_dir = {}) {
  struct Job {
    std::size_t run;
    GameEntry game;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < config.runs.size(); ++i) {
    if (config.runs[i].games.empty()) throw Error("run '" + config.runs[i].name + "' has an empty game set");
    for (const auto& g : config.runs[i].games) {
      if (!fs::exists(g.path)) throw Error("run '" + config.runs[i].name + "': no such game " + g.path);
      jobs.push_back({i, g});
    }
  }

  std::vector<GameReport> reports(jobs.size());
  const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t begin = 0; begin < jobs.size(); begin += width) {
    std::vector<std::future<GameReport>> batch;
    for (std::size_t k = begin; k < std::min(jobs.size(), begin + width); ++k) {
      const auto& run = config.runs[jobs[k].run];
      ReplayOptions opt{engine_for(run, jobs[k].game), run.fml, run.ogs_method};
      batch.push_back(std::async(std::launch::async, [path = jobs[k].game.path, opt] { return replay_game(path, opt); }));
    }
    for (std::size_t k = 0; k < batch.size(); ++k) reports[begin + k] = batch[k].get();
  }

  ExperimentResult result;
  std::vector<GameReport> all;
  for (std::size_t i = 0; i < config.runs.size(); ++i) {
    RunResult rr;
    rr.name = config.runs[i].name;
    rr.fml = assessment::to_string(config.runs[i].fml);
    rr.ogs_method = config.runs[i].ogs_method;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      if (jobs[k].run != i) continue;
      tally(rr.method1, reports[k].method1, reports[k].result.has_value());
      tally(rr.method2, reports[k].method2, reports[k].result.has_value());
      rr.reports.push_back(reports[k]);
      all.push_back(reports[k]);
    }
    result.runs.push_back(std::move(rr));
  }
  result.table = cross_table(all);

  if (out_dir) {
    fs::create_directories(*out_dir);
    nlohmann::json summary = nlohmann::json::array();
    for (const auto& rr : result.runs) {
      const auto dir = *out_dir / rr.name;
      fs::create_directories(dir);
      for (const auto& rep : rr.reports) write_text(dir / (rep.game_id + ".json"), report_to_json(rep).dump(2) + "\n");
      summary.push_back({{"name", rr.name},
                         {"fml_variant", rr.fml},
                         {"ogs_method", rr.ogs_method},
                         {"games", rr.reports.size()},
                         {"method1", {{"correct", rr.method1.correct}, {"known", rr.method1.known}}},
                         {"method2", {{"correct", rr.method2.correct}, {"known", rr.method2.known}}},
                         {"accuracy", rr.selected().accuracy()}});
    }
    write_text(*out_dir / "summary.json", nlohmann::json{{"runs", summary}}.dump(2) + "\n");
    write_text(*out_dir / "cross_table.csv", cross_table_csv(result.table));
  }
  return result;
}

// Every *.json report below `dir`, in path order.
inline std::vector<GameReport> load_reports(const fs::path& dir) {
  std::vector<fs::path> paths;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json" && e.path().filename() != "summary.json")
      paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  std::vector<GameReport> out;
  for (const auto& p : paths) out.push_back(load_report(p));
  return out;
}

inline const char* kCurvesHeader = "move_no,color,sn,wr,tmr1,tmr2,tmr3,cgs_crisp,cgs_label\n";

inline std::string curves_csv(const GameReport& r) {
  std::map<int, const assessment::CgsRecord*> by_move;
  for (const auto& c : r.series) by_move[c.move_no] = &c;
  std::ostringstream os;
  os << kCurvesHeader;
  for (const auto& f : r.features) {
    os << f.move_no << "," << go::to_string(f.color) << "," << f.sn << "," << util::shortest(f.wr);
    for (double t : f.tmr_after) os << "," << util::shortest(t);
    if (auto it = by_move.find(f.move_no); it != by_move.end())
      os << "," << util::shortest(it->second->crisp) << "," << assessment::to_string(it->second->label);
    else
      os << ",,";
    os << "\n";
  }
  return os.str();
}

// Returns the written path; `warning` is set when the report has no moves.
inline fs::path export_curves(const GameReport& r, const fs::path& dir, std::string* warning = nullptr) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("destination " + dir.string() + " is not writable: " + ec.message());
  const auto path = dir / (r.game_id + "_curves.csv");
  write_text(path, curves_csv(r));
  if (r.features.empty() && warning) *warning = "report " + r.game_id + " has no analysed moves";
  return path;
}

}  // namespace fdaa::replay
