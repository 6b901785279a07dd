// Batch front end: replay, experiment, report, curves, synth, suite, gen-fml.

#include <CLI11.hpp>

#include <iostream>

#include "fdaa/fml/xml.hpp"
#include "fdaa/replay/analytics.hpp"
#include "fdaa/replay/synth.hpp"

using namespace fdaa;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInput = 2;
constexpr int kEngine = 3;

struct EngineFlags {
  std::string kind = "stub";
  std::uint64_t seed = 42;
  int simulations = 20000;
  std::string endpoint;
  std::string command;
  int timeout_ms = 5000;
  std::optional<double> drift;
  int settle_ply = 0;

  void attach(CLI::App* app) {
    app->add_option("--engine", kind, "stub, gtp or http")->check(CLI::IsMember({"stub", "gtp", "http"}));
    app->add_option("--seed", seed, "stub seed");
    app->add_option("--simulations", simulations, "simulation setting")->check(CLI::PositiveNumber);
    app->add_option("--endpoint", endpoint, "http engine base URL");
    app->add_option("--command", command, "gtp engine command line");
    app->add_option("--timeout-ms", timeout_ms, "engine request timeout");
    app->add_option("--drift", drift, "stub win-rate drift per ply (negative favours White)");
    app->add_option("--settle-ply", settle_ply, "stub: ply from which the advantage fades");
  }

  engine::EngineConfig config() const {
    engine::EngineConfig c;
    c.kind = engine::parse_engine_kind(kind);
    c.stub_seed = seed;
    c.simulation_setting = simulations;
    c.endpoint = endpoint;
    std::istringstream in(command);
    for (std::string w; in >> w;) c.command.push_back(w);
    c.timeout = std::chrono::milliseconds(timeout_ms);
    c.stub.drift = drift;
    c.stub.settle_ply = settle_ply;
    c.validate();
    return c;
  }
};

void write_report_files(const replay::GameReport& r, const fs::path& out) {
  fs::create_directories(out);
  replay::write_text(out / (r.game_id + ".json"), replay::report_to_json(r).dump(2) + "\n");
  replay::export_curves(r, out);
  if (!r.commentary_text.empty()) replay::write_text(out / (r.game_id + "_commentary.txt"), r.commentary_text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic assessment toolkit for Go game records"};
  app.require_subcommand(1);

  // replay
  auto* replay_cmd = app.add_subcommand("replay", "replay one SGF through the assessment pipeline");
  std::string sgf;
  EngineFlags replay_engine;
  int replay_fml = 2;
  int replay_ogs = 2;
  std::string replay_out;
  replay_cmd->add_option("sgf", sgf, "game record")->required();
  replay_engine.attach(replay_cmd);
  replay_cmd->add_option("--fml", replay_fml, "knowledge base variant")->check(CLI::IsMember({1, 2}));
  replay_cmd->add_option("--ogs", replay_ogs, "OGS method feeding the commentary")->check(CLI::IsMember({1, 2}));
  replay_cmd->add_option("--out", replay_out, "directory for report, curves and commentary");

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "run an experiment suite");
  std::string exp_config;
  std::string exp_out;
  exp_cmd->add_option("config", exp_config, "experiment configuration (JSON)")->required();
  exp_cmd->add_option("--out", exp_out, "output directory");

  // report
  auto* report_cmd = app.add_subcommand("report", "print the accuracy cross table of a run directory");
  std::string report_dir;
  report_cmd->add_option("run-dir", report_dir, "directory holding game reports")->required();

  // curves
  auto* curves_cmd = app.add_subcommand("curves", "export per-move curves from a game report");
  std::string curves_report;
  std::string curves_out;
  curves_cmd->add_option("report", curves_report, "game report (JSON)")->required();
  curves_cmd->add_option("--out", curves_out, "output directory")->required();

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic game played against the stub");
  std::string synth_out;
  int synth_moves = 120;
  std::uint64_t synth_seed = 1;
  std::string synth_result;
  bool synth_no_result = false;
  EngineFlags synth_engine;
  synth_cmd->add_option("--out", synth_out, "SGF file to write")->required();
  synth_cmd->add_option("--moves", synth_moves, "number of moves")->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--move-seed", synth_seed, "seed for the move choices");
  synth_cmd->add_option("--result", synth_result, "RE value (default: side favoured by the stub)");
  synth_cmd->add_flag("--no-result", synth_no_result, "omit RE");
  synth_engine.attach(synth_cmd);

  // suite
  auto* suite_cmd = app.add_subcommand("suite", "write the method-comparison suite and its experiment config");
  std::string suite_out;
  int suite_count = 20;
  suite_cmd->add_option("--out", suite_out, "output directory")->required();
  suite_cmd->add_option("--count", suite_count, "number of games")->check(CLI::PositiveNumber);

  // gen-fml
  auto* gen_cmd = app.add_subcommand("gen-fml", "write the FML knowledge bases and the fitted scheme");
  std::string gen_out;
  gen_cmd->add_option("--out", gen_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*replay_cmd) {
      replay::ReplayOptions opt{replay_engine.config(),
                                replay_fml == 1 ? assessment::FmlVariant::fml1 : assessment::FmlVariant::fml2,
                                replay_ogs};
      const auto r = replay::replay_game(sgf, opt);
      if (!replay_out.empty()) write_report_files(r, replay_out);
      std::cout << r.commentary_text;
      std::cout << "cgs records: " << r.series.size() << "\n";
      if (r.partial) {
        std::cerr << "partial replay: " << r.error << "\n";
        return kEngine;
      }
      return kOk;
    }
    if (*exp_cmd) {
      const auto cfg = replay::load_experiment(exp_config);
      std::optional<fs::path> out;
      if (!exp_out.empty()) out = fs::path(exp_out);
      const auto result = replay::run_experiments(cfg, out);
      bool partial = false;
      std::vector<replay::GameReport> all;
      for (const auto& run : result.runs) {
        std::cout << run.name << ": " << run.fml << " method " << run.ogs_method << " accuracy "
                  << util::fixed2(run.selected().accuracy() * 100.0) << "% (" << run.selected().correct << "/"
                  << run.selected().known << ")\n";
        for (const auto& r : run.reports) {
          partial = partial || r.partial;
          all.push_back(r);
        }
      }
      std::cout << replay::cross_table_text(result.table);
      if (out) replay::write_hint_analytics(replay::hint_analytics(all), *out);
      return partial ? kEngine : kOk;
    }
    if (*report_cmd) {
      const auto reports = replay::load_reports(report_dir);
      if (reports.empty()) {
        std::cerr << "no game reports under " << report_dir << "\n";
        return kInput;
      }
      std::cout << replay::cross_table_text(replay::cross_table(reports));
      return kOk;
    }
    if (*curves_cmd) {
      std::string warning;
      const auto path = replay::export_curves(replay::load_report(curves_report), curves_out, &warning);
      if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
      std::cout << path.string() << "\n";
      return kOk;
    }
    if (*synth_cmd) {
      replay::SynthOptions opt;
      opt.seed = synth_seed;
      opt.moves = synth_moves;
      opt.engine = synth_engine.config();
      if (!synth_result.empty()) opt.result = synth_result;
      opt.omit_result = synth_no_result;
      replay::write_text(synth_out, go::serialize_sgf(replay::synthesize_game(opt)));
      return kOk;
    }
    if (*suite_cmd) {
      const fs::path dir(suite_out);
      const auto suite = replay::build_method_suite(dir / "games", suite_count);
      replay::ExperimentConfig cfg;
      for (auto fml : {assessment::FmlVariant::fml1, assessment::FmlVariant::fml2}) {
        replay::RunConfig run;
        run.name = fml == assessment::FmlVariant::fml1 ? "fml1" : "fml2";
        run.engine.simulation_setting = 3000;
        run.fml = fml;
        run.games = suite.games;
        for (auto& g : run.games) g.path = fs::relative(g.path, dir).string();
        cfg.runs.push_back(run);
      }
      replay::write_text(dir / "experiment.json", replay::experiment_to_json(cfg).dump(2) + "\n");
      std::cout << (dir / "experiment.json").string() << "\n";
      return kOk;
    }
    if (*gen_cmd) {
      const fs::path dir(gen_out);
      fs::create_directories(dir);
      replay::write_text(dir / "fml-1.xml", fml::serialize_fml(assessment::build_system(assessment::FmlVariant::fml1)));
      replay::write_text(dir / "fml-2.xml", fml::serialize_fml(assessment::build_system(assessment::FmlVariant::fml2)));
      const auto fit = assessment::fit_scheme();
      replay::write_text(dir / "rulegen_scheme.json", assessment::scheme_to_json(fit.scheme).dump(2) + "\n");
      std::cout << "candidates " << fit.candidates << ", feasible " << fit.feasible << ", margin "
                << util::shortest(fit.margin) << ", mirror fraction " << util::fixed2(fit.mirror * 100.0) << "%\n";
      return kOk;
    }
  } catch (const EngineError& e) {
    std::cerr << "engine error: " << e.what() << "\n";
    return kEngine;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kUsage;
}
