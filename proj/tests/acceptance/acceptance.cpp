// Runs every acceptance criterion once, prints one PASS/FAIL line each and
// exits non-zero if any failed.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include <unistd.h>

#include "fdaa/fml/xml.hpp"
#include "fdaa/replay/synth.hpp"
#include "fdaa/service/session.hpp"

using namespace fdaa;
namespace fs = std::filesystem;
using assessment::CgsLabel;
using go::Color;

namespace {

const std::string kData = FDAA_DATA_DIR;
const std::string kGolden = FDAA_GOLDEN_DIR;

struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& n) { notes.push_back(n); }
};

std::string num(double x, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("fdaa-accept-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// --- criteria ---

void tmr_worked_example(Check& c) {
  const assessment::TmrState s{Color::black, {11, 5, 6, 1, 0}, 3, 26};
  const double p1 = assessment::compute_tmr(s, assessment::kTmrProfile1);
  const double p2 = assessment::compute_tmr(s, assessment::kTmrProfile2);
  c.expect(std::abs(p1 - 88.44) <= 0.05, "profile 1 = " + num(p1) + ", printed 88.44");
  c.expect(std::abs(p1 - 100.0 * 23 / 26) < 1e-9, "profile 1 != 100*23/26");
  c.expect(std::abs(p2 - 71.91) <= 0.05, "w6=0.1 profile = " + num(p2) + ", expected 71.91");
  c.expect(std::abs(p2 - 71.9) <= 0.05, "w6=0.1 profile = " + num(p2) + ", printed 71.9");
  c.note("p1=" + num(p1) + " p2=" + num(p2));
}

void shipped_kb_fidelity(Check& c) {
  const auto sys = fml::load_fml(kData + "/fml-2.xml");
  const std::map<std::string, fml::TrapezoidMF> printed{{"Low", {0, 0, 2556, 7122}},
                                                        {"Medium", {2556, 7122, 12637, 17203}},
                                                        {"High", {12637, 17203, 20000, 20000}}};
  for (const char* name : {"BSN", "WSN"}) {
    const auto& v = sys.variable(name);
    c.expect(v.domain_left == 0 && v.domain_right == 20000, std::string(name) + " domain");
    c.expect(v.terms.size() == 3, std::string(name) + " term count");
    for (const auto& [term, mf] : printed) {
      const auto* t = v.find_term(term);
      c.expect(t && t->mf == mf, std::string(name) + "." + term + " parameters differ");
    }
  }
  double worst = 0.0;
  for (const auto* v : sys.variables_of(fml::VariableType::input)) {
    for (int i = 0; i <= 20000; ++i) {
      const double x = v->domain_left + (v->domain_right - v->domain_left) * i / 20000.0;
      double sum = 0.0;
      for (const auto& t : v->terms) sum += fml::membership(*v, t, x);
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  c.expect(worst < 1e-9, "partition of unity off by " + num(worst));
  c.note("max |sum-1| = " + num(worst));
}

const std::vector<std::string> kPrintedRows{
    "1 Low Low Low Low Low Low UncertainSituation",
    "2 Low Low Low Low Low High UncertainSituation",
    "3 Low Low Low Low High Low UncertainSituation",
    "4 Low Low Low Low High High UncertainSituation",
    "5 Low Low Low Medium Low Low UncertainSituation",
    "6 Low Low Low Medium Low High WhitePossibleAdvantage",
    "7 Low Low Low Medium High Low UncertainSituation",
    "8 Low Low Low Medium High High UncertainSituation",
    "9 Low Low Low High Low Low WhitePossibleAdvantage",
    "10 Low Low Low High Low High WhitePossibleAdvantage",
    "315 High High High Low High Low BlackPossibleAdvantage",
    "316 High High High Low High High BlackPossibleAdvantage",
    "317 High High High Medium Low Low BlackPossibleAdvantage",
    "318 High High High Medium Low High UncertainSituation",
    "319 High High High Medium High Low BlackPossibleAdvantage",
    "320 High High High Medium High High BlackPossibleAdvantage",
    "321 High High High High Low Low UncertainSituation",
    "322 High High High High Low High UncertainSituation",
    "323 High High High High High Low UncertainSituation",
    "324 High High High High High High UncertainSituation",
};

void rule_base_oracle(Check& c) {
  const auto fit = assessment::fit_scheme();
  c.note("candidates=" + std::to_string(fit.candidates) + " feasible=" + std::to_string(fit.feasible));
  const auto six = assessment::generate_rulebase(fit.scheme, 6);
  const auto four = assessment::generate_rulebase(fit.scheme, 4);
  c.expect(six.size() == 324, "6-input base has " + std::to_string(six.size()) + " rules");
  c.expect(four.size() == 81, "4-input base has " + std::to_string(four.size()) + " rules");
  for (const auto* base : {&six, &four}) {
    std::set<std::vector<std::string>> seen;
    for (const auto& r : *base) {
      std::vector<std::string> key;
      for (const auto& cl : r.antecedent) key.push_back(cl.variable + "=" + cl.term);
      c.expect(seen.insert(key).second, "duplicate antecedent in " + r.name);
    }
  }
  int matched = 0;
  for (const auto& row : kPrintedRows) {
    const auto n = static_cast<std::size_t>(std::stoi(row));
    if (n > six.size()) continue;
    const auto& r = six[n - 1];
    std::string got = r.name.substr(r.name.find('-') + 1);
    for (const auto& cl : r.antecedent) got += " " + cl.term;
    got += " " + r.consequent.at(0).term;
    if (got == row) ++matched;
    else c.expect(false, "row " + std::to_string(n) + ": got '" + got + "'");
  }
  c.note(std::to_string(matched) + "/20 printed rows");
}

void feature_extraction(Check& c) {
  using go::parse_gtp_vertex;
  engine::MoveAnalysis a51;
  a51.move_no = 51;
  a51.color = Color::black;
  a51.suggestions = {{parse_gtp_vertex("B1"), 12983, 0.46114},
                     {parse_gtp_vertex("H3"), 2811, 0.42173},
                     {parse_gtp_vertex("C1"), 1813, 0.40786},
                     {parse_gtp_vertex("G2"), 835, 0.41851},
                     {parse_gtp_vertex("F1"), 712, 0.35764}};
  auto [f51, s51] = assessment::extract_features(a51, {Color::black, parse_gtp_vertex("B1"), 51},
                                                 assessment::TmrState{Color::black, {}, 0, 0});
  c.expect(f51.matched_rank == 1, "move 51 rank");
  c.expect(f51.sn == 12983, "move 51 sn = " + std::to_string(f51.sn));
  c.expect(f51.wr == 0.46114, "move 51 wr = " + num(f51.wr));
  engine::MoveAnalysis a52;
  a52.move_no = 52;
  a52.color = Color::white;
  a52.suggestions = {{parse_gtp_vertex("G2"), 13877, 0.53501},
                     {parse_gtp_vertex("C1"), 3120, 0.50112},
                     {parse_gtp_vertex("H3"), 2204, 0.49031}};
  auto [f52, s52] = assessment::extract_features(a52, {Color::white, parse_gtp_vertex("G2"), 52},
                                                 assessment::TmrState{Color::white, {}, 0, 0});
  c.expect(f52.sn == 13877, "move 52 sn = " + std::to_string(f52.sn));
  c.expect(f52.wr == 0.53501, "move 52 wr = " + num(f52.wr));
  (void)s51;
  (void)s52;
}

double trap(const fml::TrapezoidMF& m, double x) {
  if (x < m.a || x > m.d) return 0.0;
  if (x >= m.b && x <= m.c) return 1.0;
  if (x < m.b) return (x - m.a) / (m.b - m.a);
  return (m.d - x) / (m.d - m.c);
}

void cog_oracle(Check& c) {
  const auto sys = fml::load_fml(kData + "/fml-2.xml");
  const auto& out = sys.variable("CGS");
  const auto inputs = sys.variables_of(fml::VariableType::input);
  std::mt19937_64 rng(20170101);
  const double width = out.domain_right - out.domain_left;
  double worst = 0.0;
  int fired = 0;
  for (int k = 0; k < 100; ++k) {
    fml::Inputs in;
    for (const auto* v : inputs)
      in[v->name] = v->domain_left + (v->domain_right - v->domain_left) * static_cast<double>(rng() % 100001) / 1e5;
    const auto res = fml::infer(sys, in);

    // independent clip levels
    std::map<std::string, double> clip;
    for (const auto& r : sys.rule_base.rules) {
      double s = 1.0;
      for (const auto& cl : r.antecedent) {
        const auto& v = sys.variable(cl.variable);
        s = std::min(s, trap(v.find_term(cl.term)->mf, in.at(cl.variable)));
      }
      s *= r.weight;
      auto& lvl = clip[r.consequent.at(0).term];
      lvl = std::max(lvl, s);
    }
    auto mu = [&](double x) {
      double m = 0.0;
      for (const auto& t : out.terms) m = std::max(m, std::min(clip[t.name], trap(t.mf, x)));
      return m;
    };
    const int cells = 10 * fml::kCogSamples;
    const double h = width / cells;
    double num_ = 0, den = 0;
    for (int i = 0; i < cells; ++i) {
      const double x = out.domain_left + (i + 0.5) * h;
      num_ += x * mu(x);
      den += mu(x);
    }
    const double oracle = den > 0 ? num_ / den : out.default_value;
    if (den > 0) ++fired;
    worst = std::max(worst, std::abs(oracle - res.crisp) / width);
  }
  c.expect(worst <= 0.005, "worst disagreement " + num(worst * 100) + "% of width");
  c.expect(fired > 50, "only " + std::to_string(fired) + " configurations fired");
  c.note("worst=" + num(worst * 100, 3) + "% of width, fired " + std::to_string(fired) + "/100");
}

void prototype_inference(Check& c) {
  const auto& sys = *assessment::shared_system(assessment::FmlVariant::fml2);
  auto feat = [](Color col, int move_no, int sn, double wr, double tmr) {
    assessment::MoveFeatures f;
    f.color = col;
    f.move_no = move_no;
    f.sn = sn;
    f.wr = wr;
    f.tmr_after = {tmr, tmr, tmr};
    return f;
  };
  const auto low = assessment::assess_move(feat(Color::black, 11, 0, 0, 0), feat(Color::white, 10, 0, 0, 0), sys, 11);
  c.expect(low && low->label == CgsLabel::uncertain, "all-Low prototype label");
  c.note("all-Low crisp=" + num(low ? low->crisp : -1));

  // zero firing: the printed rows alone leave Medium simulation numbers uncovered
  auto partial = assessment::build_default_kb(assessment::kCollectedStats);
  for (const auto& ref : assessment::kReferenceRules) {
    fml::FuzzyRule r;
    r.name = "rule-" + std::to_string(ref.number);
    r.antecedent = assessment::antecedent_of(std::vector<int>(ref.terms.begin(), ref.terms.end()));
    r.consequent = {{"CGS", assessment::to_string(ref.label)}};
    partial.rule_base.rules.push_back(r);
  }
  const auto zero = assessment::assess_move(feat(Color::black, 11, 10000, 0.5, 50),
                                            feat(Color::white, 10, 10000, 0.5, 50), partial, 11);
  c.expect(zero && zero->crisp == 50.0, "zero-firing crisp = " + num(zero ? zero->crisp : -1));
  fml::Inputs in{{"BSN", 10000}, {"WSN", 10000}, {"BWR", 0.5}, {"WWR", 0.5}, {"BTMR", 50}, {"WTMR", 50}};
  c.expect(fml::infer(partial, in).fired_rules.empty(), "some rule fired");
}

void method_harness(Check& c) {
  TempDir dir;
  const auto suite = replay::build_method_suite(dir.path / "games", 20, 120, 3000);
  replay::ExperimentConfig cfg;
  for (auto [name, fml] : {std::pair{"fml1", assessment::FmlVariant::fml1}, std::pair{"fml2", assessment::FmlVariant::fml2}}) {
    replay::RunConfig r;
    r.name = name;
    r.engine.simulation_setting = 3000;
    r.fml = fml;
    r.games = suite.games;
    cfg.runs.push_back(r);
  }
  const auto res = replay::run_experiments(cfg, dir.path / "out");
  const auto& f2 = res.runs.at(1);
  int uncertain_tail = 0;
  for (const auto& rep : f2.reports) {
    if (rep.series.empty() || rep.series.back().label != CgsLabel::uncertain) continue;
    if (rep.method2 && rep.method2->correct.value_or(false)) ++uncertain_tail;
  }
  c.expect(uncertain_tail >= 5, std::to_string(uncertain_tail) + " games end uncertain with a decisive prior window");
  c.expect(f2.method2.accuracy() > f2.method1.accuracy(),
           "FML-2 method 2 " + num(f2.method2.accuracy()) + " vs method 1 " + num(f2.method1.accuracy()));
  std::set<std::pair<std::string, int>> cells;
  for (const auto& [key, _] : res.table) cells.insert(key);
  c.expect(cells == std::set<std::pair<std::string, int>>{{"FML-1", 1}, {"FML-1", 2}, {"FML-2", 1}, {"FML-2", 2}},
           "cross table cells");
  c.expect(fs::exists(dir.path / "out" / "cross_table.csv"), "cross table not written");
  c.note("uncertain-tail games=" + std::to_string(uncertain_tail) + " M1=" + std::to_string(f2.method1.correct) + "/" +
         std::to_string(f2.method1.known) + " M2=" + std::to_string(f2.method2.correct) + "/" +
         std::to_string(f2.method2.known));
  std::istringstream table(replay::cross_table_text(res.table));
  for (std::string line; std::getline(table, line);) c.note("  " + line);
}

void end_to_end(Check& c) {
  replay::SynthOptions so;
  so.moves = 120;
  so.engine.stub_seed = 42;
  const auto game = replay::synthesize_game(so);
  const auto sgf = go::serialize_sgf(game);
  c.expect(sgf == replay::read_text(fs::path(kGolden) / "synth_seed42.sgf"), "synthetic SGF differs from frozen copy");
  const auto parsed = go::parse_sgf(sgf);

  replay::ReplayOptions opt;
  opt.engine.stub_seed = 42;
  std::vector<replay::GameReport> runs;
  for (int i = 0; i < 2; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    runs.push_back(replay::replay_record(parsed, "seed42", opt));
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(s < 5.0, "replay took " + num(s) + " s");
    c.note("replay " + std::to_string(i + 1) + ": " + num(s * 1000, 4) + " ms");
  }
  c.expect(runs[0].same_content(runs[1]), "replays differ");
  c.expect(runs[0].series.size() == 110, std::to_string(runs[0].series.size()) + " CGS records");
  const auto& text = runs[0].commentary_text;
  c.expect(text == replay::read_text(fs::path(kGolden) / "synth_seed42_commentary.txt"), "commentary differs from golden");
  const std::string p = R"((\d+) \((\d+)\))";
  const std::string wr = R"((\d+) \((\d+\.\d\d)%\))";
  std::string side_re;
  for (char s : {'B', 'W'}) {
    const std::string S(1, s);
    side_re += std::string(s == 'B' ? "Black" : "White") + ": The first 3 highest simulation numbers occurred at Moves " +
               S + p + ", " + S + p + ", and " + S + p + "\\. The last 3 lowest simulation numbers occurred at Moves " +
               S + p + ", " + S + p + ", and " + S + p +
               "\\. The information of estimated possible win rate: The highest win rate is " + S + wr +
               ", the lowest win rate is " + S + wr + R"(, and the average win rate is \d+\.\d\d%\. Top-move rate is \d+\.\d\d%\.)" +
               "\n";
  }
  const std::regex skeleton(side_re + "Overall game situation is (favorable to Black|favorable to White|uncertain situation)\\.\n");
  c.expect(std::regex_match(text, skeleton), "commentary does not follow the template");

  // the same moves through the live service, then rebuilt from its log
  TempDir dir;
  service::SessionManager mgr(dir.path);
  service::GameConfig gc;
  gc.engine.stub_seed = 42;
  const auto id = mgr.create_game(gc);
  for (const auto& m : parsed.moves) mgr.submit_move(id, m.color, m.coord);
  mgr.finish_game(id, parsed.result);
  const auto live = mgr.state(id);
  const auto rebuilt = service::replay_log(mgr.log_path(id));
  c.expect(rebuilt.series == live.series, "log replay CGS series differs from live");
  c.expect(rebuilt == live, "log replay state differs from live");
  c.expect(live.series == runs[0].series, "service CGS series differs from batch replay");
}

class RecordingChannel final : public engine::LineChannel {
 public:
  std::string written;
  void write(const std::string& bytes) override {
    written += bytes;
    pending_ = true;
  }
  std::string read_line(std::chrono::milliseconds) override {
    if (pending_) {
      pending_ = false;
      return "=";
    }
    return "";
  }

 private:
  bool pending_ = false;
};

void protocol_round_trips(Check& c) {
  int ok = 0;
  for (int i = 0; i < go::kPoints; ++i) {
    const auto p = go::Coord::from_index(i);
    if (go::parse_gtp_vertex(go::format_gtp_vertex(p)) == p) ++ok;
  }
  c.expect(ok == 361, std::to_string(ok) + "/361 vertices round-trip");
  c.expect(go::parse_gtp_vertex(go::format_gtp_vertex(go::Coord::pass())).is_pass(), "PASS round trip");

  std::mt19937_64 rng(4242);
  int sgf_ok = 0;
  for (int g = 0; g < 100; ++g) {
    go::GameRecord rec;
    rec.komi = (static_cast<int>(rng() % 31) - 10) * 0.5;
    if (rng() % 2) rec.result = rng() % 2 ? "B+R" : "W+" + std::to_string(rng() % 30) + ".5";
    auto board = go::empty_board();
    const int plies = static_cast<int>(rng() % 240);
    for (int i = 0; i < plies; ++i) {
      auto legal = go::legal_moves(board);
      auto choice = legal[static_cast<std::size_t>(rng() % legal.size())];
      go::Move m{board.to_move, choice, board.ply + 1};
      board = go::apply_move(board, m);
      rec.moves.push_back(m);
    }
    const auto text = go::serialize_sgf(rec);
    const auto back = go::parse_sgf(text);
    if (back == rec && go::serialize_sgf(back) == text) ++sgf_ok;
  }
  c.expect(sgf_ok == 100, std::to_string(sgf_ok) + "/100 SGF records round-trip");

  engine::EngineConfig cfg;
  cfg.kind = engine::EngineKind::gtp;
  cfg.command = {"recording"};
  auto channel = std::make_unique<RecordingChannel>();
  auto* raw = channel.get();
  engine::EngineSession session(cfg, std::make_unique<engine::GtpBackend>(std::move(channel), std::chrono::milliseconds(100)));
  session.play_move({Color::black, go::parse_gtp_vertex("D4"), 1});
  raw->written.clear();
  session.play_move({Color::white, go::parse_gtp_vertex("F7"), 2});
  c.expect(raw->written == "play white F7\n", "wire bytes were '" + raw->written + "'");
}

struct Criterion {
  std::string name;
  double budget_s;  // 0: no runtime bound
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"tmr-worked-example", 1.0, tmr_worked_example},
      {"shipped-kb-fidelity", 1.0, shipped_kb_fidelity},
      {"rule-base-oracle", 5.0, rule_base_oracle},
      {"feature-extraction", 0.0, feature_extraction},
      {"cog-oracle", 10.0, cog_oracle},
      {"prototype-inference", 0.0, prototype_inference},
      {"method-harness", 60.0, method_harness},
      {"end-to-end-determinism", 0.0, end_to_end},
      {"protocol-round-trips", 0.0, protocol_round_trips},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.budget_s > 0 && s >= cr.budget_s)
      check.failures.push_back("runtime " + num(s) + " s over " + num(cr.budget_s) + " s");
    const bool ok = check.failures.empty();
    failed += !ok;
    std::printf("%s  %-24s %9.1f ms\n", ok ? "PASS" : "FAIL", cr.name.c_str(), s * 1000);
    for (const auto& n : check.notes) std::printf("      %s\n", n.c_str());
    for (const auto& f : check.failures) std::printf("      ! %s\n", f.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
