// GTP double around the stub engine, spoken over stdin/stdout.
//   --seed N --simulations N   stub parameters
//   --log FILE                 append every received command line verbatim
//   --die-after K              exit without replying on the K-th analyze
//   --hang-after K             stop replying from the K-th analyze on
//   --garbage                  answer analyze with a malformed body
//   --reject-play              refuse every play command
//   --no-analyze               answer analyze with a GTP failure

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "fdaa/engine/gtp.hpp"
#include "fdaa/engine/stub.hpp"

using namespace fdaa;

int main(int argc, char** argv) {
  std::uint64_t seed = 42;
  int simulations = 20000;
  int die_after = 0;
  int hang_after = 0;
  bool garbage = false;
  bool reject_play = false;
  bool no_analyze = false;
  std::ofstream log;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    auto next = [&] { return i + 1 < argc ? std::string(argv[++i]) : std::string(); };
    if (a == "--seed") seed = std::stoull(next());
    else if (a == "--simulations") simulations = std::stoi(next());
    else if (a == "--log") log.open(next(), std::ios::app | std::ios::binary);
    else if (a == "--die-after") die_after = std::stoi(next());
    else if (a == "--hang-after") hang_after = std::stoi(next());
    else if (a == "--garbage") garbage = true;
    else if (a == "--reject-play") reject_play = true;
    else if (a == "--no-analyze") no_analyze = true;
  }

  auto board = go::empty_board();
  int analyses = 0;
  auto ok = [](const std::string& body = "") { std::cout << "= " << body << "\n\n" << std::flush; };
  auto fail = [](const std::string& msg) { std::cout << "? " << msg << "\n\n" << std::flush; };

  std::string line;
  while (std::getline(std::cin, line)) {
    if (log.is_open()) log << line << "\n" << std::flush;
    std::istringstream in(line);
    std::string cmd;
    in >> cmd;
    if (cmd.empty()) continue;
    if (cmd == "quit") {
      ok();
      return 0;
    }
    if (cmd == "boardsize") {
      int n = 0;
      in >> n;
      n == 19 ? ok() : fail("unacceptable size");
    } else if (cmd == "clear_board") {
      board = go::empty_board();
      ok();
    } else if (cmd == "komi") {
      ok();
    } else if (cmd == "play") {
      std::string color, vertex;
      in >> color >> vertex;
      if (reject_play) {
        fail("illegal move");
        continue;
      }
      try {
        board = go::apply_move(board, {go::parse_color(color), go::parse_gtp_vertex(vertex), board.ply + 1});
        ok();
      } catch (const std::exception&) {
        fail("illegal move");
      }
    } else if (cmd == "analyze") {
      ++analyses;
      if (die_after > 0 && analyses >= die_after) return 1;
      if (hang_after > 0 && analyses >= hang_after) {
        std::this_thread::sleep_for(std::chrono::hours(1));
      }
      if (no_analyze) {
        fail("unknown command");
      } else if (garbage) {
        ok("D4 many 0.5");
      } else {
        ok(engine::format_gtp_analysis(engine::stub_analyze(seed, board, simulations)));
      }
    } else {
      fail("unknown command");
    }
  }
  return 0;
}
