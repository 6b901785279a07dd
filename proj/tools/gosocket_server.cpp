// Live assessment service: REST on /games, frames pushed over /games/{id}/stream.

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "fdaa/service/server.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Live game assessment service"};
  std::string address = "127.0.0.1";
  unsigned short port = 8080;
  std::string log_dir = "game-logs";
  std::size_t capacity = 256;
  app.add_option("--address", address, "listen address");
  app.add_option("--port", port, "listen port (0 picks a free one)");
  app.add_option("--log-dir", log_dir, "directory for per-game event logs");
  app.add_option("--queue", capacity, "per-subscriber frame queue length")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  // Block the shutdown signals before any thread starts so sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    fdaa::service::SessionManager mgr(log_dir, capacity);
    fdaa::service::Server server(mgr, address, port);
    server.start();
    std::cout << "listening on " << address << ":" << server.port() << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    std::cout << "shutting down" << std::endl;
    server.stop();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
