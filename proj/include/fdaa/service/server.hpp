#pragma once

// HTTP + WebSocket front end. Synchronous Beast, one thread per connection.

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <list>
#include <thread>

#include "fdaa/service/session.hpp"

namespace fdaa::service {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

using Request = http::request<http::string_body>;
using Response = http::response<http::string_body>;

inline std::vector<std::string> split_path(std::string_view target) {
  if (auto q = target.find('?'); q != std::string_view::npos) target = target.substr(0, q);
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < target.size()) {
    if (target[i] == '/') {
      ++i;
      continue;
    }
    const auto j = target.find('/', i);
    parts.emplace_back(target.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
    if (j == std::string_view::npos) break;
    i = j;
  }
  return parts;
}

inline Response json_response(const Request& req, http::status status, const nlohmann::json& body) {
  Response res{status, req.version()};
  res.set(http::field::content_type, "application/json");
  res.set(http::field::access_control_allow_origin, "*");
  res.body() = body.dump();
  res.prepare_payload();
  return res;
}

inline http::status status_for(ServiceError::Kind kind) {
  switch (kind) {
    case ServiceError::Kind::not_found: return http::status::not_found;
    case ServiceError::Kind::finished: return http::status::conflict;
    case ServiceError::Kind::illegal_move: return http::status::unprocessable_entity;
    case ServiceError::Kind::bad_request: return http::status::bad_request;
    case ServiceError::Kind::engine: return http::status::bad_gateway;
  }
  return http::status::internal_server_error;
}

inline std::string kind_name(ServiceError::Kind kind) {
  switch (kind) {
    case ServiceError::Kind::not_found: return "not_found";
    case ServiceError::Kind::finished: return "finished";
    case ServiceError::Kind::illegal_move: return "illegal_move";
    case ServiceError::Kind::bad_request: return "bad_request";
    case ServiceError::Kind::engine: return "engine";
  }
  return "error";
}

// Maps one REST request onto the session manager.
inline Response route(SessionManager& mgr, const Request& req) {
  const auto parts = split_path(std::string(req.target()));
  const auto method = req.method();
  auto body_json = [&]() -> nlohmann::json {
    if (req.body().empty()) return nlohmann::json::object();
    try {
      return nlohmann::json::parse(req.body());
    } catch (const nlohmann::json::exception&) {
      throw ServiceError(ServiceError::Kind::bad_request, "request body is not JSON");
    }
  };
  try {
    if (method == http::verb::options) {
      Response res{http::status::no_content, req.version()};
      res.set(http::field::access_control_allow_origin, "*");
      res.set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
      res.set(http::field::access_control_allow_headers, "Content-Type");
      res.prepare_payload();
      return res;
    }
    if (parts.size() == 1 && parts[0] == "health" && method == http::verb::get)
      return json_response(req, http::status::ok, {{"ok", true}});
    if (parts.empty() || parts[0] != "games")
      return json_response(req, http::status::not_found, {{"error", "no such route"}, {"kind", "not_found"}});

    if (parts.size() == 1) {
      if (method == http::verb::post) {
        const auto id = mgr.create_game(config_from_json(body_json()));
        return json_response(req, http::status::created, {{"id", id}, {"state", state_to_json(mgr.state(id))}});
      }
      if (method == http::verb::get) return json_response(req, http::status::ok, {{"games", mgr.ids()}});
    } else if (parts.size() == 2 && method == http::verb::get) {
      return json_response(req, http::status::ok, state_to_json(mgr.state(parts[1])));
    } else if (parts.size() == 3 && parts[2] == "frames" && method == http::verb::get) {
      nlohmann::json frames = nlohmann::json::array();
      for (const auto& f : mgr.state(parts[1]).frames) frames.push_back(frame_to_json(f));
      return json_response(req, http::status::ok, nlohmann::json{{"id", parts[1]}, {"frames", frames}});
    } else if (parts.size() == 3 && parts[2] == "moves" && method == http::verb::post) {
      const auto body = body_json();
      go::Color color;
      go::Coord coord;
      try {
        color = go::parse_color(body.at("color").get<std::string>());
        coord = go::parse_gtp_vertex(body.at("vertex").get<std::string>());
      } catch (const std::exception& e) {
        throw ServiceError(ServiceError::Kind::bad_request, std::string("bad move: ") + e.what());
      }
      return json_response(req, http::status::ok, frame_to_json(mgr.submit_move(parts[1], color, coord)));
    } else if (parts.size() == 3 && parts[2] == "finish" && method == http::verb::post) {
      const auto body = body_json();
      std::optional<std::string> result;
      if (body.contains("result") && body["result"].is_string()) result = body["result"].get<std::string>();
      return json_response(req, http::status::ok, finish_to_json(mgr.finish_game(parts[1], result)));
    }
    return json_response(req, http::status::method_not_allowed,
                         {{"error", "unsupported method or route"}, {"kind", "bad_request"}});
  } catch (const ServiceError& e) {
    return json_response(req, status_for(e.kind()), {{"error", e.what()}, {"kind", kind_name(e.kind())}});
  } catch (const std::exception& e) {
    return json_response(req, http::status::internal_server_error, {{"error", e.what()}, {"kind", "internal"}});
  }
}

class Server {
 public:
  Server(SessionManager& mgr, const std::string& address, unsigned short port)
      : mgr_(mgr), acceptor_(ioc_, tcp::endpoint(net::ip::make_address(address), port)) {}

  ~Server() { stop(); }

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  unsigned short port() const { return acceptor_.local_endpoint().port(); }

  void start() {
    accept_thread_ = std::thread([this] { accept_loop(); });
  }

  // Blocks until stop() is called from elsewhere.
  void run() { accept_loop(); }

  void stop() {
    if (stopping_.exchange(true)) return;
    {
      // Wake the blocking accept.
      beast::error_code ec;
      net::io_context tmp;
      tcp::socket poke(tmp);
      poke.connect(acceptor_.local_endpoint(), ec);
    }
    if (accept_thread_.joinable()) accept_thread_.join();
    beast::error_code ec;
    acceptor_.close(ec);
    mgr_.close_all_subscribers();
    std::list<Connection> conns;
    {
      std::lock_guard lock(mu_);
      conns.swap(connections_);
    }
    for (auto& c : conns) c.socket->shutdown(tcp::socket::shutdown_both, ec);
    for (auto& c : conns)
      if (c.thread.joinable()) c.thread.join();
  }

 private:
  struct Connection {
    std::shared_ptr<tcp::socket> socket;
    std::shared_ptr<std::atomic<bool>> done;
    std::thread thread;
  };

  void accept_loop() {
    while (!stopping_) {
      auto sock = std::make_shared<tcp::socket>(ioc_);
      beast::error_code ec;
      acceptor_.accept(*sock, ec);
      if (stopping_) break;
      if (ec) continue;
      std::lock_guard lock(mu_);
      prune();
      auto done = std::make_shared<std::atomic<bool>>(false);
      connections_.push_back({sock, done, std::thread([this, sock, done] {
                                handle(*sock);
                                *done = true;
                              })});
    }
  }

  void prune() {
    for (auto it = connections_.begin(); it != connections_.end();) {
      if (*it->done) {
        it->thread.join();
        it = connections_.erase(it);
      } else {
        ++it;
      }
    }
  }

  void handle(tcp::socket& sock) {
    beast::flat_buffer buffer;
    beast::error_code ec;
    while (!stopping_) {
      Request req;
      http::read(sock, buffer, req, ec);
      if (ec) break;
      if (websocket::is_upgrade(req)) {
        stream(sock, std::move(req));
        return;
      }
      auto res = route(mgr_, req);
      res.keep_alive(req.keep_alive());
      http::write(sock, res, ec);
      if (ec || !req.keep_alive()) break;
    }
    sock.shutdown(tcp::socket::shutdown_send, ec);
  }

  // /games/{id}/stream: snapshot first, then frames and the commentary.
  void stream(tcp::socket& sock, Request req) {
    beast::error_code ec;
    const auto parts = split_path(std::string(req.target()));
    if (parts.size() != 3 || parts[0] != "games" || parts[2] != "stream") {
      auto res = json_response(req, http::status::not_found, {{"error", "no such stream"}, {"kind", "not_found"}});
      http::write(sock, res, ec);
      return;
    }
    Subscription sub;
    try {
      sub = mgr_.subscribe(parts[1]);
    } catch (const ServiceError& e) {
      auto res = json_response(req, status_for(e.kind()), {{"error", e.what()}, {"kind", kind_name(e.kind())}});
      http::write(sock, res, ec);
      return;
    }
    websocket::stream<tcp::socket&> ws(sock);
    ws.accept(req, ec);
    if (ec) {
      sub.subscriber->close();
      return;
    }
    ws.text(true);
    ws.write(net::buffer(sub.snapshot.dump()), ec);
    beast::flat_buffer inbound;
    while (!ec && !stopping_) {
      if (auto msg = sub.subscriber->pop(std::chrono::milliseconds(50))) {
        ws.write(net::buffer(*msg), ec);
        continue;
      }
      if (sub.subscriber->finished()) break;
      // Client messages are only read to honour close and ping frames.
      if (sock.available(ec) > 0 && !ec) {
        ws.read(inbound, ec);
        inbound.consume(inbound.size());
      }
    }
    sub.subscriber->close();
    if (ws.is_open()) {
      beast::error_code ignore;
      ws.close(websocket::close_code::normal, ignore);
    }
  }

  SessionManager& mgr_;
  net::io_context ioc_;
  tcp::acceptor acceptor_;
  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;
  std::mutex mu_;
  std::list<Connection> connections_;
};

}  // namespace fdaa::service
