#pragma once

// HTTP/1.1 + WebSocket front end over in-memory sessions.
//
//   POST   /session                create; body {version, config?, tick?, snapshot_hz?, manual?}
//   GET    /session/{id}/state     latest snapshot
//   POST   /session/{id}/command   one protocol message, answered with its ack
//   POST   /session/{id}/step      {version, ticks}; manual sessions only
//   DELETE /session/{id}           close; returns the command log as a scenario
//   GET    /session/{id}           WebSocket upgrade: snapshots out, messages in
//   GET    /version

#include "auxsim/session.hpp"

#include <map>
#include <set>

namespace auxsim {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  double tick_s = 0.005;
  double snapshot_hz = 20.0;
  bool manual = false;  // default for sessions that do not say
  std::string log_dir;  // closed sessions write <id>.json here when set
};

struct HttpRequest {
  std::string method;
  std::string target;  // path without the query
  std::string query;
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;

  std::string header(const std::string& name) const;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts accepting. Throws std::runtime_error on failure.
  void start();
  int port() const { return port_; }
  void stop();
  // Blocks until stop() is called from another thread or a signal handler.
  void wait();

  std::shared_ptr<Session> session(const std::string& id) const;
  // The pure request router, without any socket. Exposed for tests.
  HttpResponse handle(const HttpRequest& request);

 private:
  void accept_loop();
  void serve_connection(int fd);
  void serve_websocket(int fd, std::string pending, std::shared_ptr<Session> session);

  ServerOptions options_;
  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> running_{false};
  std::thread acceptor_;

  mutable std::mutex mutex_;
  std::condition_variable stopped_cv_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
  std::set<int> connections_;
  std::vector<std::thread> workers_;
};

}  // namespace auxsim
