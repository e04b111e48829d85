#include "auxsim/server.hpp"

#include "auxsim/ws.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace auxsim {

namespace {

constexpr std::size_t kMaxHeader = 64 * 1024;
constexpr std::size_t kMaxBody = 4 * 1024 * 1024;

bool send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

bool recv_more(int fd, std::string& buf) {
  char chunk[16 * 1024];
  for (;;) {
    const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    buf.append(chunk, static_cast<std::size_t>(n));
    return true;
  }
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const char* reason_phrase(int status) {
  switch (status) {
    case 101:
      return "Switching Protocols";
    case 200:
      return "OK";
    case 201:
      return "Created";
    case 400:
      return "Bad Request";
    case 404:
      return "Not Found";
    case 405:
      return "Method Not Allowed";
    case 409:
      return "Conflict";
    case 413:
      return "Payload Too Large";
    default:
      return "Internal Server Error";
  }
}

std::string serialize(const HttpResponse& r, bool keep_alive) {
  std::string out = "HTTP/1.1 " + std::to_string(r.status) + " " + reason_phrase(r.status) + "\r\n";
  out += "Content-Type: " + r.content_type + "\r\n";
  out += "Content-Length: " + std::to_string(r.body.size()) + "\r\n";
  out += keep_alive ? "Connection: keep-alive\r\n\r\n" : "Connection: close\r\n\r\n";
  out += r.body;
  return out;
}

HttpResponse reply(int status, const json& body) { return {status, body.dump(), "application/json"}; }

HttpResponse fail(int status, const std::string& reason) { return reply(status, error_json(reason)); }

enum class ReadStatus { ok, closed, bad, too_large };

// Reads one request from buf (refilled from fd). Leaves any bytes past the
// request in buf.
ReadStatus read_request(int fd, std::string& buf, HttpRequest& req) {
  std::size_t end;
  while ((end = buf.find("\r\n\r\n")) == std::string::npos) {
    if (buf.size() > kMaxHeader) return ReadStatus::too_large;
    if (!recv_more(fd, buf)) return ReadStatus::closed;
  }
  const std::string head = buf.substr(0, end);
  buf.erase(0, end + 4);

  std::size_t pos = head.find("\r\n");
  const std::string request_line = head.substr(0, pos);
  const auto sp1 = request_line.find(' ');
  const auto sp2 = request_line.rfind(' ');
  if (sp1 == std::string::npos || sp2 == sp1) return ReadStatus::bad;
  req = HttpRequest{};
  req.method = request_line.substr(0, sp1);
  std::string target = request_line.substr(sp1 + 1, sp2 - sp1 - 1);
  if (const auto q = target.find('?'); q != std::string::npos) {
    req.query = target.substr(q + 1);
    target.resize(q);
  }
  req.target = target;
  while (pos != std::string::npos) {
    const std::size_t next = head.find("\r\n", pos + 2);
    const std::string line = head.substr(pos + 2, next == std::string::npos ? std::string::npos : next - pos - 2);
    pos = next;
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    req.headers[lower(trim(line.substr(0, colon)))] = trim(line.substr(colon + 1));
  }

  std::size_t length = 0;
  if (auto it = req.headers.find("content-length"); it != req.headers.end()) {
    try {
      length = std::stoul(it->second);
    } catch (...) {
      return ReadStatus::bad;
    }
  }
  if (length > kMaxBody) return ReadStatus::too_large;
  while (buf.size() < length) {
    if (!recv_more(fd, buf)) return ReadStatus::closed;
  }
  req.body = buf.substr(0, length);
  buf.erase(0, length);
  return ReadStatus::ok;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '/') {
      ++i;
      continue;
    }
    const std::size_t j = path.find('/', i);
    parts.push_back(path.substr(i, j == std::string::npos ? std::string::npos : j - i));
    i = j == std::string::npos ? path.size() : j;
  }
  return parts;
}

std::optional<json> parse_body(const std::string& body, HttpResponse& error) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    error = fail(400, std::string("malformed message: ") + e.what());
    return std::nullopt;
  }
}

}  // namespace

std::string HttpRequest::header(const std::string& name) const {
  const auto it = headers.find(lower(name));
  return it == headers.end() ? std::string() : it->second;
}

Server::Server(ServerOptions options) : options_(std::move(options)) {}

Server::~Server() { stop(); }

std::shared_ptr<Session> Server::session(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

HttpResponse Server::handle(const HttpRequest& req) {
  const auto parts = split_path(req.target);
  if (parts.size() == 1 && parts[0] == "version") {
    if (req.method != "GET") return fail(405, "method not allowed");
    return reply(200, {{"version", kScenarioVersion}, {"name", "auxsim"}, {"build", AUXSIM_VERSION}});
  }
  if (parts.empty() || parts[0] != "session") return fail(404, "not found");

  if (parts.size() == 1) {
    if (req.method != "POST") return fail(405, "method not allowed");
    SessionOptions opts;
    opts.tick_s = options_.tick_s;
    opts.snapshot_hz = options_.snapshot_hz;
    opts.manual = options_.manual;
    if (!trim(req.body).empty()) {
      HttpResponse err;
      auto body = parse_body(req.body, err);
      if (!body) return err;
      FieldReader r(true);
      if (r.object(*body, "", {"version", "config", "tick", "snapshot_hz", "manual"})) {
        if (auto v = r.integer(*body, "", "version", true); v && *v != kScenarioVersion) {
          r.error("/version", "unsupported version " + std::to_string(*v));
        }
        if (body->contains("config")) opts.config = config_from_json(body->at("config"), r, "/config");
        if (auto t = r.number(*body, "", "tick", false)) opts.tick_s = *t;
        if (auto h = r.number(*body, "", "snapshot_hz", false)) opts.snapshot_hz = *h;
        if (body->contains("manual")) {
          if (body->at("manual").is_boolean()) {
            opts.manual = body->at("manual").get<bool>();
          } else {
            r.error("/manual", "expected a boolean");
          }
        }
      }
      if (!r.ok()) {
        MessageParse mp;
        mp.errors = r.errors();
        return fail(400, mp.error_text());
      }
    }
    std::shared_ptr<Session> s;
    std::string id;
    {
      std::lock_guard lock(mutex_);
      id = "s" + std::to_string(next_id_++);
    }
    try {
      s = std::make_shared<Session>(id, opts);
    } catch (const std::exception& e) {
      return fail(400, e.what());
    }
    {
      std::lock_guard lock(mutex_);
      sessions_[id] = s;
    }
    return reply(201, {{"version", kScenarioVersion},
                       {"id", id},
                       {"manual", opts.manual},
                       {"tick_s", opts.tick_s},
                       {"snapshot", s->latest()->body}});
  }

  const std::string& id = parts[1];
  std::shared_ptr<Session> s = session(id);
  if (!s) return fail(404, "unknown session");

  if (parts.size() == 2) {
    if (req.method == "DELETE") {
      {
        std::lock_guard lock(mutex_);
        sessions_.erase(id);
      }
      s->stop();
      const std::string script = emit_scenario(s->command_log());
      if (!options_.log_dir.empty()) {
        std::filesystem::create_directories(options_.log_dir);
        std::ofstream(std::filesystem::path(options_.log_dir) / (id + ".json"), std::ios::binary) << script;
      }
      return reply(200, {{"version", kScenarioVersion}, {"id", id}, {"script", json::parse(script)}});
    }
    if (req.method == "GET") return fail(400, "websocket upgrade required");
    return fail(405, "method not allowed");
  }
  if (parts.size() != 3) return fail(404, "not found");

  if (parts[2] == "state") {
    if (req.method != "GET") return fail(405, "method not allowed");
    return {200, s->latest()->text, "application/json"};
  }
  if (parts[2] == "command") {
    if (req.method != "POST") return fail(405, "method not allowed");
    const MessageParse mp = parse_message(req.body);
    if (!mp.message) return fail(400, mp.error_text());
    if (mp.message->op == ServiceOp::subscribe) {
      return reply(400, error_json("subscribe is only available on a websocket", mp.message->seq));
    }
    auto fut = s->submit(*mp.message);
    if (fut.wait_for(std::chrono::seconds(30)) != std::future_status::ready) {
      return fail(500, "command not applied in time");
    }
    const Ack ack = fut.get();
    return reply(ack.accepted ? 200 : 409, ack_json(ack));
  }
  if (parts[2] == "step") {
    if (req.method != "POST") return fail(405, "method not allowed");
    if (!s->options().manual) return fail(409, "session is not manual");
    HttpResponse err;
    auto body = parse_body(req.body, err);
    if (!body) return err;
    FieldReader r(true);
    std::optional<int> ticks;
    if (r.object(*body, "", {"version", "ticks"})) {
      if (auto v = r.integer(*body, "", "version", true); v && *v != kScenarioVersion) {
        r.error("/version", "unsupported version " + std::to_string(*v));
      }
      ticks = r.integer(*body, "", "ticks", true);
      if (ticks && (*ticks < 0 || *ticks > 10'000'000)) r.error("/ticks", "ticks must be in [0, 1e7]");
    }
    if (!r.ok()) {
      MessageParse mp;
      mp.errors = r.errors();
      return fail(400, mp.error_text());
    }
    s->step(*ticks);
    return {200, s->latest()->text, "application/json"};
  }
  return fail(404, "not found");
}

void Server::start() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(options_.port));
  const std::string host = options_.host == "localhost" ? "127.0.0.1" : options_.host;
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw std::runtime_error("bad listen address " + options_.host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listen_fd_, 64) < 0) {
    const std::string err = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw std::runtime_error("cannot listen on " + options_.host + ":" + std::to_string(options_.port) + ": " + err);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void Server::accept_loop() {
  while (running_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      if (!running_) break;
      continue;
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    std::lock_guard lock(mutex_);
    if (!running_) {
      ::close(fd);
      break;
    }
    connections_.insert(fd);
    workers_.emplace_back([this, fd] {
      serve_connection(fd);
      std::lock_guard l(mutex_);
      connections_.erase(fd);
      ::close(fd);
    });
  }
}

void Server::stop() {
  const bool was_running = running_.exchange(false);
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  std::map<std::string, std::shared_ptr<Session>> sessions;
  {
    std::lock_guard lock(mutex_);
    for (int fd : connections_) ::shutdown(fd, SHUT_RDWR);
    sessions.swap(sessions_);
    workers.swap(workers_);
  }
  for (auto& [id, s] : sessions) s->stop();
  for (auto& t : workers) t.join();
  if (was_running) {
    std::lock_guard lock(mutex_);
    stopped_cv_.notify_all();
  }
}

void Server::wait() {
  std::unique_lock lock(mutex_);
  stopped_cv_.wait(lock, [&] { return !running_; });
}

void Server::serve_connection(int fd) {
  std::string buf;
  for (;;) {
    HttpRequest req;
    const ReadStatus st = read_request(fd, buf, req);
    if (st == ReadStatus::closed) return;
    if (st != ReadStatus::ok) {
      send_all(fd, serialize(fail(st == ReadStatus::too_large ? 413 : 400, "bad request"), false));
      return;
    }
    const auto parts = split_path(req.target);
    if (req.method == "GET" && parts.size() == 2 && parts[0] == "session" &&
        lower(req.header("upgrade")) == "websocket") {
      auto s = session(parts[1]);
      if (!s) {
        send_all(fd, serialize(fail(404, "unknown session"), false));
        return;
      }
      const std::string key = req.header("sec-websocket-key");
      if (key.empty() || req.header("sec-websocket-version") != "13") {
        send_all(fd, serialize(fail(400, "bad websocket handshake"), false));
        return;
      }
      const std::string handshake =
          "HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\nConnection: Upgrade\r\n"
          "Sec-WebSocket-Accept: " +
          ws_accept_key(key) + "\r\n\r\n";
      if (!send_all(fd, handshake)) return;
      serve_websocket(fd, std::move(buf), std::move(s));
      return;
    }
    HttpResponse resp;
    try {
      resp = handle(req);
    } catch (const std::exception& e) {
      resp = fail(500, e.what());
    }
    const bool keep = lower(req.header("connection")) != "close";
    if (!send_all(fd, serialize(resp, keep)) || !keep) return;
  }
}

void Server::serve_websocket(int fd, std::string buf, std::shared_ptr<Session> session) {
  std::mutex send_mutex;
  std::atomic<bool> open{true};
  std::atomic<double> rate{session->options().snapshot_hz};
  auto send_frame = [&](WsOpcode op, std::string_view payload) {
    std::lock_guard lock(send_mutex);
    if (!send_all(fd, ws_encode(op, payload))) open = false;
  };
  auto send_json = [&](const json& j) { send_frame(WsOpcode::text, j.dump()); };

  session->client_joined();
  std::thread writer([&] {
    std::uint64_t last_seq = 0;
    std::optional<std::int64_t> last_bucket;
    while (open) {
      auto snap = session->wait_newer(last_seq, std::chrono::milliseconds(100));
      if (session->closed()) {
        send_frame(WsOpcode::close, std::string("\x03\xe8", 2) + "session closed");
        open = false;
        ::shutdown(fd, SHUT_RD);
        break;
      }
      if (snap->seq == last_seq) continue;
      last_seq = snap->seq;
      const auto interval = std::max<std::int64_t>(1, std::llround(session->tick_hz() / rate.load()));
      // slow clients just get the newest snapshot in each interval
      const std::int64_t bucket = snap->tick / interval;
      if (last_bucket && bucket <= *last_bucket) continue;
      last_bucket = bucket;
      send_frame(WsOpcode::text, snap->text);
    }
  });

  std::string message;
  // continuation means no message in progress
  WsOpcode message_op = WsOpcode::continuation;
  try {
    while (open) {
      std::size_t used = 0;
      auto frame = ws_decode(buf, used);
      if (!frame) {
        if (!recv_more(fd, buf)) break;
        continue;
      }
      buf.erase(0, used);
      if (!frame->masked) throw WsProtocolError("client frames must be masked");
      switch (frame->op) {
        case WsOpcode::close:
          send_frame(WsOpcode::close, frame->payload.substr(0, 2));
          open = false;
          continue;
        case WsOpcode::ping:
          send_frame(WsOpcode::pong, frame->payload);
          continue;
        case WsOpcode::pong:
          continue;
        case WsOpcode::continuation:
          if (message_op == WsOpcode::continuation) throw WsProtocolError("continuation without a message");
          message += frame->payload;
          break;
        default:
          if (message_op != WsOpcode::continuation) throw WsProtocolError("interleaved message");
          message_op = frame->op;
          message = frame->payload;
      }
      if (message.size() > kMaxBody) throw WsProtocolError("message too large");
      if (!frame->fin) continue;
      const WsOpcode op = message_op;
      message_op = WsOpcode::continuation;
      if (op != WsOpcode::text) {
        send_json(error_json("only text messages are supported"));
        continue;
      }
      const MessageParse mp = parse_message(message);
      if (!mp.message) {
        json seq = nullptr;
        try {
          const json j = json::parse(message);
          if (j.is_object() && j.contains("seq") && !j.at("seq").is_structured()) seq = j.at("seq");
        } catch (...) {
        }
        send_json(error_json(mp.error_text(), seq));
        continue;
      }
      if (mp.message->op == ServiceOp::subscribe) {
        const double r = mp.message->rate_hz;
        if (!(r >= 1.0 && r <= session->tick_hz())) {
          send_json(error_json("rate_hz must be between 1 and the tick rate", mp.message->seq));
          continue;
        }
        rate = r;
        json j{{"version", kScenarioVersion}, {"type", "subscribed"}, {"rate_hz", r}};
        if (!mp.message->seq.is_null()) j["seq"] = mp.message->seq;
        send_json(j);
        continue;
      }
      send_json(ack_json(session->submit(*mp.message).get()));
    }
  } catch (const WsProtocolError& e) {
    send_frame(WsOpcode::close, std::string("\x03\xea", 2) + e.what());
  }
  open = false;
  writer.join();
  session->client_left();
}

}  // namespace auxsim
