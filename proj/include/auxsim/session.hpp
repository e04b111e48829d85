#pragma once

// A live simulation with exactly one owner thread. Other threads talk to it
// only through the command queue and read immutable snapshots from a
// latest-wins mailbox.

#include "auxsim/protocol.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <future>
#include <memory>
#include <mutex>
#include <thread>

namespace auxsim {

struct SessionOptions {
  Config config;
  double tick_s = 0.005;
  double snapshot_hz = 20.0;
  // manual sessions advance only through step(); used by tests and tools
  bool manual = false;
};

inline constexpr std::size_t kSnapshotEvents = 16;

struct Snapshot {
  std::uint64_t seq = 0;
  std::int64_t tick = 0;  // session tick, never reset
  json body;              // the full snapshot message
  std::string text;       // body serialised once
};

class Session {
 public:
  Session(std::string id, SessionOptions options);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const { return id_; }
  const SessionOptions& options() const { return options_; }
  double tick_hz() const { return 1.0 / options_.tick_s; }

  // Queues a command for the next tick boundary. Subscribe messages are a
  // connection concern and are rejected here.
  std::future<Ack> submit(ServiceMessage message);

  // Manual sessions: runs n ticks and returns the session tick afterwards.
  std::int64_t step(std::int64_t n);

  std::shared_ptr<const Snapshot> latest() const;
  // Waits for a snapshot with seq > after; returns the latest one either way.
  std::shared_ptr<const Snapshot> wait_newer(std::uint64_t after, std::chrono::milliseconds timeout) const;

  // Commands accepted since the last reset, as a replayable script ending at
  // the current tick.
  ScenarioScript command_log() const;

  void client_joined() { ++clients_; }
  void client_left() { --clients_; }
  int clients() const { return clients_.load(); }

  void stop();
  bool closed() const { return closed_.load(); }

 private:
  struct Pending {
    ServiceMessage message;
    std::promise<Ack> done;
  };

  void run();
  void drain();
  Ack apply(const ServiceMessage& m);
  // Unforced publishes are skipped when the tick has not moved.
  void publish(bool force = false);
  void tick_once();

  std::string id_;
  SessionOptions options_;
  std::int64_t snapshot_every_ = 10;

  // owner thread only
  std::unique_ptr<Simulator> sim_;
  Config initial_config_;
  std::int64_t base_tick_ = 0;  // session tick where the current simulator started

  mutable std::mutex log_mutex_;
  std::vector<TimedCommand> log_;
  ScenarioScript log_header_;
  std::int64_t log_ticks_ = 0;

  std::mutex queue_mutex_;
  std::condition_variable queue_cv_;
  std::deque<Pending> queue_;
  std::int64_t steps_requested_ = 0;
  std::int64_t steps_done_ = 0;
  std::condition_variable steps_cv_;
  bool stopping_ = false;

  mutable std::mutex snap_mutex_;
  mutable std::condition_variable snap_cv_;
  std::shared_ptr<const Snapshot> latest_;

  std::atomic<int> clients_{0};
  std::atomic<bool> closed_{false};
  std::thread owner_;
};

}  // namespace auxsim
