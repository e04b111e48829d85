#include "auxsim/session.hpp"

#include <cmath>

namespace auxsim {

Session::Session(std::string id, SessionOptions options) : id_(std::move(id)), options_(std::move(options)) {
  if (!(options_.tick_s > 0.0)) throw DomainError("tick must be positive");
  if (!(options_.snapshot_hz >= 1.0 && options_.snapshot_hz <= tick_hz())) {
    throw DomainError("snapshot rate must be between 1 Hz and the tick rate");
  }
  snapshot_every_ = std::max<std::int64_t>(1, std::llround(tick_hz() / options_.snapshot_hz));
  sim_ = std::make_unique<Simulator>(options_.config, options_.tick_s);
  initial_config_ = sim_->config();
  log_header_.tick_s = options_.tick_s;
  log_header_.config = initial_config_;
  publish(true);
  owner_ = std::thread([this] { run(); });
}

Session::~Session() { stop(); }

void Session::stop() {
  {
    std::lock_guard lock(queue_mutex_);
    if (stopping_ && !owner_.joinable()) return;
    stopping_ = true;
  }
  queue_cv_.notify_all();
  steps_cv_.notify_all();
  if (owner_.joinable() && owner_.get_id() != std::this_thread::get_id()) owner_.join();
  closed_ = true;
  snap_cv_.notify_all();
  std::lock_guard lock(queue_mutex_);
  for (auto& p : queue_) {
    Ack a;
    a.reason = "session closed";
    a.seq = p.message.seq;
    p.done.set_value(a);
  }
  queue_.clear();
}

std::future<Ack> Session::submit(ServiceMessage message) {
  Pending p{std::move(message), {}};
  auto fut = p.done.get_future();
  if (p.message.op == ServiceOp::subscribe) {
    Ack a;
    a.reason = "subscribe applies to a connection, not the simulation";
    a.seq = p.message.seq;
    p.done.set_value(a);
    return fut;
  }
  {
    std::lock_guard lock(queue_mutex_);
    if (stopping_) {
      Ack a;
      a.reason = "session closed";
      a.seq = p.message.seq;
      p.done.set_value(a);
      return fut;
    }
    queue_.push_back(std::move(p));
  }
  queue_cv_.notify_all();
  return fut;
}

std::int64_t Session::step(std::int64_t n) {
  if (!options_.manual) throw DomainError("step is only available on manual sessions");
  if (n < 0) throw DomainError("step count must be non-negative");
  std::unique_lock lock(queue_mutex_);
  steps_requested_ += n;
  const std::int64_t target = steps_requested_;
  queue_cv_.notify_all();
  steps_cv_.wait(lock, [&] { return steps_done_ >= target || stopping_; });
  lock.unlock();
  return latest()->tick;
}

std::shared_ptr<const Snapshot> Session::latest() const {
  std::lock_guard lock(snap_mutex_);
  return latest_;
}

std::shared_ptr<const Snapshot> Session::wait_newer(std::uint64_t after,
                                                    std::chrono::milliseconds timeout) const {
  std::unique_lock lock(snap_mutex_);
  snap_cv_.wait_for(lock, timeout, [&] { return latest_->seq > after || closed_; });
  return latest_;
}

ScenarioScript Session::command_log() const {
  std::lock_guard lock(log_mutex_);
  ScenarioScript s = log_header_;
  s.duration_s = static_cast<double>(log_ticks_) * s.tick_s;
  s.commands = log_;
  return s;
}

Ack Session::apply(const ServiceMessage& m) {
  Ack ack;
  ack.seq = m.seq;
  ack.tick = base_tick_ + sim_->state().tick;
  switch (m.op) {
    case ServiceOp::reset:
    case ServiceOp::load_config: {
      Config next = m.op == ServiceOp::load_config ? m.config.value_or(initial_config_) : initial_config_;
      try {
        auto fresh = std::make_unique<Simulator>(next, options_.tick_s);
        base_tick_ = ack.tick;
        sim_ = std::move(fresh);
        initial_config_ = sim_->config();
        std::lock_guard lock(log_mutex_);
        log_.clear();
        log_header_.config = initial_config_;
        log_ticks_ = 0;
        ack.accepted = true;
      } catch (const std::exception& e) {
        ack.reason = std::string("invalid config: ") + e.what();
      }
      return ack;
    }
    case ServiceOp::subscribe:
      ack.reason = "subscribe applies to a connection, not the simulation";
      return ack;
    default:
      break;
  }
  if (auto rejected = sim_->apply(m.command)) {
    ack.reason = *rejected;
    return ack;
  }
  ack.accepted = true;
  if (m.op == ServiceOp::grasp_trial) ack.detail = sim_->events().back().detail;
  std::lock_guard lock(log_mutex_);
  log_.push_back({static_cast<double>(sim_->state().tick) * options_.tick_s, m.command});
  return ack;
}

void Session::drain() {
  std::deque<Pending> batch;
  {
    std::lock_guard lock(queue_mutex_);
    batch.swap(queue_);
  }
  if (batch.empty()) return;
  // acks go out after the snapshot that shows their effect
  std::vector<std::pair<std::promise<Ack>, Ack>> results;
  for (auto& p : batch) results.emplace_back(std::move(p.done), apply(p.message));
  publish(true);
  for (auto& [promise, ack] : results) promise.set_value(ack);
}

void Session::publish(bool force) {
  const std::int64_t tick = base_tick_ + sim_->state().tick;
  if (!force) {
    std::lock_guard lock(snap_mutex_);
    if (latest_ && latest_->tick == tick) return;
  }
  json state = state_json(*sim_);
  // the most recent events, so a client that skipped snapshots still sees them
  json events = json::array();
  const auto& all = sim_->events();
  const std::size_t first = all.size() > kSnapshotEvents ? all.size() - kSnapshotEvents : 0;
  for (std::size_t i = first; i < all.size(); ++i) {
    events.push_back({{"tick", base_tick_ + all[i].tick}, {"type", all[i].type}, {"detail", all[i].detail}});
  }
  state["events"] = std::move(events);
  auto snap = std::make_shared<Snapshot>();
  snap->tick = tick;
  snap->body = {{"version", kScenarioVersion}, {"type", "snapshot"},       {"session", id_},
                {"tick", snap->tick},          {"clients", clients_.load()}, {"state", std::move(state)}};
  snap->text = snap->body.dump();
  {
    std::lock_guard lock(snap_mutex_);
    snap->seq = latest_ ? latest_->seq + 1 : 1;
    latest_ = std::move(snap);
  }
  snap_cv_.notify_all();
}

void Session::tick_once() {
  drain();
  sim_->step();
  {
    std::lock_guard lock(log_mutex_);
    log_ticks_ = sim_->state().tick;
  }
  if ((base_tick_ + sim_->state().tick) % snapshot_every_ == 0) publish(true);
}

void Session::run() {
  if (options_.manual) {
    for (;;) {
      std::int64_t todo = 0;
      {
        std::unique_lock lock(queue_mutex_);
        queue_cv_.wait(lock, [&] { return stopping_ || !queue_.empty() || steps_requested_ > steps_done_; });
        if (stopping_) return;
        todo = steps_requested_ - steps_done_;
      }
      for (std::int64_t i = 0; i < todo; ++i) tick_once();
      drain();
      if (todo > 0) {
        publish();
        std::lock_guard lock(queue_mutex_);
        steps_done_ += todo;
      }
      steps_cv_.notify_all();
    }
  }

  using clock = std::chrono::steady_clock;
  const auto dt = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(options_.tick_s));
  auto next = clock::now();
  for (;;) {
    tick_once();
    // deadlines advance by whole ticks, so late wakeups are caught up and
    // simulated time stays tick * N
    next += dt;
    std::unique_lock lock(queue_mutex_);
    if (queue_cv_.wait_until(lock, next, [&] { return stopping_; })) return;
  }
}

}  // namespace auxsim
