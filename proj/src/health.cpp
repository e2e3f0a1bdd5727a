/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

#include "fedgate/health.hpp"

#include "fedgate/log.hpp"

namespace fedgate {

namespace {

struct ProbeState {
  explicit ProbeState(size_t n) : pending(n), up(n, false) {}
  std::mutex mu;
  std::condition_variable cv;
  size_t pending;
  std::vector<bool> up;
};

}  // namespace

HealthMonitor::HealthMonitor(std::shared_ptr<EndpointRegistry> registry,
                             std::chrono::milliseconds probe_timeout,
                             int failure_threshold)
    : registry_(std::move(registry)),
      probe_timeout_(probe_timeout),
      failure_threshold_(failure_threshold) {}

HealthMonitor::~HealthMonitor() { stop(); }

std::vector<HealthState> HealthMonitor::poll_once(WallTime now) {
  const auto& endpoints = registry_->all();
  auto deadline = std::chrono::steady_clock::now() + probe_timeout_;
  auto state = std::make_shared<ProbeState>(endpoints.size());

  for (size_t i = 0; i < endpoints.size(); ++i) {
    std::thread([state, i, ep = endpoints[i], deadline] {
      bool up = ep->client->probe(deadline);
      std::lock_guard lk(state->mu);
      state->up[i] = up;
      --state->pending;
      state->cv.notify_all();
    }).detach();
  }
  {
    std::unique_lock lk(state->mu);
    // a probe still running past its deadline counts as failed
    state->cv.wait_until(lk, deadline + std::chrono::milliseconds(150),
                         [&] { return state->pending == 0; });
  }

  std::vector<HealthState> out;
  out.reserve(endpoints.size());
  std::lock_guard lk(state->mu);
  for (size_t i = 0; i < endpoints.size(); ++i) {
    auto& ep = *endpoints[i];
    bool up = state->up[i];
    EndpointStatus old_status = ep.status.load(std::memory_order_relaxed);
    EndpointStatus new_status = old_status;

    if (up) {
      ep.consecutive_failures.store(0, std::memory_order_relaxed);
      new_status = EndpointStatus::online;
    } else {
      int failures =
          ep.consecutive_failures.fetch_add(1, std::memory_order_relaxed) + 1;
      if (failures >= failure_threshold_) new_status = EndpointStatus::offline;
    }

    ep.last_poll_ms.store(util::to_unix_ms(now), std::memory_order_relaxed);
    if (new_status != old_status) {
      ep.status.store(new_status, std::memory_order_relaxed);
      ep.last_change_ms.store(util::to_unix_ms(now), std::memory_order_relaxed);
      FG_LOG(info, "endpoint " << ep.id() << " "
                               << endpoint_status_name(old_status) << " -> "
                               << endpoint_status_name(new_status));
    }

    HealthState hs;
    hs.endpoint_id = ep.id();
    hs.status = new_status;
    hs.consecutive_failures =
        ep.consecutive_failures.load(std::memory_order_relaxed);
    hs.last_change =
        util::from_unix_ms(ep.last_change_ms.load(std::memory_order_relaxed));
    out.push_back(std::move(hs));
  }
  return out;
}

void HealthMonitor::start(std::chrono::milliseconds interval) {
  stop();
  {
    std::lock_guard lk(mu_);
    stopping_ = false;
  }
  poller_ = std::thread([this, interval] {
    while (true) {
      poll_once(std::chrono::system_clock::now());
      std::unique_lock lk(mu_);
      if (cv_.wait_for(lk, interval, [this] { return stopping_; })) return;
    }
  });
}

void HealthMonitor::stop() {
  {
    std::lock_guard lk(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  if (poller_.joinable()) poller_.join();
}

std::vector<HealthState> HealthMonitor::snapshot() const {
  std::vector<HealthState> out;
  for (const auto& ep : registry_->all()) {
    HealthState hs;
    hs.endpoint_id = ep->id();
    hs.status = ep->status.load(std::memory_order_relaxed);
    hs.consecutive_failures =
        ep->consecutive_failures.load(std::memory_order_relaxed);
    hs.last_change =
        util::from_unix_ms(ep->last_change_ms.load(std::memory_order_relaxed));
    out.push_back(std::move(hs));
  }
  return out;
}

}  // namespace fedgate
