/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

/// @file   health.hpp
/// @brief  Background endpoint poller: probes everything concurrently,
///         publishes online/offline status so the locator skips
///         unresponsive endpoints.

#ifndef FEDGATE_HEALTH_HPP
#define FEDGATE_HEALTH_HPP

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "fedgate/endpoints.hpp"

namespace fedgate {

struct HealthState {
  std::string endpoint_id;
  EndpointStatus status = EndpointStatus::unknown;
  int consecutive_failures = 0;
  WallTime last_change{};
};

/// Single writer of endpoint status. Probes within one cycle run in
/// parallel, each bounded by probe_timeout; `failure_threshold`
/// consecutive failures take an endpoint offline, one success restores it.
class HealthMonitor {
 public:
  HealthMonitor(std::shared_ptr<EndpointRegistry> registry,
                std::chrono::milliseconds probe_timeout, int failure_threshold);
  ~HealthMonitor();

  HealthMonitor(const HealthMonitor&) = delete;
  HealthMonitor& operator=(const HealthMonitor&) = delete;

  /// One probe cycle, applied to the shared status atomically per
  /// endpoint. Returns the resulting states.
  std::vector<HealthState> poll_once(WallTime now);

  /// Start the background loop (poll_once every `interval`). Individual
  /// poll errors never terminate the loop.
  void start(std::chrono::milliseconds interval);

  /// Stop and join; returns within roughly one probe_timeout.
  void stop();

  std::vector<HealthState> snapshot() const;

 private:
  std::shared_ptr<EndpointRegistry> registry_;
  std::chrono::milliseconds probe_timeout_;
  int failure_threshold_;

  std::mutex mu_;
  std::condition_variable cv_;
  bool stopping_ = false;
  std::thread poller_;
};

}  // namespace fedgate

#endif
