/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

#include "fedgate/metrics.hpp"

#include <sstream>

namespace fedgate {

void Metrics::inc_request(const std::string& method, int status) {
  std::lock_guard lk(mu_);
  ++requests_[{method, status}];
}

void Metrics::inc_cache_hit_l1() { std::lock_guard lk(mu_); ++hits_l1_; }
void Metrics::inc_cache_hit_l2() { std::lock_guard lk(mu_); ++hits_l2_; }
void Metrics::inc_cache_miss() { std::lock_guard lk(mu_); ++misses_; }
void Metrics::inc_singleflight_wait() { std::lock_guard lk(mu_); ++singleflight_waits_; }

void Metrics::inc_endpoint_query(const std::string& endpoint_id) {
  std::lock_guard lk(mu_);
  ++queries_[endpoint_id];
}

void Metrics::inc_endpoint_timeout(const std::string& endpoint_id) {
  std::lock_guard lk(mu_);
  ++timeouts_[endpoint_id];
}

uint64_t Metrics::cache_hits() const {
  std::lock_guard lk(mu_);
  return hits_l1_ + hits_l2_;
}

uint64_t Metrics::cache_misses() const {
  std::lock_guard lk(mu_);
  return misses_;
}

uint64_t Metrics::endpoint_queries(const std::string& endpoint_id) const {
  std::lock_guard lk(mu_);
  auto it = queries_.find(endpoint_id);
  return it == queries_.end() ? 0 : it->second;
}

uint64_t Metrics::endpoint_timeouts(const std::string& endpoint_id) const {
  std::lock_guard lk(mu_);
  auto it = timeouts_.find(endpoint_id);
  return it == timeouts_.end() ? 0 : it->second;
}

uint64_t Metrics::total_endpoint_queries() const {
  std::lock_guard lk(mu_);
  uint64_t total = 0;
  for (const auto& [id, n] : queries_) total += n;
  return total;
}

std::string Metrics::render() const {
  std::lock_guard lk(mu_);
  std::ostringstream os;
  for (const auto& [key, n] : requests_)
    os << "fedgate_requests_total{method=\"" << key.first << "\",status=\""
       << key.second << "\"} " << n << "\n";
  os << "fedgate_cache_hits_total{level=\"l1\"} " << hits_l1_ << "\n";
  os << "fedgate_cache_hits_total{level=\"l2\"} " << hits_l2_ << "\n";
  os << "fedgate_cache_misses_total " << misses_ << "\n";
  os << "fedgate_singleflight_coalesced_total " << singleflight_waits_ << "\n";
  for (const auto& [id, n] : queries_)
    os << "fedgate_endpoint_queries_total{endpoint=\"" << id << "\"} " << n
       << "\n";
  for (const auto& [id, n] : timeouts_)
    os << "fedgate_endpoint_timeouts_total{endpoint=\"" << id << "\"} " << n
       << "\n";
  return os.str();
}

}  // namespace fedgate
