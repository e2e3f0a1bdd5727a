/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

/// @file   metrics.hpp
/// @brief  Counters exposed at /.well-known/fedgate/metrics and used by the
///         test suites to assert "zero endpoint queries" style invariants.

#ifndef FEDGATE_METRICS_HPP
#define FEDGATE_METRICS_HPP

#include <cstdint>
#include <map>
#include <mutex>
#include <string>

namespace fedgate {

class Metrics {
 public:
  void inc_request(const std::string& method, int status);
  void inc_cache_hit_l1();
  void inc_cache_hit_l2();
  void inc_cache_miss();
  void inc_singleflight_wait();
  void inc_endpoint_query(const std::string& endpoint_id);
  void inc_endpoint_timeout(const std::string& endpoint_id);

  uint64_t cache_hits() const;
  uint64_t cache_misses() const;
  uint64_t endpoint_queries(const std::string& endpoint_id) const;
  uint64_t endpoint_timeouts(const std::string& endpoint_id) const;
  uint64_t total_endpoint_queries() const;

  /// Line-oriented exposition: `name{labels} value`.
  std::string render() const;

 private:
  mutable std::mutex mu_;
  std::map<std::pair<std::string, int>, uint64_t> requests_;
  std::map<std::string, uint64_t> queries_;
  std::map<std::string, uint64_t> timeouts_;
  uint64_t hits_l1_ = 0;
  uint64_t hits_l2_ = 0;
  uint64_t misses_ = 0;
  uint64_t singleflight_waits_ = 0;
};

}  // namespace fedgate

#endif
