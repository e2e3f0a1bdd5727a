/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

/// @file   memcache.hpp
/// @brief  Minimal memcached text-protocol client used as the shared L2
///         cache: get / set (flags=0, exptime=TTL) / delete.

#ifndef FEDGATE_MEMCACHE_HPP
#define FEDGATE_MEMCACHE_HPP

#include <chrono>
#include <mutex>
#include <queue>
#include <string>

#include "fedgate/cache.hpp"

namespace fedgate {

class MemcachedClient : public L2Cache {
 public:
  /// `address` is "<host>:<port>". `op_timeout` bounds every socket
  /// operation so a dead cache server degrades to misses instead of
  /// stalling request handlers.
  explicit MemcachedClient(
      const std::string& address,
      std::chrono::milliseconds op_timeout = std::chrono::milliseconds(500));
  ~MemcachedClient() override;

  MemcachedClient(const MemcachedClient&) = delete;
  MemcachedClient& operator=(const MemcachedClient&) = delete;

  std::optional<std::string> get(const std::string& key) override;
  bool set(const std::string& key, const std::string& value,
           uint32_t ttl_seconds) override;
  bool del(const std::string& key) override;

 private:
  int acquire();         // pooled or fresh connection; -1 on failure
  void release(int fd);  // return a healthy connection to the pool
  int connect_new();

  std::string host_;
  int port_ = 0;
  std::chrono::milliseconds op_timeout_;
  std::mutex mu_;
  std::queue<int> pool_;
};

/// Parse "memcached:<host>:<port>" (the config `cache.l2` syntax).
/// Returns nullptr for "none".
std::shared_ptr<L2Cache> make_l2_cache(const std::string& spec);

}  // namespace fedgate

#endif
