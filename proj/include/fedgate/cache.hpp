/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

/// @file   cache.hpp
/// @brief  Replica-location caching: L1 in-process TTL map, pluggable L2,
///         and the versioned binary records shared between levels
///         (layout in docs/cache-format.md).

#ifndef FEDGATE_CACHE_HPP
#define FEDGATE_CACHE_HPP

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fedgate/endpoints.hpp"
#include "fedgate/util.hpp"

namespace fedgate {

struct ReplicaLocation {
  std::string endpoint_id;
  std::string backend_path;
  std::optional<uint64_t> size;
  bool is_directory = false;

  bool operator==(const ReplicaLocation&) const = default;
};

struct ReplicaSet {
  std::string federated_path;
  std::vector<ReplicaLocation> replicas;  // at most one per endpoint_id
  WallTime resolved_at;
  bool complete = true;  // false when some endpoints timed out

  bool operator==(const ReplicaSet&) const = default;
};

struct CacheEntry {
  ReplicaSet replica_set;
  WallTime expires_at;
  bool negative = false;  // known-absent everywhere (implies no replicas)

  bool operator==(const CacheEntry&) const = default;
};

/// Union listing counterpart of a ReplicaSet.
struct MergedListing {
  std::string federated_path;
  Listing listing;
  WallTime resolved_at;
  bool complete = true;
};

struct ListingCacheEntry {
  MergedListing merged;
  WallTime expires_at;
  bool negative = false;
};

/// "loc:<sha256-hex>" / "lst:<sha256-hex>" of the federated path.
std::string replica_cache_key(std::string_view federated_path);
std::string listing_cache_key(std::string_view federated_path);

std::string encode_replica_entry(const CacheEntry& entry);
std::optional<CacheEntry> decode_replica_entry(std::string_view record);

std::string encode_listing_entry(const ListingCacheEntry& entry);
std::optional<ListingCacheEntry> decode_listing_entry(std::string_view record);

/// Bounded TTL map, safe under concurrent read/write. Expiry is judged
/// against the caller-provided clock so tests can inject time. When full,
/// expired entries go first, then the entries closest to expiry.
template <typename V>
class TtlMap {
 public:
  explicit TtlMap(size_t max_entries) : max_entries_(max_entries) {}

  std::optional<V> get(const std::string& key, WallTime now) const {
    std::lock_guard lk(mu_);
    auto it = map_.find(key);
    if (it == map_.end() || it->second.expires_at <= now) return std::nullopt;
    return it->second.value;
  }

  void put(const std::string& key, V value, WallTime expires_at, WallTime now) {
    std::lock_guard lk(mu_);
    if (map_.size() >= max_entries_ && map_.find(key) == map_.end())
      evict_locked(now);
    map_[key] = Slot{std::move(value), expires_at};
  }

  void erase(const std::string& key) {
    std::lock_guard lk(mu_);
    map_.erase(key);
  }

  size_t size() const {
    std::lock_guard lk(mu_);
    return map_.size();
  }

 private:
  struct Slot {
    V value;
    WallTime expires_at;
  };

  void evict_locked(WallTime now) {
    for (auto it = map_.begin(); it != map_.end();) {
      if (it->second.expires_at <= now) it = map_.erase(it);
      else ++it;
    }
    while (map_.size() >= max_entries_ && !map_.empty()) {
      auto victim = map_.begin();
      for (auto it = map_.begin(); it != map_.end(); ++it)
        if (it->second.expires_at < victim->second.expires_at) victim = it;
      map_.erase(victim);
    }
  }

  mutable std::mutex mu_;
  std::map<std::string, Slot> map_;
  size_t max_entries_;
};

/// Shared second-level cache. TTL in whole seconds (memcached exptime
/// semantics). Implementations must be safe for concurrent use and must
/// never throw: unavailability degrades to misses / false.
class L2Cache {
 public:
  virtual ~L2Cache() = default;
  virtual std::optional<std::string> get(const std::string& key) = 0;
  virtual bool set(const std::string& key, const std::string& value,
                   uint32_t ttl_seconds) = 0;
  virtual bool del(const std::string& key) = 0;
};

/// In-process L2 for tests; shareable between gateway instances.
class InProcessL2 : public L2Cache {
 public:
  std::optional<std::string> get(const std::string& key) override;
  bool set(const std::string& key, const std::string& value,
           uint32_t ttl_seconds) override;
  bool del(const std::string& key) override;

 private:
  struct Slot {
    std::string value;
    std::chrono::steady_clock::time_point expires_at;
  };
  std::mutex mu_;
  std::map<std::string, Slot> map_;
};

}  // namespace fedgate

#endif
