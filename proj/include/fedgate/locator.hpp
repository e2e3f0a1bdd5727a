/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

/// @file   locator.hpp
/// @brief  Resolve federated paths to replica sets: L1/L2 cache lookup,
///         deadline-bounded stat fan-out to all covering online endpoints,
///         merged union listings, negative caching, single-flight
///         coalescing of concurrent misses.

#ifndef FEDGATE_LOCATOR_HPP
#define FEDGATE_LOCATOR_HPP

#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "fedgate/cache.hpp"
#include "fedgate/config.hpp"
#include "fedgate/endpoints.hpp"
#include "fedgate/metrics.hpp"

namespace fedgate {

class Locator {
 public:
  Locator(const FederationConfig& cfg,
          std::shared_ptr<EndpointRegistry> registry,
          std::shared_ptr<L2Cache> l2,  // may be null (L1 only)
          std::shared_ptr<Metrics> metrics);

  /// Cache hit returns without touching any endpoint. Otherwise stats the
  /// path on every covering endpoint that is not offline, waits up to the
  /// fan-out timeout, caches and returns what arrived in time. An empty
  /// complete set means "not found"; an empty incomplete set means
  /// "unknown" (everything timed out or errored).
  ReplicaSet locate(const std::string& path, WallTime now);

  /// Union of the covering endpoints' listings plus the virtual directory
  /// skeleton implied by federated prefixes. Cached like locate results.
  MergedListing merged_listing(const std::string& path, WallTime now);

  /// Drop L1/L2 knowledge of `path` and of its parent's listing. L2
  /// trouble is logged, never fatal.
  void invalidate(const std::string& path);

  /// backend_prefix + remainder when the endpoint's federated_prefix
  /// covers `path`; nullopt otherwise. Pure prefix substitution.
  static std::optional<std::string> translate(const std::string& path,
                                              const EndpointConfig& endpoint);

  /// True when `path` is a proper ancestor of some federated prefix
  /// (such paths exist as directories even with no backing replica).
  bool is_virtual_directory(const std::string& path) const;

  /// True when at least one configured endpoint covers `path`.
  bool covered_by_any(const std::string& path) const;

 private:
  CacheEntry resolve_replicas(const std::string& path, WallTime now);
  ListingCacheEntry resolve_listing(const std::string& path, WallTime now);
  void store_replicas(const std::string& path, const CacheEntry& entry,
                      WallTime now);
  void store_listing(const std::string& path, const ListingCacheEntry& entry,
                     WallTime now);
  std::chrono::milliseconds ttl_for(bool complete, bool empty) const;

  FederationConfig cfg_;
  std::shared_ptr<EndpointRegistry> registry_;
  std::shared_ptr<L2Cache> l2_;
  std::shared_ptr<Metrics> metrics_;

  TtlMap<CacheEntry> l1_replicas_;
  TtlMap<ListingCacheEntry> l1_listings_;

  std::mutex flights_mu_;
  std::map<std::string, std::shared_future<CacheEntry>> replica_flights_;
  std::map<std::string, std::shared_future<ListingCacheEntry>> listing_flights_;
};

}  // namespace fedgate

#endif
