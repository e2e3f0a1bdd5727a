/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

#include "fedgate/locator.hpp"

#include <algorithm>
#include <condition_variable>
#include <set>
#include <thread>

#include "fedgate/log.hpp"

namespace fedgate {

namespace {

/// Grace added to the fan-out deadline for worker scheduling; the
/// documented wall-clock bound is fanout_timeout + 250 ms.
constexpr auto kCollectGrace = std::chrono::milliseconds(150);

/// Shared state between the aggregator and its detached workers. Workers
/// may outlive the wait (their late results are discarded, never cached).
template <typename T>
struct FanState {
  explicit FanState(size_t n) : pending(n), slots(n) {}
  std::mutex mu;
  std::condition_variable cv;
  size_t pending;
  std::vector<std::optional<Result<T>>> slots;
};

struct Target {
  std::shared_ptr<EndpointRuntime> endpoint;
  std::string backend_path;
};

}  // namespace

Locator::Locator(const FederationConfig& cfg,
                 std::shared_ptr<EndpointRegistry> registry,
                 std::shared_ptr<L2Cache> l2, std::shared_ptr<Metrics> metrics)
    : cfg_(cfg),
      registry_(std::move(registry)),
      l2_(std::move(l2)),
      metrics_(std::move(metrics)),
      l1_replicas_(cfg.l1_max_entries),
      l1_listings_(cfg.l1_max_entries) {}

std::optional<std::string> Locator::translate(const std::string& path,
                                              const EndpointConfig& endpoint) {
  if (!util::path_under(path, endpoint.federated_prefix)) return std::nullopt;
  std::string_view remainder(path);
  if (endpoint.federated_prefix != "/")
    remainder.remove_prefix(endpoint.federated_prefix.size());
  if (remainder.empty() || remainder == "/") return endpoint.backend_prefix;
  if (endpoint.backend_prefix == "/") return std::string(remainder);
  return endpoint.backend_prefix + std::string(remainder);
}

bool Locator::is_virtual_directory(const std::string& path) const {
  for (const auto& ep : registry_->all()) {
    const auto& fp = ep->config().federated_prefix;
    if (fp != path && util::path_under(fp, path)) return true;
  }
  return false;
}

bool Locator::covered_by_any(const std::string& path) const {
  for (const auto& ep : registry_->all())
    if (util::path_under(path, ep->config().federated_prefix)) return true;
  return false;
}

std::chrono::milliseconds Locator::ttl_for(bool complete, bool empty) const {
  return (complete && !empty) ? cfg_.cache_ttl_positive
                              : cfg_.cache_ttl_negative;
}

void Locator::store_replicas(const std::string& path, const CacheEntry& entry,
                             WallTime now) {
  l1_replicas_.put(path, entry, entry.expires_at, now);
  if (!l2_) return;
  if (!l2_->set(replica_cache_key(path), encode_replica_entry(entry),
                static_cast<uint32_t>(std::max<int64_t>(
                    1, (util::to_unix_ms(entry.expires_at) -
                        util::to_unix_ms(now) + 999) / 1000))))
    FG_LOG(warn, "L2 set failed for " << path);
}

void Locator::store_listing(const std::string& path,
                            const ListingCacheEntry& entry, WallTime now) {
  l1_listings_.put(path, entry, entry.expires_at, now);
  if (!l2_) return;
  if (!l2_->set(listing_cache_key(path), encode_listing_entry(entry),
                static_cast<uint32_t>(std::max<int64_t>(
                    1, (util::to_unix_ms(entry.expires_at) -
                        util::to_unix_ms(now) + 999) / 1000))))
    FG_LOG(warn, "L2 set failed for listing " << path);
}

ReplicaSet Locator::locate(const std::string& path, WallTime now) {
  if (auto hit = l1_replicas_.get(path, now)) {
    metrics_->inc_cache_hit_l1();
    return hit->replica_set;
  }
  if (l2_) {
    if (auto raw = l2_->get(replica_cache_key(path))) {
      auto entry = decode_replica_entry(*raw);
      if (entry && entry->expires_at > now &&
          entry->replica_set.federated_path == path) {
        metrics_->inc_cache_hit_l2();
        l1_replicas_.put(path, *entry, entry->expires_at, now);
        return entry->replica_set;
      }
    }
  }

  std::shared_future<CacheEntry> flight;
  std::promise<CacheEntry> promise;
  bool leader = false;
  {
    std::lock_guard lk(flights_mu_);
    if (auto hit = l1_replicas_.get(path, now)) {  // raced with a leader
      metrics_->inc_cache_hit_l1();
      return hit->replica_set;
    }
    auto it = replica_flights_.find(path);
    if (it != replica_flights_.end()) {
      flight = it->second;
    } else {
      leader = true;
      flight = promise.get_future().share();
      replica_flights_.emplace(path, flight);
    }
  }

  if (!leader) {
    metrics_->inc_singleflight_wait();
    return flight.get().replica_set;
  }

  metrics_->inc_cache_miss();
  CacheEntry entry = resolve_replicas(path, now);
  store_replicas(path, entry, now);
  promise.set_value(entry);
  {
    std::lock_guard lk(flights_mu_);
    replica_flights_.erase(path);
  }
  return entry.replica_set;
}

CacheEntry Locator::resolve_replicas(const std::string& path, WallTime now) {
  std::vector<Target> targets;
  bool any_covering = false;
  for (const auto& ep : registry_->all()) {
    auto backend = translate(path, ep->config());
    if (!backend) continue;
    any_covering = true;
    if (ep->status.load(std::memory_order_relaxed) == EndpointStatus::offline)
      continue;
    targets.push_back(Target{ep, std::move(*backend)});
  }

  CacheEntry entry;
  entry.replica_set.federated_path = path;
  entry.replica_set.resolved_at = now;

  if (targets.empty()) {
    // Nothing reachable: definitively absent when nothing covers the
    // path at all, unknown when everything covering it is offline.
    entry.replica_set.complete = !any_covering;
  } else {
    auto deadline = std::chrono::steady_clock::now() + cfg_.fanout_timeout;
    auto state = std::make_shared<FanState<StatResult>>(targets.size());
    for (size_t i = 0; i < targets.size(); ++i) {
      std::thread([state, i, target = targets[i], deadline] {
        auto result = target.endpoint->client->stat(target.backend_path, deadline);
        std::lock_guard lk(state->mu);
        state->slots[i] = std::move(result);
        --state->pending;
        state->cv.notify_all();
      }).detach();
    }
    std::unique_lock lk(state->mu);
    state->cv.wait_until(lk, deadline + kCollectGrace,
                         [&] { return state->pending == 0; });

    entry.replica_set.complete = true;
    for (size_t i = 0; i < targets.size(); ++i) {
      const auto& slot = state->slots[i];
      const std::string& id = targets[i].endpoint->id();
      if (!slot) {  // worker still running past the grace window
        metrics_->inc_endpoint_timeout(id);
        entry.replica_set.complete = false;
        continue;
      }
      if (!slot->ok()) {
        if (slot->error().code == Errc::timeout)
          metrics_->inc_endpoint_timeout(id);
        entry.replica_set.complete = false;
        continue;
      }
      const StatResult& st = slot->value();
      if (!st.exists) continue;
      ReplicaLocation loc;
      loc.endpoint_id = id;
      loc.backend_path = targets[i].backend_path;
      loc.size = st.size;
      loc.is_directory = st.is_directory;
      entry.replica_set.replicas.push_back(std::move(loc));
    }
    // deterministic order regardless of arrival
    std::sort(entry.replica_set.replicas.begin(),
              entry.replica_set.replicas.end(),
              [](const ReplicaLocation& a, const ReplicaLocation& b) {
                return a.endpoint_id < b.endpoint_id;
              });
  }

  entry.negative =
      entry.replica_set.complete && entry.replica_set.replicas.empty();
  entry.expires_at =
      now + ttl_for(entry.replica_set.complete,
                    entry.replica_set.replicas.empty());
  return entry;
}

MergedListing Locator::merged_listing(const std::string& path, WallTime now) {
  if (auto hit = l1_listings_.get(path, now)) {
    metrics_->inc_cache_hit_l1();
    return hit->merged;
  }
  if (l2_) {
    if (auto raw = l2_->get(listing_cache_key(path))) {
      auto entry = decode_listing_entry(*raw);
      if (entry && entry->expires_at > now &&
          entry->merged.federated_path == path) {
        metrics_->inc_cache_hit_l2();
        l1_listings_.put(path, *entry, entry->expires_at, now);
        return entry->merged;
      }
    }
  }

  std::shared_future<ListingCacheEntry> flight;
  std::promise<ListingCacheEntry> promise;
  bool leader = false;
  {
    std::lock_guard lk(flights_mu_);
    if (auto hit = l1_listings_.get(path, now)) {
      metrics_->inc_cache_hit_l1();
      return hit->merged;
    }
    auto it = listing_flights_.find(path);
    if (it != listing_flights_.end()) {
      flight = it->second;
    } else {
      leader = true;
      flight = promise.get_future().share();
      listing_flights_.emplace(path, flight);
    }
  }

  if (!leader) {
    metrics_->inc_singleflight_wait();
    return flight.get().merged;
  }

  metrics_->inc_cache_miss();
  ListingCacheEntry entry = resolve_listing(path, now);
  store_listing(path, entry, now);
  promise.set_value(entry);
  {
    std::lock_guard lk(flights_mu_);
    listing_flights_.erase(path);
  }
  return entry.merged;
}

ListingCacheEntry Locator::resolve_listing(const std::string& path,
                                           WallTime now) {
  std::vector<Target> targets;
  for (const auto& ep : registry_->all()) {
    auto backend = translate(path, ep->config());
    if (!backend) continue;
    if (ep->status.load(std::memory_order_relaxed) == EndpointStatus::offline)
      continue;
    targets.push_back(Target{ep, std::move(*backend)});
  }
  // endpoints in id order so conflict resolution is deterministic
  std::sort(targets.begin(), targets.end(), [](const Target& a, const Target& b) {
    return a.endpoint->id() < b.endpoint->id();
  });

  ListingCacheEntry entry;
  entry.merged.federated_path = path;
  entry.merged.resolved_at = now;
  entry.merged.complete = true;

  if (!targets.empty()) {
    auto deadline = std::chrono::steady_clock::now() + cfg_.fanout_timeout;
    auto state = std::make_shared<FanState<Listing>>(targets.size());
    for (size_t i = 0; i < targets.size(); ++i) {
      std::thread([state, i, target = targets[i], deadline] {
        auto result = target.endpoint->client->list(target.backend_path, deadline);
        std::lock_guard lk(state->mu);
        state->slots[i] = std::move(result);
        --state->pending;
        state->cv.notify_all();
      }).detach();
    }
    std::unique_lock lk(state->mu);
    state->cv.wait_until(lk, deadline + kCollectGrace,
                         [&] { return state->pending == 0; });

    std::map<std::string, ListingEntry> merged;
    for (size_t i = 0; i < targets.size(); ++i) {
      const auto& slot = state->slots[i];
      const std::string& id = targets[i].endpoint->id();
      if (!slot) {
        metrics_->inc_endpoint_timeout(id);
        entry.merged.complete = false;
        continue;
      }
      if (!slot->ok()) {
        const Error& err = slot->error();
        if (err.code == Errc::timeout) {
          metrics_->inc_endpoint_timeout(id);
          entry.merged.complete = false;
        } else if (err.code == Errc::backend && err.backend_status == 404) {
          // definitive: this endpoint has no such directory
        } else if (err.code == Errc::not_directory) {
          // definitive: nothing to contribute
        } else {
          entry.merged.complete = false;
        }
        continue;
      }
      for (const auto& e : slot->value().entries) {
        auto [it, inserted] = merged.emplace(e.name, e);
        if (!inserted) {
          // a name that is a directory anywhere is a directory in the
          // union; sizes come from the first endpoint in id order
          it->second.is_directory = it->second.is_directory || e.is_directory;
          if (!it->second.size && e.size) it->second.size = e.size;
        }
      }
    }

    // virtual skeleton: federated prefixes below `path` appear as
    // directories even when no endpoint lists them
    for (const auto& ep : registry_->all()) {
      const auto& fp = ep->config().federated_prefix;
      if (fp == path || !util::path_under(fp, path)) continue;
      std::string_view rest(fp);
      rest.remove_prefix(path == "/" ? 1 : path.size() + 1);
      std::string segment(rest.substr(0, rest.find('/')));
      if (segment.empty()) continue;
      auto [it, inserted] =
          merged.emplace(segment, ListingEntry{segment, true, std::nullopt});
      if (!inserted) it->second.is_directory = true;
    }

    entry.merged.listing.entries.reserve(merged.size());
    for (auto& [name, e] : merged)
      entry.merged.listing.entries.push_back(std::move(e));
  }

  entry.negative =
      entry.merged.complete && entry.merged.listing.entries.empty();
  entry.expires_at = now + ttl_for(entry.merged.complete,
                                   entry.merged.listing.entries.empty());
  return entry;
}

void Locator::invalidate(const std::string& path) {
  l1_replicas_.erase(path);
  l1_listings_.erase(path);
  std::string parent = util::parent_path(path);
  l1_listings_.erase(parent);
  if (!l2_) return;
  // del() returns false for NOT_FOUND too; L2 trouble surfaces in logs only
  l2_->del(replica_cache_key(path));
  l2_->del(listing_cache_key(path));
  l2_->del(listing_cache_key(parent));
}

}  // namespace fedgate
