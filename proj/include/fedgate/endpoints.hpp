/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

/// @file   endpoints.hpp
/// @brief  Uniform endpoint abstraction with WebDAV/HTTP and S3 clients.
///
/// The interface is the plugin contract: new backend protocols implement
/// EndpointClient and nothing else changes. Clients are stateless per
/// request; the mutable status lives in EndpointRuntime and is written
/// only by the health poller.

#ifndef FEDGATE_ENDPOINTS_HPP
#define FEDGATE_ENDPOINTS_HPP

#include <atomic>
#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fedgate/config.hpp"
#include "fedgate/metrics.hpp"
#include "fedgate/result.hpp"
#include "fedgate/util.hpp"

namespace fedgate {

enum class EndpointStatus { online, offline, unknown };

const char* endpoint_status_name(EndpointStatus s);

struct StatResult {
  bool exists = false;
  std::optional<uint64_t> size;       // absent when !exists or directory
  std::optional<WallTime> modified;   // absent when !exists
  bool is_directory = false;
};

struct ListingEntry {
  std::string name;  // single path segment, no '/'
  bool is_directory = false;
  std::optional<uint64_t> size;

  bool operator==(const ListingEntry&) const = default;
};

struct Listing {
  std::vector<ListingEntry> entries;
};

enum class HttpVerb { get, put, del, head };

const char* http_verb_name(HttpVerb v);

/// One protocol plugin instance, bound to one configured endpoint.
class EndpointClient {
 public:
  EndpointClient(EndpointConfig config, std::shared_ptr<Metrics> metrics)
      : config_(std::move(config)), metrics_(std::move(metrics)) {}
  virtual ~EndpointClient() = default;

  const EndpointConfig& config() const { return config_; }

  /// Existence and metadata of a backend path. Never blocks past
  /// `deadline`; a deadline overrun is reported as Errc::timeout,
  /// distinct from a definite "not found" (exists = false).
  virtual Result<StatResult> stat(const std::string& backend_path,
                                  Deadline deadline) const = 0;

  /// Immediate children of a backend directory.
  virtual Result<Listing> list(const std::string& backend_path,
                               Deadline deadline) const = 0;

  /// Cheap reachability check; all failures map to false.
  virtual bool probe(Deadline deadline) const = 0;

  /// Client-facing URL for direct access: plain backend URL for WebDAV,
  /// pre-signed URL for S3 (valid for exactly `expiry`).
  virtual Result<std::string> redirect_url(const std::string& backend_path,
                                           HttpVerb verb,
                                           std::chrono::seconds expiry,
                                           WallTime signing_time) const = 0;

  /// Server-side delete pass-through (used by tooling; the gateway itself
  /// redirects DELETE to the client).
  virtual Status remove(const std::string& backend_path,
                        Deadline deadline) const = 0;

 protected:
  /// Every stat/list HTTP request counts against the per-endpoint query
  /// counter (probes and redirects do not).
  void count_query() const {
    if (metrics_) metrics_->inc_endpoint_query(config_.id);
  }

  EndpointConfig config_;
  std::shared_ptr<Metrics> metrics_;
};

/// webdav or s3, per config.kind.
std::shared_ptr<EndpointClient> make_endpoint_client(
    const EndpointConfig& cfg, std::shared_ptr<Metrics> metrics = nullptr);

/// Client plus the mutable health state; status transitions are
/// single-writer (the poller), readers are lock-free.
struct EndpointRuntime {
  std::shared_ptr<EndpointClient> client;
  std::atomic<EndpointStatus> status{EndpointStatus::unknown};
  std::atomic<int> consecutive_failures{0};
  std::atomic<int64_t> last_poll_ms{0};
  std::atomic<int64_t> last_change_ms{0};

  const EndpointConfig& config() const { return client->config(); }
  const std::string& id() const { return client->config().id; }
};

class EndpointRegistry {
 public:
  explicit EndpointRegistry(const std::vector<EndpointConfig>& configs,
                            std::shared_ptr<Metrics> metrics = nullptr);

  const std::vector<std::shared_ptr<EndpointRuntime>>& all() const {
    return endpoints_;
  }
  std::shared_ptr<EndpointRuntime> find(const std::string& id) const;

 private:
  std::vector<std::shared_ptr<EndpointRuntime>> endpoints_;
};

}  // namespace fedgate

#endif
