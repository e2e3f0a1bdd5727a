/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

/// @file   gateway.hpp
/// @brief  Client-facing HTTP/WebDAV front: authenticate, authorize,
///         resolve, rank by proximity, redirect. Serves merged directory
///         listings and orchestrates PUT/DELETE redirects.

#ifndef FEDGATE_GATEWAY_HPP
#define FEDGATE_GATEWAY_HPP

#include <memory>
#include <string>

#include "fedgate/authz.hpp"
#include "fedgate/cache.hpp"
#include "fedgate/config.hpp"
#include "fedgate/geo.hpp"
#include "fedgate/health.hpp"
#include "fedgate/locator.hpp"
#include "fedgate/metrics.hpp"

namespace fedgate {

class Gateway {
 public:
  struct Options {
    /// L2 cache override (otherwise built from config.l2_cache).
    std::shared_ptr<L2Cache> l2;
    /// Request worker threads.
    int server_threads = 64;
  };

  /// Loads geo database and membership files; fails on any of them.
  static Result<std::unique_ptr<Gateway>> create(FederationConfig cfg,
                                                 Options opts = {});
  ~Gateway();

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  /// Bind the listen address, start the server thread and the health
  /// poller. Returns the bound port (useful with port 0).
  Result<int> start();

  /// Drain and stop the server, stop the poller. Idempotent.
  void stop();

  int port() const { return port_; }
  std::string base_url() const;

  const FederationConfig& config() const { return cfg_; }
  std::shared_ptr<Metrics> metrics() const { return metrics_; }
  std::shared_ptr<EndpointRegistry> registry() const { return registry_; }
  Locator& locator() { return *locator_; }
  HealthMonitor& health() { return *health_; }

  /// Reserved operational namespace (outside the federated tree).
  static constexpr const char* kReservedPrefix = "/.well-known/fedgate";

 private:
  Gateway(FederationConfig cfg, Options opts, GeoDatabase geo,
          MembershipRegistry members);

  struct Impl;
  std::unique_ptr<Impl> impl_;

  FederationConfig cfg_;
  Options opts_;
  GeoDatabase geo_;
  MembershipRegistry members_;
  std::shared_ptr<Metrics> metrics_;
  std::shared_ptr<EndpointRegistry> registry_;
  std::shared_ptr<L2Cache> l2_;
  std::unique_ptr<Locator> locator_;
  std::unique_ptr<HealthMonitor> health_;
  int port_ = 0;
};

}  // namespace fedgate

#endif
