/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

/// @file   config.hpp
/// @brief  Gateway configuration: parsing, validation, defaults.
///
/// The file format is a plain INI-style text: `[federation]`, `[auth]`,
/// `[geo]`, `[cache]` sections plus one `[endpoint]` section per attached
/// endpoint. See README.md for the key reference.

#ifndef FEDGATE_CONFIG_HPP
#define FEDGATE_CONFIG_HPP

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "fedgate/geo.hpp"
#include "fedgate/result.hpp"

namespace fedgate {

enum class EndpointKind { webdav, s3 };

const char* endpoint_kind_name(EndpointKind k);

struct EndpointConfig {
  std::string id;
  EndpointKind kind = EndpointKind::webdav;
  std::string base_url;           // scheme://host[:port][/base-path]
  std::string federated_prefix;   // normalized, absolute
  std::string backend_prefix;     // normalized, absolute
  GeoPoint location;
  bool writable = false;
  // s3 kind only:
  std::string s3_access_key;
  std::string s3_secret_key;
  std::string s3_region;
  std::string s3_bucket;

  bool operator==(const EndpointConfig&) const = default;
};

struct FederationConfig {
  std::string listen_address = "127.0.0.1:8080";
  std::chrono::milliseconds fanout_timeout{3000};
  std::chrono::milliseconds health_poll_interval{30'000};
  std::chrono::milliseconds probe_timeout{2000};
  int failure_threshold = 2;
  std::chrono::milliseconds cache_ttl_positive{300'000};
  std::chrono::milliseconds cache_ttl_negative{30'000};
  std::chrono::seconds presign_expiry{3600};
  std::string geo_db_path;
  std::string members_path;
  std::string privileged_path;
  std::string required_attribute_prefix = "/atlas";
  std::string scratch_prefix = "/scratch";
  bool insecure_header_auth = false;
  bool trust_forwarded_for = false;
  std::string l2_cache = "none";  // "none" | "memcached:<host>:<port>"
  size_t l1_max_entries = 10'000;
  std::vector<EndpointConfig> endpoints;

  bool operator==(const FederationConfig&) const = default;
};

/// Parse and validate. All defaults filled; every invariant checked. The
/// error message names the first violated invariant (with a line number
/// for syntax problems).
Result<FederationConfig> load_config(const std::string& path);

/// Same, from an in-memory string (test convenience).
Result<FederationConfig> parse_config(std::string_view text);

/// Canonical prefix/path form: leading slash, no empty or "." segments,
/// no trailing slash except root. Rejects "..", empty input, embedded NUL.
Result<std::string> validate_prefix(std::string_view path);

}  // namespace fedgate

#endif
