/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

/// @file   signer.hpp
/// @brief  Time-limited pre-signed S3 URLs (AWS Signature Version 4,
///         query-string authorization, UNSIGNED-PAYLOAD).
///
/// Emitted query parameters, bit-exact: X-Amz-Algorithm, X-Amz-Credential,
/// X-Amz-Date, X-Amz-Expires, X-Amz-SignedHeaders, X-Amz-Signature.

#ifndef FEDGATE_SIGNER_HPP
#define FEDGATE_SIGNER_HPP

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "fedgate/result.hpp"
#include "fedgate/util.hpp"

namespace fedgate {

struct SigningKey {
  std::string access_key;
  std::string secret_key;
  std::string region;
  // service is the constant "s3"
};

struct PresignRequest {
  std::string method;          // GET | PUT | DELETE | HEAD
  std::string host;            // host[:port], as it will appear in the Host header
  std::string canonical_path;  // decoded, begins with '/'
  /// Additional query parameters to sign (decoded values), e.g. the
  /// list-type=2 family for bucket listings. May be empty.
  std::vector<std::pair<std::string, std::string>> query;
  std::chrono::seconds expiry{0};  // must be within [1, 604800]
  WallTime signing_time;
  std::string scheme = "http";
};

constexpr long kMaxPresignExpirySeconds = 604'800;

/// Deterministic given identical inputs (signing_time is an explicit input).
/// The secret key never appears in the output.
Result<std::string> presign(const SigningKey& key, const PresignRequest& req);

/// True iff the signature recomputes correctly for `key` and
/// `now < signing_time + expiry`. All failures (bad URL, missing
/// parameters, tampering, expiry) map to false. `method` is the HTTP
/// method the URL is presented with (the signature covers it).
bool verify(const SigningKey& key, const std::string& url, WallTime now,
            std::string_view method = "GET");

}  // namespace fedgate

#endif
