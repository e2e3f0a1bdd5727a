/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

#include "fedgate/signer.hpp"

#include <algorithm>
#include <map>

#include "fedgate/crypto.hpp"

namespace fedgate {

namespace {

constexpr const char* kAlgorithm = "AWS4-HMAC-SHA256";
constexpr const char* kService = "s3";

bool valid_method(const std::string& m) {
  return m == "GET" || m == "PUT" || m == "DELETE" || m == "HEAD";
}

bool valid_host(const std::string& h) {
  if (h.empty()) return false;
  for (char c : h)
    if (c == '/' || c == '?' || c == '#' || c == ' ' || c == '\t' ||
        c == '\r' || c == '\n' || c == '\0')
      return false;
  return true;
}

/// Sorted canonical query string from decoded pairs; strict RFC 3986
/// encoding, byte order on the encoded forms.
std::string canonical_query(
    std::vector<std::pair<std::string, std::string>> params) {
  std::vector<std::pair<std::string, std::string>> enc;
  enc.reserve(params.size());
  for (auto& [k, v] : params)
    enc.emplace_back(util::url_encode_component(k),
                     util::url_encode_component(v));
  std::sort(enc.begin(), enc.end());
  std::string out;
  for (const auto& [k, v] : enc) {
    if (!out.empty()) out += '&';
    out += k;
    out += '=';
    out += v;
  }
  return out;
}

std::string signature_for(const SigningKey& key, const std::string& method,
                          const std::string& canonical_uri,
                          const std::string& canonical_query_string,
                          const std::string& host, const std::string& amz_date,
                          const std::string& scope) {
  std::string canonical_request = method + "\n" + canonical_uri + "\n" +
                                  canonical_query_string + "\nhost:" + host +
                                  "\n\nhost\nUNSIGNED-PAYLOAD";
  std::string string_to_sign = std::string(kAlgorithm) + "\n" + amz_date +
                               "\n" + scope + "\n" +
                               crypto::sha256_hex(canonical_request);
  std::string datestamp = amz_date.substr(0, 8);
  auto k = crypto::hmac_sha256("AWS4" + key.secret_key, datestamp);
  k = crypto::hmac_sha256(k, key.region);
  k = crypto::hmac_sha256(k, kService);
  k = crypto::hmac_sha256(k, "aws4_request");
  auto sig = crypto::hmac_sha256(k, string_to_sign);
  return util::to_hex(sig.data(), sig.size());
}

}  // namespace

Result<std::string> presign(const SigningKey& key, const PresignRequest& req) {
  if (key.access_key.empty() || key.secret_key.empty())
    return Error{Errc::signing, "signing key has empty access or secret key"};
  if (!valid_method(req.method))
    return Error{Errc::signing, "unsupported method: " + req.method};
  if (!valid_host(req.host))
    return Error{Errc::signing, "malformed host"};
  if (req.canonical_path.empty() || req.canonical_path.front() != '/')
    return Error{Errc::signing, "canonical_path must begin with '/'"};
  long secs = req.expiry.count();
  if (secs < 1 || secs > kMaxPresignExpirySeconds)
    return Error{Errc::signing,
                 "expiry out of range [1, 604800]: " + std::to_string(secs)};

  std::string amz_date = util::format_amz_date(req.signing_time);
  std::string scope = amz_date.substr(0, 8) + "/" + key.region + "/" +
                      kService + "/aws4_request";

  auto params = req.query;
  params.emplace_back("X-Amz-Algorithm", kAlgorithm);
  params.emplace_back("X-Amz-Credential", key.access_key + "/" + scope);
  params.emplace_back("X-Amz-Date", amz_date);
  params.emplace_back("X-Amz-Expires", std::to_string(secs));
  params.emplace_back("X-Amz-SignedHeaders", "host");

  std::string query = canonical_query(std::move(params));
  std::string uri = util::url_encode_path(req.canonical_path);
  std::string sig =
      signature_for(key, req.method, uri, query, req.host, amz_date, scope);

  return req.scheme + "://" + req.host + uri + "?" + query +
         "&X-Amz-Signature=" + sig;
}

bool verify(const SigningKey& key, const std::string& url, WallTime now,
            std::string_view method) {
  auto parsed = util::parse_url(url);
  if (!parsed) return false;

  std::vector<std::pair<std::string, std::string>> params;
  std::string signature;
  std::map<std::string, std::string> amz;  // the five signed X-Amz params
  for (const auto& kv : util::split(parsed->query, '&')) {
    if (kv.empty()) return false;
    auto eq = kv.find('=');
    std::string k = util::url_decode(kv.substr(0, eq));
    std::string v =
        eq == std::string::npos ? "" : util::url_decode(kv.substr(eq + 1));
    if (k == "X-Amz-Signature") {
      if (!signature.empty()) return false;  // duplicate
      signature = v;
      continue;
    }
    if (util::starts_with(k, "X-Amz-")) {
      if (!amz.emplace(k, v).second) return false;  // duplicate
    }
    params.emplace_back(std::move(k), std::move(v));
  }

  auto get = [&](const char* name) -> const std::string* {
    auto it = amz.find(name);
    return it == amz.end() ? nullptr : &it->second;
  };
  const auto* algorithm = get("X-Amz-Algorithm");
  const auto* credential = get("X-Amz-Credential");
  const auto* date = get("X-Amz-Date");
  const auto* expires = get("X-Amz-Expires");
  const auto* signed_headers = get("X-Amz-SignedHeaders");
  if (!algorithm || !credential || !date || !expires || !signed_headers ||
      signature.size() != 64)
    return false;
  if (*algorithm != kAlgorithm || *signed_headers != "host") return false;

  auto signing_time = util::parse_amz_date(*date);
  if (!signing_time) return false;
  long expiry = 0;
  try {
    expiry = std::stol(*expires);
  } catch (...) {
    return false;
  }
  if (expiry < 1 || expiry > kMaxPresignExpirySeconds) return false;
  if (now >= *signing_time + std::chrono::seconds(expiry)) return false;

  std::string scope = date->substr(0, 8) + "/" + key.region + "/" + kService +
                      "/aws4_request";
  if (*credential != key.access_key + "/" + scope) return false;

  std::string uri = util::url_encode_path(util::url_decode(parsed->path));
  std::string query = canonical_query(std::move(params));
  std::string expected =
      signature_for(key, std::string(method), uri, query, parsed->host, *date,
                    scope);
  return expected == signature;
}

}  // namespace fedgate
