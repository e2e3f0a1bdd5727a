/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

/// @file   endpoints.cpp
/// @brief  WebDAV/HTTP and S3 endpoint clients.
///
/// Wire behavior. WebDAV: HEAD (stat), PROPFIND Depth:1 (list), OPTIONS
/// (probe). S3: HEAD object (stat), GET list-type=2 + delimiter=/ (list),
/// HEAD bucket (probe) — every S3 request carries query-string V4
/// authorization from the signer module.

#include "fedgate/endpoints.hpp"

#include <httplib.h>

#include <cstring>
#include <ctime>

#include "fedgate/log.hpp"
#include "fedgate/signer.hpp"
#include "fedgate/webdav_xml.hpp"

namespace fedgate {

const char* endpoint_status_name(EndpointStatus s) {
  switch (s) {
    case EndpointStatus::online: return "online";
    case EndpointStatus::offline: return "offline";
    case EndpointStatus::unknown: return "unknown";
  }
  return "?";
}

const char* http_verb_name(HttpVerb v) {
  switch (v) {
    case HttpVerb::get: return "GET";
    case HttpVerb::put: return "PUT";
    case HttpVerb::del: return "DELETE";
    case HttpVerb::head: return "HEAD";
  }
  return "?";
}

namespace {

std::chrono::milliseconds remaining(Deadline deadline) {
  auto now = std::chrono::steady_clock::now();
  if (deadline <= now) return std::chrono::milliseconds(0);
  return std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now);
}

/// A client whose connection/read/write timeouts are clamped to the
/// remaining deadline budget.
std::unique_ptr<httplib::Client> make_http_client(const std::string& origin,
                                                  Deadline deadline) {
  auto cli = std::make_unique<httplib::Client>(origin);
  auto left = remaining(deadline);
  if (left.count() <= 0) return nullptr;
  cli->set_url_encode(false);  // targets are pre-encoded (signatures!)
  cli->set_connection_timeout(left);
  cli->set_read_timeout(left);
  cli->set_write_timeout(left);
  return cli;
}

Error deadline_exceeded(const std::string& what) {
  return Error{Errc::timeout, what + ": deadline exceeded"};
}

Error map_error(httplib::Error err, Deadline deadline, const std::string& what) {
  bool overdue = std::chrono::steady_clock::now() >= deadline;
  if (err == httplib::Error::ConnectionTimeout || overdue)
    return deadline_exceeded(what);
  return Error{Errc::transport,
               what + ": " + httplib::to_string(err)};
}

std::optional<WallTime> parse_http_date(const std::string& value) {
  std::tm tm{};
  if (strptime(value.c_str(), "%a, %d %b %Y %H:%M:%S GMT", &tm) == nullptr)
    return std::nullopt;
  std::time_t t = timegm(&tm);
  if (t == -1) return std::nullopt;
  return std::chrono::system_clock::from_time_t(t);
}

std::optional<uint64_t> content_length_of(const httplib::Response& res) {
  if (!res.has_header("Content-Length")) return std::nullopt;
  try {
    return std::stoull(res.get_header_value("Content-Length"));
  } catch (...) {
    return std::nullopt;
  }
}

/// scheme://host[:port] part of a base_url, plus its path component.
struct BaseParts {
  std::string origin;
  std::string base_path;  // "" when the base URL has no path
};

BaseParts split_base(const std::string& base_url) {
  auto parsed = util::parse_url(base_url);
  BaseParts out;
  if (!parsed) return out;
  out.origin = parsed->scheme + "://" + parsed->host;
  if (parsed->path != "/") out.base_path = parsed->path;
  // tolerate a trailing slash in configs
  if (!out.base_path.empty() && out.base_path.back() == '/')
    out.base_path.pop_back();
  return out;
}

/* ------------------------------------------------------------------ */
/* WebDAV                                                              */
/* ------------------------------------------------------------------ */

class WebDavClient : public EndpointClient {
 public:
  WebDavClient(EndpointConfig cfg, std::shared_ptr<Metrics> metrics)
      : EndpointClient(std::move(cfg), std::move(metrics)),
        base_(split_base(config_.base_url)) {}

  Result<StatResult> stat(const std::string& backend_path,
                          Deadline deadline) const override {
    count_query();
    auto cli = make_http_client(base_.origin, deadline);
    if (!cli) return deadline_exceeded("stat " + config_.id);
    auto res = cli->Head(request_path(backend_path));
    if (!res) return map_error(res.error(), deadline, "stat " + config_.id);
    if (res->status == 404) return StatResult{};
    if (res->status >= 400)
      return Error{Errc::backend,
                   "stat " + config_.id + ": HTTP " + std::to_string(res->status),
                   res->status};
    StatResult out;
    out.exists = true;
    out.is_directory =
        res->get_header_value("Content-Type") == "httpd/unix-directory";
    if (!out.is_directory) out.size = content_length_of(*res);
    if (res->has_header("Last-Modified"))
      out.modified = parse_http_date(res->get_header_value("Last-Modified"));
    return out;
  }

  Result<Listing> list(const std::string& backend_path,
                       Deadline deadline) const override {
    count_query();
    auto cli = make_http_client(base_.origin, deadline);
    if (!cli) return deadline_exceeded("list " + config_.id);
    httplib::Request req;
    req.method = "PROPFIND";
    req.path = request_path(backend_path);
    req.set_header("Depth", "1");
    auto res = cli->send(req);
    if (!res) return map_error(res.error(), deadline, "list " + config_.id);
    if (res->status == 404)
      return Error{Errc::backend, "list " + config_.id + ": HTTP 404", 404};
    if (res->status != 207)
      return Error{Errc::backend,
                   "list " + config_.id + ": HTTP " + std::to_string(res->status),
                   res->status};

    std::string self = request_path(backend_path);
    Listing out;
    for (const auto& r : dav::parse_multistatus(res->body)) {
      std::string href = r.href;
      // some servers return absolute URLs
      if (auto abs = util::parse_url(href)) href = abs->path;
      std::string decoded = util::url_decode(href);
      while (decoded.size() > 1 && decoded.back() == '/') decoded.pop_back();
      if (decoded == util::url_decode(self) || decoded.empty()) continue;
      ListingEntry e;
      e.name = util::basename(decoded);
      if (e.name.empty()) continue;
      e.is_directory = r.is_collection;
      if (!e.is_directory) e.size = r.content_length;
      out.entries.push_back(std::move(e));
    }
    return out;
  }

  bool probe(Deadline deadline) const override {
    auto cli = make_http_client(base_.origin, deadline);
    if (!cli) return false;
    httplib::Request req;
    req.method = "OPTIONS";
    req.path = base_.base_path.empty() ? "/" : base_.base_path;
    auto res = cli->send(req);
    return res && res->status < 500;
  }

  Result<std::string> redirect_url(const std::string& backend_path,
                                   HttpVerb /*verb*/,
                                   std::chrono::seconds expiry,
                                   WallTime /*signing_time*/) const override {
    if (expiry.count() < 1)
      return Error{Errc::signing, "redirect expiry must be >= 1s"};
    return base_.origin + util::url_encode_path(
                              base_.base_path +
                              (backend_path == "/" ? "" : backend_path));
  }

  Status remove(const std::string& backend_path,
                Deadline deadline) const override {
    auto cli = make_http_client(base_.origin, deadline);
    if (!cli) return deadline_exceeded("delete " + config_.id);
    auto res = cli->Delete(request_path(backend_path));
    if (!res) return map_error(res.error(), deadline, "delete " + config_.id);
    if (res->status >= 400)
      return Error{Errc::backend,
                   "delete " + config_.id + ": HTTP " +
                       std::to_string(res->status),
                   res->status};
    return {};
  }

 private:
  std::string request_path(const std::string& backend_path) const {
    std::string joined =
        base_.base_path + (backend_path == "/" ? "" : backend_path);
    if (joined.empty()) joined = "/";
    return util::url_encode_path(joined);
  }

  BaseParts base_;
};

/* ------------------------------------------------------------------ */
/* S3                                                                  */
/* ------------------------------------------------------------------ */

class S3Client : public EndpointClient {
 public:
  S3Client(EndpointConfig cfg, std::shared_ptr<Metrics> metrics)
      : EndpointClient(std::move(cfg), std::move(metrics)),
        base_(split_base(config_.base_url)),
        key_{config_.s3_access_key, config_.s3_secret_key, config_.s3_region} {}

  Result<StatResult> stat(const std::string& backend_path,
                          Deadline deadline) const override {
    count_query();
    auto head = signed_request("HEAD", object_path(backend_path), {}, deadline);
    if (!head) return head.error();
    const auto& res = head.value();
    if (res.status == 200) {
      StatResult out;
      out.exists = true;
      out.size = content_length_of(res);
      if (res.has_header("Last-Modified"))
        out.modified = parse_http_date(res.get_header_value("Last-Modified"));
      return out;
    }
    if (res.status != 404)
      return Error{Errc::backend,
                   "stat " + config_.id + ": HTTP " + std::to_string(res.status),
                   res.status};

    // No such object: it is a "directory" iff at least one key has
    // backend_path as a proper prefix.
    std::string prefix = key_prefix(backend_path);
    auto body = list_page(prefix, 1, "", deadline);
    if (!body) return body.error();
    bool any = !dav::element_texts(body.value(), "Key").empty() ||
               !dav::element_texts(body.value(), "Prefix").empty();
    StatResult out;
    out.exists = any;
    out.is_directory = any;
    return out;
  }

  Result<Listing> list(const std::string& backend_path,
                       Deadline deadline) const override {
    std::string prefix = key_prefix(backend_path);
    Listing out;
    std::string token;
    while (true) {
      auto body = list_page(prefix, 0, token, deadline);
      if (!body) return body.error();
      const std::string& xml = body.value();

      for (const auto& contents : dav::element_texts(xml, "Contents")) {
        auto key = dav::first_element_text(contents, "Key");
        if (!key || key->size() <= prefix.size()) continue;
        ListingEntry e;
        e.name = key->substr(prefix.size());
        if (e.name.find('/') != std::string::npos) continue;  // delimiter guard
        if (auto size = dav::first_element_text(contents, "Size")) {
          try { e.size = std::stoull(*size); } catch (...) {}
        }
        out.entries.push_back(std::move(e));
      }
      for (const auto& cp : dav::element_texts(xml, "CommonPrefixes")) {
        auto p = dav::first_element_text(cp, "Prefix");
        if (!p || p->size() <= prefix.size()) continue;
        std::string name = p->substr(prefix.size());
        if (!name.empty() && name.back() == '/') name.pop_back();
        if (name.empty() || name.find('/') != std::string::npos) continue;
        ListingEntry e;
        e.name = std::move(name);
        e.is_directory = true;
        out.entries.push_back(std::move(e));
      }

      auto truncated = dav::first_element_text(xml, "IsTruncated");
      if (!truncated || *truncated != "true") break;
      auto next = dav::first_element_text(xml, "NextContinuationToken");
      if (!next || next->empty()) break;
      token = *next;
    }
    return out;
  }

  bool probe(Deadline deadline) const override {
    auto res = signed_request("HEAD", "/" + config_.s3_bucket, {}, deadline);
    return res && res.value().status < 500;
  }

  Result<std::string> redirect_url(const std::string& backend_path,
                                   HttpVerb verb, std::chrono::seconds expiry,
                                   WallTime signing_time) const override {
    PresignRequest req;
    req.method = http_verb_name(verb);
    req.host = host();
    req.canonical_path = object_path(backend_path);
    req.expiry = expiry;
    req.signing_time = signing_time;
    req.scheme = scheme();
    return presign(key_, req);
  }

  Status remove(const std::string& backend_path,
                Deadline deadline) const override {
    auto res =
        signed_request("DELETE", object_path(backend_path), {}, deadline);
    if (!res) return res.error();
    if (res.value().status >= 400 && res.value().status != 404)
      return Error{Errc::backend,
                   "delete " + config_.id + ": HTTP " +
                       std::to_string(res.value().status),
                   res.value().status};
    return {};
  }

 private:
  std::string scheme() const {
    return util::starts_with(config_.base_url, "https") ? "https" : "http";
  }
  std::string host() const {
    auto parsed = util::parse_url(config_.base_url);
    return parsed ? parsed->host : "";
  }

  /// "/bucket" + backend path; "/" maps to the bucket root.
  std::string object_path(const std::string& backend_path) const {
    return "/" + config_.s3_bucket +
           (backend_path == "/" ? "" : backend_path);
  }

  /// Key prefix for directory semantics: no leading slash, trailing slash.
  std::string key_prefix(const std::string& backend_path) const {
    if (backend_path == "/") return "";
    return backend_path.substr(1) + "/";
  }

  Result<std::string> list_page(const std::string& prefix, int max_keys,
                                const std::string& token,
                                Deadline deadline) const {
    std::vector<std::pair<std::string, std::string>> query = {
        {"list-type", "2"}, {"delimiter", "/"}};
    if (!prefix.empty()) query.emplace_back("prefix", prefix);
    if (max_keys > 0) query.emplace_back("max-keys", std::to_string(max_keys));
    if (!token.empty()) query.emplace_back("continuation-token", token);
    count_query();
    auto res =
        signed_request("GET", "/" + config_.s3_bucket, query, deadline);
    if (!res) return res.error();
    if (res.value().status != 200)
      return Error{Errc::backend,
                   "list " + config_.id + ": HTTP " +
                       std::to_string(res.value().status),
                   res.value().status};
    return res.value().body;
  }

  /// Presign then execute one API request under the deadline.
  Result<httplib::Response> signed_request(
      const std::string& method, const std::string& path,
      const std::vector<std::pair<std::string, std::string>>& query,
      Deadline deadline) const {
    PresignRequest preq;
    preq.method = method;
    preq.host = host();
    preq.canonical_path = path;
    preq.query = query;
    preq.expiry = std::chrono::seconds(300);
    preq.signing_time = std::chrono::system_clock::now();
    preq.scheme = scheme();
    auto url = presign(key_, preq);
    if (!url) return url.error();
    auto parsed = util::parse_url(url.value());
    if (!parsed) return Error{Errc::signing, "presign produced a bad URL"};

    auto cli = make_http_client(base_.origin, deadline);
    if (!cli) return deadline_exceeded(method + " " + config_.id);
    httplib::Request req;
    req.method = method;
    req.path = parsed->target;
    auto res = cli->send(req);
    if (!res)
      return map_error(res.error(), deadline, method + " " + config_.id);
    return *res;
  }

  BaseParts base_;
  SigningKey key_;
};

}  // namespace

std::shared_ptr<EndpointClient> make_endpoint_client(
    const EndpointConfig& cfg, std::shared_ptr<Metrics> metrics) {
  if (cfg.kind == EndpointKind::s3)
    return std::make_shared<S3Client>(cfg, std::move(metrics));
  return std::make_shared<WebDavClient>(cfg, std::move(metrics));
}

EndpointRegistry::EndpointRegistry(const std::vector<EndpointConfig>& configs,
                                   std::shared_ptr<Metrics> metrics) {
  for (const auto& cfg : configs) {
    auto rt = std::make_shared<EndpointRuntime>();
    rt->client = make_endpoint_client(cfg, metrics);
    endpoints_.push_back(std::move(rt));
  }
}

std::shared_ptr<EndpointRuntime> EndpointRegistry::find(
    const std::string& id) const {
  for (const auto& ep : endpoints_)
    if (ep->id() == id) return ep;
  return nullptr;
}

}  // namespace fedgate
