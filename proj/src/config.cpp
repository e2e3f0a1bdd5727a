/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

#include "fedgate/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "fedgate/util.hpp"

namespace fedgate {

const char* endpoint_kind_name(EndpointKind k) {
  return k == EndpointKind::s3 ? "s3" : "webdav";
}

Result<std::string> validate_prefix(std::string_view path) {
  return util::normalize_path(path);
}

namespace {

struct Line {
  int number;
  std::string key;
  std::string value;
};

/// One parsed section with its body lines in file order.
struct Section {
  int number;
  std::string name;
  std::vector<Line> lines;
};

Result<std::vector<Section>> tokenize(std::string_view text) {
  std::vector<Section> sections;
  int lineno = 0;
  for (const auto& raw : util::split(text, '\n')) {
    ++lineno;
    std::string line = util::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        return Error{Errc::parse,
                     "line " + std::to_string(lineno) + ": unterminated section"};
      sections.push_back(
          Section{lineno, util::trim(line.substr(1, line.size() - 2)), {}});
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      return Error{Errc::parse,
                   "line " + std::to_string(lineno) + ": expected key = value"};
    if (sections.empty())
      return Error{Errc::parse, "line " + std::to_string(lineno) +
                                    ": key outside any section"};
    sections.back().lines.push_back(Line{lineno, util::trim(line.substr(0, eq)),
                                         util::trim(line.substr(eq + 1))});
  }
  return sections;
}

/// "env:NAME" indirection for secrets; anything else passes through.
Result<std::string> resolve_value(const Line& ln) {
  if (util::starts_with(ln.value, "env:")) {
    std::string name = ln.value.substr(4);
    const char* v = std::getenv(name.c_str());
    if (!v)
      return Error{Errc::validation, "line " + std::to_string(ln.number) +
                                         ": environment variable " + name +
                                         " is not set"};
    return std::string(v);
  }
  return ln.value;
}

Result<bool> parse_bool(const Line& ln) {
  if (ln.value == "true" || ln.value == "yes" || ln.value == "1") return true;
  if (ln.value == "false" || ln.value == "no" || ln.value == "0") return false;
  return Error{Errc::parse, "line " + std::to_string(ln.number) +
                                ": expected boolean, got \"" + ln.value + "\""};
}

Result<std::chrono::milliseconds> parse_dur(const Line& ln) {
  auto d = util::parse_duration(ln.value);
  if (!d)
    return Error{Errc::parse,
                 "line " + std::to_string(ln.number) + ": " + d.error().message};
  return d.value();
}

Error unknown_key(const Section& sec, const Line& ln) {
  return Error{Errc::parse, "line " + std::to_string(ln.number) +
                                ": unknown key \"" + ln.key + "\" in [" +
                                sec.name + "]"};
}

Result<GeoPoint> parse_location(const Line& ln) {
  auto parts = util::split(ln.value, ',');
  if (parts.size() != 2)
    return Error{Errc::parse,
                 "line " + std::to_string(ln.number) + ": expected lat,lon"};
  GeoPoint p{};
  try {
    p.lat = std::stod(util::trim(parts[0]));
    p.lon = std::stod(util::trim(parts[1]));
  } catch (...) {
    return Error{Errc::parse,
                 "line " + std::to_string(ln.number) + ": bad coordinates"};
  }
  if (!valid_geopoint(p))
    return Error{Errc::validation, "line " + std::to_string(ln.number) +
                                       ": coordinates out of range"};
  return p;
}

Status apply_federation(FederationConfig& cfg, const Section& sec) {
  for (const auto& ln : sec.lines) {
    if (ln.key == "listen") cfg.listen_address = ln.value;
    else if (ln.key == "fanout_timeout") {
      auto d = parse_dur(ln); if (!d) return d.error();
      cfg.fanout_timeout = d.value();
    } else if (ln.key == "health_poll_interval") {
      auto d = parse_dur(ln); if (!d) return d.error();
      cfg.health_poll_interval = d.value();
    } else if (ln.key == "probe_timeout") {
      auto d = parse_dur(ln); if (!d) return d.error();
      cfg.probe_timeout = d.value();
    } else if (ln.key == "failure_threshold") {
      try { cfg.failure_threshold = std::stoi(ln.value); }
      catch (...) { return Error{Errc::parse, "line " + std::to_string(ln.number) + ": bad integer"}; }
    } else if (ln.key == "presign_expiry") {
      auto d = parse_dur(ln); if (!d) return d.error();
      cfg.presign_expiry =
          std::chrono::duration_cast<std::chrono::seconds>(d.value());
    } else if (ln.key == "insecure_header_auth") {
      auto b = parse_bool(ln); if (!b) return b.error();
      cfg.insecure_header_auth = b.value();
    } else if (ln.key == "trust_forwarded_for") {
      auto b = parse_bool(ln); if (!b) return b.error();
      cfg.trust_forwarded_for = b.value();
    } else {
      return unknown_key(sec, ln);
    }
  }
  return {};
}

Status apply_auth(FederationConfig& cfg, const Section& sec) {
  for (const auto& ln : sec.lines) {
    if (ln.key == "members") cfg.members_path = ln.value;
    else if (ln.key == "privileged") cfg.privileged_path = ln.value;
    else if (ln.key == "required_attribute_prefix")
      cfg.required_attribute_prefix = ln.value;
    else if (ln.key == "scratch_prefix") {
      auto p = validate_prefix(ln.value);
      if (!p)
        return Error{Errc::validation, "line " + std::to_string(ln.number) +
                                           ": scratch_prefix: " +
                                           p.error().message};
      cfg.scratch_prefix = p.value();
    } else return unknown_key(sec, ln);
  }
  return {};
}

Status apply_geo(FederationConfig& cfg, const Section& sec) {
  for (const auto& ln : sec.lines) {
    if (ln.key == "database") cfg.geo_db_path = ln.value;
    else return unknown_key(sec, ln);
  }
  return {};
}

Status apply_cache(FederationConfig& cfg, const Section& sec) {
  for (const auto& ln : sec.lines) {
    if (ln.key == "ttl_positive") {
      auto d = parse_dur(ln); if (!d) return d.error();
      cfg.cache_ttl_positive = d.value();
    } else if (ln.key == "ttl_negative") {
      auto d = parse_dur(ln); if (!d) return d.error();
      cfg.cache_ttl_negative = d.value();
    } else if (ln.key == "l2") {
      cfg.l2_cache = ln.value;
    } else if (ln.key == "l1_max_entries") {
      try { cfg.l1_max_entries = std::stoul(ln.value); }
      catch (...) { return Error{Errc::parse, "line " + std::to_string(ln.number) + ": bad integer"}; }
    } else return unknown_key(sec, ln);
  }
  return {};
}

Result<EndpointConfig> parse_endpoint(const Section& sec) {
  EndpointConfig ep;
  bool have_location = false;
  for (const auto& ln : sec.lines) {
    if (ln.key == "id") ep.id = ln.value;
    else if (ln.key == "kind") {
      if (ln.value == "webdav") ep.kind = EndpointKind::webdav;
      else if (ln.value == "s3") ep.kind = EndpointKind::s3;
      else
        return Error{Errc::validation, "line " + std::to_string(ln.number) +
                                           ": unknown endpoint kind \"" +
                                           ln.value + "\""};
    } else if (ln.key == "base_url") {
      ep.base_url = ln.value;
    } else if (ln.key == "federated_prefix") {
      auto p = validate_prefix(ln.value);
      if (!p)
        return Error{Errc::validation, "line " + std::to_string(ln.number) +
                                           ": federated_prefix: " +
                                           p.error().message};
      ep.federated_prefix = p.value();
    } else if (ln.key == "backend_prefix") {
      auto p = validate_prefix(ln.value);
      if (!p)
        return Error{Errc::validation, "line " + std::to_string(ln.number) +
                                           ": backend_prefix: " +
                                           p.error().message};
      ep.backend_prefix = p.value();
    } else if (ln.key == "location") {
      auto p = parse_location(ln); if (!p) return p.error();
      ep.location = p.value();
      have_location = true;
    } else if (ln.key == "writable") {
      auto b = parse_bool(ln); if (!b) return b.error();
      ep.writable = b.value();
    } else if (ln.key == "s3_access_key") {
      auto v = resolve_value(ln); if (!v) return v.error();
      ep.s3_access_key = v.value();
    } else if (ln.key == "s3_secret_key") {
      auto v = resolve_value(ln); if (!v) return v.error();
      ep.s3_secret_key = v.value();
    } else if (ln.key == "s3_region") {
      ep.s3_region = ln.value;
    } else if (ln.key == "s3_bucket") {
      ep.s3_bucket = ln.value;
    } else {
      return unknown_key(sec, ln);
    }
  }

  std::string where = "endpoint \"" + ep.id + "\" (line " +
                      std::to_string(sec.number) + ")";
  if (ep.id.empty())
    return Error{Errc::validation,
                 "endpoint at line " + std::to_string(sec.number) + ": empty id"};
  if (ep.base_url.empty() || !util::parse_url(ep.base_url))
    return Error{Errc::validation, where + ": base_url must be an absolute http(s) URL"};
  // normalized non-empty prefixes, defaulting to "/"
  if (ep.federated_prefix.empty()) ep.federated_prefix = "/";
  if (ep.backend_prefix.empty()) ep.backend_prefix = "/";
  if (!have_location)
    return Error{Errc::validation, where + ": location is required"};

  bool any_s3_field = !ep.s3_access_key.empty() || !ep.s3_secret_key.empty() ||
                      !ep.s3_region.empty() || !ep.s3_bucket.empty();
  if (ep.kind == EndpointKind::s3) {
    if (ep.s3_access_key.empty() || ep.s3_secret_key.empty() ||
        ep.s3_region.empty() || ep.s3_bucket.empty())
      return Error{Errc::validation,
                   where + ": s3 endpoints require s3_access_key, "
                           "s3_secret_key, s3_region and s3_bucket"};
  } else if (any_s3_field) {
    return Error{Errc::validation,
                 where + ": s3_* keys are only valid for kind = s3"};
  }
  return ep;
}

Status validate(const FederationConfig& cfg) {
  if (cfg.fanout_timeout.count() <= 0)
    return Error{Errc::validation, "fanout_timeout must be > 0"};
  if (cfg.presign_expiry.count() <= 0)
    return Error{Errc::validation, "presign_expiry must be > 0"};
  if (cfg.cache_ttl_positive.count() < 0 || cfg.cache_ttl_negative.count() < 0)
    return Error{Errc::validation, "cache TTLs must be >= 0"};
  if (cfg.health_poll_interval.count() <= 0)
    return Error{Errc::validation, "health_poll_interval must be > 0"};
  if (cfg.probe_timeout.count() <= 0)
    return Error{Errc::validation, "probe_timeout must be > 0"};
  if (cfg.failure_threshold < 1)
    return Error{Errc::validation, "failure_threshold must be >= 1"};
  if (cfg.endpoints.empty())
    return Error{Errc::validation, "at least one endpoint must be configured"};
  std::set<std::string> ids;
  for (const auto& ep : cfg.endpoints) {
    if (!ids.insert(ep.id).second)
      return Error{Errc::validation, "duplicate endpoint id \"" + ep.id + "\""};
  }
  if (cfg.l2_cache != "none" && !util::starts_with(cfg.l2_cache, "memcached:"))
    return Error{Errc::validation,
                 "cache.l2 must be \"none\" or \"memcached:<host>:<port>\""};
  return {};
}

}  // namespace

Result<FederationConfig> parse_config(std::string_view text) {
  auto sections = tokenize(text);
  if (!sections) return sections.error();

  FederationConfig cfg;
  for (const auto& sec : sections.value()) {
    Status st;
    if (sec.name == "federation") st = apply_federation(cfg, sec);
    else if (sec.name == "auth") st = apply_auth(cfg, sec);
    else if (sec.name == "geo") st = apply_geo(cfg, sec);
    else if (sec.name == "cache") st = apply_cache(cfg, sec);
    else if (sec.name == "endpoint") {
      auto ep = parse_endpoint(sec);
      if (!ep) return ep.error();
      cfg.endpoints.push_back(ep.take());
      continue;
    } else {
      return Error{Errc::parse, "line " + std::to_string(sec.number) +
                                    ": unknown section [" + sec.name + "]"};
    }
    if (!st) return st.error();
  }

  if (auto st = validate(cfg); !st) return st.error();
  return cfg;
}

Result<FederationConfig> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) return Error{Errc::io, "cannot open config file: " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace fedgate
