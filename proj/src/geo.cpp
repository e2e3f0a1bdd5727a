/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

#include "fedgate/geo.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fedgate/util.hpp"

namespace fedgate {

namespace {

constexpr double kEarthRadiusKm = 6371.0;
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

/// Parse an IPv4 or IPv6 address into the 128-bit mapped representation
/// (IPv4 goes to ::ffff:a.b.c.d). Returns extra offset 96 for IPv4 so
/// prefix lengths can be shifted into mapped space.
std::optional<std::pair<std::array<uint8_t, 16>, int>> parse_addr(
    const std::string& text) {
  std::array<uint8_t, 16> out{};
  in_addr v4{};
  if (inet_pton(AF_INET, text.c_str(), &v4) == 1) {
    out[10] = 0xff;
    out[11] = 0xff;
    std::memcpy(out.data() + 12, &v4, 4);
    return std::make_pair(out, 96);
  }
  in6_addr v6{};
  if (inet_pton(AF_INET6, text.c_str(), &v6) == 1) {
    std::memcpy(out.data(), &v6, 16);
    return std::make_pair(out, 0);
  }
  return std::nullopt;
}

bool prefix_match(const std::array<uint8_t, 16>& addr,
                  const std::array<uint8_t, 16>& net, int prefix_len) {
  int full = prefix_len / 8;
  if (std::memcmp(addr.data(), net.data(), full) != 0) return false;
  int rem = prefix_len % 8;
  if (rem == 0) return true;
  uint8_t mask = static_cast<uint8_t>(0xFF << (8 - rem));
  return (addr[full] & mask) == (net[full] & mask);
}

}  // namespace

bool valid_geopoint(const GeoPoint& p) {
  return p.lat >= -90.0 && p.lat <= 90.0 && p.lon > -180.0 && p.lon <= 180.0;
}

double haversine(const GeoPoint& a, const GeoPoint& b) {
  double phi1 = a.lat * kDegToRad;
  double phi2 = b.lat * kDegToRad;
  double dphi = (b.lat - a.lat) * kDegToRad;
  double dlambda = (b.lon - a.lon) * kDegToRad;
  double s = std::sin(dphi / 2) * std::sin(dphi / 2) +
             std::cos(phi1) * std::cos(phi2) * std::sin(dlambda / 2) *
                 std::sin(dlambda / 2);
  s = std::min(1.0, std::max(0.0, s));
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(s));
}

Result<GeoDatabase> GeoDatabase::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return Error{Errc::io, "cannot open geo database: " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

Result<GeoDatabase> GeoDatabase::parse(std::string_view text) {
  GeoDatabase db;
  int lineno = 0;
  for (const auto& raw : util::split(text, '\n')) {
    ++lineno;
    std::string line = util::trim(raw);
    auto hash = line.find('#');
    if (hash != std::string::npos) line = util::trim(line.substr(0, hash));
    if (line.empty()) continue;

    auto fields = util::split(line, ',');
    if (fields.size() != 3)
      return Error{Errc::parse, "geo db line " + std::to_string(lineno) +
                                    ": expected cidr,lat,lon"};
    std::string cidr = util::trim(fields[0]);
    auto slash = cidr.find('/');
    if (slash == std::string::npos)
      return Error{Errc::parse, "geo db line " + std::to_string(lineno) +
                                    ": missing prefix length"};
    auto addr = parse_addr(cidr.substr(0, slash));
    if (!addr)
      return Error{Errc::parse, "geo db line " + std::to_string(lineno) +
                                    ": bad address " + cidr};
    int prefix_len = 0;
    try {
      prefix_len = std::stoi(cidr.substr(slash + 1));
    } catch (...) {
      prefix_len = -1;
    }
    int max_len = addr->second == 96 ? 32 : 128;
    if (prefix_len < 0 || prefix_len > max_len)
      return Error{Errc::parse, "geo db line " + std::to_string(lineno) +
                                    ": bad prefix length in " + cidr};
    GeoPoint loc{};
    try {
      loc.lat = std::stod(util::trim(fields[1]));
      loc.lon = std::stod(util::trim(fields[2]));
    } catch (...) {
      return Error{Errc::parse,
                   "geo db line " + std::to_string(lineno) + ": bad coordinates"};
    }
    if (!valid_geopoint(loc))
      return Error{Errc::parse, "geo db line " + std::to_string(lineno) +
                                    ": coordinates out of range"};
    db.entries_.push_back(
        Entry{addr->first, prefix_len + addr->second, loc});
  }
  return db;
}

std::optional<GeoPoint> GeoDatabase::lookup(const std::string& ip) const {
  auto addr = parse_addr(ip);
  if (!addr) return std::nullopt;
  const Entry* best = nullptr;
  for (const auto& e : entries_) {
    if (!prefix_match(addr->first, e.network, e.prefix_len)) continue;
    if (!best || e.prefix_len > best->prefix_len) best = &e;
  }
  if (!best) return std::nullopt;
  return best->location;
}

std::vector<std::string> rank(
    std::vector<std::pair<std::string, GeoPoint>> replicas,
    const std::optional<GeoPoint>& client) {
  struct Row {
    double dist;
    std::string id;
  };
  std::vector<Row> rows;
  rows.reserve(replicas.size());
  for (auto& [id, loc] : replicas) {
    double d = client ? haversine(*client, loc) : 0.0;
    rows.push_back(Row{d, std::move(id)});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    return a.id < b.id;
  });
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (auto& r : rows) out.push_back(std::move(r.id));
  return out;
}

}  // namespace fedgate
