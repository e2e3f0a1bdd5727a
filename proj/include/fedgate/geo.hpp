/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

/// @file   geo.hpp
/// @brief  IP-to-coordinates lookup and great-circle ranking of replicas.

#ifndef FEDGATE_GEO_HPP
#define FEDGATE_GEO_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fedgate/result.hpp"

namespace fedgate {

/// lat in [-90, 90], lon in (-180, 180].
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
};

bool valid_geopoint(const GeoPoint& p);

/// Great-circle distance in kilometers on a sphere of radius 6371.0 km.
double haversine(const GeoPoint& a, const GeoPoint& b);

/// Longest-prefix-match CIDR table loaded from a CSV file
/// (`cidr,lat,lon` per line, '#' comments, IPv4 and IPv6).
class GeoDatabase {
 public:
  GeoDatabase() = default;

  static Result<GeoDatabase> load(const std::string& path);
  static Result<GeoDatabase> parse(std::string_view text);

  /// Location of the longest matching CIDR, or nullopt when nothing matches
  /// (or the address does not parse).
  std::optional<GeoPoint> lookup(const std::string& ip) const;

  size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    std::array<uint8_t, 16> network;  // IPv4 mapped into ::ffff:0:0/96
    int prefix_len;                   // in mapped (128-bit) space
    GeoPoint location;
  };
  std::vector<Entry> entries_;
};

/// Endpoint ids ordered by ascending distance from `client`; ties and an
/// unknown client location fall back to lexicographic id order. The output
/// is a permutation of the input ids and does not depend on input order.
std::vector<std::string> rank(
    std::vector<std::pair<std::string, GeoPoint>> replicas,
    const std::optional<GeoPoint>& client);

}  // namespace fedgate

#endif
