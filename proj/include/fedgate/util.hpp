/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

/// @file   util.hpp
/// @brief  Path normalization, URL and time helpers shared by the modules.

#ifndef FEDGATE_UTIL_HPP
#define FEDGATE_UTIL_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fedgate/result.hpp"

namespace fedgate {

using Deadline = std::chrono::steady_clock::time_point;
using WallTime = std::chrono::system_clock::time_point;

namespace util {

/// Canonical path: leading slash, no empty or "." segments, no trailing
/// slash except for "/" itself. ".." segments, empty input and embedded
/// NUL bytes are rejected.
Result<std::string> normalize_path(std::string_view path);

/// True when `path` equals `prefix` or lies below it on a "/" boundary.
/// Both arguments must already be normalized.
bool path_under(std::string_view path, std::string_view prefix);

/// Parent directory of a normalized path ("/" is its own parent).
std::string parent_path(std::string_view path);

/// Last segment of a normalized path ("" for "/").
std::string basename(std::string_view path);

std::vector<std::string> split(std::string_view s, char sep);
std::string trim(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);

/// RFC 3986 percent-encoding. Unreserved bytes and '/' pass through;
/// everything else (including '&', '<', '>') is %XX-encoded so the output
/// is also safe to embed in XML text.
std::string url_encode_path(std::string_view path);
std::string url_encode_component(std::string_view s);
std::string url_decode(std::string_view s);

std::string xml_escape(std::string_view s);
std::string xml_unescape(std::string_view s);

std::string to_hex(const uint8_t* data, size_t len);

/// Durations in config files: "250ms", "3s", "5m", "1h"; a bare integer
/// means seconds. Negative values are rejected.
Result<std::chrono::milliseconds> parse_duration(std::string_view text);

/// "YYYYMMDDTHHMMSSZ" (ISO8601 basic, UTC) used by the presign scheme.
std::string format_amz_date(WallTime t);
std::optional<WallTime> parse_amz_date(std::string_view s);

/// RFC 3339 "YYYY-MM-DDTHH:MM:SSZ" for status reporting.
std::string format_rfc3339(WallTime t);

int64_t to_unix_ms(WallTime t);
WallTime from_unix_ms(int64_t ms);

/// host[:port] + path[?query] split of an absolute http(s) URL.
struct ParsedUrl {
  std::string scheme;
  std::string host;      // includes :port when present
  std::string target;    // raw path?query as it appears in the URL
  std::string path;      // raw path only
  std::string query;     // raw query without '?'
};
std::optional<ParsedUrl> parse_url(std::string_view url);

}  // namespace util
}  // namespace fedgate

#endif
