/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

#include "fedgate/util.hpp"

#include <cctype>
#include <cstdio>
#include <cstring>
#include <ctime>

#include "fedgate/log.hpp"

namespace fedgate {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::parse: return "parse error";
    case Errc::validation: return "validation error";
    case Errc::io: return "io error";
    case Errc::timeout: return "timeout";
    case Errc::transport: return "transport error";
    case Errc::backend: return "backend error";
    case Errc::not_directory: return "not a directory";
    case Errc::signing: return "signing error";
    case Errc::unauthenticated: return "unauthenticated";
    case Errc::forbidden: return "forbidden";
  }
  return "error";
}

namespace log {

std::atomic<Level>& threshold() {
  static std::atomic<Level> lv{Level::warn};
  return lv;
}

void set_level(Level lv) { threshold().store(lv); }

bool set_level(const std::string& name) {
  if (name == "error") { set_level(Level::error); return true; }
  if (name == "warn") { set_level(Level::warn); return true; }
  if (name == "info") { set_level(Level::info); return true; }
  if (name == "debug") { set_level(Level::debug); return true; }
  return false;
}

void write(Level lv, const std::string& line) {
  static const char* names[] = {"ERROR", "WARN", "INFO", "DEBUG"};
  char stamp[32];
  auto now = std::chrono::system_clock::now();
  std::time_t secs = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  std::fprintf(stderr, "%s %-5s %s\n", stamp, names[static_cast<int>(lv)],
               line.c_str());
}

}  // namespace log

namespace util {

Result<std::string> normalize_path(std::string_view path) {
  if (path.empty()) return Error{Errc::validation, "empty path"};
  if (path.find('\0') != std::string_view::npos)
    return Error{Errc::validation, "embedded NUL in path"};
  if (path.front() != '/')
    return Error{Errc::validation, "path must be absolute: " + std::string(path)};

  std::string out;
  out.reserve(path.size());
  size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;  // collapse slashes
    size_t j = i;
    while (j < path.size() && path[j] != '/') ++j;
    std::string_view seg = path.substr(i, j - i);
    i = j;
    if (seg.empty() || seg == ".") continue;
    if (seg == "..")
      return Error{Errc::validation, "path traversal rejected: " + std::string(path)};
    out += '/';
    out += seg;
  }
  if (out.empty()) out = "/";
  return out;
}

bool path_under(std::string_view path, std::string_view prefix) {
  if (prefix == "/") return true;
  if (!starts_with(path, prefix)) return false;
  return path.size() == prefix.size() || path[prefix.size()] == '/';
}

std::string parent_path(std::string_view path) {
  if (path == "/") return "/";
  auto pos = path.rfind('/');
  if (pos == 0) return "/";
  return std::string(path.substr(0, pos));
}

std::string basename(std::string_view path) {
  if (path == "/") return "";
  auto pos = path.rfind('/');
  return std::string(path.substr(pos + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

static bool unreserved(unsigned char c) {
  return std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~';
}

static std::string encode(std::string_view s, bool keep_slash) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    if (unreserved(c) || (keep_slash && c == '/')) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

std::string url_encode_path(std::string_view path) { return encode(path, true); }
std::string url_encode_component(std::string_view s) { return encode(s, false); }

std::string url_decode(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size() && std::isxdigit((unsigned char)s[i + 1]) &&
        std::isxdigit((unsigned char)s[i + 2])) {
      auto nyb = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        return (c | 0x20) - 'a' + 10;
      };
      out += static_cast<char>(nyb(s[i + 1]) * 16 + nyb(s[i + 2]));
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string xml_unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size();) {
    if (s[i] != '&') { out += s[i++]; continue; }
    auto rest = s.substr(i);
    if (starts_with(rest, "&amp;")) { out += '&'; i += 5; }
    else if (starts_with(rest, "&lt;")) { out += '<'; i += 4; }
    else if (starts_with(rest, "&gt;")) { out += '>'; i += 4; }
    else if (starts_with(rest, "&quot;")) { out += '"'; i += 6; }
    else if (starts_with(rest, "&apos;")) { out += '\''; i += 6; }
    else { out += s[i++]; }
  }
  return out;
}

std::string to_hex(const uint8_t* data, size_t len) {
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (size_t i = 0; i < len; ++i) {
    out += hex[data[i] >> 4];
    out += hex[data[i] & 0xF];
  }
  return out;
}

Result<std::chrono::milliseconds> parse_duration(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) return Error{Errc::parse, "empty duration"};
  size_t pos = 0;
  while (pos < s.size() && (std::isdigit((unsigned char)s[pos]))) ++pos;
  if (pos == 0) return Error{Errc::parse, "bad duration: " + s};
  long long n = 0;
  try {
    n = std::stoll(s.substr(0, pos));
  } catch (...) {
    return Error{Errc::parse, "bad duration: " + s};
  }
  std::string unit = s.substr(pos);
  long long ms;
  if (unit.empty() || unit == "s") ms = n * 1000;
  else if (unit == "ms") ms = n;
  else if (unit == "m") ms = n * 60'000;
  else if (unit == "h") ms = n * 3'600'000;
  else return Error{Errc::parse, "unknown duration unit: " + s};
  return std::chrono::milliseconds(ms);
}

std::string format_amz_date(WallTime t) {
  std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[24];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

std::optional<WallTime> parse_amz_date(std::string_view s) {
  if (s.size() != 16 || s[8] != 'T' || s[15] != 'Z') return std::nullopt;
  std::tm tm{};
  auto num = [&](size_t off, size_t len) -> int {
    int v = 0;
    for (size_t i = off; i < off + len; ++i) {
      if (!std::isdigit((unsigned char)s[i])) return -1;
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  int y = num(0, 4), mo = num(4, 2), d = num(6, 2);
  int h = num(9, 2), mi = num(11, 2), sec = num(13, 2);
  if (y < 0 || mo <= 0 || mo > 12 || d <= 0 || d > 31 || h < 0 || h > 23 ||
      mi < 0 || mi > 59 || sec < 0 || sec > 60)
    return std::nullopt;
  tm.tm_year = y - 1900;
  tm.tm_mon = mo - 1;
  tm.tm_mday = d;
  tm.tm_hour = h;
  tm.tm_min = mi;
  tm.tm_sec = sec;
  std::time_t t = timegm(&tm);
  if (t == -1) return std::nullopt;
  return std::chrono::system_clock::from_time_t(t);
}

std::string format_rfc3339(WallTime t) {
  std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int64_t to_unix_ms(WallTime t) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             t.time_since_epoch())
      .count();
}

WallTime from_unix_ms(int64_t ms) {
  return WallTime(std::chrono::milliseconds(ms));
}

std::optional<ParsedUrl> parse_url(std::string_view url) {
  ParsedUrl out;
  if (starts_with(url, "http://")) {
    out.scheme = "http";
    url.remove_prefix(7);
  } else if (starts_with(url, "https://")) {
    out.scheme = "https";
    url.remove_prefix(8);
  } else {
    return std::nullopt;
  }
  auto slash = url.find('/');
  if (slash == std::string_view::npos) {
    out.host = std::string(url);
    out.target = out.path = "/";
    return out.host.empty() ? std::nullopt : std::make_optional(out);
  }
  out.host = std::string(url.substr(0, slash));
  if (out.host.empty()) return std::nullopt;
  out.target = std::string(url.substr(slash));
  auto q = out.target.find('?');
  if (q == std::string::npos) {
    out.path = out.target;
  } else {
    out.path = out.target.substr(0, q);
    out.query = out.target.substr(q + 1);
  }
  return out;
}

}  // namespace util
}  // namespace fedgate
