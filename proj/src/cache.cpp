/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

#include "fedgate/cache.hpp"

#include <cstring>

#include "fedgate/crypto.hpp"

namespace fedgate {

namespace {

constexpr uint8_t kRecordVersion = 1;
constexpr uint8_t kFlagComplete = 0x01;
constexpr uint8_t kFlagNegative = 0x02;
constexpr uint8_t kFlagIsDirectory = 0x01;
constexpr uint8_t kFlagHasSize = 0x02;

/* little-endian primitives */

void put_u8(std::string& out, uint8_t v) { out.push_back(static_cast<char>(v)); }

void put_u16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_str(std::string& out, std::string_view s) {
  put_u16(out, static_cast<uint16_t>(s.size()));
  out.append(s.data(), s.size());
}

struct Reader {
  std::string_view data;
  size_t pos = 0;
  bool failed = false;

  bool need(size_t n) {
    if (failed || pos + n > data.size()) { failed = true; return false; }
    return true;
  }
  uint8_t u8() {
    if (!need(1)) return 0;
    return static_cast<uint8_t>(data[pos++]);
  }
  uint16_t u16() {
    if (!need(2)) return 0;
    uint16_t v = static_cast<uint8_t>(data[pos]) |
                 (static_cast<uint16_t>(static_cast<uint8_t>(data[pos + 1])) << 8);
    pos += 2;
    return v;
  }
  uint32_t u32() {
    uint32_t v = 0;
    if (!need(4)) return 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<uint32_t>(static_cast<uint8_t>(data[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  uint64_t u64() {
    uint64_t v = 0;
    if (!need(8)) return 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<uint64_t>(static_cast<uint8_t>(data[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  std::string str() {
    uint16_t n = u16();
    if (!need(n)) return {};
    std::string s(data.substr(pos, n));
    pos += n;
    return s;
  }
};

}  // namespace

std::string replica_cache_key(std::string_view federated_path) {
  return "loc:" + crypto::sha256_hex(federated_path);
}

std::string listing_cache_key(std::string_view federated_path) {
  return "lst:" + crypto::sha256_hex(federated_path);
}

std::string encode_replica_entry(const CacheEntry& entry) {
  std::string out;
  put_u8(out, kRecordVersion);
  uint8_t flags = 0;
  if (entry.replica_set.complete) flags |= kFlagComplete;
  if (entry.negative) flags |= kFlagNegative;
  put_u8(out, flags);
  put_u64(out, static_cast<uint64_t>(util::to_unix_ms(entry.replica_set.resolved_at)));
  put_u64(out, static_cast<uint64_t>(util::to_unix_ms(entry.expires_at)));
  put_str(out, entry.replica_set.federated_path);
  put_u16(out, static_cast<uint16_t>(entry.replica_set.replicas.size()));
  for (const auto& r : entry.replica_set.replicas) {
    put_str(out, r.endpoint_id);
    put_str(out, r.backend_path);
    uint8_t rflags = 0;
    if (r.is_directory) rflags |= kFlagIsDirectory;
    if (r.size) rflags |= kFlagHasSize;
    put_u8(out, rflags);
    if (r.size) put_u64(out, *r.size);
  }
  return out;
}

std::optional<CacheEntry> decode_replica_entry(std::string_view record) {
  Reader rd{record};
  if (rd.u8() != kRecordVersion) return std::nullopt;
  uint8_t flags = rd.u8();
  CacheEntry entry;
  entry.replica_set.complete = flags & kFlagComplete;
  entry.negative = flags & kFlagNegative;
  entry.replica_set.resolved_at =
      util::from_unix_ms(static_cast<int64_t>(rd.u64()));
  entry.expires_at = util::from_unix_ms(static_cast<int64_t>(rd.u64()));
  entry.replica_set.federated_path = rd.str();
  uint16_t count = rd.u16();
  for (uint16_t i = 0; i < count && !rd.failed; ++i) {
    ReplicaLocation r;
    r.endpoint_id = rd.str();
    r.backend_path = rd.str();
    uint8_t rflags = rd.u8();
    r.is_directory = rflags & kFlagIsDirectory;
    if (rflags & kFlagHasSize) r.size = rd.u64();
    entry.replica_set.replicas.push_back(std::move(r));
  }
  if (rd.failed || rd.pos != record.size()) return std::nullopt;
  if (entry.negative && !entry.replica_set.replicas.empty()) return std::nullopt;
  return entry;
}

std::string encode_listing_entry(const ListingCacheEntry& entry) {
  std::string out;
  put_u8(out, kRecordVersion);
  uint8_t flags = 0;
  if (entry.merged.complete) flags |= kFlagComplete;
  if (entry.negative) flags |= kFlagNegative;
  put_u8(out, flags);
  put_u64(out, static_cast<uint64_t>(util::to_unix_ms(entry.merged.resolved_at)));
  put_u64(out, static_cast<uint64_t>(util::to_unix_ms(entry.expires_at)));
  put_str(out, entry.merged.federated_path);
  put_u32(out, static_cast<uint32_t>(entry.merged.listing.entries.size()));
  for (const auto& e : entry.merged.listing.entries) {
    put_str(out, e.name);
    uint8_t eflags = 0;
    if (e.is_directory) eflags |= kFlagIsDirectory;
    if (e.size) eflags |= kFlagHasSize;
    put_u8(out, eflags);
    if (e.size) put_u64(out, *e.size);
  }
  return out;
}

std::optional<ListingCacheEntry> decode_listing_entry(std::string_view record) {
  Reader rd{record};
  if (rd.u8() != kRecordVersion) return std::nullopt;
  uint8_t flags = rd.u8();
  ListingCacheEntry entry;
  entry.merged.complete = flags & kFlagComplete;
  entry.negative = flags & kFlagNegative;
  entry.merged.resolved_at = util::from_unix_ms(static_cast<int64_t>(rd.u64()));
  entry.expires_at = util::from_unix_ms(static_cast<int64_t>(rd.u64()));
  entry.merged.federated_path = rd.str();
  uint32_t count = rd.u32();
  for (uint32_t i = 0; i < count && !rd.failed; ++i) {
    ListingEntry e;
    e.name = rd.str();
    uint8_t eflags = rd.u8();
    e.is_directory = eflags & kFlagIsDirectory;
    if (eflags & kFlagHasSize) e.size = rd.u64();
    entry.merged.listing.entries.push_back(std::move(e));
  }
  if (rd.failed || rd.pos != record.size()) return std::nullopt;
  return entry;
}

std::optional<std::string> InProcessL2::get(const std::string& key) {
  std::lock_guard lk(mu_);
  auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  if (it->second.expires_at <= std::chrono::steady_clock::now()) {
    map_.erase(it);
    return std::nullopt;
  }
  return it->second.value;
}

bool InProcessL2::set(const std::string& key, const std::string& value,
                      uint32_t ttl_seconds) {
  std::lock_guard lk(mu_);
  map_[key] = Slot{value, std::chrono::steady_clock::now() +
                              std::chrono::seconds(ttl_seconds)};
  return true;
}

bool InProcessL2::del(const std::string& key) {
  std::lock_guard lk(mu_);
  return map_.erase(key) > 0;
}

}  // namespace fedgate
