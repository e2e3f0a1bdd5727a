/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

#include "fedgate/memcache.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>

#include "fedgate/log.hpp"
#include "fedgate/util.hpp"

namespace fedgate {

namespace {

bool wait_fd(int fd, short events, std::chrono::milliseconds timeout) {
  pollfd pfd{fd, events, 0};
  int rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  return rc == 1 && (pfd.revents & events);
}

bool send_all(int fd, std::string_view data, std::chrono::milliseconds timeout) {
  size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n > 0) {
      off += static_cast<size_t>(n);
      continue;
    }
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
      if (!wait_fd(fd, POLLOUT, timeout)) return false;
      continue;
    }
    return false;
  }
  return true;
}

/// Read until `buf` contains `until` bytes or a full "\r\n"-terminated
/// line when `until` is 0. Returns false on error/timeout/EOF.
bool read_more(int fd, std::string& buf, size_t until,
               std::chrono::milliseconds timeout) {
  char chunk[4096];
  while (true) {
    if (until > 0 && buf.size() >= until) return true;
    if (until == 0 && buf.find("\r\n") != std::string::npos) return true;
    if (!wait_fd(fd, POLLIN, timeout)) return false;
    ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n <= 0) return false;
    buf.append(chunk, static_cast<size_t>(n));
  }
}

bool valid_key(const std::string& key) {
  if (key.empty() || key.size() > 250) return false;
  for (unsigned char c : key)
    if (c <= ' ' || c == 0x7F) return false;
  return true;
}

}  // namespace

MemcachedClient::MemcachedClient(const std::string& address,
                                 std::chrono::milliseconds op_timeout)
    : op_timeout_(op_timeout) {
  auto colon = address.rfind(':');
  if (colon == std::string::npos) {
    host_ = address;
    port_ = 11211;
  } else {
    host_ = address.substr(0, colon);
    try {
      port_ = std::stoi(address.substr(colon + 1));
    } catch (...) {
      port_ = 0;
    }
  }
}

MemcachedClient::~MemcachedClient() {
  std::lock_guard lk(mu_);
  while (!pool_.empty()) {
    ::close(pool_.front());
    pool_.pop();
  }
}

int MemcachedClient::connect_new() {
  int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_NONBLOCK, 0);
  if (fd < 0) return -1;
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<uint16_t>(port_));
  if (inet_pton(AF_INET, host_.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    return -1;
  }
  int rc = ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  if (rc < 0 && errno == EINPROGRESS) {
    if (!wait_fd(fd, POLLOUT, op_timeout_)) {
      ::close(fd);
      return -1;
    }
    int err = 0;
    socklen_t len = sizeof err;
    if (getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len) != 0 || err != 0) {
      ::close(fd);
      return -1;
    }
  } else if (rc < 0) {
    ::close(fd);
    return -1;
  }
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return fd;
}

int MemcachedClient::acquire() {
  {
    std::lock_guard lk(mu_);
    if (!pool_.empty()) {
      int fd = pool_.front();
      pool_.pop();
      return fd;
    }
  }
  return connect_new();
}

void MemcachedClient::release(int fd) {
  std::lock_guard lk(mu_);
  pool_.push(fd);
}

std::optional<std::string> MemcachedClient::get(const std::string& key) {
  if (!valid_key(key)) return std::nullopt;
  int fd = acquire();
  if (fd < 0) return std::nullopt;

  std::string buf;
  if (!send_all(fd, "get " + key + "\r\n", op_timeout_) ||
      !read_more(fd, buf, 0, op_timeout_)) {
    ::close(fd);
    return std::nullopt;
  }
  auto eol = buf.find("\r\n");
  std::string header = buf.substr(0, eol);
  if (header == "END") {
    release(fd);
    return std::nullopt;
  }
  // VALUE <key> <flags> <bytes>
  auto fields = util::split(header, ' ');
  if (fields.size() < 4 || fields[0] != "VALUE") {
    ::close(fd);
    return std::nullopt;
  }
  size_t bytes = 0;
  try {
    bytes = std::stoul(fields[3]);
  } catch (...) {
    ::close(fd);
    return std::nullopt;
  }
  size_t value_start = eol + 2;
  // value + "\r\n" + "END\r\n"
  if (!read_more(fd, buf, value_start + bytes + 2 + 5, op_timeout_)) {
    ::close(fd);
    return std::nullopt;
  }
  std::string value = buf.substr(value_start, bytes);
  if (buf.compare(value_start + bytes, 2, "\r\n") != 0 ||
      buf.compare(value_start + bytes + 2, 5, "END\r\n") != 0) {
    ::close(fd);
    return std::nullopt;
  }
  release(fd);
  return value;
}

bool MemcachedClient::set(const std::string& key, const std::string& value,
                          uint32_t ttl_seconds) {
  if (!valid_key(key)) return false;
  int fd = acquire();
  if (fd < 0) return false;

  std::string cmd = "set " + key + " 0 " + std::to_string(ttl_seconds) + " " +
                    std::to_string(value.size()) + "\r\n" + value + "\r\n";
  std::string buf;
  if (!send_all(fd, cmd, op_timeout_) || !read_more(fd, buf, 0, op_timeout_)) {
    ::close(fd);
    return false;
  }
  bool ok = util::starts_with(buf, "STORED");
  if (ok) release(fd);
  else ::close(fd);
  return ok;
}

bool MemcachedClient::del(const std::string& key) {
  if (!valid_key(key)) return false;
  int fd = acquire();
  if (fd < 0) return false;

  std::string buf;
  if (!send_all(fd, "delete " + key + "\r\n", op_timeout_) ||
      !read_more(fd, buf, 0, op_timeout_)) {
    ::close(fd);
    return false;
  }
  bool recognized =
      util::starts_with(buf, "DELETED") || util::starts_with(buf, "NOT_FOUND");
  if (recognized) release(fd);
  else ::close(fd);
  return util::starts_with(buf, "DELETED");
}

std::shared_ptr<L2Cache> make_l2_cache(const std::string& spec) {
  if (spec == "none" || spec.empty()) return nullptr;
  if (util::starts_with(spec, "memcached:"))
    return std::make_shared<MemcachedClient>(spec.substr(10));
  FG_LOG(warn, "unrecognized l2 cache spec \"" << spec << "\", disabling L2");
  return nullptr;
}

}  // namespace fedgate
