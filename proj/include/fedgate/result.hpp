/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

/// @file   result.hpp
/// @brief  Error codes and a small value-or-error carrier used across modules.

#ifndef FEDGATE_RESULT_HPP
#define FEDGATE_RESULT_HPP

#include <cassert>
#include <string>
#include <utility>
#include <variant>

namespace fedgate {

enum class Errc {
  parse,            // malformed input file / wire payload
  validation,       // an invariant was violated
  io,               // file system trouble
  timeout,          // deadline exceeded (distinct from not-found)
  transport,        // connection refused / reset / DNS
  backend,          // endpoint answered with an error status
  not_directory,    // list() on a non-collection
  signing,          // presign impossible (bad key material / expiry)
  unauthenticated,  // no credential presented
  forbidden,        // credential valid, no rule matched
};

const char* errc_name(Errc c);

struct Error {
  Errc code;
  std::string message;
  int backend_status = 0;  // HTTP status for Errc::backend, else 0

  std::string str() const { return std::string(errc_name(code)) + ": " + message; }
};

/// Value-or-Error. Deliberately tiny; only what the call sites need.
template <typename T>
class Result {
 public:
  Result(T value) : v_(std::move(value)) {}        // NOLINT implicit by design
  Result(Error error) : v_(std::move(error)) {}    // NOLINT
  Result(Errc code, std::string message) : v_(Error{code, std::move(message)}) {}

  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& { assert(ok()); return std::get<T>(v_); }
  T& value() & { assert(ok()); return std::get<T>(v_); }
  T&& take() && { assert(ok()); return std::get<T>(std::move(v_)); }

  const Error& error() const { assert(!ok()); return std::get<Error>(v_); }

 private:
  std::variant<T, Error> v_;
};

/// Result for operations with no payload.
class Status {
 public:
  Status() = default;
  Status(Error error) : err_(std::move(error)), failed_(true) {}  // NOLINT
  Status(Errc code, std::string message) : err_{code, std::move(message)}, failed_(true) {}

  bool ok() const { return !failed_; }
  explicit operator bool() const { return ok(); }
  const Error& error() const { assert(failed_); return err_; }

 private:
  Error err_{};
  bool failed_ = false;
};

}  // namespace fedgate

#endif
