/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

/// @file   authz.hpp
/// @brief  Caller authentication from certificate-derived identity and
///         per-operation-class authorization.

#ifndef FEDGATE_AUTHZ_HPP
#define FEDGATE_AUTHZ_HPP

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fedgate/result.hpp"

namespace fedgate {

struct ClientIdentity {
  std::string subject;                  // distinguished name
  std::vector<std::string> attributes;  // e.g. "/atlas/Role=production"
  bool privileged = false;
};

enum class OpClass { read, write, list, del };

const char* op_class_name(OpClass c);

/// GET/HEAD -> read, PUT -> write, PROPFIND -> list, DELETE -> delete.
/// Anything else maps to no class at all.
std::optional<OpClass> op_class_for_method(std::string_view http_method);

/// Subject lists loaded at startup; immutable afterwards.
class MembershipRegistry {
 public:
  MembershipRegistry() = default;
  MembershipRegistry(std::set<std::string> members,
                     std::set<std::string> privileged,
                     std::string required_attribute_prefix);

  /// Files: one DN per line, '#' comments. Empty path = empty set.
  static Result<MembershipRegistry> load(const std::string& members_path,
                                         const std::string& privileged_path,
                                         std::string required_attribute_prefix);

  bool is_member(const std::string& subject) const;
  bool is_privileged(const std::string& subject) const;
  const std::string& required_attribute_prefix() const {
    return required_attribute_prefix_;
  }

 private:
  std::set<std::string> members_;
  std::set<std::string> privileged_;  // always a subset of permitted identities
  std::string required_attribute_prefix_;
};

/// Accepts the identity when any attribute starts with the registry's
/// required prefix, or the subject is a listed member. Errors:
/// Errc::unauthenticated when no subject is presented, Errc::forbidden
/// when neither rule matches.
Result<ClientIdentity> authenticate(const std::optional<std::string>& subject,
                                    const std::vector<std::string>& attributes,
                                    const MembershipRegistry& registry);

/// Deny-by-default decision table. Privileged identities get all four
/// classes; ordinary members get read and list everywhere plus write and
/// delete under `scratch_prefix`. Pure function, no I/O.
bool authorize(const ClientIdentity& identity, OpClass op,
               std::string_view federated_path, std::string_view scratch_prefix);

}  // namespace fedgate

#endif
