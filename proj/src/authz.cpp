/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

#include "fedgate/authz.hpp"

#include <fstream>

#include "fedgate/util.hpp"

namespace fedgate {

const char* op_class_name(OpClass c) {
  switch (c) {
    case OpClass::read: return "read";
    case OpClass::write: return "write";
    case OpClass::list: return "list";
    case OpClass::del: return "delete";
  }
  return "?";
}

std::optional<OpClass> op_class_for_method(std::string_view m) {
  if (m == "GET" || m == "HEAD") return OpClass::read;
  if (m == "PUT") return OpClass::write;
  if (m == "PROPFIND") return OpClass::list;
  if (m == "DELETE") return OpClass::del;
  return std::nullopt;
}

MembershipRegistry::MembershipRegistry(std::set<std::string> members,
                                       std::set<std::string> privileged,
                                       std::string required_attribute_prefix)
    : members_(std::move(members)),
      privileged_(std::move(privileged)),
      required_attribute_prefix_(std::move(required_attribute_prefix)) {}

namespace {

Result<std::set<std::string>> load_dn_file(const std::string& path) {
  std::set<std::string> out;
  if (path.empty()) return out;
  std::ifstream in(path);
  if (!in) return Error{Errc::io, "cannot open subject list: " + path};
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string dn = util::trim(line);  // DNs contain spaces; trim ends only
    if (!dn.empty()) out.insert(dn);
  }
  return out;
}

}  // namespace

Result<MembershipRegistry> MembershipRegistry::load(
    const std::string& members_path, const std::string& privileged_path,
    std::string required_attribute_prefix) {
  auto members = load_dn_file(members_path);
  if (!members) return members.error();
  auto privileged = load_dn_file(privileged_path);
  if (!privileged) return privileged.error();
  return MembershipRegistry(std::move(members).take(),
                            std::move(privileged).take(),
                            std::move(required_attribute_prefix));
}

bool MembershipRegistry::is_member(const std::string& subject) const {
  // privileged accounts are members by construction
  return members_.count(subject) > 0 || privileged_.count(subject) > 0;
}

bool MembershipRegistry::is_privileged(const std::string& subject) const {
  return privileged_.count(subject) > 0;
}

Result<ClientIdentity> authenticate(const std::optional<std::string>& subject,
                                    const std::vector<std::string>& attributes,
                                    const MembershipRegistry& registry) {
  if (!subject || subject->empty())
    return Error{Errc::unauthenticated, "no credential presented"};

  bool attribute_match = false;
  for (const auto& attr : attributes) {
    if (util::starts_with(attr, registry.required_attribute_prefix())) {
      attribute_match = true;
      break;
    }
  }
  if (!attribute_match && !registry.is_member(*subject))
    return Error{Errc::forbidden,
                 "subject is not a member and carries no accepted attribute: " +
                     *subject};

  ClientIdentity id;
  id.subject = *subject;
  id.attributes = attributes;
  id.privileged = registry.is_privileged(*subject);
  return id;
}

bool authorize(const ClientIdentity& identity, OpClass op,
               std::string_view federated_path,
               std::string_view scratch_prefix) {
  if (identity.subject.empty()) return false;  // deny-by-default
  if (identity.privileged) return true;
  switch (op) {
    case OpClass::read:
    case OpClass::list:
      return true;
    case OpClass::write:
    case OpClass::del:
      return util::path_under(federated_path, scratch_prefix);
  }
  return false;
}

}  // namespace fedgate
