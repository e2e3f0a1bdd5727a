/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

#include "fedgate/crypto.hpp"

#include <openssl/core_names.h>
#include <openssl/evp.h>

#include <cstring>
#include <stdexcept>

#include "fedgate/util.hpp"

namespace fedgate::crypto {

std::array<uint8_t, 32> sha256(std::string_view data) {
  std::array<uint8_t, 32> out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(),
                 nullptr) != 1 ||
      len != out.size())
    throw std::runtime_error("EVP_Digest(sha256) failed");
  return out;
}

std::string sha256_hex(std::string_view data) {
  auto d = sha256(data);
  return util::to_hex(d.data(), d.size());
}

static std::array<uint8_t, 32> hmac_raw(const void* key, size_t key_len,
                                        std::string_view data) {
  static EVP_MAC* mac = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
  if (!mac) throw std::runtime_error("EVP_MAC_fetch(HMAC) failed");
  EVP_MAC_CTX* ctx = EVP_MAC_CTX_new(mac);
  if (!ctx) throw std::runtime_error("EVP_MAC_CTX_new failed");
  char digest_name[] = "SHA256";
  OSSL_PARAM params[] = {
      OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_DIGEST, digest_name, 0),
      OSSL_PARAM_construct_end()};
  std::array<uint8_t, 32> out{};
  size_t out_len = 0;
  bool ok = EVP_MAC_init(ctx, static_cast<const unsigned char*>(key), key_len,
                         params) == 1 &&
            EVP_MAC_update(ctx,
                           reinterpret_cast<const unsigned char*>(data.data()),
                           data.size()) == 1 &&
            EVP_MAC_final(ctx, out.data(), &out_len, out.size()) == 1;
  EVP_MAC_CTX_free(ctx);
  if (!ok || out_len != out.size())
    throw std::runtime_error("EVP_MAC(HMAC-SHA256) failed");
  return out;
}

std::array<uint8_t, 32> hmac_sha256(std::string_view key, std::string_view data) {
  return hmac_raw(key.data(), key.size(), data);
}

std::array<uint8_t, 32> hmac_sha256(const std::array<uint8_t, 32>& key,
                                    std::string_view data) {
  return hmac_raw(key.data(), key.size(), data);
}

}  // namespace fedgate::crypto
