/*
 *  Copyright (c) the fedgate authors
 *
 *  Licensed under the Apache License, Version 2.0
 *  See the LICENSE file for further information
 */

#ifndef FEDGATE_CRYPTO_HPP
#define FEDGATE_CRYPTO_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace fedgate::crypto {

std::array<uint8_t, 32> sha256(std::string_view data);
std::string sha256_hex(std::string_view data);

std::array<uint8_t, 32> hmac_sha256(std::string_view key, std::string_view data);
std::array<uint8_t, 32> hmac_sha256(const std::array<uint8_t, 32>& key,
                                    std::string_view data);

}  // namespace fedgate::crypto

#endif
