#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace wifiaudit {

// Single-block DES encryption, used as a fixed-function primitive by the
// MSCHAPv2 response computation. Only the encrypt direction is needed.
std::array<std::uint8_t, 8> des_encrypt_block(std::span<const std::uint8_t> key8,
                                              std::span<const std::uint8_t> block8);

// Expands a 56-bit key (7 bytes) to the 8-byte form DES expects: each key
// byte carries 7 key bits shifted left and an odd parity bit in the LSB.
std::array<std::uint8_t, 8> des_expand_key(std::span<const std::uint8_t> key7);

} // namespace wifiaudit
