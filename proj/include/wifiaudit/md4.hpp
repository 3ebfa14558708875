#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace wifiaudit {

// RFC 1320 MD4. Kept in-tree because OpenSSL 3 ships MD4 only in the legacy
// provider; the NT hash path needs it unconditionally.
std::array<std::uint8_t, 16> md4(std::span<const std::uint8_t> data);

} // namespace wifiaudit
