#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wifiaudit {

using Bytes = std::vector<std::uint8_t>;

/// Lowercase hex, two digits per byte.
std::string to_hex(std::span<const std::uint8_t> data);

/// Decodes a hex string (case-insensitive). Throws ValidationError on odd
/// length or non-hex characters.
Bytes from_hex(std::string_view hex);

/// IEEE 802 MAC address. Canonical text form is lowercase colon-separated.
struct MacAddress {
    std::array<std::uint8_t, 6> octets{};

    static MacAddress parse(std::string_view text); // "aa:bb:cc:dd:ee:ff"
    std::string str() const;

    auto operator<=>(const MacAddress&) const = default;
};

} // namespace wifiaudit
