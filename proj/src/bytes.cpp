#include "wifiaudit/bytes.hpp"

#include <cstdio>

#include "wifiaudit/errors.hpp"

namespace wifiaudit {

namespace {

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

std::string to_hex(std::span<const std::uint8_t> data) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) {
        throw ValidationError("hex string has odd length (" + std::to_string(hex.size()) + ")");
    }
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_digit(hex[i]);
        int lo = hex_digit(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw ValidationError("invalid hex character at offset " + std::to_string(i));
        }
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

MacAddress MacAddress::parse(std::string_view text) {
    MacAddress mac;
    if (text.size() != 17) {
        throw ValidationError("mac address must look like aa:bb:cc:dd:ee:ff");
    }
    for (int i = 0; i < 6; ++i) {
        int hi = hex_digit(text[i * 3]);
        int lo = hex_digit(text[i * 3 + 1]);
        if (hi < 0 || lo < 0 || (i < 5 && text[i * 3 + 2] != ':')) {
            throw ValidationError("mac address must look like aa:bb:cc:dd:ee:ff");
        }
        mac.octets[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return mac;
}

std::string MacAddress::str() const {
    char buf[18];
    std::snprintf(buf, sizeof(buf), "%02x:%02x:%02x:%02x:%02x:%02x",
                  octets[0], octets[1], octets[2], octets[3], octets[4], octets[5]);
    return buf;
}

} // namespace wifiaudit
