#include "wifiaudit/md4.hpp"

#include <bit>
#include <cstring>

namespace wifiaudit {

namespace {

inline std::uint32_t F(std::uint32_t x, std::uint32_t y, std::uint32_t z) { return (x & y) | (~x & z); }
inline std::uint32_t G(std::uint32_t x, std::uint32_t y, std::uint32_t z) { return (x & y) | (x & z) | (y & z); }
inline std::uint32_t H(std::uint32_t x, std::uint32_t y, std::uint32_t z) { return x ^ y ^ z; }

void compress(std::uint32_t state[4], const std::uint8_t block[64]) {
    std::uint32_t x[16];
    for (int i = 0; i < 16; ++i) {
        x[i] = static_cast<std::uint32_t>(block[i * 4]) |
               static_cast<std::uint32_t>(block[i * 4 + 1]) << 8 |
               static_cast<std::uint32_t>(block[i * 4 + 2]) << 16 |
               static_cast<std::uint32_t>(block[i * 4 + 3]) << 24;
    }

    std::uint32_t a = state[0], b = state[1], c = state[2], d = state[3];

    auto ff = [&](std::uint32_t& v, std::uint32_t w, std::uint32_t y, std::uint32_t z, int k, int s) {
        v = std::rotl(v + F(w, y, z) + x[k], s);
    };
    auto gg = [&](std::uint32_t& v, std::uint32_t w, std::uint32_t y, std::uint32_t z, int k, int s) {
        v = std::rotl(v + G(w, y, z) + x[k] + 0x5a827999u, s);
    };
    auto hh = [&](std::uint32_t& v, std::uint32_t w, std::uint32_t y, std::uint32_t z, int k, int s) {
        v = std::rotl(v + H(w, y, z) + x[k] + 0x6ed9eba1u, s);
    };

    for (int i = 0; i < 16; i += 4) {
        ff(a, b, c, d, i, 3);
        ff(d, a, b, c, i + 1, 7);
        ff(c, d, a, b, i + 2, 11);
        ff(b, c, d, a, i + 3, 19);
    }
    for (int i = 0; i < 4; ++i) {
        gg(a, b, c, d, i, 3);
        gg(d, a, b, c, i + 4, 5);
        gg(c, d, a, b, i + 8, 9);
        gg(b, c, d, a, i + 12, 13);
    }
    static const int r3[4] = {0, 2, 1, 3};
    for (int i = 0; i < 4; ++i) {
        int k = r3[i];
        hh(a, b, c, d, k, 3);
        hh(d, a, b, c, k + 8, 9);
        hh(c, d, a, b, k + 4, 11);
        hh(b, c, d, a, k + 12, 15);
    }

    state[0] += a;
    state[1] += b;
    state[2] += c;
    state[3] += d;
}

} // namespace

std::array<std::uint8_t, 16> md4(std::span<const std::uint8_t> data) {
    std::uint32_t state[4] = {0x67452301u, 0xefcdab89u, 0x98badcfeu, 0x10325476u};

    std::size_t full = data.size() / 64;
    for (std::size_t i = 0; i < full; ++i) {
        compress(state, data.data() + i * 64);
    }

    // Final block(s): 0x80 pad then 64-bit little-endian bit count.
    std::uint8_t tail[128] = {};
    std::size_t rem = data.size() - full * 64;
    if (rem > 0) {
        std::memcpy(tail, data.data() + full * 64, rem);
    }
    tail[rem] = 0x80;
    std::size_t tail_len = rem < 56 ? 64 : 128;
    std::uint64_t bits = static_cast<std::uint64_t>(data.size()) * 8;
    for (int i = 0; i < 8; ++i) {
        tail[tail_len - 8 + i] = static_cast<std::uint8_t>(bits >> (8 * i));
    }
    compress(state, tail);
    if (tail_len == 128) {
        compress(state, tail + 64);
    }

    std::array<std::uint8_t, 16> digest{};
    for (int i = 0; i < 4; ++i) {
        digest[i * 4] = static_cast<std::uint8_t>(state[i]);
        digest[i * 4 + 1] = static_cast<std::uint8_t>(state[i] >> 8);
        digest[i * 4 + 2] = static_cast<std::uint8_t>(state[i] >> 16);
        digest[i * 4 + 3] = static_cast<std::uint8_t>(state[i] >> 24);
    }
    return digest;
}

} // namespace wifiaudit
