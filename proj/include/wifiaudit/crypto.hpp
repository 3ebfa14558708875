#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "wifiaudit/bytes.hpp"
#include "wifiaudit/errors.hpp"

namespace wifiaudit {

inline constexpr std::size_t kPmkSize = 32;
inline constexpr std::size_t kPtkSize = 64;
inline constexpr std::size_t kKckSize = 16;
inline constexpr std::size_t kMicSize = 16;
inline constexpr std::size_t kNonceSize = 32;
inline constexpr std::size_t kMaxSsidSize = 32;
inline constexpr int kPbkdf2Iterations = 4096;

/// WPA2-PSK passphrase: 8..63 printable ASCII characters.
class Passphrase {
public:
    explicit Passphrase(std::string text);

    /// Checks the WPA constraints without throwing. When invalid and
    /// `reason` is non-null, it receives the violated rule.
    static bool is_valid(std::string_view text, std::string* reason = nullptr);

    const std::string& text() const { return text_; }
    bool operator==(const Passphrase&) const = default;

private:
    std::string text_;
};

/// Pairwise key hierarchy for one session. The sub-keys are fixed slices of
/// the PTK: KCK = ptk[0..16), KEK = ptk[16..32), TK = ptk[32..64).
struct SessionKeys {
    std::array<std::uint8_t, kPmkSize> pmk{};
    std::array<std::uint8_t, kPtkSize> ptk{};

    std::span<const std::uint8_t, 16> kck() const { return std::span<const std::uint8_t, 16>(ptk.data(), 16); }
    std::span<const std::uint8_t, 16> kek() const { return std::span<const std::uint8_t, 16>(ptk.data() + 16, 16); }
    std::span<const std::uint8_t, 32> tk() const { return std::span<const std::uint8_t, 32>(ptk.data() + 32, 32); }

    bool operator==(const SessionKeys&) const = default;
};

/// MD4 over the UTF-16LE encoding of a password (MS-CHAPv2, RFC 2759).
struct NtHash {
    std::array<std::uint8_t, 16> bytes{};
    bool operator==(const NtHash&) const = default;
};

/// PMK = PBKDF2-HMAC-SHA1(passphrase, ssid, 4096, 32) per IEEE 802.11i.
/// ssid must be 1..32 bytes.
std::array<std::uint8_t, kPmkSize> derive_pmk(const Passphrase& passphrase,
                                              std::span<const std::uint8_t> ssid);

/// PTK = PRF-512(PMK, "Pairwise key expansion", min/max(aa,spa) || min/max(anonce,snonce))
/// per IEEE 802.11i. The min/max canonicalization makes the result invariant
/// under swapping (aa, anonce) with (spa, snonce).
SessionKeys derive_ptk(std::span<const std::uint8_t> pmk,
                       const MacAddress& aa, const MacAddress& spa,
                       std::span<const std::uint8_t> anonce,
                       std::span<const std::uint8_t> snonce);

/// EAPOL-Key MIC over a frame whose 16-byte MIC field the caller has already
/// zeroed. Descriptor version 1 = HMAC-MD5, 2 = HMAC-SHA1 truncated to 16.
/// Version 3 (AES-CMAC) is rejected as unsupported.
std::array<std::uint8_t, kMicSize> compute_mic(std::span<const std::uint8_t> kck,
                                               std::span<const std::uint8_t> eapol_frame,
                                               int descriptor_version);

/// password is UTF-8; it is re-encoded as UTF-16LE before hashing.
NtHash nt_hash(std::string_view password);

/// First 8 bytes of SHA1(peer_challenge || auth_challenge || username),
/// RFC 2759. username must already have any "DOMAIN\" prefix stripped.
std::array<std::uint8_t, 8> mschapv2_challenge_hash(std::span<const std::uint8_t> peer_challenge,
                                                    std::span<const std::uint8_t> auth_challenge,
                                                    std::span<const std::uint8_t> username);

/// 24-byte NT-Response: three DES encryptions of the challenge hash under the
/// zero-padded NT hash split into 7-byte key thirds (RFC 2759).
std::array<std::uint8_t, 24> mschapv2_response(std::string_view password,
                                               std::span<const std::uint8_t> peer_challenge,
                                               std::span<const std::uint8_t> auth_challenge,
                                               std::span<const std::uint8_t> username);

/// Drops a leading "DOMAIN\" qualifier from an account name, matching what
/// MSCHAPv2 clients feed into the challenge hash.
Bytes strip_domain_prefix(std::span<const std::uint8_t> username);

/// UTF-8 to UTF-16LE, surrogate pairs for non-BMP code points. Throws
/// ValidationError on malformed UTF-8.
Bytes utf16le_encode(std::string_view utf8);

} // namespace wifiaudit
