#include "wifiaudit/crypto.hpp"

#include <algorithm>
#include <cstring>

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include "wifiaudit/des.hpp"
#include "wifiaudit/md4.hpp"

namespace wifiaudit {

namespace {

void hmac_sha1(std::span<const std::uint8_t> key, std::span<const std::uint8_t> data,
               std::uint8_t out[20]) {
    unsigned int len = 0;
    HMAC(EVP_sha1(), key.data(), static_cast<int>(key.size()),
         data.data(), data.size(), out, &len);
}

void require_length(std::span<const std::uint8_t> value, std::size_t expected, const char* name) {
    if (value.size() != expected) {
        throw ValidationError(std::string(name) + " must be " + std::to_string(expected) +
                              " bytes (got " + std::to_string(value.size()) + ")");
    }
}

} // namespace

Passphrase::Passphrase(std::string text) : text_(std::move(text)) {
    std::string reason;
    if (!is_valid(text_, &reason)) {
        throw ValidationError(reason);
    }
}

bool Passphrase::is_valid(std::string_view text, std::string* reason) {
    if (text.size() < 8 || text.size() > 63) {
        if (reason) {
            *reason = "passphrase must be 8..63 characters (got " + std::to_string(text.size()) + ")";
        }
        return false;
    }
    for (char c : text) {
        auto b = static_cast<unsigned char>(c);
        if (b < 32 || b > 126) {
            if (reason) {
                *reason = "passphrase must contain only printable ASCII (byte 0x" +
                          to_hex(std::span(&b, 1)) + ")";
            }
            return false;
        }
    }
    return true;
}

std::array<std::uint8_t, kPmkSize> derive_pmk(const Passphrase& passphrase,
                                              std::span<const std::uint8_t> ssid) {
    if (ssid.empty() || ssid.size() > kMaxSsidSize) {
        throw ValidationError("ssid must be 1..32 bytes (got " + std::to_string(ssid.size()) + ")");
    }
    std::array<std::uint8_t, kPmkSize> pmk{};
    PKCS5_PBKDF2_HMAC(passphrase.text().data(), static_cast<int>(passphrase.text().size()),
                      ssid.data(), static_cast<int>(ssid.size()),
                      kPbkdf2Iterations, EVP_sha1(),
                      static_cast<int>(pmk.size()), pmk.data());
    return pmk;
}

SessionKeys derive_ptk(std::span<const std::uint8_t> pmk,
                       const MacAddress& aa, const MacAddress& spa,
                       std::span<const std::uint8_t> anonce,
                       std::span<const std::uint8_t> snonce) {
    require_length(pmk, kPmkSize, "pmk");
    require_length(anonce, kNonceSize, "anonce");
    require_length(snonce, kNonceSize, "snonce");

    // PRF-512 input: "Pairwise key expansion" || 0x00 ||
    //   min(AA,SPA) || max(AA,SPA) || min(ANonce,SNonce) || max(ANonce,SNonce) || counter
    static constexpr char kLabel[] = "Pairwise key expansion";
    std::uint8_t data[100];
    std::memcpy(data, kLabel, 22);
    data[22] = 0x00;

    const auto& mac_lo = aa.octets <= spa.octets ? aa : spa;
    const auto& mac_hi = aa.octets <= spa.octets ? spa : aa;
    std::memcpy(data + 23, mac_lo.octets.data(), 6);
    std::memcpy(data + 29, mac_hi.octets.data(), 6);

    bool anonce_lo = std::lexicographical_compare(anonce.begin(), anonce.end(),
                                                  snonce.begin(), snonce.end());
    const auto& nonce_lo = anonce_lo ? anonce : snonce;
    const auto& nonce_hi = anonce_lo ? snonce : anonce;
    std::memcpy(data + 35, nonce_lo.data(), 32);
    std::memcpy(data + 67, nonce_hi.data(), 32);

    SessionKeys keys;
    std::copy(pmk.begin(), pmk.end(), keys.pmk.begin());

    std::uint8_t stream[80];
    for (int i = 0; i < 4; ++i) {
        data[99] = static_cast<std::uint8_t>(i);
        hmac_sha1(pmk, data, stream + i * 20);
    }
    std::copy(stream, stream + kPtkSize, keys.ptk.begin());
    return keys;
}

std::array<std::uint8_t, kMicSize> compute_mic(std::span<const std::uint8_t> kck,
                                               std::span<const std::uint8_t> eapol_frame,
                                               int descriptor_version) {
    require_length(kck, kKckSize, "kck");
    std::array<std::uint8_t, kMicSize> mic{};
    if (descriptor_version == 1) {
        unsigned int len = 0;
        HMAC(EVP_md5(), kck.data(), static_cast<int>(kck.size()),
             eapol_frame.data(), eapol_frame.size(), mic.data(), &len);
    } else if (descriptor_version == 2) {
        std::uint8_t digest[20];
        hmac_sha1(kck, eapol_frame, digest);
        std::copy(digest, digest + kMicSize, mic.begin());
    } else {
        throw ValidationError("descriptor version " + std::to_string(descriptor_version) +
                              " not supported (expected 1 or 2)");
    }
    return mic;
}

Bytes utf16le_encode(std::string_view utf8) {
    Bytes out;
    out.reserve(utf8.size() * 2);
    std::size_t i = 0;
    auto fail = [&] { throw ValidationError("password is not valid UTF-8 (offset " + std::to_string(i) + ")"); };

    auto emit = [&out](char32_t cp) {
        if (cp >= 0x10000) {
            cp -= 0x10000;
            char16_t hi = static_cast<char16_t>(0xd800 + (cp >> 10));
            char16_t lo = static_cast<char16_t>(0xdc00 + (cp & 0x3ff));
            out.push_back(static_cast<std::uint8_t>(hi));
            out.push_back(static_cast<std::uint8_t>(hi >> 8));
            out.push_back(static_cast<std::uint8_t>(lo));
            out.push_back(static_cast<std::uint8_t>(lo >> 8));
        } else {
            out.push_back(static_cast<std::uint8_t>(cp));
            out.push_back(static_cast<std::uint8_t>(cp >> 8));
        }
    };

    while (i < utf8.size()) {
        auto b0 = static_cast<unsigned char>(utf8[i]);
        char32_t cp = 0;
        std::size_t len = 0;
        if (b0 < 0x80) {
            cp = b0;
            len = 1;
        } else if ((b0 & 0xe0) == 0xc0) {
            cp = b0 & 0x1f;
            len = 2;
        } else if ((b0 & 0xf0) == 0xe0) {
            cp = b0 & 0x0f;
            len = 3;
        } else if ((b0 & 0xf8) == 0xf0) {
            cp = b0 & 0x07;
            len = 4;
        } else {
            fail();
        }
        if (i + len > utf8.size()) fail();
        for (std::size_t k = 1; k < len; ++k) {
            auto bk = static_cast<unsigned char>(utf8[i + k]);
            if ((bk & 0xc0) != 0x80) fail();
            cp = (cp << 6) | (bk & 0x3f);
        }
        // Reject overlong forms, surrogates, out-of-range.
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
            (cp >= 0xd800 && cp <= 0xdfff) || cp > 0x10ffff) {
            fail();
        }
        emit(cp);
        i += len;
    }
    return out;
}

NtHash nt_hash(std::string_view password) {
    NtHash hash;
    hash.bytes = md4(utf16le_encode(password));
    return hash;
}

Bytes strip_domain_prefix(std::span<const std::uint8_t> username) {
    auto it = std::find(username.rbegin(), username.rend(), static_cast<std::uint8_t>('\\'));
    if (it == username.rend()) {
        return Bytes(username.begin(), username.end());
    }
    return Bytes(it.base(), username.end());
}

std::array<std::uint8_t, 8> mschapv2_challenge_hash(std::span<const std::uint8_t> peer_challenge,
                                                    std::span<const std::uint8_t> auth_challenge,
                                                    std::span<const std::uint8_t> username) {
    require_length(peer_challenge, 16, "peer_challenge");
    require_length(auth_challenge, 16, "auth_challenge");
    if (username.empty()) {
        throw ValidationError("username must be non-empty");
    }

    Bytes input;
    input.reserve(32 + username.size());
    input.insert(input.end(), peer_challenge.begin(), peer_challenge.end());
    input.insert(input.end(), auth_challenge.begin(), auth_challenge.end());
    input.insert(input.end(), username.begin(), username.end());

    std::uint8_t digest[20];
    SHA1(input.data(), input.size(), digest);
    std::array<std::uint8_t, 8> out{};
    std::copy(digest, digest + 8, out.begin());
    return out;
}

std::array<std::uint8_t, 24> mschapv2_response(std::string_view password,
                                               std::span<const std::uint8_t> peer_challenge,
                                               std::span<const std::uint8_t> auth_challenge,
                                               std::span<const std::uint8_t> username) {
    auto challenge = mschapv2_challenge_hash(peer_challenge, auth_challenge, username);

    // NT hash zero-padded to 21 bytes, split into three 7-byte DES key thirds.
    std::array<std::uint8_t, 21> padded{};
    auto hash = nt_hash(password);
    std::copy(hash.bytes.begin(), hash.bytes.end(), padded.begin());

    std::array<std::uint8_t, 24> response{};
    for (int i = 0; i < 3; ++i) {
        auto key = des_expand_key(std::span(padded).subspan(i * 7, 7));
        auto block = des_encrypt_block(key, challenge);
        std::copy(block.begin(), block.end(), response.begin() + i * 8);
    }
    return response;
}

} // namespace wifiaudit
