#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wifiaudit/bytes.hpp"
#include "wifiaudit/crypto.hpp"
#include "wifiaudit/errors.hpp"

namespace wifiaudit {

/// One EAPOL-Key frame lifted out of a capture.
struct EapolKeyMessage {
    MacAddress source_mac;
    MacAddress dest_mac;
    int message_index = 0;         // 1..4, classified from the key info flags
    std::uint16_t key_info = 0;
    int descriptor_version = 0;    // 1 or 2
    std::array<std::uint8_t, kNonceSize> nonce{};
    std::array<std::uint8_t, kMicSize> mic{};   // zero-filled when absent
    Bytes frame_bytes;             // full EAPOL frame as transmitted
    std::uint64_t replay_counter = 0;

    bool operator==(const EapolKeyMessage&) const = default;
};

/// Everything a dictionary attack needs from one 4-way exchange.
/// mic_frame is message 2 with its MIC field zeroed; mic holds the original
/// MIC bytes. ssid may be empty when no beacon/probe response named the
/// network, in which case cracking requires an explicit override.
struct HandshakeCapture {
    Bytes ssid;
    MacAddress ap_mac;
    MacAddress client_mac;
    std::array<std::uint8_t, kNonceSize> anonce{};
    std::array<std::uint8_t, kNonceSize> snonce{};
    std::array<std::uint8_t, kMicSize> mic{};
    Bytes mic_frame;
    int descriptor_version = 2;
    bool complete = false;         // all four messages observed

    bool operator==(const HandshakeCapture&) const = default;
};

struct CaptureReport {
    std::vector<std::pair<Bytes, MacAddress>> networks_seen; // (ssid, ap_mac)
    std::vector<HandshakeCapture> handshakes;
    std::size_t incomplete = 0;    // station pairs with EAPOL traffic but no viable M1+M2
    std::size_t frames_parsed = 0;
    std::size_t frames_skipped = 0;
};

/// Parses a classic pcap capture (link type 105 or 127). Malformed frames
/// are counted in frames_skipped, never fatal; file-level problems
/// (bad magic, truncation, unsupported link type) throw FormatError.
CaptureReport parse_capture(std::span<const std::uint8_t> bytes);

/// Pairs messages by (ap_mac, client_mac) and replay-counter adjacency.
/// The minimum viable pair is M1 (ANonce) + M2 (SNonce, MIC); complete=true
/// requires M3 and M4 at the next replay counter. Duplicates are collapsed
/// by (ap_mac, client_mac, anonce, snonce). Pairs that produced EAPOL
/// traffic but no handshake are tallied into *incomplete when given.
std::vector<HandshakeCapture> assemble_handshakes(const std::vector<EapolKeyMessage>& messages,
                                                  const std::map<MacAddress, Bytes>& ssid_table,
                                                  std::size_t* incomplete = nullptr);

/// Canonical JSON fixture, one handshake per document. Field order and hex
/// case are fixed so serialization is byte-stable. Unknown fields are
/// rejected; a missing or ill-typed field raises ValidationError naming it.
HandshakeCapture load_fixture(std::span<const std::uint8_t> bytes);
HandshakeCapture load_fixture(std::string_view text);
Bytes store_fixture(const HandshakeCapture& handshake);

} // namespace wifiaudit
