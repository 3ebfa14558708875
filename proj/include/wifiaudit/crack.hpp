#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wifiaudit/capture.hpp"
#include "wifiaudit/crypto.hpp"

namespace wifiaudit {

/// Ordered candidate list. Order equals source order; blank lines are
/// dropped at load time and tallied in skipped_invalid. Target-specific
/// rules (e.g. the WPA 8..63 printable ASCII constraint) are applied during
/// a crack run, not here, so one dictionary serves both attack types.
struct Dictionary {
    std::vector<std::string> candidates;
    std::string source;
    std::size_t skipped_invalid = 0;

    static Dictionary from_file(const std::filesystem::path& path);
    static Dictionary from_text(std::string_view text, std::string source);
};

struct FoundMatch {
    std::string candidate;
    std::size_t index = 0;

    bool operator==(const FoundMatch&) const = default;
};

struct CrackResult {
    std::optional<FoundMatch> match;      // empty means the dictionary was exhausted
    std::size_t candidates_tested = 0;    // valid candidates actually run
    std::size_t candidates_skipped = 0;   // entries rejected by target validity rules
    double elapsed_seconds = 0.0;
    double throughput = 0.0;              // candidates_tested / elapsed_seconds
};

struct CrackProgress {
    std::size_t tested = 0;
    std::size_t total = 0;
    double rate = 0.0;         // candidates/second so far
};

struct CrackOptions {
    unsigned worker_count = 1;            // >= 1
    double progress_interval = 5.0;       // seconds between progress callbacks
    std::optional<Bytes> ssid_override;   // used when the handshake has no SSID
    std::function<void(const CrackProgress&)> on_progress; // side channel only
};

/// Credential tuple harvested from one MSCHAPv2 exchange.
struct MsChapV2Capture {
    Bytes username;
    std::array<std::uint8_t, 16> auth_challenge{};
    std::array<std::uint8_t, 16> peer_challenge{};
    std::array<std::uint8_t, 24> response{};
    std::string client_name;

    bool operator==(const MsChapV2Capture&) const = default;
};

/// Full verification chain for one candidate: PMK -> PTK -> MIC compare.
/// Throws ConfigError when the handshake has no SSID and no override is
/// supplied.
bool verify_psk_candidate(const HandshakeCapture& handshake, const Passphrase& candidate,
                          const Bytes* ssid_override = nullptr);

/// Dictionary search over the handshake. Returns the smallest verifying
/// index regardless of worker count (workers claim contiguous chunks; a hit
/// cancels chunks that start after it, earlier chunks run to completion).
CrackResult crack_psk(const HandshakeCapture& handshake, const Dictionary& dictionary,
                      const CrackOptions& options = {});

/// Same search semantics; a candidate verifies when its computed NT-Response
/// equals the captured one. Any UTF-16LE-encodable candidate is valid here.
CrackResult crack_mschapv2(const MsChapV2Capture& capture, const Dictionary& dictionary,
                           const CrackOptions& options = {});

} // namespace wifiaudit
