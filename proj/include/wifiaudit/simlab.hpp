#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wifiaudit/capture.hpp"
#include "wifiaudit/crack.hpp"
#include "wifiaudit/crypto.hpp"
#include "wifiaudit/pcap.hpp"

namespace wifiaudit {

/// Deterministic byte stream: SHA1 counter mode keyed by (seed, label).
/// Distinct labels draw from independent streams for the same seed.
class DeterministicStream {
public:
    DeterministicStream(std::uint64_t seed, std::string label);

    void fill(std::span<std::uint8_t> out);

    template <std::size_t N>
    std::array<std::uint8_t, N> take() {
        std::array<std::uint8_t, N> out{};
        fill(out);
        return out;
    }

private:
    std::uint64_t seed_;
    std::string label_;
    std::uint64_t counter_ = 0;
    Bytes buffer_;
};

/// Inputs for forging one 4-way exchange. Nonces left unset are derived from
/// the generation seed.
struct HandshakeSpec {
    Passphrase passphrase;
    Bytes ssid;
    MacAddress ap_mac;
    MacAddress client_mac;
    std::optional<std::array<std::uint8_t, kNonceSize>> anonce;
    std::optional<std::array<std::uint8_t, kNonceSize>> snonce;
    int descriptor_version = 2;
    bool emit_all_four = false;
};

struct GeneratedHandshake {
    HandshakeCapture capture;
    Bytes pcap_bytes;
};

/// Forges a beacon plus a valid 4-way exchange for the requested passphrase.
/// Message MICs are computed with the true derived KCK, so the output both
/// re-parses to an equal HandshakeCapture and verifies against the
/// passphrase. Byte-identical output for identical (spec, seed).
GeneratedHandshake generate_handshake(const HandshakeSpec& spec, std::uint64_t seed);

enum class TrustPolicy {
    PromptOnUnknownCert,  // user is asked about unknown certs and declines
    ValidatePinnedCert,   // accepts only the pinned certificate
    AcceptAny,            // no certificate checking at all
};

std::string to_string(TrustPolicy policy);
TrustPolicy trust_policy_from_string(std::string_view text);

struct ClientProfile {
    std::string name;
    std::string username;
    std::string password;
    TrustPolicy trust_policy = TrustPolicy::PromptOnUnknownCert;
    std::optional<std::string> pinned_cert_id;
};

struct RogueApConfig {
    Bytes ssid;
    std::string cert_id;               // never matches a legitimate cert
    std::uint64_t auth_challenge_seed = 0;
};

enum class RefusalReason {
    PromptDeclined,
    PinMismatch,
};

std::string to_string(RefusalReason reason);

struct Refusal {
    std::string client_name;
    RefusalReason reason = RefusalReason::PromptDeclined;

    bool operator==(const Refusal&) const = default;
};

struct SimEvent {
    std::string client_name;
    std::string event;
    std::string detail;
};

/// Outcome of one rogue-AP run. Every client lands in exactly one of
/// captures or refusals.
struct EvilTwinLog {
    std::vector<MsChapV2Capture> captures;
    std::vector<Refusal> refusals;
    std::vector<SimEvent> event_trace;
};

/// Walks the clients in input order: each one associates, sees the rogue
/// certificate, and either refuses (per its trust policy) or completes an
/// inner MSCHAPv2 exchange whose tuple lands in the log. Challenges come
/// from seeded deterministic streams and are never reused within a run.
EvilTwinLog simulate_evil_twin(const std::vector<ClientProfile>& clients,
                               const RogueApConfig& rogue,
                               std::uint64_t seed);

/// A non-rogue network as it would appear in a scan.
struct LegitimateAp {
    Bytes ssid;
    std::string cert_id;
};

using ScanScenarioEntry = std::variant<LegitimateAp, RogueApConfig>;

struct ScanEntry {
    Bytes ssid;
    std::string summary;   // role and certificate of the AP

    bool operator==(const ScanEntry&) const = default;
};

/// Deterministic listing in scenario order.
std::vector<ScanEntry> scan_networks(const std::vector<ScanScenarioEntry>& scenario);

/// Scenario config document: {"rogue": {...}, "clients": [...]}. Schema
/// violations raise ValidationError naming the field.
struct EvilTwinScenario {
    std::vector<ClientProfile> clients;
    RogueApConfig rogue;
};

EvilTwinScenario load_scenario(std::string_view json_text);

/// EvilTwinLog as JSON with hex-encoded byte fields. Byte-stable for equal logs.
Bytes store_evil_twin_log(const EvilTwinLog& log);
EvilTwinLog load_evil_twin_log(std::string_view json_text);

/// One capture as a standalone JSON document (same object shape as entries
/// in a log's "captures" array).
Bytes store_mschapv2_capture(const MsChapV2Capture& capture);
MsChapV2Capture load_mschapv2_capture(std::string_view json_text);

} // namespace wifiaudit
