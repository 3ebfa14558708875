#include "wifiaudit/simlab.hpp"

#include <algorithm>
#include <cstring>
#include <set>
#include <type_traits>

#include <json.hpp>
#include <openssl/evp.h>

namespace wifiaudit {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::size_t kEapolMicOffset = 81;

constexpr std::uint16_t kKeyInfoPairwise = 0x0008;
constexpr std::uint16_t kKeyInfoInstall = 0x0040;
constexpr std::uint16_t kKeyInfoAck = 0x0080;
constexpr std::uint16_t kKeyInfoMic = 0x0100;
constexpr std::uint16_t kKeyInfoSecure = 0x0200;
constexpr std::uint16_t kKeyInfoEncrypted = 0x1000;

// WPA2-PSK with CCMP, as carried in message 2 and the beacon.
constexpr std::uint8_t kRsnIe[] = {
    0x30, 0x14, 0x01, 0x00, 0x00, 0x0f, 0xac, 0x04, 0x01, 0x00, 0x00,
    0x0f, 0xac, 0x04, 0x01, 0x00, 0x00, 0x0f, 0xac, 0x02, 0x00, 0x00,
};

std::array<std::uint8_t, 20> sha1(std::span<const std::uint8_t> data) {
    std::array<std::uint8_t, 20> out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha1(), nullptr) != 1 ||
        len != out.size()) {
        throw Error("SHA1 computation failed");
    }
    return out;
}

void put_u16be(Bytes& out, std::uint16_t value) {
    out.push_back(static_cast<std::uint8_t>(value >> 8));
    out.push_back(static_cast<std::uint8_t>(value));
}

void put_u64be(Bytes& out, std::uint64_t value) {
    for (int shift = 56; shift >= 0; shift -= 8) {
        out.push_back(static_cast<std::uint8_t>(value >> shift));
    }
}

void put_u64le(Bytes& out, std::uint64_t value) {
    for (int shift = 0; shift < 64; shift += 8) {
        out.push_back(static_cast<std::uint8_t>(value >> shift));
    }
}

void append(Bytes& out, std::span<const std::uint8_t> data) {
    out.insert(out.end(), data.begin(), data.end());
}

/// Full EAPOL-Key frame starting at the 802.1X version byte, MIC zeroed.
Bytes build_eapol_key(std::uint16_t key_info, std::uint16_t key_length, std::uint64_t replay,
                      std::span<const std::uint8_t> nonce,
                      std::span<const std::uint8_t> key_data) {
    Bytes frame;
    frame.reserve(99 + key_data.size());
    frame.push_back(0x02); // 802.1X protocol version
    frame.push_back(0x03); // packet type: EAPOL-Key
    put_u16be(frame, static_cast<std::uint16_t>(95 + key_data.size()));
    frame.push_back(0x02); // descriptor type: RSN
    put_u16be(frame, key_info);
    put_u16be(frame, key_length);
    put_u64be(frame, replay);
    append(frame, nonce);              // key nonce (32)
    frame.insert(frame.end(), 16, 0);  // key IV
    frame.insert(frame.end(), 8, 0);   // key RSC
    frame.insert(frame.end(), 8, 0);   // reserved
    frame.insert(frame.end(), 16, 0);  // key MIC, filled in by the caller
    put_u16be(frame, static_cast<std::uint16_t>(key_data.size()));
    append(frame, key_data);
    return frame;
}

Bytes wrap_data_frame(const MacAddress& ap, const MacAddress& client, bool from_ap,
                      std::uint16_t seq, std::span<const std::uint8_t> eapol) {
    Bytes frame;
    frame.reserve(32 + eapol.size());
    frame.push_back(0x08); // type data, subtype 0
    frame.push_back(from_ap ? 0x02 : 0x01); // FromDS / ToDS
    frame.push_back(0x00); // duration
    frame.push_back(0x00);
    const MacAddress& addr1 = from_ap ? client : ap;
    const MacAddress& addr2 = from_ap ? ap : client;
    append(frame, addr1.octets);
    append(frame, addr2.octets);
    append(frame, ap.octets); // BSSID / DA, the AP either way here
    frame.push_back(static_cast<std::uint8_t>(seq << 4));
    frame.push_back(static_cast<std::uint8_t>(seq >> 4));
    static constexpr std::uint8_t kLlcEapol[] = {0xaa, 0xaa, 0x03, 0x00, 0x00, 0x00, 0x88, 0x8e};
    append(frame, kLlcEapol);
    append(frame, eapol);
    return frame;
}

Bytes build_beacon(const MacAddress& ap, const Bytes& ssid) {
    Bytes frame;
    frame.push_back(0x80); // management, beacon
    frame.push_back(0x00);
    frame.push_back(0x00); // duration
    frame.push_back(0x00);
    frame.insert(frame.end(), 6, 0xff); // broadcast destination
    append(frame, ap.octets);
    append(frame, ap.octets);
    frame.push_back(0x00); // sequence control
    frame.push_back(0x00);
    frame.insert(frame.end(), 8, 0);   // timestamp
    frame.push_back(0x64);             // beacon interval: 100 TU
    frame.push_back(0x00);
    frame.push_back(0x11);             // capability: ESS | Privacy
    frame.push_back(0x00);
    frame.push_back(0x00);             // SSID element
    frame.push_back(static_cast<std::uint8_t>(ssid.size()));
    append(frame, ssid);
    static constexpr std::uint8_t kRates[] = {0x82, 0x84, 0x8b, 0x96, 0x0c, 0x12, 0x18, 0x24};
    frame.push_back(0x01); // supported rates element
    frame.push_back(sizeof(kRates));
    append(frame, kRates);
    append(frame, kRsnIe);
    return frame;
}

std::string ssid_display(const Bytes& ssid) {
    bool printable = !ssid.empty() && std::all_of(ssid.begin(), ssid.end(), [](std::uint8_t b) {
        return b >= 0x20 && b < 0x7f;
    });
    if (printable) {
        return std::string(ssid.begin(), ssid.end());
    }
    return "0x" + to_hex(ssid);
}

std::string field_path(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const ordered_json& obj, const std::string& prefix,
                    std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* name) { return it.key() == name; });
        if (!known) {
            throw ValidationError("unknown field \"" + field_path(prefix, it.key()) + "\"");
        }
    }
}

std::string get_string_field(const ordered_json& obj, const std::string& prefix, const char* key) {
    std::string path = field_path(prefix, key);
    if (!obj.contains(key)) {
        throw ValidationError("missing field \"" + path + "\"");
    }
    const auto& value = obj.at(key);
    if (!value.is_string()) {
        throw ValidationError("field \"" + path + "\" must be a string");
    }
    return value.get<std::string>();
}

void get_hex_into(const ordered_json& obj, const std::string& prefix, const char* key,
                  std::span<std::uint8_t> out) {
    std::string path = field_path(prefix, key);
    std::string text = get_string_field(obj, prefix, key);
    Bytes raw;
    try {
        raw = from_hex(text);
    } catch (const ValidationError&) {
        throw ValidationError("field \"" + path + "\" must be a hex string");
    }
    if (raw.size() != out.size()) {
        throw ValidationError("field \"" + path + "\" must be " + std::to_string(out.size()) +
                              " hex-encoded bytes (got " + std::to_string(raw.size()) + ")");
    }
    std::copy(raw.begin(), raw.end(), out.begin());
}

ordered_json parse_document(std::string_view text, const char* what) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string(what) + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) {
        throw ValidationError(std::string(what) + " must be a JSON object");
    }
    return doc;
}

std::string username_text(const MsChapV2Capture& capture) {
    std::string text(capture.username.begin(), capture.username.end());
    try {
        utf16le_encode(text); // validates the UTF-8 encoding
    } catch (const ValidationError&) {
        throw ValidationError("capture username is not valid UTF-8 text");
    }
    return text;
}

ordered_json capture_to_json(const MsChapV2Capture& capture) {
    ordered_json obj;
    obj["client_name"] = capture.client_name;
    obj["username"] = username_text(capture);
    obj["auth_challenge"] = to_hex(capture.auth_challenge);
    obj["peer_challenge"] = to_hex(capture.peer_challenge);
    obj["response"] = to_hex(capture.response);
    return obj;
}

MsChapV2Capture capture_from_json(const ordered_json& obj, const std::string& prefix) {
    if (!obj.is_object()) {
        throw ValidationError("capture" + (prefix.empty() ? "" : " " + prefix) +
                              " must be a JSON object");
    }
    reject_unknown(obj, prefix,
                   {"client_name", "username", "auth_challenge", "peer_challenge", "response"});
    MsChapV2Capture capture;
    if (obj.contains("client_name")) {
        if (!obj.at("client_name").is_string()) {
            throw ValidationError("field \"" + field_path(prefix, "client_name") +
                                  "\" must be a string");
        }
        capture.client_name = obj.at("client_name").get<std::string>();
    }
    std::string username = get_string_field(obj, prefix, "username");
    if (username.empty()) {
        throw ValidationError("field \"" + field_path(prefix, "username") + "\" must be non-empty");
    }
    capture.username = Bytes(username.begin(), username.end());
    get_hex_into(obj, prefix, "auth_challenge", capture.auth_challenge);
    get_hex_into(obj, prefix, "peer_challenge", capture.peer_challenge);
    get_hex_into(obj, prefix, "response", capture.response);
    return capture;
}

RefusalReason refusal_reason_from_string(std::string_view text) {
    if (text == "prompt-declined") return RefusalReason::PromptDeclined;
    if (text == "pin-mismatch") return RefusalReason::PinMismatch;
    throw ValidationError("unknown refusal reason \"" + std::string(text) +
                          "\" (expected prompt-declined or pin-mismatch)");
}

} // namespace

DeterministicStream::DeterministicStream(std::uint64_t seed, std::string label)
    : seed_(seed), label_(std::move(label)) {}

void DeterministicStream::fill(std::span<std::uint8_t> out) {
    static constexpr char kDomainTag[] = "wifiaudit-prng-v1";
    while (buffer_.size() < out.size()) {
        Bytes input;
        input.reserve(sizeof(kDomainTag) + 16 + label_.size() + 8);
        input.insert(input.end(), kDomainTag, kDomainTag + sizeof(kDomainTag));
        put_u64le(input, seed_);
        put_u64le(input, label_.size());
        input.insert(input.end(), label_.begin(), label_.end());
        put_u64le(input, counter_);
        ++counter_;
        auto block = sha1(input);
        buffer_.insert(buffer_.end(), block.begin(), block.end());
    }
    std::copy_n(buffer_.begin(), out.size(), out.begin());
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(out.size()));
}

GeneratedHandshake generate_handshake(const HandshakeSpec& spec, std::uint64_t seed) {
    if (spec.ssid.empty() || spec.ssid.size() > kMaxSsidSize) {
        throw ValidationError("ssid must be 1..32 bytes (got " +
                              std::to_string(spec.ssid.size()) + ")");
    }
    if (spec.descriptor_version != 1 && spec.descriptor_version != 2) {
        throw ValidationError("descriptor_version must be 1 or 2");
    }
    if (spec.ap_mac == spec.client_mac) {
        throw ValidationError("ap_mac and client_mac must differ");
    }

    auto anonce = spec.anonce ? *spec.anonce : DeterministicStream(seed, "anonce").take<kNonceSize>();
    auto snonce = spec.snonce ? *spec.snonce : DeterministicStream(seed, "snonce").take<kNonceSize>();
    if (anonce == snonce) {
        throw ValidationError("anonce and snonce must differ");
    }

    auto pmk = derive_pmk(spec.passphrase, spec.ssid);
    auto keys = derive_ptk(pmk, spec.ap_mac, spec.client_mac, anonce, snonce);

    const auto version_bits = static_cast<std::uint16_t>(spec.descriptor_version);
    // Key length mirrors the negotiated pairwise cipher: 32 for TKIP
    // (descriptor version 1), 16 for CCMP (version 2).
    const std::uint16_t key_length = spec.descriptor_version == 1 ? 32 : 16;

    Bytes m1 = build_eapol_key(version_bits | kKeyInfoPairwise | kKeyInfoAck, key_length, 1,
                               anonce, {});

    Bytes m2 = build_eapol_key(version_bits | kKeyInfoPairwise | kKeyInfoMic, 0, 1, snonce, kRsnIe);
    auto m2_mic = compute_mic(keys.kck(), m2, spec.descriptor_version);
    Bytes m2_zeroed = m2;
    std::copy(m2_mic.begin(), m2_mic.end(), m2.begin() + kEapolMicOffset);

    PcapFile pcap;
    pcap.link_type = kLinkTypeIeee80211;
    std::uint16_t seq = 0;
    auto add = [&](Bytes frame) {
        // Fixed base time keeps the file byte-identical for equal inputs.
        pcap.records.push_back({1700000000u,
                                static_cast<std::uint32_t>(pcap.records.size()) * 100000u,
                                std::move(frame)});
    };
    add(build_beacon(spec.ap_mac, spec.ssid));
    add(wrap_data_frame(spec.ap_mac, spec.client_mac, true, seq++, m1));
    add(wrap_data_frame(spec.ap_mac, spec.client_mac, false, seq++, m2));

    if (spec.emit_all_four) {
        Bytes gtk_filler(24);
        DeterministicStream(seed, "gtk").fill(gtk_filler);
        Bytes m3 = build_eapol_key(version_bits | kKeyInfoPairwise | kKeyInfoInstall |
                                       kKeyInfoAck | kKeyInfoMic | kKeyInfoSecure |
                                       kKeyInfoEncrypted,
                                   key_length, 2, anonce, gtk_filler);
        auto m3_mic = compute_mic(keys.kck(), m3, spec.descriptor_version);
        std::copy(m3_mic.begin(), m3_mic.end(), m3.begin() + kEapolMicOffset);

        std::array<std::uint8_t, kNonceSize> zero_nonce{};
        Bytes m4 = build_eapol_key(version_bits | kKeyInfoPairwise | kKeyInfoMic | kKeyInfoSecure,
                                   0, 2, zero_nonce, {});
        auto m4_mic = compute_mic(keys.kck(), m4, spec.descriptor_version);
        std::copy(m4_mic.begin(), m4_mic.end(), m4.begin() + kEapolMicOffset);

        add(wrap_data_frame(spec.ap_mac, spec.client_mac, true, seq++, m3));
        add(wrap_data_frame(spec.ap_mac, spec.client_mac, false, seq++, m4));
    }

    GeneratedHandshake out;
    out.capture.ssid = spec.ssid;
    out.capture.ap_mac = spec.ap_mac;
    out.capture.client_mac = spec.client_mac;
    out.capture.anonce = anonce;
    out.capture.snonce = snonce;
    out.capture.mic = m2_mic;
    out.capture.mic_frame = std::move(m2_zeroed);
    out.capture.descriptor_version = spec.descriptor_version;
    out.capture.complete = spec.emit_all_four;
    out.pcap_bytes = write_pcap(pcap);
    return out;
}

std::string to_string(TrustPolicy policy) {
    switch (policy) {
    case TrustPolicy::PromptOnUnknownCert: return "prompt-on-unknown-cert";
    case TrustPolicy::ValidatePinnedCert: return "validate-pinned-cert";
    case TrustPolicy::AcceptAny: return "accept-any";
    }
    throw ValidationError("invalid trust policy value");
}

TrustPolicy trust_policy_from_string(std::string_view text) {
    if (text == "prompt-on-unknown-cert") return TrustPolicy::PromptOnUnknownCert;
    if (text == "validate-pinned-cert") return TrustPolicy::ValidatePinnedCert;
    if (text == "accept-any") return TrustPolicy::AcceptAny;
    throw ValidationError("unknown trust policy \"" + std::string(text) +
                          "\" (expected prompt-on-unknown-cert, validate-pinned-cert, "
                          "or accept-any)");
}

std::string to_string(RefusalReason reason) {
    switch (reason) {
    case RefusalReason::PromptDeclined: return "prompt-declined";
    case RefusalReason::PinMismatch: return "pin-mismatch";
    }
    throw ValidationError("invalid refusal reason value");
}

EvilTwinLog simulate_evil_twin(const std::vector<ClientProfile>& clients,
                               const RogueApConfig& rogue, std::uint64_t seed) {
    if (rogue.ssid.empty() || rogue.ssid.size() > kMaxSsidSize) {
        throw ValidationError("rogue ssid must be 1..32 bytes");
    }
    if (rogue.cert_id.empty()) {
        throw ValidationError("rogue cert_id must be non-empty");
    }
    std::set<std::string> names;
    for (const auto& client : clients) {
        if (client.name.empty()) {
            throw ValidationError("client name must be non-empty");
        }
        if (!names.insert(client.name).second) {
            throw ValidationError("duplicate client name \"" + client.name + "\"");
        }
        if (client.username.empty()) {
            throw ValidationError("client \"" + client.name + "\" has an empty username");
        }
        if (client.trust_policy == TrustPolicy::ValidatePinnedCert && !client.pinned_cert_id) {
            throw ValidationError("client \"" + client.name +
                                  "\" uses validate-pinned-cert but has no pinned_cert_id");
        }
    }

    // The rogue AP's challenge stream is namespaced by its own seed so two
    // rogue configs under the same run seed still draw distinct challenges.
    DeterministicStream auth_stream(seed,
                                    "auth-challenge/" + std::to_string(rogue.auth_challenge_seed));
    DeterministicStream peer_stream(seed, "peer-challenge");

    EvilTwinLog log;
    for (const auto& client : clients) {
        log.event_trace.push_back({client.name, "associate", "ssid " + ssid_display(rogue.ssid)});
        log.event_trace.push_back({client.name, "certificate-offered", rogue.cert_id});

        bool proceed = false;
        switch (client.trust_policy) {
        case TrustPolicy::AcceptAny:
            log.event_trace.push_back(
                {client.name, "certificate-accepted", "client does not verify certificates"});
            proceed = true;
            break;
        case TrustPolicy::PromptOnUnknownCert:
            log.event_trace.push_back(
                {client.name, "certificate-declined", "user declined the unknown certificate"});
            log.refusals.push_back({client.name, RefusalReason::PromptDeclined});
            break;
        case TrustPolicy::ValidatePinnedCert:
            if (*client.pinned_cert_id == rogue.cert_id) {
                log.event_trace.push_back(
                    {client.name, "certificate-accepted", "matched pinned certificate"});
                proceed = true;
            } else {
                log.event_trace.push_back({client.name, "certificate-declined",
                                           "certificate does not match the pinned one"});
                log.refusals.push_back({client.name, RefusalReason::PinMismatch});
            }
            break;
        }
        if (!proceed) {
            continue;
        }

        MsChapV2Capture capture;
        capture.client_name = client.name;
        capture.username = Bytes(client.username.begin(), client.username.end());
        capture.auth_challenge = auth_stream.take<16>();
        capture.peer_challenge = peer_stream.take<16>();
        Bytes stripped = strip_domain_prefix(capture.username);
        capture.response = mschapv2_response(client.password, capture.peer_challenge,
                                             capture.auth_challenge, stripped);
        log.event_trace.push_back({client.name, "mschapv2-captured",
                                   "username " + client.username});
        log.captures.push_back(std::move(capture));
    }
    return log;
}

std::vector<ScanEntry> scan_networks(const std::vector<ScanScenarioEntry>& scenario) {
    std::vector<ScanEntry> entries;
    entries.reserve(scenario.size());
    for (const auto& entry : scenario) {
        std::visit(
            [&](const auto& ap) {
                using T = std::decay_t<decltype(ap)>;
                if constexpr (std::is_same_v<T, LegitimateAp>) {
                    entries.push_back({ap.ssid, "legitimate access point, certificate " + ap.cert_id});
                } else {
                    entries.push_back({ap.ssid, "rogue access point, certificate " + ap.cert_id});
                }
            },
            entry);
    }
    return entries;
}

EvilTwinScenario load_scenario(std::string_view json_text) {
    ordered_json doc = parse_document(json_text, "scenario");
    reject_unknown(doc, "", {"rogue", "clients"});

    if (!doc.contains("rogue")) {
        throw ValidationError("missing field \"rogue\"");
    }
    const auto& rogue_obj = doc.at("rogue");
    if (!rogue_obj.is_object()) {
        throw ValidationError("field \"rogue\" must be a JSON object");
    }
    reject_unknown(rogue_obj, "rogue", {"ssid", "cert_id", "auth_challenge_seed"});

    EvilTwinScenario scenario;
    std::string ssid = get_string_field(rogue_obj, "rogue", "ssid");
    scenario.rogue.ssid = Bytes(ssid.begin(), ssid.end());
    if (scenario.rogue.ssid.empty() || scenario.rogue.ssid.size() > kMaxSsidSize) {
        throw ValidationError("field \"rogue.ssid\" must be 1..32 bytes");
    }
    scenario.rogue.cert_id = get_string_field(rogue_obj, "rogue", "cert_id");
    if (scenario.rogue.cert_id.empty()) {
        throw ValidationError("field \"rogue.cert_id\" must be non-empty");
    }
    if (rogue_obj.contains("auth_challenge_seed")) {
        const auto& seed = rogue_obj.at("auth_challenge_seed");
        if (!seed.is_number_unsigned()) {
            throw ValidationError(
                "field \"rogue.auth_challenge_seed\" must be an unsigned integer");
        }
        scenario.rogue.auth_challenge_seed = seed.get<std::uint64_t>();
    }

    if (!doc.contains("clients")) {
        throw ValidationError("missing field \"clients\"");
    }
    const auto& clients = doc.at("clients");
    if (!clients.is_array()) {
        throw ValidationError("field \"clients\" must be an array");
    }
    for (std::size_t i = 0; i < clients.size(); ++i) {
        std::string prefix = "clients[" + std::to_string(i) + "]";
        const auto& obj = clients.at(i);
        if (!obj.is_object()) {
            throw ValidationError("field \"" + prefix + "\" must be a JSON object");
        }
        reject_unknown(obj, prefix, {"name", "username", "password", "trust_policy",
                                     "pinned_cert_id"});
        ClientProfile client;
        client.name = get_string_field(obj, prefix, "name");
        client.username = get_string_field(obj, prefix, "username");
        client.password = get_string_field(obj, prefix, "password");
        std::string policy = get_string_field(obj, prefix, "trust_policy");
        try {
            client.trust_policy = trust_policy_from_string(policy);
        } catch (const ValidationError& e) {
            throw ValidationError("field \"" + prefix + ".trust_policy\": " + e.what());
        }
        if (obj.contains("pinned_cert_id")) {
            if (client.trust_policy != TrustPolicy::ValidatePinnedCert) {
                throw ValidationError("field \"" + prefix +
                                      ".pinned_cert_id\" is only valid with the "
                                      "validate-pinned-cert trust policy");
            }
            if (!obj.at("pinned_cert_id").is_string()) {
                throw ValidationError("field \"" + prefix + ".pinned_cert_id\" must be a string");
            }
            client.pinned_cert_id = obj.at("pinned_cert_id").get<std::string>();
        } else if (client.trust_policy == TrustPolicy::ValidatePinnedCert) {
            throw ValidationError("missing field \"" + prefix +
                                  ".pinned_cert_id\" (required by validate-pinned-cert)");
        }
        scenario.clients.push_back(std::move(client));
    }
    return scenario;
}

Bytes store_evil_twin_log(const EvilTwinLog& log) {
    ordered_json doc;
    doc["captures"] = ordered_json::array();
    for (const auto& capture : log.captures) {
        doc["captures"].push_back(capture_to_json(capture));
    }
    doc["refusals"] = ordered_json::array();
    for (const auto& refusal : log.refusals) {
        ordered_json obj;
        obj["client_name"] = refusal.client_name;
        obj["reason"] = to_string(refusal.reason);
        doc["refusals"].push_back(std::move(obj));
    }
    doc["event_trace"] = ordered_json::array();
    for (const auto& event : log.event_trace) {
        ordered_json obj;
        obj["client_name"] = event.client_name;
        obj["event"] = event.event;
        obj["detail"] = event.detail;
        doc["event_trace"].push_back(std::move(obj));
    }
    std::string text = doc.dump(2);
    text.push_back('\n');
    return Bytes(text.begin(), text.end());
}

EvilTwinLog load_evil_twin_log(std::string_view json_text) {
    ordered_json doc = parse_document(json_text, "log");
    reject_unknown(doc, "", {"captures", "refusals", "event_trace"});

    for (const char* name : {"captures", "refusals", "event_trace"}) {
        if (!doc.contains(name)) {
            throw ValidationError(std::string("missing field \"") + name + "\"");
        }
        if (!doc.at(name).is_array()) {
            throw ValidationError(std::string("field \"") + name + "\" must be an array");
        }
    }

    EvilTwinLog log;
    const auto& captures = doc.at("captures");
    for (std::size_t i = 0; i < captures.size(); ++i) {
        log.captures.push_back(
            capture_from_json(captures.at(i), "captures[" + std::to_string(i) + "]"));
    }
    const auto& refusals = doc.at("refusals");
    for (std::size_t i = 0; i < refusals.size(); ++i) {
        std::string prefix = "refusals[" + std::to_string(i) + "]";
        const auto& obj = refusals.at(i);
        if (!obj.is_object()) {
            throw ValidationError("field \"" + prefix + "\" must be a JSON object");
        }
        reject_unknown(obj, prefix, {"client_name", "reason"});
        Refusal refusal;
        refusal.client_name = get_string_field(obj, prefix, "client_name");
        refusal.reason = refusal_reason_from_string(get_string_field(obj, prefix, "reason"));
        log.refusals.push_back(std::move(refusal));
    }
    const auto& events = doc.at("event_trace");
    for (std::size_t i = 0; i < events.size(); ++i) {
        std::string prefix = "event_trace[" + std::to_string(i) + "]";
        const auto& obj = events.at(i);
        if (!obj.is_object()) {
            throw ValidationError("field \"" + prefix + "\" must be a JSON object");
        }
        reject_unknown(obj, prefix, {"client_name", "event", "detail"});
        SimEvent event;
        event.client_name = get_string_field(obj, prefix, "client_name");
        event.event = get_string_field(obj, prefix, "event");
        event.detail = get_string_field(obj, prefix, "detail");
        log.event_trace.push_back(std::move(event));
    }
    return log;
}

Bytes store_mschapv2_capture(const MsChapV2Capture& capture) {
    std::string text = capture_to_json(capture).dump(2);
    text.push_back('\n');
    return Bytes(text.begin(), text.end());
}

MsChapV2Capture load_mschapv2_capture(std::string_view json_text) {
    ordered_json doc = parse_document(json_text, "capture");
    return capture_from_json(doc, "");
}

} // namespace wifiaudit
