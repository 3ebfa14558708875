#include "wifiaudit/capture.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <set>

#include <json.hpp>

#include "wifiaudit/pcap.hpp"

namespace wifiaudit {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::size_t kEapolMicOffset = 81;
constexpr std::size_t kMinKeyFrame = 99; // 4-byte 802.1X header + 95-byte key descriptor

std::uint16_t be16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0]) << 8 | p[1];
}

std::uint64_t be64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v = v << 8 | p[i];
    }
    return v;
}

MacAddress mac_at(const std::uint8_t* p) {
    MacAddress mac;
    std::copy(p, p + 6, mac.octets.begin());
    return mac;
}

// Key info flag bits (EAPOL-Key, big-endian field).
constexpr std::uint16_t kInfoVersionMask = 0x0007;
constexpr std::uint16_t kInfoPairwise = 0x0008;
constexpr std::uint16_t kInfoInstall = 0x0040;
constexpr std::uint16_t kInfoAck = 0x0080;
constexpr std::uint16_t kInfoMic = 0x0100;
constexpr std::uint16_t kInfoSecure = 0x0200;

int classify_message(std::uint16_t info) {
    bool ack = info & kInfoAck;
    bool mic = info & kInfoMic;
    bool install = info & kInfoInstall;
    bool secure = info & kInfoSecure;
    if (ack && !mic) return 1;
    if (ack && mic && install) return 3;
    if (!ack && mic) return secure ? 4 : 2;
    return 0;
}

struct FrameScan {
    std::vector<EapolKeyMessage> messages;
    std::map<MacAddress, Bytes> ssid_table;
    std::vector<std::pair<Bytes, MacAddress>> networks_seen;
    std::size_t parsed = 0;
    std::size_t skipped = 0;
};

// Strips a radiotap header and, when the flags field says the frame carries
// an FCS, the trailing 4 bytes. Returns false when the header is malformed.
bool strip_radiotap(std::span<const std::uint8_t>& frame) {
    if (frame.size() < 8) return false;
    std::uint16_t rt_len = static_cast<std::uint16_t>(frame[2]) |
                           static_cast<std::uint16_t>(frame[3]) << 8;
    if (rt_len < 8 || rt_len > frame.size()) return false;

    std::uint32_t present0 = static_cast<std::uint32_t>(frame[4]) |
                             static_cast<std::uint32_t>(frame[5]) << 8 |
                             static_cast<std::uint32_t>(frame[6]) << 16 |
                             static_cast<std::uint32_t>(frame[7]) << 24;

    // Walk the chained present words to find where the fields start.
    std::size_t offset = 8;
    std::uint32_t current = present0;
    int words = 1;
    while (current & 0x80000000u) {
        if (offset + 4 > rt_len || ++words > 32) return false;
        current = static_cast<std::uint32_t>(frame[offset]) |
                  static_cast<std::uint32_t>(frame[offset + 1]) << 8 |
                  static_cast<std::uint32_t>(frame[offset + 2]) << 16 |
                  static_cast<std::uint32_t>(frame[offset + 3]) << 24;
        offset += 4;
    }

    bool fcs_present = false;
    if (present0 & 0x01) { // TSFT: u64, 8-byte aligned
        offset = (offset + 7) & ~std::size_t{7};
        offset += 8;
    }
    if (present0 & 0x02) { // flags: u8
        if (offset >= rt_len) return false;
        fcs_present = (frame[offset] & 0x10) != 0;
    }

    frame = frame.subspan(rt_len);
    if (fcs_present) {
        if (frame.size() < 4) return false;
        frame = frame.first(frame.size() - 4);
    }
    return true;
}

// Beacon / probe response: record (ssid, bssid). Hidden networks (empty or
// zero-length SSID tag) are ignored.
bool scan_management(std::span<const std::uint8_t> frame, std::uint8_t subtype, FrameScan& scan) {
    constexpr std::size_t kHeader = 24;
    constexpr std::size_t kFixedParams = 12; // timestamp + interval + capability
    if (subtype != 8 && subtype != 5) return false;
    if (frame.size() < kHeader + kFixedParams) return false;

    MacAddress bssid = mac_at(frame.data() + 16);
    std::size_t offset = kHeader + kFixedParams;
    while (offset + 2 <= frame.size()) {
        std::uint8_t id = frame[offset];
        std::uint8_t len = frame[offset + 1];
        if (offset + 2 + len > frame.size()) return false;
        if (id == 0) {
            if (len > kMaxSsidSize) return false;
            if (len == 0) return false;
            Bytes ssid(frame.begin() + offset + 2, frame.begin() + offset + 2 + len);
            scan.ssid_table.emplace(bssid, ssid);
            auto seen = std::make_pair(ssid, bssid);
            if (std::find(scan.networks_seen.begin(), scan.networks_seen.end(), seen) ==
                scan.networks_seen.end()) {
                scan.networks_seen.push_back(std::move(seen));
            }
            return true;
        }
        offset += 2 + len;
    }
    return false;
}

bool scan_data(std::span<const std::uint8_t> frame, std::uint8_t subtype, FrameScan& scan) {
    const std::uint8_t fc1 = frame[1];
    if (fc1 & 0x40) return false;          // protected: payload is encrypted
    if (subtype & 0x04) return false;      // null-function variants carry no data
    if (fc1 & 0x04) return false;          // more fragments

    bool to_ds = fc1 & 0x01;
    bool from_ds = fc1 & 0x02;
    bool qos = subtype & 0x08;
    std::size_t header = 24;
    if (to_ds && from_ds) header += 6;     // addr4
    if (qos) header += 2;
    if (frame.size() < header + 8) return false;

    std::uint16_t seq_ctrl = static_cast<std::uint16_t>(frame[22]) |
                             static_cast<std::uint16_t>(frame[23]) << 8;
    if ((seq_ctrl & 0x000f) != 0) return false; // fragment
    if (qos) {
        std::uint8_t qos_ctrl = frame[header - 2];
        if (qos_ctrl & 0x80) return false;      // A-MSDU
    }

    static constexpr std::uint8_t kLlcEapol[8] = {0xaa, 0xaa, 0x03, 0x00, 0x00, 0x00, 0x88, 0x8e};
    if (std::memcmp(frame.data() + header, kLlcEapol, 8) != 0) return false;

    std::span<const std::uint8_t> eapol = frame.subspan(header + 8);
    if (eapol.size() < kMinKeyFrame) return false;
    if (eapol[1] != 0x03) return false;    // only EAPOL-Key packets
    std::size_t frame_len = 4 + be16(eapol.data() + 2);
    if (frame_len < kMinKeyFrame || frame_len > eapol.size()) return false;

    std::uint8_t descriptor_type = eapol[4];
    if (descriptor_type != 2 && descriptor_type != 254) return false; // RSN or WPA

    std::uint16_t key_info = be16(eapol.data() + 5);
    int version = key_info & kInfoVersionMask;
    if (version != 1 && version != 2) return false;
    if (!(key_info & kInfoPairwise)) return false;

    std::size_t key_data_len = be16(eapol.data() + 97);
    if (kMinKeyFrame + key_data_len > frame_len) return false;

    int index = classify_message(key_info);
    if (index == 0) return false;

    EapolKeyMessage msg;
    msg.dest_mac = mac_at(frame.data() + 4);
    msg.source_mac = mac_at(frame.data() + 10);
    msg.message_index = index;
    msg.key_info = key_info;
    msg.descriptor_version = version;
    std::copy(eapol.begin() + 17, eapol.begin() + 49, msg.nonce.begin());
    std::copy(eapol.begin() + kEapolMicOffset, eapol.begin() + kEapolMicOffset + kMicSize,
              msg.mic.begin());
    msg.frame_bytes.assign(eapol.begin(), eapol.begin() + frame_len);
    msg.replay_counter = be64(eapol.data() + 9);
    scan.messages.push_back(std::move(msg));
    return true;
}

// One 802.11 frame (radiotap already stripped). Returns true when the frame
// contributed a network name or an EAPOL-Key message.
bool scan_frame(std::span<const std::uint8_t> frame, FrameScan& scan) {
    if (frame.size() < 24) return false;
    std::uint8_t fc0 = frame[0];
    if ((fc0 & 0x03) != 0) return false;   // protocol version must be 0
    std::uint8_t type = (fc0 >> 2) & 0x03;
    std::uint8_t subtype = fc0 >> 4;

    if (type == 0) return scan_management(frame, subtype, scan);
    if (type == 2) return scan_data(frame, subtype, scan);
    return false;
}

bool all_zero(std::span<const std::uint8_t> bytes) {
    return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
}

bool valid_utf8(std::span<const std::uint8_t> bytes) {
    std::size_t i = 0;
    while (i < bytes.size()) {
        std::uint8_t b0 = bytes[i];
        std::size_t len;
        std::uint32_t cp;
        if (b0 < 0x80) {
            len = 1;
            cp = b0;
        } else if ((b0 & 0xe0) == 0xc0) {
            len = 2;
            cp = b0 & 0x1f;
        } else if ((b0 & 0xf0) == 0xe0) {
            len = 3;
            cp = b0 & 0x0f;
        } else if ((b0 & 0xf8) == 0xf0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            return false;
        }
        if (i + len > bytes.size()) return false;
        for (std::size_t k = 1; k < len; ++k) {
            if ((bytes[i + k] & 0xc0) != 0x80) return false;
            cp = cp << 6 | (bytes[i + k] & 0x3f);
        }
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
            (cp >= 0xd800 && cp <= 0xdfff) || cp > 0x10ffff) {
            return false;
        }
        i += len;
    }
    return true;
}

const std::uint8_t* get_hex_field(const ordered_json& doc, const char* name, Bytes& out,
                                  std::optional<std::size_t> expected) {
    if (!doc.contains(name)) {
        throw ValidationError(std::string("missing field \"") + name + "\"");
    }
    const auto& value = doc.at(name);
    if (!value.is_string()) {
        throw ValidationError(std::string("field \"") + name + "\" must be a hex string");
    }
    out = from_hex(value.get_ref<const std::string&>());
    if (expected && out.size() != *expected) {
        throw ValidationError(std::string("field \"") + name + "\" must be " +
                              std::to_string(*expected) + " bytes (got " +
                              std::to_string(out.size()) + ")");
    }
    return out.data();
}

} // namespace

std::vector<HandshakeCapture> assemble_handshakes(const std::vector<EapolKeyMessage>& messages,
                                                  const std::map<MacAddress, Bytes>& ssid_table,
                                                  std::size_t* incomplete) {
    using PairKey = std::pair<MacAddress, MacAddress>; // (ap, client)

    struct Group {
        std::map<std::uint64_t, const EapolKeyMessage*> latest_m1; // replay -> last M1 seen
        std::set<std::uint64_t> m3_replays;
        std::set<std::uint64_t> m4_replays;
        std::vector<std::pair<HandshakeCapture, std::uint64_t>> candidates; // with M2 replay
    };

    std::vector<PairKey> order;
    std::map<PairKey, Group> groups;

    for (const auto& msg : messages) {
        bool from_ap = msg.message_index == 1 || msg.message_index == 3;
        PairKey key = from_ap ? PairKey{msg.source_mac, msg.dest_mac}
                              : PairKey{msg.dest_mac, msg.source_mac};
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) {
            order.push_back(key);
        }
        Group& group = it->second;

        switch (msg.message_index) {
        case 1:
            group.latest_m1[msg.replay_counter] = &msg;
            break;
        case 2: {
            auto m1 = group.latest_m1.find(msg.replay_counter);
            if (m1 == group.latest_m1.end()) break;
            if (all_zero(msg.mic)) break;
            if (m1->second->nonce == msg.nonce) break;

            HandshakeCapture hs;
            hs.ap_mac = key.first;
            hs.client_mac = key.second;
            hs.anonce = m1->second->nonce;
            hs.snonce = msg.nonce;
            hs.mic = msg.mic;
            hs.mic_frame = msg.frame_bytes;
            std::fill(hs.mic_frame.begin() + kEapolMicOffset,
                      hs.mic_frame.begin() + kEapolMicOffset + kMicSize, 0);
            hs.descriptor_version = msg.descriptor_version;
            if (auto ssid = ssid_table.find(hs.ap_mac); ssid != ssid_table.end()) {
                hs.ssid = ssid->second;
            }
            group.candidates.emplace_back(std::move(hs), msg.replay_counter);
            break;
        }
        case 3:
            group.m3_replays.insert(msg.replay_counter);
            break;
        case 4:
            group.m4_replays.insert(msg.replay_counter);
            break;
        default:
            break;
        }
    }

    std::vector<HandshakeCapture> handshakes;
    std::size_t dangling = 0;
    using DedupKey = std::tuple<MacAddress, MacAddress, std::array<std::uint8_t, kNonceSize>,
                                std::array<std::uint8_t, kNonceSize>>;
    std::set<DedupKey> seen;

    for (const auto& key : order) {
        Group& group = groups.at(key);
        if (group.candidates.empty()) {
            ++dangling;
            continue;
        }
        for (auto& [hs, replay] : group.candidates) {
            hs.complete = group.m3_replays.count(replay + 1) > 0 &&
                          group.m4_replays.count(replay + 1) > 0;
            DedupKey dedup{hs.ap_mac, hs.client_mac, hs.anonce, hs.snonce};
            if (seen.insert(dedup).second) {
                handshakes.push_back(std::move(hs));
            }
        }
    }

    if (incomplete) {
        *incomplete += dangling;
    }
    return handshakes;
}

CaptureReport parse_capture(std::span<const std::uint8_t> bytes) {
    PcapFile file = read_pcap(bytes);
    if (file.link_type != kLinkTypeIeee80211 && file.link_type != kLinkTypeRadiotap) {
        throw FormatError("unsupported pcap link type " + std::to_string(file.link_type) +
                          " (expected 105 or 127)");
    }

    FrameScan scan;
    for (const auto& record : file.records) {
        std::span<const std::uint8_t> frame(record.data);
        if (file.link_type == kLinkTypeRadiotap && !strip_radiotap(frame)) {
            ++scan.skipped;
            continue;
        }
        if (scan_frame(frame, scan)) {
            ++scan.parsed;
        } else {
            ++scan.skipped;
        }
    }

    CaptureReport report;
    report.networks_seen = std::move(scan.networks_seen);
    report.handshakes = assemble_handshakes(scan.messages, scan.ssid_table, &report.incomplete);
    report.frames_parsed = scan.parsed;
    report.frames_skipped = scan.skipped;
    return report;
}

Bytes store_fixture(const HandshakeCapture& handshake) {
    if (handshake.ssid.size() > kMaxSsidSize) {
        throw ValidationError("ssid must be at most 32 bytes (got " +
                              std::to_string(handshake.ssid.size()) + ")");
    }
    if (!valid_utf8(handshake.ssid)) {
        throw ValidationError("ssid is not valid UTF-8; cannot store as a fixture");
    }
    if (handshake.descriptor_version != 1 && handshake.descriptor_version != 2) {
        throw ValidationError("descriptor_version must be 1 or 2");
    }

    ordered_json doc;
    doc["ssid"] = std::string(handshake.ssid.begin(), handshake.ssid.end());
    doc["ap_mac"] = handshake.ap_mac.str();
    doc["client_mac"] = handshake.client_mac.str();
    doc["anonce"] = to_hex(handshake.anonce);
    doc["snonce"] = to_hex(handshake.snonce);
    doc["mic"] = to_hex(handshake.mic);
    doc["mic_frame"] = to_hex(handshake.mic_frame);
    doc["descriptor_version"] = handshake.descriptor_version;
    doc["complete"] = handshake.complete;

    std::string text = doc.dump(2);
    text.push_back('\n');
    return Bytes(text.begin(), text.end());
}

HandshakeCapture load_fixture(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("fixture is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ValidationError("fixture must be a JSON object");
    }

    static const std::set<std::string> kKnown = {
        "ssid", "ap_mac", "client_mac", "anonce", "snonce",
        "mic", "mic_frame", "descriptor_version", "complete"};
    for (const auto& item : doc.items()) {
        if (!kKnown.count(item.key())) {
            throw ValidationError("unknown field \"" + item.key() + "\"");
        }
    }

    HandshakeCapture hs;

    if (!doc.contains("ssid")) throw ValidationError("missing field \"ssid\"");
    if (!doc.at("ssid").is_string()) throw ValidationError("field \"ssid\" must be a string");
    const auto& ssid = doc.at("ssid").get_ref<const std::string&>();
    if (ssid.size() > kMaxSsidSize) {
        throw ValidationError("field \"ssid\" must be at most 32 bytes (got " +
                              std::to_string(ssid.size()) + ")");
    }
    hs.ssid.assign(ssid.begin(), ssid.end());

    auto get_mac = [&doc](const char* name) {
        if (!doc.contains(name)) throw ValidationError(std::string("missing field \"") + name + "\"");
        if (!doc.at(name).is_string()) {
            throw ValidationError(std::string("field \"") + name + "\" must be a string");
        }
        try {
            return MacAddress::parse(doc.at(name).get_ref<const std::string&>());
        } catch (const ValidationError&) {
            throw ValidationError(std::string("field \"") + name +
                                  "\" must look like aa:bb:cc:dd:ee:ff");
        }
    };
    hs.ap_mac = get_mac("ap_mac");
    hs.client_mac = get_mac("client_mac");

    Bytes buf;
    get_hex_field(doc, "anonce", buf, kNonceSize);
    std::copy(buf.begin(), buf.end(), hs.anonce.begin());
    get_hex_field(doc, "snonce", buf, kNonceSize);
    std::copy(buf.begin(), buf.end(), hs.snonce.begin());
    get_hex_field(doc, "mic", buf, kMicSize);
    std::copy(buf.begin(), buf.end(), hs.mic.begin());
    get_hex_field(doc, "mic_frame", hs.mic_frame, std::nullopt);

    if (!doc.contains("descriptor_version")) throw ValidationError("missing field \"descriptor_version\"");
    if (!doc.at("descriptor_version").is_number_integer()) {
        throw ValidationError("field \"descriptor_version\" must be an integer");
    }
    hs.descriptor_version = doc.at("descriptor_version").get<int>();
    if (hs.descriptor_version != 1 && hs.descriptor_version != 2) {
        throw ValidationError("field \"descriptor_version\" must be 1 or 2");
    }

    if (!doc.contains("complete")) throw ValidationError("missing field \"complete\"");
    if (!doc.at("complete").is_boolean()) {
        throw ValidationError("field \"complete\" must be a boolean");
    }
    hs.complete = doc.at("complete").get<bool>();

    // Crackability invariants.
    if (hs.anonce == hs.snonce) {
        throw ValidationError("anonce equals snonce");
    }
    if (all_zero(hs.mic)) {
        throw ValidationError("mic is all zero");
    }
    if (hs.mic_frame.size() < kMinKeyFrame) {
        throw ValidationError("mic_frame too short for an EAPOL-Key frame (" +
                              std::to_string(hs.mic_frame.size()) + " bytes)");
    }
    if (!all_zero(std::span(hs.mic_frame).subspan(kEapolMicOffset, kMicSize))) {
        throw ValidationError("mic_frame MIC region is not zeroed");
    }
    return hs;
}

HandshakeCapture load_fixture(std::span<const std::uint8_t> bytes) {
    return load_fixture(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

} // namespace wifiaudit
