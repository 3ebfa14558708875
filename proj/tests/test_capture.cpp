#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <string>

#include "wifiaudit/capture.hpp"
#include "wifiaudit/errors.hpp"
#include "wifiaudit/pcap.hpp"
#include "wifiaudit/simlab.hpp"

using namespace wifiaudit;

namespace {

HandshakeSpec lab_spec(bool all_four) {
    return HandshakeSpec{Passphrase("correcthorse"),
                         Bytes{'T', 'e', 's', 't', 'L', 'a', 'b', '-', '5', 'G'},
                         MacAddress::parse("02:11:22:33:44:55"),
                         MacAddress::parse("02:66:77:88:99:aa"),
                         std::nullopt,
                         std::nullopt,
                         2,
                         all_four};
}

std::string as_text(const Bytes& bytes) {
    return std::string(bytes.begin(), bytes.end());
}

EapolKeyMessage make_message(int index, const MacAddress& ap, const MacAddress& client,
                             std::uint64_t replay,
                             const std::array<std::uint8_t, kNonceSize>& nonce,
                             std::uint8_t mic_byte) {
    EapolKeyMessage msg;
    bool from_ap = index == 1 || index == 3;
    msg.source_mac = from_ap ? ap : client;
    msg.dest_mac = from_ap ? client : ap;
    msg.message_index = index;
    msg.descriptor_version = 2;
    msg.nonce = nonce;
    msg.mic.fill(mic_byte);
    msg.frame_bytes.assign(99, 0);
    std::fill_n(msg.frame_bytes.begin() + 81, kMicSize, mic_byte);
    msg.replay_counter = replay;
    return msg;
}

std::array<std::uint8_t, kNonceSize> nonce_of(std::uint8_t fill) {
    std::array<std::uint8_t, kNonceSize> n{};
    n.fill(fill);
    return n;
}

} // namespace

TEST_CASE("empty pcap yields an empty report") {
    PcapFile file;
    file.link_type = kLinkTypeIeee80211;
    CaptureReport report = parse_capture(write_pcap(file));
    CHECK(report.networks_seen.empty());
    CHECK(report.handshakes.empty());
    CHECK(report.incomplete == 0);
    CHECK(report.frames_parsed == 0);
    CHECK(report.frames_skipped == 0);
}

TEST_CASE("generated exchange parses back to the same handshake") {
    GeneratedHandshake gen = generate_handshake(lab_spec(true), 42);
    CaptureReport report = parse_capture(gen.pcap_bytes);

    REQUIRE(report.networks_seen.size() == 1);
    CHECK(report.networks_seen[0].first == lab_spec(true).ssid);
    CHECK(report.networks_seen[0].second == lab_spec(true).ap_mac);

    REQUIRE(report.handshakes.size() == 1);
    CHECK(report.handshakes[0] == gen.capture);
    CHECK(report.handshakes[0].complete);
    CHECK(report.incomplete == 0);
    CHECK(report.frames_parsed == 5); // beacon + four key messages
    CHECK(report.frames_skipped == 0);
}

TEST_CASE("two-message exchange is viable but not complete") {
    GeneratedHandshake gen = generate_handshake(lab_spec(false), 42);
    CaptureReport report = parse_capture(gen.pcap_bytes);
    REQUIRE(report.handshakes.size() == 1);
    CHECK_FALSE(report.handshakes[0].complete);
    CHECK(report.handshakes[0] == gen.capture);
    CHECK(report.frames_parsed == 3); // beacon + M1 + M2
}

TEST_CASE("a lone message 1 counts as incomplete") {
    GeneratedHandshake gen = generate_handshake(lab_spec(true), 42);
    PcapFile file = read_pcap(gen.pcap_bytes);
    REQUIRE(file.records.size() == 5);
    file.records.resize(2); // beacon + M1 only
    CaptureReport report = parse_capture(write_pcap(file));
    CHECK(report.handshakes.empty());
    CHECK(report.incomplete == 1);
    CHECK(report.frames_parsed == 2);
}

TEST_CASE("replayed frames collapse to one handshake") {
    GeneratedHandshake gen = generate_handshake(lab_spec(true), 42);
    PcapFile file = read_pcap(gen.pcap_bytes);
    std::vector<PcapRecord> original = file.records;
    file.records.insert(file.records.end(), original.begin(), original.end());

    CaptureReport report = parse_capture(write_pcap(file));
    CHECK(report.networks_seen.size() == 1);
    REQUIRE(report.handshakes.size() == 1);
    CHECK(report.handshakes[0] == gen.capture);
    CHECK(report.incomplete == 0);
    CHECK(report.frames_parsed == 10);
}

TEST_CASE("distinct exchanges in one file produce distinct handshakes") {
    GeneratedHandshake first = generate_handshake(lab_spec(true), 42);

    HandshakeSpec other = lab_spec(true);
    other.ssid = Bytes{'O', 'f', 'f', 'i', 'c', 'e', 'N', 'e', 't'};
    other.ap_mac = MacAddress::parse("02:aa:bb:cc:dd:ee");
    other.client_mac = MacAddress::parse("02:01:02:03:04:05");
    other.passphrase = Passphrase("hunter2hunter2");
    GeneratedHandshake second = generate_handshake(other, 7);

    PcapFile merged = read_pcap(first.pcap_bytes);
    PcapFile tail = read_pcap(second.pcap_bytes);
    merged.records.insert(merged.records.end(), tail.records.begin(), tail.records.end());

    CaptureReport report = parse_capture(write_pcap(merged));
    REQUIRE(report.networks_seen.size() == 2);
    REQUIRE(report.handshakes.size() == 2);
    CHECK(report.handshakes[0] == first.capture);
    CHECK(report.handshakes[1] == second.capture);
}

TEST_CASE("radiotap headers are stripped") {
    GeneratedHandshake gen = generate_handshake(lab_spec(true), 42);
    PcapFile plain = read_pcap(gen.pcap_bytes);

    SUBCASE("minimal header") {
        PcapFile wrapped;
        wrapped.link_type = kLinkTypeRadiotap;
        for (const auto& rec : plain.records) {
            PcapRecord copy = rec;
            Bytes framed = {0x00, 0x00, 0x08, 0x00, 0x00, 0x00, 0x00, 0x00};
            framed.insert(framed.end(), rec.data.begin(), rec.data.end());
            copy.data = std::move(framed);
            wrapped.records.push_back(std::move(copy));
        }
        CaptureReport report = parse_capture(write_pcap(wrapped));
        REQUIRE(report.handshakes.size() == 1);
        CHECK(report.handshakes[0] == gen.capture);
        CHECK(report.frames_skipped == 0);
    }

    SUBCASE("flags field announcing a trailing FCS") {
        PcapFile wrapped;
        wrapped.link_type = kLinkTypeRadiotap;
        for (const auto& rec : plain.records) {
            PcapRecord copy = rec;
            Bytes framed = {0x00, 0x00, 0x09, 0x00, 0x02, 0x00, 0x00, 0x00, 0x10};
            framed.insert(framed.end(), rec.data.begin(), rec.data.end());
            framed.insert(framed.end(), {0xde, 0xad, 0xbe, 0xef}); // fake FCS
            copy.data = std::move(framed);
            wrapped.records.push_back(std::move(copy));
        }
        CaptureReport report = parse_capture(write_pcap(wrapped));
        REQUIRE(report.handshakes.size() == 1);
        CHECK(report.handshakes[0] == gen.capture);
        CHECK(report.frames_skipped == 0);
    }

    SUBCASE("malformed radiotap length is skipped, not fatal") {
        PcapFile wrapped;
        wrapped.link_type = kLinkTypeRadiotap;
        PcapRecord bad;
        bad.data = {0x00, 0x00, 0xff, 0xff, 0x00, 0x00, 0x00, 0x00}; // length beyond frame
        wrapped.records.push_back(bad);
        CaptureReport report = parse_capture(write_pcap(wrapped));
        CHECK(report.frames_skipped == 1);
        CHECK(report.handshakes.empty());
    }
}

TEST_CASE("garbage frames are counted, never fatal") {
    GeneratedHandshake gen = generate_handshake(lab_spec(true), 42);
    PcapFile file = read_pcap(gen.pcap_bytes);

    PcapRecord runt;
    runt.data = {0x01, 0x02, 0x03};
    PcapRecord bad_version;
    bad_version.data.assign(32, 0xff); // frame-control protocol version != 0
    file.records.insert(file.records.begin(), runt);
    file.records.push_back(bad_version);

    CaptureReport report = parse_capture(write_pcap(file));
    REQUIRE(report.handshakes.size() == 1);
    CHECK(report.handshakes[0] == gen.capture);
    CHECK(report.frames_parsed == 5);
    CHECK(report.frames_skipped == 2);
}

TEST_CASE("file-level problems throw FormatError") {
    SUBCASE("short global header") {
        Bytes junk(10, 0x00);
        CHECK_THROWS_WITH_AS(parse_capture(junk),
                             "truncated pcap: global header needs 24 bytes, file has 10",
                             FormatError);
    }

    SUBCASE("unknown magic") {
        Bytes junk(24, 0x00);
        CHECK_THROWS_WITH_AS(parse_capture(junk),
                             "unrecognized capture file magic 0x00000000", FormatError);
    }

    SUBCASE("truncated record header") {
        PcapFile file;
        file.link_type = kLinkTypeIeee80211;
        Bytes bytes = write_pcap(file);
        bytes.insert(bytes.end(), 8, 0x00);
        CHECK_THROWS_WITH_AS(parse_capture(bytes),
                             "truncated pcap: record header at byte offset 24", FormatError);
    }

    SUBCASE("record body runs past end of file") {
        PcapFile file;
        file.link_type = kLinkTypeIeee80211;
        PcapRecord rec;
        rec.data.assign(50, 0xab);
        file.records.push_back(rec);
        Bytes bytes = write_pcap(file);
        bytes.resize(bytes.size() - 20);
        CHECK_THROWS_WITH_AS(
            parse_capture(bytes),
            "truncated pcap: record body at byte offset 40 wants 50 bytes, 30 remain",
            FormatError);
    }

    SUBCASE("unsupported link type") {
        PcapFile file;
        file.link_type = 1; // Ethernet
        CHECK_THROWS_WITH_AS(parse_capture(write_pcap(file)),
                             "unsupported pcap link type 1 (expected 105 or 127)", FormatError);
    }
}

TEST_CASE("byte-swapped pcap headers are accepted") {
    GeneratedHandshake gen = generate_handshake(lab_spec(true), 42);
    Bytes bytes = gen.pcap_bytes;

    auto swap32 = [&bytes](std::size_t offset) {
        std::swap(bytes[offset], bytes[offset + 3]);
        std::swap(bytes[offset + 1], bytes[offset + 2]);
    };
    swap32(0);  // magic
    swap32(20); // link type
    std::size_t offset = 24;
    PcapFile layout = read_pcap(gen.pcap_bytes);
    for (const auto& rec : layout.records) {
        swap32(offset);      // ts_sec
        swap32(offset + 4);  // ts_usec
        swap32(offset + 8);  // incl_len
        swap32(offset + 12); // orig_len
        offset += 16 + rec.data.size();
    }

    CaptureReport report = parse_capture(bytes);
    REQUIRE(report.handshakes.size() == 1);
    CHECK(report.handshakes[0] == gen.capture);
}

TEST_CASE("message pairing follows the replay counter") {
    MacAddress ap = MacAddress::parse("02:00:00:00:00:01");
    MacAddress client = MacAddress::parse("02:00:00:00:00:02");
    auto anonce = nonce_of(0x0a);
    auto snonce = nonce_of(0x0b);

    SUBCASE("matched pair with follow-up messages is complete") {
        std::vector<EapolKeyMessage> msgs = {
            make_message(1, ap, client, 5, anonce, 0x00),
            make_message(2, ap, client, 5, snonce, 0x5c),
            make_message(3, ap, client, 6, anonce, 0x5d),
            make_message(4, ap, client, 6, nonce_of(0x00), 0x5e),
        };
        std::size_t incomplete = 0;
        auto handshakes = assemble_handshakes(msgs, {}, &incomplete);
        REQUIRE(handshakes.size() == 1);
        CHECK(handshakes[0].complete);
        CHECK(handshakes[0].anonce == anonce);
        CHECK(handshakes[0].snonce == snonce);
        CHECK(handshakes[0].mic == std::array<std::uint8_t, kMicSize>{
                  0x5c, 0x5c, 0x5c, 0x5c, 0x5c, 0x5c, 0x5c, 0x5c,
                  0x5c, 0x5c, 0x5c, 0x5c, 0x5c, 0x5c, 0x5c, 0x5c});
        CHECK(std::all_of(handshakes[0].mic_frame.begin() + 81,
                          handshakes[0].mic_frame.begin() + 97,
                          [](std::uint8_t b) { return b == 0; }));
        CHECK(incomplete == 0);
    }

    SUBCASE("replay mismatch leaves the pair unassembled") {
        std::vector<EapolKeyMessage> msgs = {
            make_message(1, ap, client, 5, anonce, 0x00),
            make_message(2, ap, client, 9, snonce, 0x5c),
        };
        std::size_t incomplete = 0;
        auto handshakes = assemble_handshakes(msgs, {}, &incomplete);
        CHECK(handshakes.empty());
        CHECK(incomplete == 1);
    }

    SUBCASE("matched pair without follow-ups is not complete") {
        std::vector<EapolKeyMessage> msgs = {
            make_message(1, ap, client, 5, anonce, 0x00),
            make_message(2, ap, client, 5, snonce, 0x5c),
        };
        auto handshakes = assemble_handshakes(msgs, {});
        REQUIRE(handshakes.size() == 1);
        CHECK_FALSE(handshakes[0].complete);
    }

    SUBCASE("a zero MIC in message 2 is rejected") {
        std::vector<EapolKeyMessage> msgs = {
            make_message(1, ap, client, 5, anonce, 0x00),
            make_message(2, ap, client, 5, snonce, 0x00),
        };
        std::size_t incomplete = 0;
        auto handshakes = assemble_handshakes(msgs, {}, &incomplete);
        CHECK(handshakes.empty());
        CHECK(incomplete == 1);
    }

    SUBCASE("equal nonces are rejected") {
        std::vector<EapolKeyMessage> msgs = {
            make_message(1, ap, client, 5, anonce, 0x00),
            make_message(2, ap, client, 5, anonce, 0x5c),
        };
        auto handshakes = assemble_handshakes(msgs, {});
        CHECK(handshakes.empty());
    }

    SUBCASE("ssid table fills in the network name") {
        std::vector<EapolKeyMessage> msgs = {
            make_message(1, ap, client, 5, anonce, 0x00),
            make_message(2, ap, client, 5, snonce, 0x5c),
        };
        std::map<MacAddress, Bytes> table;
        table[ap] = Bytes{'L', 'a', 'b'};
        auto handshakes = assemble_handshakes(msgs, table);
        REQUIRE(handshakes.size() == 1);
        CHECK(handshakes[0].ssid == Bytes{'L', 'a', 'b'});

        auto nameless = assemble_handshakes(msgs, {});
        REQUIRE(nameless.size() == 1);
        CHECK(nameless[0].ssid.empty());
    }
}

TEST_CASE("fixture round-trip preserves every field") {
    GeneratedHandshake gen = generate_handshake(lab_spec(true), 42);
    Bytes stored = store_fixture(gen.capture);
    HandshakeCapture loaded = load_fixture(stored);
    CHECK(loaded == gen.capture);

    CHECK(store_fixture(gen.capture) == stored); // byte-stable
    CHECK(store_fixture(loaded) == stored);
}

TEST_CASE("store_fixture validates what it is given") {
    GeneratedHandshake gen = generate_handshake(lab_spec(true), 42);

    HandshakeCapture bad_ssid = gen.capture;
    bad_ssid.ssid = Bytes{0xff, 0xfe};
    CHECK_THROWS_WITH_AS(store_fixture(bad_ssid),
                         "ssid is not valid UTF-8; cannot store as a fixture", ValidationError);

    HandshakeCapture long_ssid = gen.capture;
    long_ssid.ssid.assign(33, 'a');
    CHECK_THROWS_WITH_AS(store_fixture(long_ssid), "ssid must be at most 32 bytes (got 33)",
                         ValidationError);

    HandshakeCapture bad_version = gen.capture;
    bad_version.descriptor_version = 3;
    CHECK_THROWS_WITH_AS(store_fixture(bad_version), "descriptor_version must be 1 or 2",
                         ValidationError);
}

TEST_CASE("load_fixture names the field it rejects") {
    GeneratedHandshake gen = generate_handshake(lab_spec(true), 42);
    nlohmann::ordered_json good = nlohmann::ordered_json::parse(as_text(store_fixture(gen.capture)));

    auto load_doc = [](nlohmann::ordered_json doc) { return load_fixture(doc.dump()); };

    SUBCASE("not JSON at all") {
        CHECK_THROWS_AS(load_fixture(std::string_view("nonsense")), ValidationError);
        CHECK_THROWS_WITH_AS(load_fixture(std::string_view("[1, 2]")),
                             "fixture must be a JSON object", ValidationError);
    }

    SUBCASE("missing field") {
        nlohmann::ordered_json doc = good;
        doc.erase("snonce");
        CHECK_THROWS_WITH_AS(load_doc(doc), "missing field \"snonce\"", ValidationError);
    }

    SUBCASE("unknown field") {
        nlohmann::ordered_json doc = good;
        doc["extra"] = 1;
        CHECK_THROWS_WITH_AS(load_doc(doc), "unknown field \"extra\"", ValidationError);
    }

    SUBCASE("ill-typed field") {
        nlohmann::ordered_json doc = good;
        doc["anonce"] = 12;
        CHECK_THROWS_WITH_AS(load_doc(doc), "field \"anonce\" must be a hex string",
                             ValidationError);
    }

    SUBCASE("wrong length") {
        nlohmann::ordered_json doc = good;
        doc["anonce"] = "abcd";
        CHECK_THROWS_WITH_AS(load_doc(doc), "field \"anonce\" must be 32 bytes (got 2)",
                             ValidationError);
    }

    SUBCASE("bad mac address") {
        nlohmann::ordered_json doc = good;
        doc["ap_mac"] = "not-a-mac";
        CHECK_THROWS_WITH_AS(load_doc(doc), "field \"ap_mac\" must look like aa:bb:cc:dd:ee:ff",
                             ValidationError);
    }

    SUBCASE("descriptor version out of range") {
        nlohmann::ordered_json doc = good;
        doc["descriptor_version"] = 3;
        CHECK_THROWS_WITH_AS(load_doc(doc), "field \"descriptor_version\" must be 1 or 2",
                             ValidationError);
    }

    SUBCASE("crackability invariants") {
        nlohmann::ordered_json doc = good;
        doc["snonce"] = doc["anonce"];
        CHECK_THROWS_WITH_AS(load_doc(doc), "anonce equals snonce", ValidationError);

        doc = good;
        doc["mic"] = std::string(32, '0');
        CHECK_THROWS_WITH_AS(load_doc(doc), "mic is all zero", ValidationError);

        doc = good;
        doc["mic_frame"] = std::string(196, '0'); // 98 bytes: one short of a key frame
        CHECK_THROWS_WITH_AS(load_doc(doc),
                             "mic_frame too short for an EAPOL-Key frame (98 bytes)",
                             ValidationError);

        doc = good;
        std::string frame_hex = doc["mic_frame"].get<std::string>();
        frame_hex[81 * 2] = 'f';
        frame_hex[81 * 2 + 1] = 'f';
        doc["mic_frame"] = frame_hex;
        CHECK_THROWS_WITH_AS(load_doc(doc), "mic_frame MIC region is not zeroed",
                             ValidationError);
    }
}
