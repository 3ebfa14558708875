#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wifiaudit/bytes.hpp"

namespace wifiaudit {

// Classic pcap only (magic 0xa1b2c3d4, either byte order). pcapng is not
// supported.
inline constexpr std::uint32_t kPcapMagic = 0xa1b2c3d4;
inline constexpr std::uint32_t kLinkTypeIeee80211 = 105;
inline constexpr std::uint32_t kLinkTypeRadiotap = 127;

struct PcapRecord {
    std::uint32_t ts_sec = 0;
    std::uint32_t ts_usec = 0;
    Bytes data;

    bool operator==(const PcapRecord&) const = default;
};

struct PcapFile {
    std::uint32_t link_type = kLinkTypeIeee80211;
    std::vector<PcapRecord> records;
};

/// Throws FormatError on unrecognized magic or truncation (the message
/// carries the byte offset of the truncated record).
PcapFile read_pcap(std::span<const std::uint8_t> bytes);

/// Little-endian classic pcap, snaplen 65535.
Bytes write_pcap(const PcapFile& file);

} // namespace wifiaudit
