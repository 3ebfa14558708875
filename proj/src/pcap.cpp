#include "wifiaudit/pcap.hpp"

#include <cstring>

#include "wifiaudit/errors.hpp"

namespace wifiaudit {

namespace {

std::uint32_t read_u32(const std::uint8_t* p, bool swapped) {
    std::uint32_t v;
    std::memcpy(&v, p, 4);
    if (swapped) {
        v = __builtin_bswap32(v);
    }
    return v;
}

void put_u16le(Bytes& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32le(Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 24));
}

} // namespace

PcapFile read_pcap(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 24) {
        throw FormatError("truncated pcap: global header needs 24 bytes, file has " +
                          std::to_string(bytes.size()));
    }

    std::uint32_t magic_native = read_u32(bytes.data(), false);
    bool swapped;
    if (magic_native == kPcapMagic) {
        swapped = false;
    } else if (magic_native == 0xd4c3b2a1) {
        swapped = true;
    } else {
        throw FormatError("unrecognized capture file magic 0x" +
                          to_hex(bytes.subspan(0, 4)));
    }

    PcapFile file;
    file.link_type = read_u32(bytes.data() + 20, swapped);

    std::size_t offset = 24;
    while (offset < bytes.size()) {
        if (bytes.size() - offset < 16) {
            throw FormatError("truncated pcap: record header at byte offset " +
                              std::to_string(offset));
        }
        PcapRecord rec;
        rec.ts_sec = read_u32(bytes.data() + offset, swapped);
        rec.ts_usec = read_u32(bytes.data() + offset + 4, swapped);
        std::uint32_t incl_len = read_u32(bytes.data() + offset + 8, swapped);
        offset += 16;
        if (bytes.size() - offset < incl_len) {
            throw FormatError("truncated pcap: record body at byte offset " +
                              std::to_string(offset) + " wants " + std::to_string(incl_len) +
                              " bytes, " + std::to_string(bytes.size() - offset) + " remain");
        }
        rec.data.assign(bytes.begin() + offset, bytes.begin() + offset + incl_len);
        offset += incl_len;
        file.records.push_back(std::move(rec));
    }
    return file;
}

Bytes write_pcap(const PcapFile& file) {
    Bytes out;
    put_u32le(out, kPcapMagic);
    put_u16le(out, 2);      // version major
    put_u16le(out, 4);      // version minor
    put_u32le(out, 0);      // thiszone
    put_u32le(out, 0);      // sigfigs
    put_u32le(out, 65535);  // snaplen
    put_u32le(out, file.link_type);
    for (const auto& rec : file.records) {
        put_u32le(out, rec.ts_sec);
        put_u32le(out, rec.ts_usec);
        put_u32le(out, static_cast<std::uint32_t>(rec.data.size()));
        put_u32le(out, static_cast<std::uint32_t>(rec.data.size()));
        out.insert(out.end(), rec.data.begin(), rec.data.end());
    }
    return out;
}

} // namespace wifiaudit
