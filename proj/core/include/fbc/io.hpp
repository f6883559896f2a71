#pragma once

#include "fbc/events.hpp"
#include "fbc/wire.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fbc {

enum class FileFormat {
    Aer8, // 16-byte header + 8-byte tag-0 records
    Csv,  // x,y,t,p with t in us
    Txt,  // ingestion adapter: flexible column text exports
};

enum class TimeUnit { Auto, Seconds, Micros };

struct ReadOptions {
    // Required when the file carries no geometry (headerless aer8, csv, txt).
    std::optional<uint16_t> width;
    std::optional<uint16_t> height;
    // When set, out-of-order input is an error instead of being sorted.
    bool assume_sorted = false;
    // Txt adapter: column order ("xytp" or "txyp") and time unit.
    std::string columns = "xytp";
    TimeUnit time_unit = TimeUnit::Auto;
};

EventStream read_events(const std::string& path, FileFormat format,
                        const ReadOptions& opts = {});
void write_events(const EventStream& stream, const std::string& path,
                  FileFormat format);

// Picks Aer8 for .aer8, Csv for .csv, Txt otherwise.
FileFormat format_from_path(const std::string& path);

// .fbc packet capture: 16-byte header (magic "FBC1", width, height) followed
// by wire bytes.
struct PacketCapture {
    uint16_t width = 0;
    uint16_t height = 0;
    std::vector<Packet> packets;
};

PacketCapture read_packets(const std::string& path);
void write_packets(const std::vector<Packet>& packets, uint16_t width,
                   uint16_t height, const std::string& path);

std::vector<uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<uint8_t>& bytes);

} // namespace fbc
