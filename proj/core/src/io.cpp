#include "fbc/io.hpp"

#include "fbc/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace fbc {

namespace {

constexpr char kAer8Magic[4] = {'A', 'E', 'R', '8'};
constexpr char kCaptureMagic[4] = {'F', 'B', 'C', '1'};
constexpr size_t kFileHeaderBytes = 16;

std::vector<uint8_t> header_bytes(const char magic[4], uint16_t width,
                                  uint16_t height) {
    std::vector<uint8_t> h(kFileHeaderBytes, 0);
    std::memcpy(h.data(), magic, 4);
    h[4] = static_cast<uint8_t>(width);
    h[5] = static_cast<uint8_t>(width >> 8);
    h[6] = static_cast<uint8_t>(height);
    h[7] = static_cast<uint8_t>(height >> 8);
    return h;
}

uint16_t read_u16(const uint8_t* p) {
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void require_geometry(const ReadOptions& opts, const std::string& path) {
    if (!opts.width || !opts.height) {
        throw Error("sensor geometry required to read '" + path +
                    "' (pass width/height)");
    }
}

void finalize_stream(EventStream& stream, const ReadOptions& opts,
                     const std::string& path) {
    bool sorted = true;
    for (size_t i = 1; i < stream.events.size(); ++i) {
        if (stream.events[i].t < stream.events[i - 1].t) {
            sorted = false;
            if (opts.assume_sorted) {
                throw Error(path + ": ordering violation at event " +
                            std::to_string(i));
            }
            break;
        }
    }
    if (!sorted) {
        sort_events(stream.events);
    }
    for (size_t i = 0; i < stream.events.size(); ++i) {
        const Event& e = stream.events[i];
        if (e.x >= stream.width || e.y >= stream.height) {
            throw Error(path + ": event " + std::to_string(i) +
                        " outside sensor bounds");
        }
    }
}

EventStream read_aer8(const std::string& path, const ReadOptions& opts) {
    const std::vector<uint8_t> bytes = read_file(path);
    EventStream stream;
    size_t offset = 0;
    if (bytes.size() >= kFileHeaderBytes &&
        std::memcmp(bytes.data(), kAer8Magic, 4) == 0) {
        stream.width = read_u16(bytes.data() + 4);
        stream.height = read_u16(bytes.data() + 6);
        offset = kFileHeaderBytes;
    } else {
        require_geometry(opts, path);
        stream.width = *opts.width;
        stream.height = *opts.height;
    }
    const DecodeResult decoded =
        decode_packets(bytes.data() + offset, bytes.size() - offset);
    if (decoded.error) {
        throw Error(path + ": " + decoded.error->reason + " at offset " +
                    std::to_string(offset + decoded.error->offset));
    }
    stream.events.reserve(decoded.packets.size());
    for (size_t i = 0; i < decoded.packets.size(); ++i) {
        const Event* e = std::get_if<Event>(&decoded.packets[i]);
        if (!e) {
            throw Error(path + ": record " + std::to_string(i) +
                        " is not a plain event");
        }
        stream.events.push_back(*e);
    }
    finalize_stream(stream, opts, path);
    return stream;
}

EventStream read_csv(const std::string& path, const ReadOptions& opts) {
    require_geometry(opts, path);
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    EventStream stream;
    stream.width = *opts.width;
    stream.height = *opts.height;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1 && line.find_first_not_of("xytp, \r") == std::string::npos) {
            continue; // header row
        }
        unsigned long x, y, t, p;
        char c1, c2, c3;
        std::istringstream ls(line);
        if (!(ls >> x >> c1 >> y >> c2 >> t >> c3 >> p) || c1 != ',' ||
            c2 != ',' || c3 != ',' || p > 1) {
            throw Error(path + ": parse error at line " + std::to_string(line_no));
        }
        stream.events.push_back(Event{static_cast<uint16_t>(x),
                                      static_cast<uint16_t>(y),
                                      static_cast<uint32_t>(t),
                                      p ? Polarity::On : Polarity::Off});
    }
    finalize_stream(stream, opts, path);
    return stream;
}

// Ingestion adapter for dataset text exports: whitespace or comma separated
// columns, "xytp" or "txyp" order, seconds autodetected from fractional
// timestamps unless overridden.
EventStream read_txt(const std::string& path, const ReadOptions& opts) {
    require_geometry(opts, path);
    if (opts.columns != "xytp" && opts.columns != "txyp") {
        throw Error("unsupported column order '" + opts.columns + "'");
    }
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }

    struct Row {
        double x, y, t, p;
    };
    std::vector<Row> rows;
    bool fractional_t = false;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        for (char& ch : line) {
            if (ch == ',') ch = ' ';
        }
        std::istringstream ls(line);
        double a, b, c, d;
        if (!(ls >> a)) continue; // blank or comment-only line
        if (!(ls >> b >> c >> d)) {
            throw Error(path + ": parse error at line " + std::to_string(line_no));
        }
        Row row;
        if (opts.columns == "xytp") {
            row = {a, b, c, d};
        } else {
            row = {b, c, a, d};
        }
        if (row.t != std::floor(row.t)) fractional_t = true;
        rows.push_back(row);
    }

    bool seconds = false;
    switch (opts.time_unit) {
    case TimeUnit::Seconds: seconds = true; break;
    case TimeUnit::Micros: seconds = false; break;
    case TimeUnit::Auto: seconds = fractional_t; break;
    }

    EventStream stream;
    stream.width = *opts.width;
    stream.height = *opts.height;
    stream.events.reserve(rows.size());
    for (const Row& row : rows) {
        Event e;
        e.x = static_cast<uint16_t>(std::llround(row.x));
        e.y = static_cast<uint16_t>(std::llround(row.y));
        const double t_us = seconds ? row.t * 1e6 : row.t;
        e.t = static_cast<uint32_t>(std::llround(t_us));
        e.p = row.p > 0.5 ? Polarity::On : Polarity::Off;
        stream.events.push_back(e);
    }
    finalize_stream(stream, opts, path);
    return stream;
}

} // namespace

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return bytes;
}

void write_file(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot create '" + path + "'");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error("write failed for '" + path + "'");
    }
}

FileFormat format_from_path(const std::string& path) {
    const size_t dot = path.rfind('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "aer8") return FileFormat::Aer8;
    if (ext == "csv") return FileFormat::Csv;
    return FileFormat::Txt;
}

EventStream read_events(const std::string& path, FileFormat format,
                        const ReadOptions& opts) {
    switch (format) {
    case FileFormat::Aer8: return read_aer8(path, opts);
    case FileFormat::Csv: return read_csv(path, opts);
    case FileFormat::Txt: return read_txt(path, opts);
    }
    throw Error("unreachable");
}

void write_events(const EventStream& stream, const std::string& path,
                  FileFormat format) {
    if (format == FileFormat::Aer8) {
        std::vector<uint8_t> bytes = header_bytes(kAer8Magic, stream.width,
                                                  stream.height);
        bytes.reserve(bytes.size() + stream.events.size() * kPlainEventBytes);
        for (const Event& e : stream.events) {
            encode_packet(Packet{e}, bytes);
        }
        write_file(path, bytes);
        return;
    }
    if (format == FileFormat::Csv || format == FileFormat::Txt) {
        std::ostringstream out;
        out << "x,y,t,p\n";
        for (const Event& e : stream.events) {
            out << e.x << ',' << e.y << ',' << e.t << ','
                << (e.p == Polarity::On ? 1 : 0) << '\n';
        }
        const std::string s = out.str();
        write_file(path, std::vector<uint8_t>(s.begin(), s.end()));
        return;
    }
    throw Error("unreachable");
}

PacketCapture read_packets(const std::string& path) {
    const std::vector<uint8_t> bytes = read_file(path);
    if (bytes.size() < kFileHeaderBytes ||
        std::memcmp(bytes.data(), kCaptureMagic, 4) != 0) {
        throw Error(path + ": not a packet capture (bad magic)");
    }
    PacketCapture capture;
    capture.width = read_u16(bytes.data() + 4);
    capture.height = read_u16(bytes.data() + 6);
    DecodeResult decoded = decode_packets(bytes.data() + kFileHeaderBytes,
                                          bytes.size() - kFileHeaderBytes);
    if (decoded.error) {
        throw Error(path + ": " + decoded.error->reason + " at offset " +
                    std::to_string(kFileHeaderBytes + decoded.error->offset));
    }
    capture.packets = std::move(decoded.packets);
    return capture;
}

void write_packets(const std::vector<Packet>& packets, uint16_t width,
                   uint16_t height, const std::string& path) {
    std::vector<uint8_t> bytes = header_bytes(kCaptureMagic, width, height);
    for (const Packet& p : packets) {
        encode_packet(p, bytes);
    }
    write_file(path, bytes);
}

} // namespace fbc
