#include "fbc/cascade.hpp"

#include "fbc/error.hpp"

#include <lzma.h>

#include <cstring>

namespace fbc {

namespace {

const uint8_t kMagic[4] = {'F', 'B', 'C', 'Z'};

} // namespace

bool is_cascade_archive(const uint8_t* data, size_t size) {
    return size >= 4 && std::memcmp(data, kMagic, 4) == 0;
}

std::vector<uint8_t> cascade_compress(const uint8_t* data, size_t size) {
    std::vector<uint8_t> out(kCascadeHeaderBytes);
    std::memcpy(out.data(), kMagic, 4);
    out[4] = kCascadeBackendLzma;
    for (int i = 0; i < 8; ++i) {
        out[5 + i] = static_cast<uint8_t>(static_cast<uint64_t>(size) >> (8 * i));
    }

    const size_t bound = lzma_stream_buffer_bound(size);
    out.resize(kCascadeHeaderBytes + bound);
    size_t out_pos = kCascadeHeaderBytes;
    const lzma_ret ret = lzma_easy_buffer_encode(
        9 | LZMA_PRESET_EXTREME, LZMA_CHECK_CRC64, nullptr, data, size,
        out.data(), &out_pos, out.size());
    if (ret != LZMA_OK) {
        throw Error("lzma encode failed (code " + std::to_string(ret) + ")");
    }
    out.resize(out_pos);
    return out;
}

std::vector<uint8_t> cascade_compress(const std::vector<uint8_t>& bytes) {
    return cascade_compress(bytes.data(), bytes.size());
}

std::vector<uint8_t> cascade_decompress(const uint8_t* data, size_t size) {
    if (size < kCascadeHeaderBytes) {
        throw Error("archive truncated at offset " + std::to_string(size));
    }
    if (std::memcmp(data, kMagic, 4) != 0) {
        throw Error("bad archive magic at offset 0");
    }
    if (data[4] != kCascadeBackendLzma) {
        throw Error("unknown cascade backend id " + std::to_string(data[4]));
    }
    uint64_t original_size = 0;
    for (int i = 0; i < 8; ++i) {
        original_size |= static_cast<uint64_t>(data[5 + i]) << (8 * i);
    }

    // One spare byte lets a payload longer than the recorded length be
    // caught by the out_pos check instead of silently truncated.
    std::vector<uint8_t> out(original_size + 1);
    uint64_t memlimit = UINT64_MAX;
    size_t in_pos = kCascadeHeaderBytes;
    size_t out_pos = 0;
    const lzma_ret ret = lzma_stream_buffer_decode(
        &memlimit, 0, nullptr, data, &in_pos, size, out.data(), &out_pos,
        out.size());
    if (ret != LZMA_OK || out_pos != original_size) {
        throw Error("corrupt archive payload at offset " + std::to_string(in_pos));
    }
    out.resize(original_size);
    return out;
}

std::vector<uint8_t> cascade_decompress(const std::vector<uint8_t>& archive) {
    return cascade_decompress(archive.data(), archive.size());
}

double cascaded_cr(uint64_t n_s, uint64_t archive_size_bytes) {
    if (archive_size_bytes == 0) {
        throw Error("archive size must be positive");
    }
    return static_cast<double>(n_s) * 8.0 / static_cast<double>(archive_size_bytes);
}

} // namespace fbc
