#pragma once

#include <cstdint>
#include <vector>

namespace fbc {

// .fbcz archive: 4-byte magic "FBCZ", 1-byte backend id, 8-byte little-endian
// original length, compressed payload.
inline constexpr uint8_t kCascadeBackendLzma = 1;
inline constexpr size_t kCascadeHeaderBytes = 13;

bool is_cascade_archive(const uint8_t* data, size_t size);

// Losslessly wraps the byte stream in an archive. Throws on backend failure.
std::vector<uint8_t> cascade_compress(const uint8_t* data, size_t size);
std::vector<uint8_t> cascade_compress(const std::vector<uint8_t>& bytes);

// Exact inverse; throws fbc::Error on bad magic, unknown backend, truncation,
// or corrupt payload.
std::vector<uint8_t> cascade_decompress(const uint8_t* data, size_t size);
std::vector<uint8_t> cascade_decompress(const std::vector<uint8_t>& archive);

// CR of the full cascade against the 8-byte-per-event original stream.
double cascaded_cr(uint64_t n_s, uint64_t archive_size_bytes);

} // namespace fbc
