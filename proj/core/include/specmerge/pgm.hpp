#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "specmerge/image.hpp"

namespace specmerge {

using Bytes = std::vector<std::uint8_t>;

/// Decodes a P2 (ASCII) or P5 (binary) graymap. Header comments are accepted.
/// Throws Error with malformed_header, sample_out_of_range, truncated_payload
/// or malformed_payload.
RawImage decode_pgm(std::span<const std::uint8_t> bytes);

/// Canonical encoding: single newline separators, no comments. P5 uses one
/// byte per sample for maxval < 256, big-endian 16-bit otherwise.
Bytes encode_pgm(const RawImage& img, bool binary);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// PGM or PNG, sniffed by signature.
RawImage load_image(const std::filesystem::path& path);
RawImage decode_image(std::span<const std::uint8_t> bytes);

}  // namespace specmerge
