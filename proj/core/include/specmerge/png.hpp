#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "specmerge/image.hpp"

namespace specmerge {

// Grayscale PNG adapter. Not covered by the PGM bit-exactness guarantees.

bool looks_like_png(std::span<const std::uint8_t> bytes) noexcept;

/// 8-bit output for maxval <= 255 (samples rescaled if maxval != 255),
/// 16-bit otherwise.
std::vector<std::uint8_t> encode_png(const RawImage& img);

/// Accepts grayscale PNGs only; maxval becomes 2^bit_depth - 1.
RawImage decode_png(std::span<const std::uint8_t> bytes);

}  // namespace specmerge
