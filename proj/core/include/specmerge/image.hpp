#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace specmerge {

/// Grayscale R x C grid of real intensities, row-major.
class Image {
 public:
  Image() = default;
  Image(std::size_t rows, std::size_t cols, double fill = 0.0);
  Image(std::size_t rows, std::size_t cols, std::vector<double> pixels);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  double& at(std::size_t r, std::size_t c) { return pixels_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return pixels_[r * cols_ + c]; }

  std::span<double> pixels() noexcept { return pixels_; }
  std::span<const double> pixels() const noexcept { return pixels_; }

  bool same_shape(const Image& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> pixels_;
};

/// Codec-side integer samples in [0, maxval], before normalization.
struct RawImage {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint32_t maxval = 255;
  std::vector<std::uint32_t> samples;

  friend bool operator==(const RawImage&, const RawImage&) = default;
};

enum class NormalizeMode { maxval, minmax };
enum class AlignPolicy { strict, pad_zero };

/// Maps samples into [0,1]. A constant image under minmax maps to all zeros.
Image normalize(const RawImage& raw, NormalizeMode mode = NormalizeMode::maxval);

struct Quantized {
  RawImage image;
  std::size_t clamped = 0;  // pixels that fell outside [0,1]
};

/// sample = floor(clamp(pixel, 0, 1) * maxval + 0.5)
Quantized quantize(const Image& img, std::uint32_t maxval);

/// Strict: all dimensions must match. pad_zero: extend each image with zeros
/// at the bottom and right up to the largest rows and cols in the set.
std::vector<Image> align(std::span<const Image> images, AlignPolicy policy);

}  // namespace specmerge
