#include "specmerge/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specmerge/error.hpp"

namespace specmerge {

Image::Image(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), pixels_(rows * cols, fill) {}

Image::Image(std::size_t rows, std::size_t cols, std::vector<double> pixels)
    : rows_(rows), cols_(cols), pixels_(std::move(pixels)) {
  if (pixels_.size() != rows_ * cols_) {
    throw Error(ErrorCode::dimension_mismatch,
                "pixel count " + std::to_string(pixels_.size()) + " != " +
                    std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

Image normalize(const RawImage& raw, NormalizeMode mode) {
  std::vector<double> px(raw.samples.size());
  if (mode == NormalizeMode::maxval) {
    const double scale = static_cast<double>(raw.maxval);
    std::transform(raw.samples.begin(), raw.samples.end(), px.begin(),
                   [scale](std::uint32_t s) { return static_cast<double>(s) / scale; });
  } else if (!raw.samples.empty()) {
    const auto [lo, hi] = std::minmax_element(raw.samples.begin(), raw.samples.end());
    const double min = *lo;
    const double range = static_cast<double>(*hi) - min;
    if (range > 0.0) {
      std::transform(raw.samples.begin(), raw.samples.end(), px.begin(),
                     [min, range](std::uint32_t s) { return (s - min) / range; });
    }
  }
  return Image(raw.rows, raw.cols, std::move(px));
}

Quantized quantize(const Image& img, std::uint32_t maxval) {
  Quantized out;
  out.image.rows = img.rows();
  out.image.cols = img.cols();
  out.image.maxval = maxval;
  out.image.samples.reserve(img.size());
  const double scale = static_cast<double>(maxval);
  for (double p : img.pixels()) {
    if (p < 0.0 || p > 1.0 || std::isnan(p)) ++out.clamped;
    const double c = std::isnan(p) ? 0.0 : std::clamp(p, 0.0, 1.0);
    out.image.samples.push_back(static_cast<std::uint32_t>(std::floor(c * scale + 0.5)));
  }
  return out;
}

std::vector<Image> align(std::span<const Image> images, AlignPolicy policy) {
  if (images.empty()) throw Error(ErrorCode::empty_input, "no images to align");

  std::size_t rows = 0;
  std::size_t cols = 0;
  for (const auto& img : images) {
    rows = std::max(rows, img.rows());
    cols = std::max(cols, img.cols());
  }

  std::vector<Image> out;
  out.reserve(images.size());
  for (std::size_t k = 0; k < images.size(); ++k) {
    const Image& img = images[k];
    if (img.rows() == rows && img.cols() == cols) {
      out.push_back(img);
      continue;
    }
    if (policy == AlignPolicy::strict) {
      throw Error(ErrorCode::dimension_mismatch,
                  "image " + std::to_string(k) + " is " + std::to_string(img.rows()) + "x" +
                      std::to_string(img.cols()) + ", expected " + std::to_string(rows) + "x" +
                      std::to_string(cols));
    }
    Image padded(rows, cols, 0.0);
    for (std::size_t r = 0; r < img.rows(); ++r)
      for (std::size_t c = 0; c < img.cols(); ++c) padded.at(r, c) = img.at(r, c);
    out.push_back(std::move(padded));
  }
  return out;
}

}  // namespace specmerge
