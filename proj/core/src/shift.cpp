#include "specmerge/shift.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "specmerge/error.hpp"

namespace specmerge {

bool Shift::is_integer() const noexcept {
  return std::isfinite(sx) && std::isfinite(sy) && std::trunc(sx) == sx && std::trunc(sy) == sy;
}

std::string_view boundary_name(BoundaryMode mode) noexcept {
  switch (mode) {
    case BoundaryMode::reflect: return "reflect";
    case BoundaryMode::wrap: return "wrap";
    case BoundaryMode::zero: return "zero";
  }
  return "wrap";
}

BoundaryMode parse_boundary(std::string_view name) {
  if (name == "reflect") return BoundaryMode::reflect;
  if (name == "wrap") return BoundaryMode::wrap;
  if (name == "zero") return BoundaryMode::zero;
  throw Error(ErrorCode::invalid_argument,
              "unknown boundary mode '" + std::string(name) + "' (expected reflect, wrap or zero)");
}

Image spatial_shift(const Image& img, Shift shift, BoundaryMode mode) {
  if (!shift.is_integer()) {
    throw Error(ErrorCode::invalid_shift, "spatial shift requires integer displacements");
  }
  const auto rows = static_cast<long long>(img.rows());
  const auto cols = static_cast<long long>(img.cols());
  const auto sx = static_cast<long long>(shift.sx);
  const auto sy = static_cast<long long>(shift.sy);
  if (std::llabs(sx) >= rows || std::llabs(sy) >= cols) {
    throw Error(ErrorCode::invalid_shift, "shift (" + std::to_string(sx) + ", " +
                                              std::to_string(sy) + ") not smaller than " +
                                              std::to_string(rows) + "x" + std::to_string(cols));
  }

  Image out(img.rows(), img.cols());
  for (long long x = 0; x < rows; ++x) {
    for (long long y = 0; y < cols; ++y) {
      long long sr = x + sx;
      long long sc = y + sy;
      const bool inside = sr >= 0 && sr < rows && sc >= 0 && sc < cols;
      double value = 0.0;
      if (inside) {
        value = img.at(sr, sc);
      } else {
        switch (mode) {
          case BoundaryMode::reflect:
            value = img.at(rows - 1 - x, cols - 1 - y);
            break;
          case BoundaryMode::wrap:
            sr = ((sr % rows) + rows) % rows;
            sc = ((sc % cols) + cols) % cols;
            value = img.at(sr, sc);
            break;
          case BoundaryMode::zero:
            break;
        }
      }
      out.at(x, y) = value;
    }
  }
  return out;
}

std::vector<double> signed_freq_vector(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "frequency vector length must be >= 1");
  std::vector<double> w(n);
  const std::size_t positive = (n - 1) / 2;
  const double dn = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = k <= positive ? static_cast<double>(k) / dn
                         : (static_cast<double>(k) - dn) / dn;
  }
  return w;
}

void apply_phase_ramp(Spectrum& spec, Shift shift) {
  if (!std::isfinite(shift.sx) || !std::isfinite(shift.sy)) {
    throw Error(ErrorCode::invalid_shift, "shift must be finite");
  }
  if (shift.is_zero()) return;
  const auto wr = signed_freq_vector(spec.rows());
  const auto wc = signed_freq_vector(spec.cols());

  // The ramp separates into row and column factors.
  std::vector<Complex> row_factor(spec.rows());
  std::vector<Complex> col_factor(spec.cols());
  for (std::size_t u = 0; u < spec.rows(); ++u) {
    row_factor[u] = std::polar(1.0, 2.0 * std::numbers::pi * wr[u] * shift.sx);
  }
  for (std::size_t v = 0; v < spec.cols(); ++v) {
    col_factor[v] = std::polar(1.0, 2.0 * std::numbers::pi * wc[v] * shift.sy);
  }
  for (std::size_t u = 0; u < spec.rows(); ++u)
    for (std::size_t v = 0; v < spec.cols(); ++v) spec.at(u, v) *= row_factor[u] * col_factor[v];
}

Image frequency_shift(const Image& img, Shift shift) {
  Spectrum spec = fft2d(img);
  apply_phase_ramp(spec, shift);
  return ifft2d(spec).image;
}

}  // namespace specmerge
