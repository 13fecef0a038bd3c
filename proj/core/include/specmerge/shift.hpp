#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "specmerge/fft.hpp"
#include "specmerge/image.hpp"

namespace specmerge {

/// Displacement in pixels: sx along rows, sy along columns. A shift s moves
/// content by -s, i.e. out(x, y) = in(x + sx, y + sy), in both domains.
struct Shift {
  double sx = 0.0;
  double sy = 0.0;

  bool is_integer() const noexcept;
  bool is_zero() const noexcept { return sx == 0.0 && sy == 0.0; }
  Shift operator-() const noexcept { return {-sx, -sy}; }
  friend Shift operator+(Shift a, Shift b) noexcept { return {a.sx + b.sx, a.sy + b.sy}; }
  friend bool operator==(const Shift&, const Shift&) = default;
};

/// How spatial_shift fills cells whose source index falls outside the image.
///   reflect  180-degree rotated pixel, img(R-1-x, C-1-y)
///   wrap     circular, img((x+sx) mod R, (y+sy) mod C)
///   zero     0
enum class BoundaryMode { reflect, wrap, zero };

std::string_view boundary_name(BoundaryMode mode) noexcept;
BoundaryMode parse_boundary(std::string_view name);

/// Integer index shift. Requires integral sx, sy with |sx| < R and |sy| < C.
Image spatial_shift(const Image& img, Shift shift, BoundaryMode mode);

/// Bin frequencies [0, 1, ..., floor((N-1)/2), -ceil((N-1)/2), ..., -1] / N.
std::vector<double> signed_freq_vector(std::size_t n);

/// Multiplies spec in place by exp(+j 2 pi (w_r(u) sx + w_c(v) sy)), the
/// ramp that realizes out(x, y) = in(x + sx, y + sy) circularly.
void apply_phase_ramp(Spectrum& spec, Shift shift);

/// Fourier-shift translation; subpixel shifts allowed, output not clamped.
Image frequency_shift(const Image& img, Shift shift);

}  // namespace specmerge
