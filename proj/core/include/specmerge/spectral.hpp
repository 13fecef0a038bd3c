#pragma once

#include <cstddef>
#include <vector>

#include "specmerge/fft.hpp"
#include "specmerge/image.hpp"

namespace specmerge {

/// Plane-wave description of DFT bin (u, v) in an R x C image. Wavelengths
/// are in pixels, frequencies in cycles/pixel, theta_wf in degrees.
///
/// Bins on an axis have no finite wavelength along the other axis:
///   u = 0        lambda_u = +inf, omega_u = 0, theta_wf = 90
///   v = 0        lambda_v = +inf, omega_v = 0, theta_wf = 0
///   u = v = 0    every wavelength +inf, every omega 0, theta_wf = 0
/// lambda_wf is +inf (and omega_wf 0) whenever either component is infinite.
struct SpectralMetrics {
  double lambda_u = 0;
  double lambda_v = 0;
  double lambda_wf = 0;
  double omega_u = 0;
  double omega_v = 0;
  double omega_wf = 0;
  double theta_wf = 0;
};

/// Requires u < rows and v < cols.
SpectralMetrics spectral_metrics(std::size_t rows, std::size_t cols, std::size_t u, std::size_t v);

/// log(1 + |I(u,v)|), min-max rescaled to [0,1], quadrants swapped so DC
/// lands at (rows/2, cols/2). A flat magnitude plane maps to all zeros.
Image log_magnitude_centered(const Spectrum& spec);

/// Position of bin index k after the quadrant swap on an axis of length n.
constexpr std::size_t centered_index(std::size_t k, std::size_t n) { return (k + n / 2) % n; }

struct SpectralPeak {
  std::size_t u = 0;
  std::size_t v = 0;
  double magnitude = 0;
};

/// The k largest-magnitude bins; ties broken by (u, v) ascending.
std::vector<SpectralPeak> top_bins(const Spectrum& spec, std::size_t k);

}  // namespace specmerge
