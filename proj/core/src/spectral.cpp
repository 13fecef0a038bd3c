#include "specmerge/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "specmerge/error.hpp"

namespace specmerge {

SpectralMetrics spectral_metrics(std::size_t rows, std::size_t cols, std::size_t u, std::size_t v) {
  if (u >= rows || v >= cols) {
    throw Error(ErrorCode::bad_index, "bin (" + std::to_string(u) + ", " + std::to_string(v) +
                                          ") outside " + std::to_string(rows) + "x" +
                                          std::to_string(cols));
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double R = static_cast<double>(rows);
  const double C = static_cast<double>(cols);
  const double du = static_cast<double>(u);
  const double dv = static_cast<double>(v);

  SpectralMetrics m;
  m.lambda_u = u == 0 ? inf : C / du;
  m.lambda_v = v == 0 ? inf : R / dv;
  m.omega_u = du / C;
  m.omega_v = dv / R;
  if (u == 0 || v == 0) {
    m.lambda_wf = inf;
    m.omega_wf = 0.0;
  } else {
    m.lambda_wf = std::hypot(m.lambda_u, m.lambda_v);
    m.omega_wf = 1.0 / m.lambda_wf;
  }
  if (u == 0 && v == 0) {
    m.theta_wf = 0.0;
  } else {
    m.theta_wf = std::atan2(dv * C, du * R) * 180.0 / std::numbers::pi;
  }
  return m;
}

Image log_magnitude_centered(const Spectrum& spec) {
  const std::size_t rows = spec.rows();
  const std::size_t cols = spec.cols();
  Image out(rows, cols);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t u = 0; u < rows; ++u) {
    for (std::size_t v = 0; v < cols; ++v) {
      const double value = std::log1p(std::abs(spec.at(u, v)));
      out.at(centered_index(u, rows), centered_index(v, cols)) = value;
      lo = std::min(lo, value);
      hi = std::max(hi, value);
    }
  }
  const double range = hi - lo;
  for (auto& p : out.pixels()) p = range > 0.0 ? (p - lo) / range : 0.0;
  return out;
}

std::vector<SpectralPeak> top_bins(const Spectrum& spec, std::size_t k) {
  std::vector<SpectralPeak> peaks;
  peaks.reserve(spec.size());
  for (std::size_t u = 0; u < spec.rows(); ++u)
    for (std::size_t v = 0; v < spec.cols(); ++v) peaks.push_back({u, v, std::abs(spec.at(u, v))});
  k = std::min(k, peaks.size());
  std::partial_sort(peaks.begin(), peaks.begin() + static_cast<std::ptrdiff_t>(k), peaks.end(),
                    [](const SpectralPeak& a, const SpectralPeak& b) {
                      if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
                      return a.u != b.u ? a.u < b.u : a.v < b.v;
                    });
  peaks.resize(k);
  return peaks;
}

}  // namespace specmerge
