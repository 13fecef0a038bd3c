#include "specmerge/fft.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "specmerge/error.hpp"

namespace specmerge {

namespace {

Complex unit_root(std::uint64_t numerator, std::uint64_t denominator, double sign) {
  // exp(sign * 2 pi i * numerator / denominator)
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(numerator) /
                       static_cast<double>(denominator);
  return {std::cos(angle), sign * std::sin(angle)};
}

}  // namespace

struct Fft1d::Radix2 {
  std::size_t n;
  std::vector<std::size_t> bitrev;
  std::vector<Complex> twiddle;  // exp(-2 pi i k / n), k < n/2

  explicit Radix2(std::size_t size) : n(size), bitrev(size), twiddle(size / 2) {
    const int bits = std::countr_zero(size);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
      bitrev[i] = r;
    }
    for (std::size_t k = 0; k < n / 2; ++k) twiddle[k] = unit_root(k, n, -1.0);
  }

  void forward(std::span<Complex> a) const {
    for (std::size_t i = 0; i < n; ++i)
      if (i < bitrev[i]) std::swap(a[i], a[bitrev[i]]);
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t step = n / len;
      for (std::size_t start = 0; start < n; start += len) {
        for (std::size_t k = 0; k < half; ++k) {
          const Complex t = twiddle[k * step] * a[start + k + half];
          a[start + k + half] = a[start + k] - t;
          a[start + k] += t;
        }
      }
    }
  }
};

struct Fft1d::Bluestein {
  std::size_t n;
  std::size_t m;
  std::vector<Complex> chirp;        // exp(-i pi k^2 / n)
  std::vector<Complex> kernel_fft;   // FFT of the conjugate chirp, length m
  Radix2 inner;

  explicit Bluestein(std::size_t size)
      : n(size), m(std::bit_ceil(2 * size - 1)), chirp(size), kernel_fft(m), inner(m) {
    const std::uint64_t period = 2 * static_cast<std::uint64_t>(n);
    for (std::size_t k = 0; k < n; ++k) {
      // k^2 reduced mod 2n keeps the angle argument small and exact
      const std::uint64_t sq = (static_cast<std::uint64_t>(k) * k) % period;
      chirp[k] = unit_root(sq, period, -1.0);
    }
    kernel_fft[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) {
      kernel_fft[k] = std::conj(chirp[k]);
      kernel_fft[m - k] = std::conj(chirp[k]);
    }
    inner.forward(kernel_fft);
  }

  void forward(std::span<Complex> x) const {
    std::vector<Complex> work(m);
    for (std::size_t k = 0; k < n; ++k) work[k] = x[k] * chirp[k];
    inner.forward(work);
    for (std::size_t k = 0; k < m; ++k) work[k] = std::conj(work[k] * kernel_fft[k]);
    inner.forward(work);  // conj-forward-conj realizes the inverse
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) x[k] = std::conj(work[k]) * scale * chirp[k];
  }
};

Fft1d::Fft1d(std::size_t n) : n_(n) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "transform length must be >= 1");
  if (n == 1) return;
  if (std::has_single_bit(n)) {
    radix2_ = std::make_unique<Radix2>(n);
  } else {
    bluestein_ = std::make_unique<Bluestein>(n);
  }
}

Fft1d::~Fft1d() = default;
Fft1d::Fft1d(Fft1d&&) noexcept = default;
Fft1d& Fft1d::operator=(Fft1d&&) noexcept = default;

void Fft1d::forward(std::span<Complex> data) const {
  if (data.size() != n_) {
    throw Error(ErrorCode::dimension_mismatch, "buffer length " + std::to_string(data.size()) +
                                                   " != plan length " + std::to_string(n_));
  }
  if (radix2_) {
    radix2_->forward(data);
  } else if (bluestein_) {
    bluestein_->forward(data);
  }
}

void Fft1d::backward(std::span<Complex> data) const {
  for (auto& z : data) z = std::conj(z);
  forward(data);
  for (auto& z : data) z = std::conj(z);
}

namespace {

enum class Direction { forward, backward };

void transform_2d(Spectrum& s, Direction dir) {
  const std::size_t rows = s.rows();
  const std::size_t cols = s.cols();
  auto coeffs = s.coeffs();

  const Fft1d row_plan(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto line = coeffs.subspan(r * cols, cols);
    dir == Direction::forward ? row_plan.forward(line) : row_plan.backward(line);
  }

  const Fft1d col_plan(rows);
  std::vector<Complex> column(rows);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) column[r] = coeffs[r * cols + c];
    dir == Direction::forward ? col_plan.forward(column) : col_plan.backward(column);
    for (std::size_t r = 0; r < rows; ++r) coeffs[r * cols + c] = column[r];
  }
}

}  // namespace

Spectrum fft2d(const Image& img) {
  if (img.empty()) throw Error(ErrorCode::empty_input, "cannot transform an empty image");
  Spectrum s(img.rows(), img.cols());
  std::copy(img.pixels().begin(), img.pixels().end(), s.coeffs().begin());
  transform_2d(s, Direction::forward);
  return s;
}

Spectrum ifft2d_complex(const Spectrum& spec) {
  if (spec.size() == 0) throw Error(ErrorCode::empty_input, "cannot transform an empty spectrum");
  Spectrum s = spec;
  transform_2d(s, Direction::backward);
  const double scale = 1.0 / static_cast<double>(s.size());
  for (auto& z : s.coeffs()) z *= scale;
  return s;
}

InverseResult ifft2d(const Spectrum& spec) {
  const Spectrum s = ifft2d_complex(spec);
  InverseResult out{Image(s.rows(), s.cols()), 0.0};
  auto px = out.image.pixels();
  for (std::size_t i = 0; i < s.size(); ++i) {
    px[i] = s.coeffs()[i].real();
    out.imag_residue = std::max(out.imag_residue, std::abs(s.coeffs()[i].imag()));
  }
  return out;
}

namespace {

// I(u,v) = sum_x sum_y i(x,y) [cos(theta) + sign*j sin(theta)],
// theta = 2 pi (ux/R + vy/C)
Spectrum naive_sum(const Spectrum& input, double sign) {
  const std::size_t rows = input.rows();
  const std::size_t cols = input.cols();
  if (rows * cols > kNaiveDftMaxPixels) {
    throw Error(ErrorCode::size_guard, std::to_string(rows) + "x" + std::to_string(cols) +
                                           " exceeds naive DFT limit of " +
                                           std::to_string(kNaiveDftMaxPixels) + " pixels");
  }
  Spectrum out(rows, cols);
  for (std::size_t u = 0; u < rows; ++u) {
    for (std::size_t v = 0; v < cols; ++v) {
      Complex acc{0.0, 0.0};
      for (std::size_t x = 0; x < rows; ++x) {
        for (std::size_t y = 0; y < cols; ++y) {
          // reduce the phase to whole turns before scaling to radians
          const double turns = static_cast<double>((u * x) % rows) / rows +
                               static_cast<double>((v * y) % cols) / cols;
          const double theta = 2.0 * std::numbers::pi * turns;
          acc += input.at(x, y) * Complex(std::cos(theta), sign * std::sin(theta));
        }
      }
      out.at(u, v) = acc;
    }
  }
  return out;
}

}  // namespace

Spectrum naive_dft2d(const Spectrum& input) { return naive_sum(input, -1.0); }

Spectrum naive_dft2d(const Image& img) {
  Spectrum s(img.rows(), img.cols());
  std::copy(img.pixels().begin(), img.pixels().end(), s.coeffs().begin());
  return naive_sum(s, -1.0);
}

Spectrum naive_idft2d(const Spectrum& spec) {
  Spectrum out = naive_sum(spec, +1.0);
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto& z : out.coeffs()) z *= scale;
  return out;
}

}  // namespace specmerge
