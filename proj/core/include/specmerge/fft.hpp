#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "specmerge/image.hpp"

namespace specmerge {

using Complex = std::complex<double>;

/// R x C complex coefficients, coeff(u, v) at u*C + v, DC at (0, 0).
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), coeffs_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  Complex& at(std::size_t u, std::size_t v) { return coeffs_[u * cols_ + v]; }
  const Complex& at(std::size_t u, std::size_t v) const { return coeffs_[u * cols_ + v]; }

  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> coeffs_;
};

/// Exact-length 1-D transform of any size >= 1. Powers of two run an
/// iterative radix-2 kernel; other lengths go through Bluestein's chirp-z
/// identity on a power-of-two convolution. Twiddles are evaluated directly
/// from cos/sin, never by recurrence.
class Fft1d {
 public:
  explicit Fft1d(std::size_t n);
  ~Fft1d();
  Fft1d(Fft1d&&) noexcept;
  Fft1d& operator=(Fft1d&&) noexcept;

  std::size_t size() const noexcept { return n_; }

  /// X[k] = sum_j x[j] exp(-2 pi i jk/n), in place, unscaled.
  void forward(std::span<Complex> data) const;
  /// x[j] = sum_k X[k] exp(+2 pi i jk/n), in place, unscaled.
  void backward(std::span<Complex> data) const;

 private:
  struct Radix2;
  struct Bluestein;

  std::size_t n_;
  std::unique_ptr<Radix2> radix2_;
  std::unique_ptr<Bluestein> bluestein_;
};

/// Forward 2-D DFT, unscaled.
Spectrum fft2d(const Image& img);

struct InverseResult {
  Image image;               // real part
  double imag_residue = 0;   // max |imaginary part| that was dropped
};

/// Inverse 2-D DFT scaled by 1/(R*C).
InverseResult ifft2d(const Spectrum& spec);

/// Full complex inverse, scaled by 1/(R*C).
Spectrum ifft2d_complex(const Spectrum& spec);

/// Literal double-sum evaluation, O((RC)^2). Test oracle only; throws
/// size_guard when R*C > 4096.
Spectrum naive_dft2d(const Image& img);
Spectrum naive_dft2d(const Spectrum& input);
Spectrum naive_idft2d(const Spectrum& spec);

constexpr std::size_t kNaiveDftMaxPixels = 4096;

}  // namespace specmerge
