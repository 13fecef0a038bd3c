#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "specmerge/fft.hpp"
#include "specmerge/image.hpp"
#include "specmerge/shift.hpp"

namespace specmerge {

/// One input of a merge. coefficient is the prominence coefficient: 0 makes
/// the layer transparent, values above 1 emphasize it.
struct Layer {
  Image image;
  Shift shift{};
  double coefficient = 1.0;
  BoundaryMode boundary = BoundaryMode::wrap;  // spatial engine only
};

enum class OutputPolicy { clamp, rescale };
enum class Engine { spatial, frequency };

std::string_view engine_name(Engine engine) noexcept;
Engine parse_engine(std::string_view name);
std::string_view policy_name(OutputPolicy policy) noexcept;
OutputPolicy parse_policy(std::string_view name);

struct MergeSpec {
  std::vector<Layer> layers;
  bool normalize_coeffs = false;  // use a_k / sum(a) instead of a_k
  OutputPolicy output_policy = OutputPolicy::clamp;
};

struct MergeResult {
  Image image;               // after output_policy, in [0,1]
  Image raw;                 // weighted sum before output_policy
  double imag_residue = 0;   // frequency engine only
  double clamped_fraction = 0;
};

/// Validates layer shapes and coefficients and returns the effective a_k.
std::vector<double> effective_coefficients(const MergeSpec& spec);

/// result(x,y) = sum_k a_k * spatial_shift(i_k, s_k, boundary_k)(x,y)
MergeResult merge_spatial(const MergeSpec& spec);

/// result = Re IFFT( sum_k a_k * ramp(s_k) * FFT(i_k) ). Per-layer transforms
/// may run on separate threads; the sum is always taken in layer order.
MergeResult merge_frequency(const MergeSpec& spec);

MergeResult merge(const MergeSpec& spec, Engine engine);

/// The merged spectrum itself, before the inverse transform.
Spectrum merged_spectrum(const MergeSpec& spec);

/// sum_k a_k * sum(i_k), i.e. coeff(0,0) of merged_spectrum.
double dc_of_merge(const MergeSpec& spec);

/// Output policy on its own: clamp to [0,1], or divide by max when
/// max > 1 and then clamp the remainder. Returns the clamped fraction.
double apply_output_policy(Image& img, OutputPolicy policy);

/// Merge and quantize; the bytes a caller writes out as the merged image.
RawImage render(const MergeSpec& spec, Engine engine, std::uint32_t maxval);

}  // namespace specmerge
