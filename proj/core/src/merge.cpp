#include "specmerge/merge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "specmerge/error.hpp"

namespace specmerge {

namespace {

// Below this many pixels per layer the thread start-up cost dominates.
constexpr std::size_t kParallelPixelThreshold = 128 * 128;

}  // namespace

std::string_view engine_name(Engine engine) noexcept {
  return engine == Engine::spatial ? "spatial" : "frequency";
}

Engine parse_engine(std::string_view name) {
  if (name == "spatial") return Engine::spatial;
  if (name == "frequency") return Engine::frequency;
  throw Error(ErrorCode::invalid_argument,
              "unknown engine '" + std::string(name) + "' (expected spatial or frequency)");
}

std::string_view policy_name(OutputPolicy policy) noexcept {
  return policy == OutputPolicy::clamp ? "clamp" : "rescale";
}

OutputPolicy parse_policy(std::string_view name) {
  if (name == "clamp") return OutputPolicy::clamp;
  if (name == "rescale") return OutputPolicy::rescale;
  throw Error(ErrorCode::invalid_argument,
              "unknown output policy '" + std::string(name) + "' (expected clamp or rescale)");
}

std::vector<double> effective_coefficients(const MergeSpec& spec) {
  if (spec.layers.empty()) throw Error(ErrorCode::empty_input, "merge needs at least one layer");
  const Image& first = spec.layers.front().image;
  if (first.empty()) throw Error(ErrorCode::empty_input, "layer 0 has no pixels");

  std::vector<double> coeffs;
  coeffs.reserve(spec.layers.size());
  for (std::size_t k = 0; k < spec.layers.size(); ++k) {
    const Layer& layer = spec.layers[k];
    if (!layer.image.same_shape(first)) {
      throw Error(ErrorCode::dimension_mismatch,
                  "layer " + std::to_string(k) + " is " + std::to_string(layer.image.rows()) + "x" +
                      std::to_string(layer.image.cols()) + ", layer 0 is " +
                      std::to_string(first.rows()) + "x" + std::to_string(first.cols()));
    }
    if (!std::isfinite(layer.coefficient) || layer.coefficient < 0.0) {
      throw Error(ErrorCode::invalid_coefficient,
                  "layer " + std::to_string(k) + " coefficient must be finite and >= 0");
    }
    if (!std::isfinite(layer.shift.sx) || !std::isfinite(layer.shift.sy)) {
      throw Error(ErrorCode::invalid_shift, "layer " + std::to_string(k) + " shift must be finite");
    }
    coeffs.push_back(layer.coefficient);
  }
  if (spec.normalize_coeffs) {
    const double total = std::accumulate(coeffs.begin(), coeffs.end(), 0.0);
    if (total <= 0.0) {
      throw Error(ErrorCode::invalid_coefficient, "coefficients sum to zero; cannot normalize");
    }
    for (auto& a : coeffs) a /= total;
  }
  return coeffs;
}

double apply_output_policy(Image& img, OutputPolicy policy) {
  if (img.empty()) return 0.0;
  auto px = img.pixels();
  if (policy == OutputPolicy::rescale) {
    const double peak = *std::max_element(px.begin(), px.end());
    if (peak > 1.0) {
      for (auto& p : px) p /= peak;
    }
  }
  std::size_t clamped = 0;
  for (auto& p : px) {
    if (p < 0.0 || p > 1.0) {
      p = std::clamp(p, 0.0, 1.0);
      ++clamped;
    }
  }
  return static_cast<double>(clamped) / static_cast<double>(px.size());
}

MergeResult merge_spatial(const MergeSpec& spec) {
  const auto coeffs = effective_coefficients(spec);
  const Image& first = spec.layers.front().image;

  Image acc(first.rows(), first.cols(), 0.0);
  auto sum = acc.pixels();
  for (std::size_t k = 0; k < spec.layers.size(); ++k) {
    const Layer& layer = spec.layers[k];
    const Image shifted = layer.shift.is_zero()
                              ? layer.image
                              : spatial_shift(layer.image, layer.shift, layer.boundary);
    const auto src = shifted.pixels();
    const double a = coeffs[k];
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += a * src[i];
  }

  MergeResult result;
  result.raw = acc;
  result.image = std::move(acc);
  result.clamped_fraction = apply_output_policy(result.image, spec.output_policy);
  return result;
}

Spectrum merged_spectrum(const MergeSpec& spec) {
  const auto coeffs = effective_coefficients(spec);
  const std::size_t n = spec.layers.size();
  const Image& first = spec.layers.front().image;

  std::vector<Spectrum> spectra(n);
  auto transform_layer = [&](std::size_t k) {
    Spectrum s = fft2d(spec.layers[k].image);
    apply_phase_ramp(s, spec.layers[k].shift);
    spectra[k] = std::move(s);
  };

  const std::size_t workers =
      first.size() >= kParallelPixelThreshold
          ? std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()))
          : 1;
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) transform_layer(k);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t k = w; k < n; k += workers) transform_layer(k);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  // fixed-order reduction keeps the result independent of thread timing
  Spectrum total(first.rows(), first.cols());
  auto acc = total.coeffs();
  for (std::size_t k = 0; k < n; ++k) {
    const auto src = spectra[k].coeffs();
    const double a = coeffs[k];
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += a * src[i];
  }
  return total;
}

MergeResult merge_frequency(const MergeSpec& spec) {
  auto inverse = ifft2d(merged_spectrum(spec));
  MergeResult result;
  result.raw = inverse.image;
  result.image = std::move(inverse.image);
  result.imag_residue = inverse.imag_residue;
  result.clamped_fraction = apply_output_policy(result.image, spec.output_policy);
  return result;
}

MergeResult merge(const MergeSpec& spec, Engine engine) {
  return engine == Engine::spatial ? merge_spatial(spec) : merge_frequency(spec);
}

double dc_of_merge(const MergeSpec& spec) {
  const auto coeffs = effective_coefficients(spec);
  double dc = 0.0;
  for (std::size_t k = 0; k < spec.layers.size(); ++k) {
    const auto px = spec.layers[k].image.pixels();
    dc += coeffs[k] * std::accumulate(px.begin(), px.end(), 0.0);
  }
  return dc;
}

RawImage render(const MergeSpec& spec, Engine engine, std::uint32_t maxval) {
  return quantize(merge(spec, engine).image, maxval).image;
}

}  // namespace specmerge
