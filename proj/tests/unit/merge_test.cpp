#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "specmerge/error.hpp"
#include "specmerge/merge.hpp"
#include "specmerge/random.hpp"

namespace specmerge {
namespace {

using testing::circular_shift_oracle;
using testing::max_abs_diff;
using testing::weighted_sum_oracle;

MergeSpec spec_of(std::vector<Image> images, std::vector<double> coeffs = {}) {
  MergeSpec spec;
  for (std::size_t k = 0; k < images.size(); ++k) {
    Layer layer;
    layer.image = std::move(images[k]);
    layer.coefficient = coeffs.empty() ? 1.0 : coeffs[k];
    spec.layers.push_back(std::move(layer));
  }
  return spec;
}

ErrorCode merge_error(const MergeSpec& spec, Engine engine) {
  try {
    merge(spec, engine);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "merge succeeded";
  return ErrorCode::invalid_argument;
}

// Five disjoint filled rectangles on a 16x16 canvas.
std::vector<Image> disjoint_objects(SeededRandom& rng) {
  std::vector<Image> out;
  for (std::size_t k = 0; k < 5; ++k) {
    Image img(16, 16);
    const std::size_t top = 3 * k;
    for (std::size_t r = top; r < top + 2; ++r)
      for (std::size_t c = k; c < k + 6; ++c) img.at(r, c) = rng.uniform(0.5, 1.0);
    out.push_back(std::move(img));
  }
  return out;
}

TEST(MergeSpatial, SingleUnitLayerIsIdentity) {
  SeededRandom rng(1);
  const Image img = rng.image(6, 5);
  EXPECT_EQ(merge_spatial(spec_of({img})).image, img);
}

TEST(MergeSpatial, DisjointSupportsSum) {
  const auto r = merge_spatial(spec_of({Image(1, 2, std::vector<double>{1, 0}),
                                        Image(1, 2, std::vector<double>{0, 1})}));
  EXPECT_EQ(r.image, Image(1, 2, 1.0));
  EXPECT_EQ(r.clamped_fraction, 0.0);
}

TEST(MergeSpatial, DisjointObjectsEqualPixelwiseSumExactly) {
  SeededRandom rng(2);
  const auto images = disjoint_objects(rng);
  const auto r = merge_spatial(spec_of(images));
  EXPECT_EQ(r.raw, weighted_sum_oracle(images, std::vector<double>(5, 1.0)));
  EXPECT_EQ(r.image, r.raw);
}

TEST(MergeSpatial, HonorsBoundaryModes) {
  SeededRandom rng(3);
  MergeSpec spec = spec_of({rng.image(6, 6), rng.image(6, 6)}, {0.5, 0.25});
  spec.layers[1].shift = {2, -1};
  spec.layers[1].boundary = BoundaryMode::zero;
  const Image expected = weighted_sum_oracle(
      {spec.layers[0].image, testing::bounded_shift_oracle(spec.layers[1].image, 2, -1, false)},
      {0.5, 0.25});
  EXPECT_LT(max_abs_diff(merge_spatial(spec).raw, expected), 1e-15);
}

TEST(MergeFrequency, SingleUnitLayerRoundTrips) {
  SeededRandom rng(4);
  const Image img = rng.image(7, 9);
  EXPECT_LT(max_abs_diff(merge_frequency(spec_of({img})).raw, img), 1e-10);
}

TEST(MergeFrequency, WeightedPair) {
  SeededRandom rng(5);
  const std::vector<Image> images{rng.image(8, 8), rng.image(8, 8)};
  const auto r = merge_frequency(spec_of(images, {0.9, 0.3}));
  EXPECT_LT(max_abs_diff(r.raw, weighted_sum_oracle(images, {0.9, 0.3})), 1e-9);
}

TEST(MergeFrequency, OverlappingContentMatchesSpatial) {
  SeededRandom rng(6);
  Image disk(16, 16);
  Image texture(16, 16);
  for (std::size_t r = 0; r < 16; ++r) {
    for (std::size_t c = 0; c < 16; ++c) {
      const double dr = r - 7.5;
      const double dc = c - 7.5;
      if (dr * dr + dc * dc < 36) disk.at(r, c) = 0.3;
      texture.at(r, c) = ((r + c) % 3 == 0) ? rng.uniform(0.6, 1.0) : 0.0;
    }
  }
  const MergeSpec spec = spec_of({disk, texture});
  EXPECT_LT(max_abs_diff(merge_frequency(spec).raw, merge_spatial(spec).raw), 1e-9);
}

MergeSpec random_shifted_spec(SeededRandom& rng, std::size_t R, std::size_t C, std::size_t n) {
  std::vector<Image> images;
  std::vector<double> coeffs;
  for (std::size_t k = 0; k < n; ++k) {
    images.push_back(rng.image(R, C));
    coeffs.push_back(rng.uniform(0.0, 2.0));
  }
  MergeSpec spec = spec_of(std::move(images), std::move(coeffs));
  for (auto& layer : spec.layers) {
    layer.shift = {static_cast<double>(rng.integer(1 - static_cast<long long>(R), R - 1)),
                   static_cast<double>(rng.integer(1 - static_cast<long long>(C), C - 1))};
  }
  return spec;
}

TEST(Engines, AgreeForIntegerShifts) {
  SeededRandom rng(7);
  for (auto [R, C] : {std::pair<std::size_t, std::size_t>{8, 8}, {13, 6}, {32, 32}, {130, 129}}) {
    const MergeSpec spec = random_shifted_spec(rng, R, C, 4);
    const Image oracle = [&] {
      std::vector<Image> shifted;
      std::vector<double> a;
      for (const auto& layer : spec.layers) {
        shifted.push_back(circular_shift_oracle(layer.image, static_cast<long long>(layer.shift.sx),
                                                static_cast<long long>(layer.shift.sy)));
        a.push_back(layer.coefficient);
      }
      return weighted_sum_oracle(shifted, a);
    }();
    const auto freq = merge_frequency(spec);
    const auto spat = merge_spatial(spec);
    EXPECT_LT(max_abs_diff(freq.raw, spat.raw), 1e-9) << R << "x" << C;
    EXPECT_LT(max_abs_diff(spat.raw, oracle), 1e-12);
    EXPECT_LT(freq.imag_residue, 1e-9);
  }
}

TEST(Engines, CoefficientLinearity) {
  SeededRandom rng(8);
  for (Engine engine : {Engine::spatial, Engine::frequency}) {
    MergeSpec spec = random_shifted_spec(rng, 10, 12, 3);
    const Image base = merge(spec, engine).raw;
    const double alpha = 2.75;
    for (auto& layer : spec.layers) layer.coefficient *= alpha;
    const Image scaled = merge(spec, engine).raw;
    Image expected = base;
    for (auto& p : expected.pixels()) p *= alpha;
    EXPECT_LT(max_abs_diff(scaled, expected), 1e-9);
  }
}

TEST(Engines, PermutationInvariance) {
  SeededRandom rng(9);
  for (Engine engine : {Engine::spatial, Engine::frequency}) {
    MergeSpec spec = random_shifted_spec(rng, 9, 9, 4);
    const Image forward = merge(spec, engine).raw;
    std::reverse(spec.layers.begin(), spec.layers.end());
    EXPECT_LT(max_abs_diff(merge(spec, engine).raw, forward), 1e-12);
  }
}

TEST(Engines, ZeroCoefficientIsTransparent) {
  SeededRandom rng(10);
  for (Engine engine : {Engine::spatial, Engine::frequency}) {
    MergeSpec spec = random_shifted_spec(rng, 11, 7, 3);
    spec.layers[1].coefficient = 0.0;
    const Image with = merge(spec, engine).raw;
    spec.layers.erase(spec.layers.begin() + 1);
    EXPECT_LT(max_abs_diff(merge(spec, engine).raw, with), 1e-12);
  }
}

TEST(Engines, ParallelPathIsDeterministic) {
  SeededRandom rng(11);
  const MergeSpec spec = random_shifted_spec(rng, 160, 144, 5);
  const auto a = merge_frequency(spec);
  const auto b = merge_frequency(spec);
  EXPECT_EQ(a.raw, b.raw);
  EXPECT_EQ(a.imag_residue, b.imag_residue);
}

TEST(DcOfMerge, ScaledConstant) {
  EXPECT_DOUBLE_EQ(dc_of_merge(spec_of({Image(2, 2, 1.0)}, {2.0})), 8.0);
}

TEST(DcOfMerge, AffineCombinationOfIdenticalImages) {
  SeededRandom rng(12);
  const Image img = rng.image(5, 5);
  double sum = 0.0;
  for (double p : img.pixels()) sum += p;
  EXPECT_NEAR(dc_of_merge(spec_of({img, img}, {0.5, 0.5})), sum, 1e-12);
}

TEST(DcOfMerge, MatchesMergedSpectrum) {
  SeededRandom rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const MergeSpec spec = random_shifted_spec(rng, 12, 10, 3);
    const double dc = dc_of_merge(spec);
    const Complex spectral_dc = merged_spectrum(spec).at(0, 0);
    EXPECT_LT(std::abs(spectral_dc - dc) / std::abs(dc), 1e-10);
  }
}

TEST(Coefficients, NormalizedToUnitSum) {
  MergeSpec spec = spec_of({Image(2, 2, 1.0), Image(2, 2, 1.0)}, {1.0, 3.0});
  spec.normalize_coeffs = true;
  EXPECT_EQ(effective_coefficients(spec), (std::vector<double>{0.25, 0.75}));
  const Image merged = merge_spatial(spec).raw;
  for (double p : merged.pixels()) EXPECT_DOUBLE_EQ(p, 1.0);
}

TEST(Coefficients, NormalizingZeroSumFails) {
  MergeSpec spec = spec_of({Image(2, 2, 1.0)}, {0.0});
  spec.normalize_coeffs = true;
  EXPECT_EQ(merge_error(spec, Engine::frequency), ErrorCode::invalid_coefficient);
}

TEST(Validation, NegativeCoefficient) {
  EXPECT_EQ(merge_error(spec_of({Image(2, 2)}, {-1.0}), Engine::spatial), ErrorCode::invalid_coefficient);
  EXPECT_EQ(merge_error(spec_of({Image(2, 2)}, {NAN}), Engine::frequency), ErrorCode::invalid_coefficient);
}

TEST(Validation, DimensionMismatch) {
  EXPECT_EQ(merge_error(spec_of({Image(2, 2), Image(2, 3)}), Engine::frequency),
            ErrorCode::dimension_mismatch);
}

TEST(Validation, EmptySpec) {
  EXPECT_EQ(merge_error(MergeSpec{}, Engine::spatial), ErrorCode::empty_input);
}

TEST(Validation, SubpixelShiftOnlyInFrequency) {
  SeededRandom rng(14);
  MergeSpec spec = spec_of({rng.image(8, 8)});
  spec.layers[0].shift = {0.5, 0};
  EXPECT_EQ(merge_error(spec, Engine::spatial), ErrorCode::invalid_shift);
  EXPECT_NO_THROW(merge(spec, Engine::frequency));
}

TEST(OutputPolicy, ClampReportsFraction) {
  const auto r = merge_spatial(spec_of({Image(1, 4, std::vector<double>{0.2, 0.6, 0.8, 0.9}),
                                        Image(1, 4, std::vector<double>{0.1, 0.6, 0.1, 0.3})}));
  EXPECT_NEAR(r.image.at(0, 0), 0.3, 1e-15);
  EXPECT_EQ(r.image.at(0, 1), 1.0);
  EXPECT_EQ(r.image.at(0, 3), 1.0);
  EXPECT_DOUBLE_EQ(r.clamped_fraction, 0.5);
}

TEST(OutputPolicy, RescaleDividesByPeak) {
  MergeSpec spec = spec_of({Image(1, 2, std::vector<double>{0.5, 1.0}),
                            Image(1, 2, std::vector<double>{0.5, 1.0})});
  spec.output_policy = OutputPolicy::rescale;
  const auto r = merge_spatial(spec);
  EXPECT_EQ(r.image, Image(1, 2, std::vector<double>{0.5, 1.0}));
  EXPECT_EQ(r.clamped_fraction, 0.0);
}

TEST(OutputPolicy, RescaleLeavesDimImagesAlone) {
  Image img(1, 2, std::vector<double>{0.25, 0.5});
  EXPECT_EQ(apply_output_policy(img, OutputPolicy::rescale), 0.0);
  EXPECT_EQ(img, Image(1, 2, std::vector<double>{0.25, 0.5}));
}

TEST(Render, QuantizesMergedImage) {
  const RawImage out = render(spec_of({Image(1, 2, std::vector<double>{0.5, 0.25})}, {2.0}),
                              Engine::spatial, 255);
  EXPECT_EQ(out.samples, (std::vector<std::uint32_t>{255, 128}));
}

TEST(Names, ParseRoundTrip) {
  for (Engine e : {Engine::spatial, Engine::frequency}) EXPECT_EQ(parse_engine(engine_name(e)), e);
  for (OutputPolicy p : {OutputPolicy::clamp, OutputPolicy::rescale})
    EXPECT_EQ(parse_policy(policy_name(p)), p);
  EXPECT_THROW(parse_engine("both"), Error);
}

}  // namespace
}  // namespace specmerge
