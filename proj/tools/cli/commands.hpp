#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cli/manifest.hpp"
#include "specmerge/image.hpp"
#include "specmerge/merge.hpp"
#include "specmerge/spectral.hpp"

namespace specmerge::cli {

inline constexpr std::uint64_t kDefaultSeed = 20130207;

/// SPECMERGE_SEED when set and parseable, otherwise kDefaultSeed.
std::uint64_t seed_from_env();

/// Normalizes then aligns decoded inputs, in input order.
std::vector<Image> prepare_images(std::span<const RawImage> raws, NormalizeMode mode,
                                  AlignPolicy policy);

/// Loads every layer of the manifest into a ready MergeSpec.
MergeSpec build_merge_spec(const Manifest& manifest);

struct MergeOutcome {
  std::vector<std::filesystem::path> written;
  std::optional<double> max_abs_diff;   // engine=both only, on pre-policy images
  bool equivalence_expected = false;    // both engines must agree for this manifest
  std::vector<MergeResult> results;     // in the order written
};

/// Writes the merged P5 image(s). engine=both prints "max |diff|" to out.
/// Throws Error when the engines were expected to agree and did not.
MergeOutcome cmd_merge(const Manifest& manifest, std::ostream& out);

/// mode: spatial:reflect | spatial:wrap | spatial:zero | frequency. The
/// output keeps the input maxval.
void cmd_shift(const std::filesystem::path& in, Shift shift, const std::string& mode,
               const std::filesystem::path& out_path);

struct SpectrumBin {
  SpectralPeak peak;
  long long signed_u = 0;  // bin index folded into (-R/2, R/2]
  long long signed_v = 0;
  SpectralMetrics metrics;  // evaluated at |signed_u|, |signed_v|
};

struct SpectrumReport {
  Image log_magnitude;
  std::vector<SpectrumBin> bins;
};

SpectrumReport cmd_spectrum(const std::filesystem::path& in, const std::filesystem::path& out_path,
                            std::size_t top_k, std::ostream& out);

struct DemoSetting {
  std::string label;
  std::vector<double> coefficients;
  std::filesystem::path output;
  double max_abs_diff_vs_oracle = 0;
};

struct DemoReport {
  std::string name;
  std::vector<Image> inputs;
  std::vector<std::filesystem::path> written;
  std::vector<DemoSetting> settings;
  double engine_max_abs_diff = 0;   // fig2: spatial vs frequency
  double oracle_max_abs_diff = 0;   // worst deviation from the direct weighted sum
  bool passed = true;
};

/// Synthetic input generators for the bundled demos.
std::vector<Image> demo_inputs_fig2(std::uint64_t seed, std::size_t size = 128);
std::vector<Image> demo_inputs_fig3(std::uint64_t seed, std::size_t size = 128);
std::vector<Image> demo_inputs_fig4(std::uint64_t seed, std::size_t size = 128);

DemoReport cmd_demo(const std::string& name, const std::filesystem::path& outdir,
                    std::uint64_t seed, std::ostream& out);

struct BenchRow {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t layers = 0;
  double spatial_ms = 0;
  double frequency_ms = 0;
  double max_abs_diff = 0;
};

struct BenchReport {
  std::uint64_t seed = 0;
  std::size_t reps = 0;
  std::vector<BenchRow> rows;
};

BenchReport cmd_bench(std::span<const std::size_t> sizes, std::size_t layers, std::size_t reps,
                      std::uint64_t seed, std::ostream& out);

std::string bench_report_json(const BenchReport& report);

}  // namespace specmerge::cli
