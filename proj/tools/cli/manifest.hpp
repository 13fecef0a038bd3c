#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "specmerge/image.hpp"
#include "specmerge/merge.hpp"
#include "specmerge/shift.hpp"

namespace specmerge::cli {

enum class EngineChoice { spatial, frequency, both };

struct ManifestLayer {
  std::filesystem::path path;
  double coefficient = 1.0;
  Shift shift{};
  BoundaryMode boundary = BoundaryMode::wrap;
};

struct ManifestOutput {
  std::filesystem::path path;
  OutputPolicy policy = OutputPolicy::clamp;
  std::uint32_t maxval = 255;
};

/// YAML merge recipe. Schema (unknown keys are rejected):
///
///   layers:                     # required, >= 1 entry
///     - path: a.pgm             # required; relative to the manifest file
///       coefficient: 1.0        # >= 0, default 1.0
///       shift: [0, 0]           # [sx, sy] in pixels, default [0, 0]
///       boundary: wrap          # reflect | wrap | zero, default wrap
///   normalize: maxval           # maxval | minmax
///   align: strict               # strict | pad_zero
///   engine: frequency           # spatial | frequency | both
///   normalize_coeffs: false
///   output:                     # required
///     path: merged.pgm          # required
///     policy: clamp             # clamp | rescale
///     maxval: 255               # 1..65535
struct Manifest {
  std::vector<ManifestLayer> layers;
  NormalizeMode normalize = NormalizeMode::maxval;
  AlignPolicy align = AlignPolicy::strict;
  EngineChoice engine = EngineChoice::frequency;
  bool normalize_coeffs = false;
  ManifestOutput output;
};

/// Relative paths are resolved against base_dir. Throws Error(manifest_error).
Manifest parse_manifest(std::string_view yaml_text, const std::filesystem::path& base_dir);
Manifest load_manifest(const std::filesystem::path& path);

/// Serializes with absolute paths, so the text can be parsed from anywhere.
std::string to_yaml(const Manifest& manifest);

std::string_view engine_choice_name(EngineChoice engine) noexcept;

/// Where engine output lands: output.path itself for a single engine;
/// "<stem>.spatial<ext>" and "<stem>.frequency<ext>" for engine=both.
std::filesystem::path output_path_for(const Manifest& manifest, Engine engine);

}  // namespace specmerge::cli
