#include "cli/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "specmerge/error.hpp"
#include "specmerge/pgm.hpp"
#include "specmerge/shift.hpp"

namespace specmerge::cli {

namespace fs = std::filesystem;

std::uint64_t seed_from_env() {
  if (const char* env = std::getenv("SPECMERGE_SEED")) {
    char* end = nullptr;
    const auto value = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return value;
  }
  return kDefaultSeed;
}

std::vector<Image> prepare_images(std::span<const RawImage> raws, NormalizeMode mode,
                                  AlignPolicy policy) {
  std::vector<Image> images;
  images.reserve(raws.size());
  for (const auto& raw : raws) images.push_back(normalize(raw, mode));
  return align(images, policy);
}

MergeSpec build_merge_spec(const Manifest& manifest) {
  std::vector<RawImage> raws;
  raws.reserve(manifest.layers.size());
  for (const auto& layer : manifest.layers) raws.push_back(load_image(layer.path));
  auto images = prepare_images(raws, manifest.normalize, manifest.align);

  MergeSpec spec;
  spec.normalize_coeffs = manifest.normalize_coeffs;
  spec.output_policy = manifest.output.policy;
  for (std::size_t k = 0; k < images.size(); ++k) {
    const auto& ml = manifest.layers[k];
    spec.layers.push_back(Layer{std::move(images[k]), ml.shift, ml.coefficient, ml.boundary});
  }
  return spec;
}

namespace {

double max_abs_diff(const Image& a, const Image& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.pixels()[i] - b.pixels()[i]));
  }
  return worst;
}

bool engines_should_agree(const MergeSpec& spec) {
  for (const auto& layer : spec.layers) {
    if (!layer.shift.is_zero() && layer.boundary != BoundaryMode::wrap) return false;
  }
  return true;
}

constexpr double kEngineTolerance = 1e-9;

}  // namespace

MergeOutcome cmd_merge(const Manifest& manifest, std::ostream& out) {
  const MergeSpec spec = build_merge_spec(manifest);

  std::vector<Engine> engines;
  if (manifest.engine != EngineChoice::frequency) engines.push_back(Engine::spatial);
  if (manifest.engine != EngineChoice::spatial) engines.push_back(Engine::frequency);

  MergeOutcome outcome;
  for (Engine engine : engines) {
    MergeResult result = merge(spec, engine);
    const fs::path path = output_path_for(manifest, engine);
    write_file(path, encode_pgm(quantize(result.image, manifest.output.maxval).image, true));
    out << engine_name(engine) << ": wrote " << path.string() << " (clamped "
        << std::setprecision(6) << result.clamped_fraction * 100.0 << "%";
    if (engine == Engine::frequency) out << ", imag residue " << result.imag_residue;
    out << ")\n";
    outcome.written.push_back(path);
    outcome.results.push_back(std::move(result));
  }

  if (outcome.results.size() == 2) {
    const double diff = max_abs_diff(outcome.results[0].raw, outcome.results[1].raw);
    outcome.max_abs_diff = diff;
    outcome.equivalence_expected = engines_should_agree(spec);
    out << "max |diff| spatial vs frequency: " << std::scientific << std::setprecision(3) << diff
        << std::defaultfloat << (diff < kEngineTolerance ? " (< 1e-9)" : "") << "\n";
    if (outcome.equivalence_expected && !(diff < kEngineTolerance)) {
      throw std::runtime_error("spatial and frequency engines disagree beyond 1e-9");
    }
  }
  return outcome;
}

void cmd_shift(const fs::path& in, Shift shift, const std::string& mode, const fs::path& out_path) {
  const RawImage raw = load_image(in);
  const Image img = normalize(raw, NormalizeMode::maxval);

  Image shifted;
  if (mode == "frequency") {
    shifted = frequency_shift(img, shift);
  } else if (mode.starts_with("spatial:")) {
    shifted = spatial_shift(img, shift, parse_boundary(mode.substr(8)));
  } else {
    throw Error(ErrorCode::invalid_argument,
                "unknown shift mode '" + mode +
                    "' (expected spatial:reflect, spatial:wrap, spatial:zero or frequency)");
  }
  write_file(out_path, encode_pgm(quantize(shifted, raw.maxval).image, true));
}

SpectrumReport cmd_spectrum(const fs::path& in, const fs::path& out_path, std::size_t top_k,
                            std::ostream& out) {
  const Image img = normalize(load_image(in), NormalizeMode::maxval);
  const Spectrum spec = fft2d(img);

  SpectrumReport report;
  report.log_magnitude = log_magnitude_centered(spec);
  write_file(out_path, encode_pgm(quantize(report.log_magnitude, 255).image, true));

  const auto fold = [](std::size_t k, std::size_t n) {
    const auto sk = static_cast<long long>(k);
    return 2 * k > n ? sk - static_cast<long long>(n) : sk;
  };
  for (const auto& peak : top_bins(spec, top_k)) {
    SpectrumBin bin;
    bin.peak = peak;
    bin.signed_u = fold(peak.u, spec.rows());
    bin.signed_v = fold(peak.v, spec.cols());
    bin.metrics = spectral_metrics(spec.rows(), spec.cols(),
                                   static_cast<std::size_t>(std::llabs(bin.signed_u)),
                                   static_cast<std::size_t>(std::llabs(bin.signed_v)));
    report.bins.push_back(bin);
  }

  out << "spectrum " << spec.rows() << "x" << spec.cols() << " -> " << out_path.string() << "\n";
  out << std::setprecision(6);
  for (const auto& bin : report.bins) {
    const auto& m = bin.metrics;
    out << "bin (" << bin.peak.u << ", " << bin.peak.v << ") signed (" << bin.signed_u << ", "
        << bin.signed_v << ") |I|=" << bin.peak.magnitude << " lambda_u=" << m.lambda_u
        << " lambda_v=" << m.lambda_v << " lambda_wf=" << m.lambda_wf << " omega_u=" << m.omega_u
        << " omega_v=" << m.omega_v << " omega_wf=" << m.omega_wf << " theta_wf=" << m.theta_wf
        << "\n";
  }
  return report;
}

}  // namespace specmerge::cli
