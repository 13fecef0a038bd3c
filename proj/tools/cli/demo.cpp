#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "cli/commands.hpp"
#include "specmerge/error.hpp"
#include "specmerge/pgm.hpp"
#include "specmerge/random.hpp"

namespace specmerge::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kTolerance = 1e-9;

template <typename Inside>
void paint(Image& img, double value, Inside inside) {
  for (std::size_t r = 0; r < img.rows(); ++r)
    for (std::size_t c = 0; c < img.cols(); ++c)
      if (inside(static_cast<double>(r), static_cast<double>(c))) img.at(r, c) = value;
}

double max_abs_diff(const Image& a, const Image& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a.pixels()[i] - b.pixels()[i]));
  return worst;
}

Image weighted_sum(const std::vector<Image>& images, const std::vector<double>& coeffs) {
  Image sum(images.front().rows(), images.front().cols(), 0.0);
  for (std::size_t k = 0; k < images.size(); ++k)
    for (std::size_t i = 0; i < sum.size(); ++i)
      sum.pixels()[i] += coeffs[k] * images[k].pixels()[i];
  return sum;
}

MergeSpec spec_for(const std::vector<Image>& images, const std::vector<double>& coeffs) {
  MergeSpec spec;
  for (std::size_t k = 0; k < images.size(); ++k) spec.layers.push_back({images[k], {}, coeffs[k]});
  return spec;
}

void write_image(const fs::path& path, const Image& img, DemoReport& report) {
  write_file(path, encode_pgm(quantize(img, 255).image, true));
  report.written.push_back(path);
}

std::string coeff_label(const std::vector<double>& coeffs) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(1);
  for (std::size_t k = 0; k < coeffs.size(); ++k) s << (k ? "_" : "") << coeffs[k];
  return s.str();
}

}  // namespace

std::vector<Image> demo_inputs_fig2(std::uint64_t seed, std::size_t size) {
  SeededRandom rng(seed);
  const double s = static_cast<double>(size) / 128.0;
  std::vector<Image> images(5, Image(size, size, 0.0));

  // five objects with pairwise disjoint supports
  paint(images[0], rng.uniform(0.6, 1.0), [s](double r, double c) {
    return std::hypot(r - 32 * s, c - 32 * s) <= 18 * s;
  });
  paint(images[1], rng.uniform(0.6, 1.0), [s](double r, double c) {
    return r >= 20 * s && r < 44 * s && c >= 80 * s && c < 104 * s;
  });
  paint(images[2], rng.uniform(0.6, 1.0), [s](double r, double c) {
    // isosceles triangle, apex up
    const double top = 72 * s;
    const double bottom = 110 * s;
    const double half = (r - top) * 0.5;
    return r >= top && r <= bottom && std::abs(c - 30 * s) <= half;
  });
  paint(images[3], rng.uniform(0.6, 1.0), [s](double r, double c) {
    const double d = std::hypot(r - 92 * s, c - 92 * s);
    return d >= 12 * s && d <= 20 * s;
  });
  paint(images[4], rng.uniform(0.6, 1.0), [s](double r, double c) {
    const double dr = std::abs(r - 62 * s);
    const double dc = std::abs(c - 62 * s);
    return (dr <= 2 * s && dc <= 9 * s) || (dc <= 2 * s && dr <= 9 * s);
  });
  return images;
}

std::vector<Image> demo_inputs_fig3(std::uint64_t seed, std::size_t size) {
  SeededRandom rng(seed);
  const double s = static_cast<double>(size) / 128.0;
  Image disk(size, size, 0.0);
  const double radius = 42 * s;
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      const double d = std::hypot(r - 64 * s, c - 64 * s);
      if (d <= radius) disk.at(r, c) = 0.35 * (1.0 - 0.5 * d / radius);  // faded toward the rim
    }
  }

  // text-like texture: rows of small glyph cells built from random strokes
  Image text(size, size, 0.0);
  const std::size_t cell = std::max<std::size_t>(4, size / 16);
  for (std::size_t line = 0; line < 3; ++line) {
    const std::size_t top = size / 3 + line * (cell + 2);
    for (std::size_t g = 1; g + 1 < size / cell; ++g) {
      const std::size_t left = g * cell;
      for (std::size_t dr = 0; dr + 1 < cell; ++dr)
        for (std::size_t dc = 0; dc + 1 < cell; ++dc)
          if ((dr == 0 || dc == 0 || dr + 2 == cell || dc == cell / 2) && rng.uniform() < 0.6)
            if (top + dr < size && left + dc < size) text.at(top + dr, left + dc) = 0.9;
    }
  }
  return {disk, text};
}

std::vector<Image> demo_inputs_fig4(std::uint64_t seed, std::size_t size) {
  SeededRandom rng(seed);
  const double s = static_cast<double>(size) / 128.0;
  const double n = static_cast<double>(size);

  // radiograph-like: dim background, bright diagonal shaft with a dark crack
  Image bone(size, size);
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      const double x = static_cast<double>(r);
      const double y = static_cast<double>(c);
      double v = 0.1 + 0.1 * y / n;
      const double dist = std::abs(x - y) / std::numbers::sqrt2;
      if (dist <= 14 * s) v = 0.85 - 0.2 * dist / (14 * s);
      if (std::abs((x + y) - 128 * s) <= 1.5 * s && dist <= 14 * s) v = 0.15;
      bone.at(r, c) = v + 0.02 * rng.uniform();
    }
  }

  Image ripples(size, size);
  const double fr = rng.uniform(3.0, 5.0);
  const double fc = rng.uniform(5.0, 7.0);
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      const double phase =
          2.0 * std::numbers::pi * (fr * static_cast<double>(r) + fc * static_cast<double>(c)) / n;
      ripples.at(r, c) = 0.5 + 0.35 * std::sin(phase) + 0.1 * rng.uniform();
    }
  }
  return {bone, ripples};
}

DemoReport cmd_demo(const std::string& name, const fs::path& outdir, std::uint64_t seed,
                    std::ostream& out) {
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (!fs::is_directory(outdir)) throw Error(ErrorCode::io_error, "cannot create " + outdir.string());

  DemoReport report;
  report.name = name;

  if (name == "fig2") {
    report.inputs = demo_inputs_fig2(seed);
    for (std::size_t k = 0; k < report.inputs.size(); ++k)
      write_image(outdir / ("fig2_input_" + std::to_string(k + 1) + ".pgm"), report.inputs[k], report);

    const std::vector<double> ones(report.inputs.size(), 1.0);
    const MergeSpec spec = spec_for(report.inputs, ones);
    const MergeResult spatial = merge_spatial(spec);
    const MergeResult frequency = merge_frequency(spec);
    write_image(outdir / "fig2_merged_spatial.pgm", spatial.image, report);
    write_image(outdir / "fig2_merged_frequency.pgm", frequency.image, report);

    report.engine_max_abs_diff = max_abs_diff(spatial.raw, frequency.raw);
    report.oracle_max_abs_diff = max_abs_diff(spatial.raw, weighted_sum(report.inputs, ones));
    report.passed = report.engine_max_abs_diff < kTolerance && report.oracle_max_abs_diff == 0.0;
    out << "fig2: n=5 max |diff| spatial vs frequency = " << std::scientific
        << std::setprecision(3) << report.engine_max_abs_diff
        << (report.engine_max_abs_diff < kTolerance ? " (< 1e-9)" : " (FAILED: >= 1e-9)")
        << ", spatial vs direct sum = " << report.oracle_max_abs_diff << std::defaultfloat << "\n";
  } else if (name == "fig3") {
    report.inputs = demo_inputs_fig3(seed);
    write_image(outdir / "fig3_input_1.pgm", report.inputs[0], report);
    write_image(outdir / "fig3_input_2.pgm", report.inputs[1], report);
    const std::vector<double> coeffs{1.0, 1.0};
    const MergeResult merged = merge_frequency(spec_for(report.inputs, coeffs));
    write_image(outdir / "fig3_merged.pgm", merged.image, report);
    report.oracle_max_abs_diff = max_abs_diff(merged.raw, weighted_sum(report.inputs, coeffs));
    report.passed = report.oracle_max_abs_diff < kTolerance;
    report.settings.push_back({"1.0_1.0", coeffs, outdir / "fig3_merged.pgm", report.oracle_max_abs_diff});
    out << "fig3: merged faint disk + texture, imag residue " << std::scientific
        << std::setprecision(3) << merged.imag_residue << std::defaultfloat << "\n";
  } else if (name == "fig4") {
    report.inputs = demo_inputs_fig4(seed);
    write_image(outdir / "fig4_input_1.pgm", report.inputs[0], report);
    write_image(outdir / "fig4_input_2.pgm", report.inputs[1], report);
    const std::vector<std::vector<double>> grid{{1.0, 1.0}, {1.0, 0.5}, {0.5, 1.0}, {0.2, 1.0}};
    for (const auto& coeffs : grid) {
      const MergeResult merged = merge_frequency(spec_for(report.inputs, coeffs));
      DemoSetting setting;
      setting.label = coeff_label(coeffs);
      setting.coefficients = coeffs;
      setting.output = outdir / ("fig4_merged_" + setting.label + ".pgm");
      setting.max_abs_diff_vs_oracle = max_abs_diff(merged.raw, weighted_sum(report.inputs, coeffs));
      write_image(setting.output, merged.image, report);
      report.oracle_max_abs_diff = std::max(report.oracle_max_abs_diff, setting.max_abs_diff_vs_oracle);
      out << "fig4: a=(" << coeffs[0] << ", " << coeffs[1] << ") -> " << setting.output.string()
          << ", max |diff| vs weighted sum " << std::scientific << std::setprecision(3)
          << setting.max_abs_diff_vs_oracle << std::defaultfloat << "\n";
      report.settings.push_back(std::move(setting));
    }
    report.passed = report.oracle_max_abs_diff < kTolerance;
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown demo '" + name + "' (expected fig2, fig3 or fig4)");
  }
  return report;
}

}  // namespace specmerge::cli
