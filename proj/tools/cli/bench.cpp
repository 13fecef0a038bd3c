#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "cli/commands.hpp"
#include "specmerge/error.hpp"
#include "specmerge/random.hpp"

namespace specmerge::cli {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

template <typename Fn>
double time_ms(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

}  // namespace

BenchReport cmd_bench(std::span<const std::size_t> sizes, std::size_t layers, std::size_t reps,
                      std::uint64_t seed, std::ostream& out) {
  if (sizes.empty()) throw Error(ErrorCode::invalid_argument, "bench needs at least one size");
  if (layers == 0) throw Error(ErrorCode::invalid_argument, "bench needs at least one layer");
  if (reps == 0) throw Error(ErrorCode::invalid_argument, "bench needs at least one repetition");
  for (auto size : sizes) {
    if (size < 16) throw Error(ErrorCode::invalid_argument, "bench sizes must be >= 16");
  }

  BenchReport report;
  report.seed = seed;
  report.reps = reps;
  SeededRandom rng(seed);

  out << std::setw(6) << "R" << std::setw(6) << "C" << std::setw(4) << "n" << std::setw(14)
      << "spatial_ms" << std::setw(14) << "frequency_ms" << std::setw(14) << "max_abs_diff"
      << "\n";
  for (auto size : sizes) {
    MergeSpec spec;
    const auto limit = static_cast<long long>(size / 4);
    for (std::size_t k = 0; k < layers; ++k) {
      Layer layer;
      layer.image = rng.image(size, size);
      layer.coefficient = rng.uniform(0.2, 1.0);
      // first layer stays put so n=1 is a pure copy on the spatial path
      if (k > 0) {
        layer.shift = {static_cast<double>(rng.integer(-limit, limit)),
                       static_cast<double>(rng.integer(-limit, limit))};
      }
      layer.boundary = BoundaryMode::wrap;
      spec.layers.push_back(std::move(layer));
    }

    std::vector<double> spatial_ms;
    std::vector<double> frequency_ms;
    double diff = 0.0;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      MergeResult spatial;
      MergeResult frequency;
      spatial_ms.push_back(time_ms([&] { spatial = merge_spatial(spec); }));
      frequency_ms.push_back(time_ms([&] { frequency = merge_frequency(spec); }));
      for (std::size_t i = 0; i < spatial.raw.size(); ++i) {
        diff = std::max(diff, std::abs(spatial.raw.pixels()[i] - frequency.raw.pixels()[i]));
      }
    }

    BenchRow row{size, size, layers, median(spatial_ms), median(frequency_ms), diff};
    out << std::setw(6) << row.rows << std::setw(6) << row.cols << std::setw(4) << row.layers
        << std::fixed << std::setprecision(3) << std::setw(14) << row.spatial_ms << std::setw(14)
        << row.frequency_ms << std::scientific << std::setw(14) << row.max_abs_diff
        << std::defaultfloat << "\n";
    report.rows.push_back(row);
  }
  return report;
}

std::string bench_report_json(const BenchReport& report) {
  nlohmann::json j;
  j["seed"] = report.seed;
  j["reps"] = report.reps;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : report.rows) {
    j["rows"].push_back({{"R", row.rows},
                         {"C", row.cols},
                         {"n", row.layers},
                         {"spatial_ms", row.spatial_ms},
                         {"frequency_ms", row.frequency_ms},
                         {"max_abs_diff", row.max_abs_diff}});
  }
  return j.dump(2) + "\n";
}

}  // namespace specmerge::cli
