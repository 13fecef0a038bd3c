#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/manifest.hpp"
#include "oracles.hpp"
#include "specmerge/error.hpp"
#include "specmerge/pgm.hpp"
#include "specmerge/random.hpp"

namespace specmerge::cli {
namespace {

namespace fs = std::filesystem;
using testing::max_abs_diff;

RawImage random_raw(SeededRandom& rng, std::size_t rows, std::size_t cols) {
  RawImage raw{rows, cols, 255, std::vector<std::uint32_t>(rows * cols)};
  for (auto& s : raw.samples) s = static_cast<std::uint32_t>(rng.integer(0, 127));
  return raw;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const fs::path& stderr_path) {
  const std::string cmd =
      std::string("\"") + SPECMERGE_CLI_PATH + "\" " + args + " 2> \"" + stderr_path.string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::fresh_temp_dir("cli");
    SeededRandom rng(99);
    a_ = random_raw(rng, 24, 20);
    b_ = random_raw(rng, 24, 20);
    write_file(dir_ / "a.pgm", encode_pgm(a_, true));
    write_file(dir_ / "b.pgm", encode_pgm(b_, false));
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path manifest(const std::string& body) {
    const fs::path p = dir_ / "manifest.yaml";
    write_text(p, body);
    return p;
  }

  fs::path dir_;
  RawImage a_;
  RawImage b_;
};

TEST_F(CliTest, BothEnginesWriteTwoFilesAndAgree) {
  const fs::path p = manifest(
      "layers:\n  - path: a.pgm\n  - path: b.pgm\n    shift: [5, -3]\nengine: both\n"
      "output:\n  path: out.pgm\n");
  std::ostringstream log;
  const auto outcome = cmd_merge(load_manifest(p), log);
  ASSERT_EQ(outcome.written.size(), 2u);
  EXPECT_TRUE(fs::exists(dir_ / "out.spatial.pgm"));
  EXPECT_TRUE(fs::exists(dir_ / "out.frequency.pgm"));
  ASSERT_TRUE(outcome.max_abs_diff.has_value());
  EXPECT_LT(*outcome.max_abs_diff, 1e-9);
  EXPECT_TRUE(outcome.equivalence_expected);
  EXPECT_NE(log.str().find("max |diff|"), std::string::npos);
  EXPECT_EQ(read_file(dir_ / "out.spatial.pgm"), read_file(dir_ / "out.frequency.pgm"));
}

TEST_F(CliTest, SingleLayerEqualsRequantizedInput) {
  const fs::path p = manifest("layers:\n  - path: a.pgm\noutput:\n  path: single.pgm\n");
  std::ostringstream log;
  cmd_merge(load_manifest(p), log);
  EXPECT_EQ(decode_pgm(read_file(dir_ / "single.pgm")), a_);
}

TEST_F(CliTest, WeightedMergeMatchesOracle) {
  const fs::path p = manifest(
      "layers:\n  - path: a.pgm\n    coefficient: 0.9\n  - path: b.pgm\n    coefficient: 0.3\n"
      "engine: frequency\noutput:\n  path: w.pgm\n  maxval: 65535\n");
  std::ostringstream log;
  const auto outcome = cmd_merge(load_manifest(p), log);
  const Image expected = testing::weighted_sum_oracle(
      {normalize(a_), normalize(b_)}, {0.9, 0.3});
  EXPECT_LT(max_abs_diff(outcome.results[0].raw, expected), 1e-9);
  const Image written = normalize(decode_pgm(read_file(dir_ / "w.pgm")));
  EXPECT_LT(max_abs_diff(written, expected), 0.5 / 65535 + 1e-12);
}

TEST_F(CliTest, MergeIsDeterministic) {
  const fs::path p = manifest(
      "layers:\n  - path: a.pgm\n    coefficient: 0.7\n  - path: b.pgm\n    shift: [1.5, 2]\n"
      "output:\n  path: det.pgm\n");
  std::ostringstream log;
  cmd_merge(load_manifest(p), log);
  const Bytes first = read_file(dir_ / "det.pgm");
  fs::remove(dir_ / "det.pgm");
  cmd_merge(load_manifest(p), log);
  EXPECT_EQ(read_file(dir_ / "det.pgm"), first);
}

TEST_F(CliTest, PadZeroAlignsMixedSizes) {
  SeededRandom rng(5);
  write_file(dir_ / "small.pgm", encode_pgm(random_raw(rng, 10, 8), true));
  const fs::path p = manifest(
      "layers:\n  - path: a.pgm\n  - path: small.pgm\nalign: pad_zero\noutput:\n  path: pad.pgm\n");
  std::ostringstream log;
  cmd_merge(load_manifest(p), log);
  const RawImage out = decode_pgm(read_file(dir_ / "pad.pgm"));
  EXPECT_EQ(out.rows, 24u);
  EXPECT_EQ(out.cols, 20u);
}

TEST_F(CliTest, StrictAlignRejectsMixedSizes) {
  SeededRandom rng(5);
  write_file(dir_ / "small.pgm", encode_pgm(random_raw(rng, 10, 8), true));
  const fs::path p = manifest("layers:\n  - path: a.pgm\n  - path: small.pgm\noutput:\n  path: x.pgm\n");
  std::ostringstream log;
  try {
    cmd_merge(load_manifest(p), log);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
}

TEST_F(CliTest, MissingLayerFileFailsWithNamedError) {
  const fs::path p = manifest("layers:\n  - path: nope.pgm\noutput:\n  path: x.pgm\n");
  const fs::path err = dir_ / "stderr.txt";
  EXPECT_NE(run_cli("merge --manifest \"" + p.string() + "\"", err), 0);
  EXPECT_NE(read_text(err).find("file not found"), std::string::npos) << read_text(err);
  EXPECT_FALSE(fs::exists(dir_ / "x.pgm"));
}

TEST_F(CliTest, BinaryMergeSucceeds) {
  const fs::path p = manifest(
      "layers:\n  - path: a.pgm\n  - path: b.pgm\nengine: both\noutput:\n  path: bin.pgm\n");
  EXPECT_EQ(run_cli("merge --manifest \"" + p.string() + "\" > /dev/null", dir_ / "stderr.txt"), 0);
  EXPECT_TRUE(fs::exists(dir_ / "bin.spatial.pgm"));
}

TEST_F(CliTest, CorruptInputReportsCodecError) {
  write_text(dir_ / "bad.pgm", "P2\n2 2\n255\n0 255 300 64");
  const fs::path p = manifest("layers:\n  - path: bad.pgm\noutput:\n  path: x.pgm\n");
  const fs::path err = dir_ / "stderr.txt";
  EXPECT_NE(run_cli("merge --manifest \"" + p.string() + "\"", err), 0);
  EXPECT_NE(read_text(err).find("sample out of range"), std::string::npos);
}

TEST_F(CliTest, ShiftZeroKeepsSamples) {
  for (const std::string mode : {"spatial:reflect", "spatial:wrap", "spatial:zero", "frequency"}) {
    cmd_shift(dir_ / "a.pgm", {0, 0}, mode, dir_ / "s.pgm");
    EXPECT_EQ(decode_pgm(read_file(dir_ / "s.pgm")), a_) << mode;
  }
}

TEST_F(CliTest, FrequencyShiftMovesDelta) {
  RawImage delta{8, 8, 255, std::vector<std::uint32_t>(64, 0)};
  delta.samples[2 * 8 + 3] = 255;
  write_file(dir_ / "delta.pgm", encode_pgm(delta, true));
  cmd_shift(dir_ / "delta.pgm", {3, -1}, "frequency", dir_ / "moved.pgm");
  const RawImage moved = decode_pgm(read_file(dir_ / "moved.pgm"));
  RawImage expected{8, 8, 255, std::vector<std::uint32_t>(64, 0)};
  expected.samples[7 * 8 + 4] = 255;
  EXPECT_EQ(moved, expected);
}

TEST_F(CliTest, SpatialShiftRejectsSubpixel) {
  try {
    cmd_shift(dir_ / "a.pgm", {0.5, 0}, "spatial:wrap", dir_ / "s.pgm");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_shift);
  }
  EXPECT_NE(run_cli("shift --in \"" + (dir_ / "a.pgm").string() +
                        "\" --sx 0.5 --sy 0 --mode spatial:zero --out \"" + (dir_ / "s.pgm").string() +
                        "\"",
                    dir_ / "stderr.txt"),
            0);
}

TEST_F(CliTest, SpectrumOfConstantIsCenteredDot) {
  write_file(dir_ / "flat.pgm", encode_pgm(RawImage{6, 10, 255, std::vector<std::uint32_t>(60, 90)}, true));
  std::ostringstream log;
  cmd_spectrum(dir_ / "flat.pgm", dir_ / "spec.pgm", 5, log);
  const RawImage out = decode_pgm(read_file(dir_ / "spec.pgm"));
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 10; ++c)
      EXPECT_EQ(out.samples[r * 10 + c], (r == 3 && c == 5) ? 255u : 0u);
}

TEST_F(CliTest, SpectrumOfStripesPeaksAtPlusMinusEight) {
  RawImage stripes{32, 64, 255, std::vector<std::uint32_t>(32 * 64)};
  for (std::size_t r = 0; r < 32; ++r)
    for (std::size_t c = 0; c < 64; ++c) stripes.samples[r * 64 + c] = (c % 8) < 4 ? 255 : 0;
  write_file(dir_ / "stripes.pgm", encode_pgm(stripes, true));

  // The fundamental of an 8-pixel square wave on 64 columns sits at v = 8.
  Image normalized = normalize(stripes);
  const Spectrum naive = naive_dft2d(Image(1, 64, std::vector<double>(normalized.pixels().begin(),
                                                                      normalized.pixels().begin() + 64)));
  double strongest = 0.0;
  std::size_t strongest_v = 0;
  for (std::size_t v = 1; v < 64; ++v) {
    if (std::abs(naive.at(0, v)) > strongest + 1e-9) {
      strongest = std::abs(naive.at(0, v));
      strongest_v = v;
    }
  }
  ASSERT_EQ(strongest_v, 8u);

  std::ostringstream log;
  const auto report = cmd_spectrum(dir_ / "stripes.pgm", dir_ / "spec.pgm", 3, log);
  ASSERT_EQ(report.bins.size(), 3u);
  EXPECT_EQ(report.bins[0].signed_u, 0);
  EXPECT_EQ(report.bins[0].signed_v, 0);
  EXPECT_EQ(report.bins[1].signed_u, 0);
  EXPECT_EQ(report.bins[1].signed_v, 8);
  EXPECT_EQ(report.bins[2].signed_u, 0);
  EXPECT_EQ(report.bins[2].signed_v, -8);
  EXPECT_DOUBLE_EQ(report.bins[1].metrics.lambda_v, 32.0 / 8.0);

  const Image& lm = report.log_magnitude;
  const std::size_t center_r = 16;
  const std::size_t center_c = 32;
  for (std::size_t c = 0; c < 64; ++c) {
    if (c == center_c || c == center_c + 8 || c == center_c - 8) continue;
    EXPECT_LT(lm.at(center_r, c), lm.at(center_r, center_c + 8) - 1e-6);
  }
  EXPECT_NEAR(lm.at(center_r, center_c - 8), lm.at(center_r, center_c + 8), 1e-12);
}

TEST_F(CliTest, SpectrumMetricsSatisfyReciprocity) {
  std::ostringstream log;
  const auto report = cmd_spectrum(dir_ / "a.pgm", dir_ / "spec.pgm", 12, log);
  EXPECT_EQ(report.bins.size(), 12u);
  for (const auto& bin : report.bins) {
    if (std::isfinite(bin.metrics.lambda_wf)) {
      EXPECT_NEAR(bin.metrics.omega_wf * bin.metrics.lambda_wf, 1.0, 1e-12);
    }
  }
  EXPECT_NE(log.str().find("lambda_wf"), std::string::npos);
}

TEST_F(CliTest, DemoFig2WritesInputsAndBothMerges) {
  std::ostringstream log;
  const auto report = cmd_demo("fig2", dir_ / "fig2", kDefaultSeed, log);
  EXPECT_TRUE(report.passed);
  EXPECT_EQ(report.written.size(), 7u);
  for (const auto& p : report.written) EXPECT_TRUE(fs::exists(p)) << p;
  EXPECT_LT(report.engine_max_abs_diff, 1e-9);
  EXPECT_EQ(report.inputs.size(), 5u);
  EXPECT_NE(log.str().find("1e-9"), std::string::npos);
}

TEST_F(CliTest, DemoFig2InputsAreDisjoint) {
  const auto inputs = demo_inputs_fig2(kDefaultSeed, 64);
  ASSERT_EQ(inputs.size(), 5u);
  for (std::size_t i = 0; i < inputs[0].size(); ++i) {
    int lit = 0;
    for (const auto& img : inputs) lit += img.pixels()[i] > 0.0;
    ASSERT_LE(lit, 1);
  }
}

TEST_F(CliTest, DemoFig3Smoke) {
  std::ostringstream log;
  const auto report = cmd_demo("fig3", dir_ / "fig3", kDefaultSeed, log);
  EXPECT_TRUE(report.passed);
  EXPECT_EQ(report.written.size(), 3u);
  EXPECT_TRUE(fs::exists(dir_ / "fig3" / "fig3_merged.pgm"));
}

TEST_F(CliTest, DemoFig4MatchesWeightedSums) {
  std::ostringstream log;
  const auto report = cmd_demo("fig4", dir_ / "fig4", kDefaultSeed, log);
  EXPECT_TRUE(report.passed);
  ASSERT_EQ(report.settings.size(), 4u);
  EXPECT_EQ(report.settings[3].coefficients, (std::vector<double>{0.2, 1.0}));
  for (const auto& s : report.settings) {
    EXPECT_TRUE(fs::exists(s.output));
    EXPECT_LT(s.max_abs_diff_vs_oracle, 1e-9);
  }
}

TEST_F(CliTest, DemoIsSeedDeterministic) {
  const auto a = demo_inputs_fig4(7, 32);
  const auto b = demo_inputs_fig4(7, 32);
  const auto c = demo_inputs_fig4(8, 32);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST_F(CliTest, BenchSingleSize) {
  const std::vector<std::size_t> sizes{64};
  std::ostringstream log;
  const auto report = cmd_bench(sizes, 2, 3, kDefaultSeed, log);
  ASSERT_EQ(report.rows.size(), 1u);
  EXPECT_EQ(report.rows[0].rows, 64u);
  EXPECT_EQ(report.rows[0].layers, 2u);
  EXPECT_LT(report.rows[0].max_abs_diff, 1e-9);
  const std::string json = bench_report_json(report);
  EXPECT_NE(json.find("\"max_abs_diff\""), std::string::npos);
  EXPECT_NE(json.find("\"spatial_ms\""), std::string::npos);
}

TEST_F(CliTest, BenchSingleLayer) {
  const std::vector<std::size_t> sizes{32};
  std::ostringstream log;
  const auto report = cmd_bench(sizes, 1, 2, kDefaultSeed, log);
  EXPECT_LT(report.rows[0].max_abs_diff, 1e-10);
}

TEST_F(CliTest, BenchBinaryWritesReport) {
  const fs::path report = dir_ / "bench.json";
  EXPECT_EQ(run_cli("bench --sizes 32,48 --layers 2 --reps 1 --report \"" + report.string() +
                        "\" > /dev/null",
                    dir_ / "stderr.txt"),
            0);
  const std::string json = read_text(report);
  EXPECT_NE(json.find("\"rows\""), std::string::npos);
}

TEST(Seed, EnvironmentOverride) {
  ::setenv("SPECMERGE_SEED", "12345", 1);
  EXPECT_EQ(seed_from_env(), 12345u);
  ::setenv("SPECMERGE_SEED", "junk", 1);
  EXPECT_EQ(seed_from_env(), kDefaultSeed);
  ::unsetenv("SPECMERGE_SEED");
  EXPECT_EQ(seed_from_env(), kDefaultSeed);
}

}  // namespace
}  // namespace specmerge::cli
