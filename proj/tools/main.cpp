#include "CLI11.hpp"

#include <chrono>
#include <csignal>
#include <iostream>

#include "cli/commands.hpp"
#include "cli/manifest.hpp"
#include "server/http_server.hpp"
#include "server/session.hpp"
#include "specmerge/error.hpp"
#include "specmerge/pgm.hpp"

namespace {

specmerge::server::TuneServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace specmerge;
  namespace fs = std::filesystem;

  CLI::App app{"specmerge: spatial and frequency-domain image merging"};
  app.require_subcommand(1);

  fs::path manifest_path;
  auto* merge = app.add_subcommand("merge", "Merge the layers listed in a YAML manifest");
  merge->add_option("--manifest", manifest_path, "Manifest file")->required();

  fs::path shift_in;
  fs::path shift_out;
  double sx = 0.0;
  double sy = 0.0;
  std::string shift_mode = "frequency";
  auto* shift = app.add_subcommand("shift", "Translate one image");
  shift->add_option("--in", shift_in, "Input PGM")->required();
  shift->add_option("--sx", sx, "Row displacement in pixels")->required();
  shift->add_option("--sy", sy, "Column displacement in pixels")->required();
  shift->add_option("--mode", shift_mode, "spatial:reflect|spatial:wrap|spatial:zero|frequency")
      ->check(CLI::IsMember({"spatial:reflect", "spatial:wrap", "spatial:zero", "frequency"}));
  shift->add_option("--out", shift_out, "Output PGM")->required();

  fs::path spectrum_in;
  fs::path spectrum_out;
  std::size_t top_k = 5;
  auto* spectrum = app.add_subcommand("spectrum", "Export a centered log-magnitude spectrum");
  spectrum->add_option("--in", spectrum_in, "Input PGM")->required();
  spectrum->add_option("--out", spectrum_out, "Output PGM")->required();
  spectrum->add_option("--top-k", top_k, "Number of strongest bins to describe");

  std::string demo_name;
  fs::path demo_outdir = "demo_out";
  auto* demo = app.add_subcommand("demo", "Generate and merge a bundled synthetic scene");
  demo->add_option("name", demo_name, "fig2 | fig3 | fig4")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig4"}));
  demo->add_option("--outdir", demo_outdir, "Output directory");

  std::vector<std::size_t> bench_sizes{64, 128};
  std::size_t bench_layers = 3;
  std::size_t bench_reps = 5;
  fs::path bench_report = "bench_report.json";
  auto* bench = app.add_subcommand("bench", "Time spatial vs frequency merging");
  bench->add_option("--sizes", bench_sizes, "Square image sizes, comma separated")->delimiter(',');
  bench->add_option("--layers", bench_layers, "Layers per merge");
  bench->add_option("--reps", bench_reps, "Repetitions per size (median reported)");
  bench->add_option("--report", bench_report, "JSON report path (empty to skip)");

  int port = 8080;
  std::string host = "127.0.0.1";
  fs::path root;
  int ttl_minutes = 30;
  auto* serve = app.add_subcommand("serve", "Run the interactive tuning server");
  serve->add_option("--port", port, "TCP port");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--root", root, "Static UI directory served at /");
  serve->add_option("--ttl-minutes", ttl_minutes, "Idle session lifetime");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*merge) {
      const auto outcome = cli::cmd_merge(cli::load_manifest(manifest_path), std::cout);
      (void)outcome;
    } else if (*shift) {
      cli::cmd_shift(shift_in, {sx, sy}, shift_mode, shift_out);
    } else if (*spectrum) {
      cli::cmd_spectrum(spectrum_in, spectrum_out, top_k, std::cout);
    } else if (*demo) {
      const auto report = cli::cmd_demo(demo_name, demo_outdir, cli::seed_from_env(), std::cout);
      if (!report.passed) {
        std::cerr << "error: demo " << demo_name << " failed its equivalence check\n";
        return 1;
      }
    } else if (*bench) {
      const auto report =
          cli::cmd_bench(bench_sizes, bench_layers, bench_reps, cli::seed_from_env(), std::cout);
      if (!bench_report.empty()) {
        const std::string json = cli::bench_report_json(report);
        write_file(bench_report, std::span(reinterpret_cast<const std::uint8_t*>(json.data()), json.size()));
      }
      for (const auto& row : report.rows) {
        if (!(row.max_abs_diff < 1e-9)) {
          std::cerr << "error: engines disagree at " << row.rows << "x" << row.cols << "\n";
          return 1;
        }
      }
    } else if (*serve) {
      server::SessionStore store{std::chrono::minutes(ttl_minutes)};
      server::TuneServer tune(store, root);
      g_server = &tune;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      std::cerr << "listening on http://" << host << ":" << port << "\n";
      if (!tune.listen(host, port)) {
        std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
        return 1;
      }
      g_server = nullptr;
    }
  } catch (const Error& e) {
    std::cerr << "error: [" << error_code_name(e.code()) << "] " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
