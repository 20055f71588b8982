#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "latglob/cli.hpp"
#include "latglob/errors.hpp"
#include "latglob/systems.hpp"

namespace {

using latglob::cli::Command;
using latglob::cli::RunConfig;

void add_common(CLI::App* sub, RunConfig& cfg, std::string& format, std::optional<std::int64_t>& h) {
  std::string keys;
  for (const auto& k : latglob::system_key_forms()) keys += (keys.empty() ? "" : ", ") + k;
  sub->add_option("--system", cfg.system_key, "system key: " + keys)->required();
  sub->add_option("--H", h, "box half-width; points in [-H, H)^d");
  sub->add_option("--H-list", cfg.h_list, "strictly increasing H values")->delimiter(',');
  sub->add_option("--eps", cfg.eps, "tail tolerance for predictions");
  sub->add_option("--alpha", cfg.alpha, "exponent for the H^alpha threshold (diagnose)");
  sub->add_option("--M", cfg.M, "prime threshold for the tail-union density (diagnose)");
  sub->add_option("--tol", cfg.tol, "absolute tolerance (compare)");
  sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", cfg.out_path, "output file (default stdout)");
  sub->add_option("--threads", cfg.threads, "worker threads (default LATGLOB_THREADS, then all cores)");
  sub->add_option("--which", cfg.which, "sweep quantity: mean, density or restricted")
      ->check(CLI::IsMember({"mean", "density", "restricted"}));
  sub->add_option("--max-points", cfg.max_points, "refuse boxes with more points than this");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local densities over Z^d: analytic predictions and exact box estimates"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "json";
  std::optional<std::int64_t> h;
  const std::pair<const char*, const char*> commands[] = {
      {"predict", "analytic mean, density of T and restricted mean with tail bounds"},
      {"estimate", "exact mean, density of T and restricted mean on one box"},
      {"compare", "predicted mean against exact box means; exit 3 outside --tol"},
      {"diagnose", "l_{A,H} maximum, per-prime occupancy and tail-union density"},
      {"counterexample", "oscillation/divergence tables for cex:A, cex:B, cex:C"},
      {"sweep", "one exact estimate per H"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), cfg, format, h);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : latglob::cli::kExitValidation;
  }

  cfg.command = *latglob::cli::parse_command(app.get_subcommands().front()->get_name());
  cfg.format = *latglob::cli::parse_format(format);
  cfg.H = h;

  latglob::cli::CommandOutput out;
  try {
    out = latglob::cli::run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return latglob::cli::exit_code_for(e);
  }

  const std::string text = latglob::cli::render(out, cfg.format);
  if (cfg.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write " << cfg.out_path << '\n';
      return latglob::cli::kExitValidation;
    }
    f << text;
  }
  return out.exit_code;
}
