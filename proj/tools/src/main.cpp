#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "commands.hpp"

namespace {

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const int x = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    out.push_back(x);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gcs::cli;
  CLI::App app{"Two-spin Calogero-Sutherland system: simulation and identity checks"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;

  auto* simulate = app.add_subcommand("simulate", "Integrate one trajectory from a config file");
  simulate->add_option("--config", config, "YAML or JSON run config")->required();
  simulate->add_option("--out", out_dir, "Output directory (overrides output.dir)");

  VerifyArgs vargs;
  std::string checks;
  std::string n_list = "2,3,4,5";
  double tol = -1.0;
  auto* verify = app.add_subcommand("verify", "Run identity checks over random states (JSON lines)");
  verify->add_flag("--all", vargs.all, "Run every registered check");
  verify->add_option("--check", checks, "Comma-separated check names");
  verify->add_option("--N", n_list, "Comma-separated particle counts")->capture_default_str();
  verify->add_option("--seeds", vargs.seeds, "Seeds 0..K-1 per N")->capture_default_str();
  verify->add_option("--tol", tol, "Override the tolerance of the selected checks");
  verify->add_option("--out", out_dir, "Also write <DIR>/verify.jsonl");
  verify->add_option("--threads", vargs.threads, "Worker threads (0 = all cores)");

  auto* scan = app.add_subcommand("scan", "Run a parameter grid of trajectories");
  scan->add_option("--config", config, "YAML or JSON run config with a scan.grid block")->required();
  scan->add_option("--out", out_dir, "Output directory (overrides output.dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::optional<std::filesystem::path> out =
      out_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(out_dir);
  try {
    if (*simulate) return cmd_simulate(config, out, std::cout, std::cerr);
    if (*scan) return cmd_scan(config, out, std::cout, std::cerr);
    if (*verify) {
      try {
        vargs.n_list = parse_int_list(n_list);
      } catch (const std::exception&) {
        std::cerr << "error: --N expects a comma-separated list of integers\n";
        return kExitUsage;
      }
      std::stringstream ss(checks);
      for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) vargs.checks.push_back(item);
      }
      if (verify->count("--tol") > 0) vargs.tol = tol;
      vargs.out_dir = out;
      return cmd_verify(vargs, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeAbort;
  }
  return kExitUsage;
}
