#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "config.hpp"
#include "gcs/integrator.hpp"
#include "gcs/trajectory_io.hpp"
#include "gcs/verify.hpp"

namespace gcs::cli {

namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::ofstream open_output(const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream f(path);
  if (!f) throw ConfigError(path.string() + ": cannot write output file");
  return f;
}

nlohmann::json run_json(const RunConfig& cfg) {
  nlohmann::json j = {{"source", cfg.source}, {"n", cfg.n}, {"reversal_check", cfg.reversal_check}};
  if (cfg.state) {
    j["initial"] = "explicit";
  } else {
    j["initial"] = "random";
    j["seed"] = cfg.seed;
    j["orbits"] = {{"S", cfg.angles_S}, {"T", cfg.angles_T}};
    j["sampling"] = {{"position_spread", cfg.sampling.position_spread},
                     {"momentum_spread", cfg.sampling.momentum_spread},
                     {"sep_min", cfg.sampling.sep_min}};
  }
  return j;
}

void print_drift_summary(std::ostream& out, const Trajectory& tr, const DriftReport& rep) {
  out << "steps: " << tr.accepted_steps << " accepted, " << tr.rejected_steps << " rejected; samples: "
      << tr.states.size() << "\n";
  out << std::setprecision(3) << std::scientific;
  for (std::size_t i = 0; i < rep.names.size(); ++i) {
    out << "  drift " << std::left << std::setw(6) << rep.names[i] << std::right << ' ' << rep.max_drift[i] << "\n";
  }
  if (rep.reversal_mismatch >= 0.0) out << "  time-reversal mismatch " << rep.reversal_mismatch << "\n";
  out << std::defaultfloat;
}

}  // namespace

int cmd_simulate(const fs::path& config, const std::optional<fs::path>& out_dir, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  State s0 = State(Vec::Zero(2), Vec::Zero(2), Vec::Zero(1), Vec::Zero(1));
  try {
    cfg = load_config(config);
    if (out_dir) cfg.out_dir = *out_dir;
    s0 = initial_state(cfg);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << config.string() << ": " << e.what() << "\n";
    return kExitUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  Trajectory tr;
  DriftReport rep;
  try {
    tr = integrate(s0, cfg.integrator);
    rep = drift_report(tr, cfg.reversal_check);
  } catch (const CollisionError& e) {
    err << "collision: " << e.what() << "\n";
    return kExitRuntimeAbort;
  } catch (const Error& e) {
    err << "integration aborted: " << e.what() << "\n";
    return kExitRuntimeAbort;
  }
  const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fs::path csv = cfg.out_dir / (cfg.prefix + ".csv");
  const fs::path meta = cfg.out_dir / (cfg.prefix + ".json");
  try {
    auto f = open_output(csv);
    write_trajectory_csv(f, tr);
    auto m = open_output(meta);
    m << trajectory_metadata(tr, rep, {{"run", run_json(cfg)}, {"runtime_s", runtime}, {"created", utc_timestamp()}})
             .dump(2)
      << "\n";
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  out << "wrote " << csv.string() << " and " << meta.string() << "\n";
  print_drift_summary(out, tr, rep);
  return kExitOk;
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  VerifyOptions opts;
  if (args.all) {
    opts.checks = check_names();
  } else {
    opts.checks = args.checks;
  }
  if (opts.checks.empty()) {
    err << "error: pass --all or --check NAME[,NAME...]\n";
    return kExitUsage;
  }
  for (const auto& name : opts.checks) {
    if (!is_check_name(name)) {
      err << "error: unknown check '" << name << "'; known:";
      for (const auto& k : check_names()) err << ' ' << k;
      err << "\n";
      return kExitUsage;
    }
  }
  if (args.seeds < 1) {
    err << "error: --seeds must be >= 1\n";
    return kExitUsage;
  }
  for (int n : args.n_list) {
    if (n < 2 || n > 12) {
      err << "error: --N entries must lie in [2, 12]\n";
      return kExitUsage;
    }
  }
  opts.n_list = args.n_list;
  opts.seeds.clear();
  for (int k = 0; k < args.seeds; ++k) opts.seeds.push_back(static_cast<std::uint64_t>(k));
  if (args.tol) {
    if (!(*args.tol >= 0.0)) {
      err << "error: --tol must be non-negative\n";
      return kExitUsage;
    }
    for (const auto& name : opts.checks) opts.tolerances[name] = *args.tol;
  }
  opts.threads = args.threads;

  const auto results = run_checks(opts);
  std::ofstream file;
  if (args.out_dir) {
    try {
      file = open_output(*args.out_dir / "verify.jsonl");
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  std::size_t failed = 0;
  for (const auto& r : results) {
    const std::string line = to_json(r).dump();
    out << line << "\n";
    if (file.is_open()) file << line << "\n";
    if (!r.pass) ++failed;
  }
  err << results.size() << " checks, " << failed << " failed\n";
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_scan(const fs::path& config, const std::optional<fs::path>& out_dir, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(config);
    if (out_dir) cfg.out_dir = *out_dir;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::size_t points = cfg.scan.empty() ? 0 : 1;
  for (const auto& axis : cfg.scan) points *= axis.values.size();
  if (points == 0) {
    err << "error: " << config.string() << ": scan grid is empty\n";
    return kExitUsage;
  }

  // Row-major enumeration: the last axis varies fastest.
  std::vector<std::vector<std::pair<std::string, double>>> grid(points);
  for (std::size_t p = 0; p < points; ++p) {
    std::size_t rest = p;
    for (auto axis = cfg.scan.rbegin(); axis != cfg.scan.rend(); ++axis) {
      grid[p].insert(grid[p].begin(), {axis->name, axis->values[rest % axis->values.size()]});
      rest /= axis->values.size();
    }
  }

  struct PointResult {
    bool ok = false;
    std::string message;
    long accepted = 0, rejected = 0;
    std::size_t samples = 0;
    DriftReport report;
    double runtime = 0.0;
  };
  std::vector<PointResult> results(points);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t p = next++; p < points; p = next++) {
      const auto t0 = std::chrono::steady_clock::now();
      PointResult& res = results[p];
      try {
        const RunConfig point_cfg = apply_scan_point(cfg, grid[p]);
        const Trajectory tr = integrate(initial_state(point_cfg), point_cfg.integrator);
        res.report = drift_report(tr, point_cfg.reversal_check);
        res.accepted = tr.accepted_steps;
        res.rejected = tr.rejected_steps;
        res.samples = tr.states.size();
        res.ok = true;
      } catch (const std::exception& e) {
        res.message = e.what();
      }
      res.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  unsigned threads = cfg.scan_threads ? cfg.scan_threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, points));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  const auto names = diagnostic_names(cfg.n);
  const fs::path csv = cfg.out_dir / (cfg.prefix + "_scan.csv");
  const fs::path meta = cfg.out_dir / (cfg.prefix + "_scan.json");
  std::size_t failures = 0;
  try {
    auto f = open_output(csv);
    f << "point";
    for (const auto& axis : cfg.scan) f << ',' << axis.name;
    f << ",status,accepted_steps,rejected_steps,samples";
    for (const auto& name : names) f << ",drift_" << name;
    f << ",worst_drift,reversal_mismatch,message\n";
    f << std::setprecision(17);
    nlohmann::json runtimes = nlohmann::json::array();
    for (std::size_t p = 0; p < points; ++p) {
      const auto& res = results[p];
      f << p;
      for (const auto& [name, value] : grid[p]) f << ',' << value;
      f << ',' << (res.ok ? "ok" : "failed") << ',' << res.accepted << ',' << res.rejected << ',' << res.samples;
      for (std::size_t i = 0; i < names.size(); ++i) {
        f << ',';
        if (res.ok) f << res.report.max_drift[i];
      }
      f << ',';
      if (res.ok) f << res.report.worst_drift;
      f << ',';
      if (res.ok && res.report.reversal_mismatch >= 0.0) f << res.report.reversal_mismatch;
      std::string msg = res.message;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '"', '\'');
      f << ',' << msg << '\n';
      if (!res.ok) ++failures;
      runtimes.push_back({{"point", p}, {"runtime_s", res.runtime}});
    }
    nlohmann::json axes = nlohmann::json::object();
    for (const auto& axis : cfg.scan) axes[axis.name] = axis.values;
    auto m = open_output(meta);
    m << nlohmann::json{{"run", run_json(cfg)},
                        {"integrator", config_to_json(cfg.integrator)},
                        {"grid", axes},
                        {"points", points},
                        {"failures", failures},
                        {"runtimes", runtimes},
                        {"created", utc_timestamp()}}
             .dump(2)
      << "\n";
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  out << "scan: " << points << " points, " << failures << " failed; wrote " << csv.string() << "\n";
  return failures == 0 ? kExitOk : kExitRuntimeAbort;
}

}  // namespace gcs::cli
