#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace gcs::cli {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    const auto mark = node.Mark();
    std::ostringstream os;
    os << source_;
    if (mark.line >= 0) os << ':' << mark.line + 1 << ':' << mark.column + 1;
    os << ": " << msg;
    throw ConfigError(os.str());
  }

  void only_keys(const YAML::Node& map, const std::string& where, std::initializer_list<const char*> allowed) const {
    if (!map.IsMap()) fail(map, "'" + where + "' must be a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
        fail(kv.first, "unknown key '" + key + "' in " + where);
      }
    }
  }

  double number(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, "expected a number for " + what);
    try {
      const double x = node.as<double>();
      if (!std::isfinite(x)) fail(node, what + " must be finite");
      return x;
    } catch (const YAML::BadConversion&) {
      fail(node, "expected a number for " + what + ", got '" + node.Scalar() + "'");
    }
  }

  long long integer(const YAML::Node& node, const std::string& what) const {
    const double x = number(node, what);
    if (x != std::floor(x) || std::abs(x) > 9.0e15) fail(node, "expected an integer for " + what);
    return static_cast<long long>(x);
  }

  bool boolean(const YAML::Node& node, const std::string& what) const {
    try {
      return node.as<bool>();
    } catch (const YAML::BadConversion&) {
      fail(node, "expected true/false for " + what);
    }
  }

  std::string text(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, "expected a string for " + what);
    return node.Scalar();
  }

  std::vector<double> numbers(const YAML::Node& node, const std::string& what) const {
    if (!node.IsSequence()) fail(node, "expected a list of numbers for " + what);
    std::vector<double> out;
    for (const auto& x : node) out.push_back(number(x, what));
    return out;
  }

  Vec vector(const YAML::Node& node, const std::string& what) const {
    const auto v = numbers(node, what);
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
  }

 private:
  std::string source_;
};

void parse_integrator(const Reader& r, const YAML::Node& node, IntegratorConfig& ic) {
  r.only_keys(node, "integrator",
              {"method", "t_end", "dt", "tol", "probe_z", "sample_stride", "sep_min", "max_consecutive_rejections"});
  if (node["method"]) {
    try {
      ic.method = method_from_string(r.text(node["method"], "integrator.method"));
    } catch (const std::invalid_argument& e) {
      r.fail(node["method"], e.what());
    }
  }
  if (node["t_end"]) ic.t_end = r.number(node["t_end"], "integrator.t_end");
  if (node["dt"]) ic.dt = r.number(node["dt"], "integrator.dt");
  if (node["tol"]) ic.tol = r.number(node["tol"], "integrator.tol");
  if (node["probe_z"]) ic.probe_z = r.number(node["probe_z"], "integrator.probe_z");
  if (node["sample_stride"]) ic.sample_stride = static_cast<int>(r.integer(node["sample_stride"], "integrator.sample_stride"));
  if (node["sep_min"]) ic.sep_min = r.number(node["sep_min"], "integrator.sep_min");
  if (node["max_consecutive_rejections"]) {
    ic.max_consecutive_rejections =
        static_cast<int>(r.integer(node["max_consecutive_rejections"], "integrator.max_consecutive_rejections"));
  }
  try {
    ic.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(node, e.what());
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  const Reader r(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << source << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": " << e.msg;
    throw ConfigError(os.str());
  }
  if (!root.IsMap()) r.fail(root, "top level must be a mapping");
  r.only_keys(root, "config",
              {"n", "seed", "orbits", "sampling", "state", "integrator", "output", "reversal_check", "scan"});

  RunConfig cfg;
  cfg.source = source;
  if (!root["n"]) r.fail(root, "missing required key 'n'");
  const long long n = r.integer(root["n"], "n");
  if (n < 2 || n > 64) r.fail(root["n"], "n must lie in [2, 64]");
  cfg.n = static_cast<int>(n);
  if (root["seed"]) {
    const long long seed = r.integer(root["seed"], "seed");
    if (seed < 0) r.fail(root["seed"], "seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
  }

  cfg.angles_S.assign(static_cast<std::size_t>(cfg.n / 2), 1.0);
  cfg.angles_T.assign(static_cast<std::size_t>(cfg.n / 2), 0.5);
  if (const auto orbits = root["orbits"]) {
    r.only_keys(orbits, "orbits", {"S", "T"});
    for (const auto& [key, target] : {std::pair{"S", &cfg.angles_S}, std::pair{"T", &cfg.angles_T}}) {
      if (!orbits[key]) continue;
      *target = r.numbers(orbits[key], std::string("orbits.") + key);
      if (static_cast<int>(target->size()) != cfg.n / 2) {
        r.fail(orbits[key], std::string("orbits.") + key + " needs [n/2] = " + std::to_string(cfg.n / 2) + " angles");
      }
    }
  }

  if (const auto sampling = root["sampling"]) {
    r.only_keys(sampling, "sampling", {"position_spread", "momentum_spread", "sep_min", "max_redraws"});
    auto& so = cfg.sampling;
    if (sampling["position_spread"]) so.position_spread = r.number(sampling["position_spread"], "sampling.position_spread");
    if (sampling["momentum_spread"]) so.momentum_spread = r.number(sampling["momentum_spread"], "sampling.momentum_spread");
    if (sampling["sep_min"]) so.sep_min = r.number(sampling["sep_min"], "sampling.sep_min");
    if (sampling["max_redraws"]) so.max_redraws = static_cast<int>(r.integer(sampling["max_redraws"], "sampling.max_redraws"));
    if (!(so.position_spread > 0.0) || !(so.momentum_spread > 0.0)) r.fail(sampling, "spreads must be positive");
  }

  if (const auto st = root["state"]) {
    r.only_keys(st, "state", {"u", "v", "S_upper", "T_upper"});
    for (const char* key : {"u", "v", "S_upper", "T_upper"}) {
      if (!st[key]) r.fail(st, std::string("state needs '") + key + "'");
    }
    const Vec u = r.vector(st["u"], "state.u");
    const Vec v = r.vector(st["v"], "state.v");
    const Vec su = r.vector(st["S_upper"], "state.S_upper");
    const Vec tu = r.vector(st["T_upper"], "state.T_upper");
    if (u.size() != cfg.n || v.size() != cfg.n || su.size() != pair_count(cfg.n) || tu.size() != pair_count(cfg.n)) {
      r.fail(st, "state sizes do not match n = " + std::to_string(cfg.n) + " (u, v: n; S_upper, T_upper: n(n-1)/2)");
    }
    cfg.state = State(u, v, su, tu);
  }

  if (root["integrator"]) parse_integrator(r, root["integrator"], cfg.integrator);
  if (cfg.state) {
    const auto violations = validate_state(*cfg.state, cfg.integrator.sep_min);
    if (!violations.empty()) {
      std::string all;
      for (const auto& v : violations) all += (all.empty() ? "" : ", ") + v;
      r.fail(root["state"], "invalid state: " + all);
    }
  }

  if (const auto output = root["output"]) {
    r.only_keys(output, "output", {"dir", "prefix"});
    if (output["dir"]) cfg.out_dir = r.text(output["dir"], "output.dir");
    if (output["prefix"]) cfg.prefix = r.text(output["prefix"], "output.prefix");
  }
  if (root["reversal_check"]) cfg.reversal_check = r.boolean(root["reversal_check"], "reversal_check");

  if (const auto scan = root["scan"]) {
    r.only_keys(scan, "scan", {"grid", "threads"});
    if (scan["threads"]) cfg.scan_threads = static_cast<unsigned>(r.integer(scan["threads"], "scan.threads"));
    if (const auto grid = scan["grid"]) {
      if (grid.IsNull()) {
        // empty grid, rejected by the scan command
      } else {
        if (!grid.IsMap()) r.fail(grid, "scan.grid must be a mapping of axis -> list");
        for (const auto& kv : grid) {
          const auto name = kv.first.as<std::string>();
          const auto& known = scan_axis_names();
          if (std::find(known.begin(), known.end(), name) == known.end()) {
            r.fail(kv.first, "unknown scan axis '" + name + "'");
          }
          cfg.scan.push_back({name, r.numbers(kv.second, "scan.grid." + name)});
        }
      }
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

State initial_state(const RunConfig& cfg) {
  if (cfg.state) return *cfg.state;
  return random_state(OrbitSpec::canonical(cfg.n, cfg.angles_S), OrbitSpec::canonical(cfg.n, cfg.angles_T), cfg.seed,
                      cfg.sampling);
}

RunConfig apply_scan_point(const RunConfig& cfg, const std::vector<std::pair<std::string, double>>& point) {
  RunConfig out = cfg;
  for (const auto& [name, value] : point) {
    if (name == "tol") out.integrator.tol = value;
    else if (name == "dt") out.integrator.dt = value;
    else if (name == "t_end") out.integrator.t_end = value;
    else if (name == "seed") out.seed = static_cast<std::uint64_t>(value);
    else if (name == "momentum_spread") out.sampling.momentum_spread = value;
    else if (name == "angle_scale") {
      for (auto& a : out.angles_S) a *= value;
      for (auto& a : out.angles_T) a *= value;
      if (out.state) out.state = State(out.state->u(), out.state->v(), value * out.state->s_upper(), value * out.state->t_upper());
    }
  }
  return out;
}

}  // namespace gcs::cli
