#include "gcs/integrator.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "gcs/dynamics.hpp"
#include "gcs/lax.hpp"

namespace gcs {

std::string to_string(Method m) {
  return m == Method::kFixedRk4 ? "fixed-rk4" : "adaptive-embedded";
}

Method method_from_string(const std::string& name) {
  if (name == "rk4" || name == "fixed-rk4") return Method::kFixedRk4;
  if (name == "adaptive" || name == "adaptive-embedded" || name == "dopri5") {
    return Method::kAdaptiveDormandPrince;
  }
  throw std::invalid_argument("unknown integrator method '" + name + "'");
}

void IntegratorConfig::validate() const {
  if (!(t_end > 0.0)) throw std::invalid_argument("integrator: t_end must be positive");
  if (method == Method::kFixedRk4 && !(dt > 0.0)) throw std::invalid_argument("integrator: dt must be positive");
  if (method == Method::kAdaptiveDormandPrince && !(tol > 1e-15 && tol < 1e-3)) {
    throw std::invalid_argument("integrator: tol must lie in (1e-15, 1e-3)");
  }
  if (sample_stride < 1) throw std::invalid_argument("integrator: sample_stride must be >= 1");
  if (max_consecutive_rejections < 1) {
    throw std::invalid_argument("integrator: max_consecutive_rejections must be >= 1");
  }
}

std::vector<std::string> diagnostic_names(int n) {
  std::vector<std::string> names{"H"};
  for (int k = 2; k <= n; ++k) names.push_back("trL" + std::to_string(k));
  for (int m = 1; m <= n / 2; ++m) names.push_back("trT" + std::to_string(2 * m));
  for (int m = 1; m <= n / 2; ++m) names.push_back("trS" + std::to_string(2 * m));
  return names;
}

Diagnostics diagnose(const State& s, double probe_z) {
  const int n = s.n();
  Diagnostics d;
  const PairTable pt(s);

  double h_scale = 0.5 * s.v().squaredNorm();
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const double a = s.s(j, k);
      const double b = s.t(j, k);
      h_scale += (a * a + b * b) * pt.inv_sinh2(j, k) + 2.0 * std::abs(a * b) * pt.cosh_over_sinh2(j, k);
    }
  }
  d.values.push_back(hamiltonian(s));
  d.scales.push_back(h_scale);

  const Mat L = lax_L(s, probe_z);
  const double l_norm = L.norm();
  Mat p = L;
  for (int k = 2; k <= n; ++k) {
    p = p * L;
    d.values.push_back(p.trace());
    d.scales.push_back(std::pow(l_norm, k));
  }
  for (const Mat& spin : {s.T(), s.S()}) {
    const Mat sq = spin * spin;
    const double norm = spin.norm();
    Mat q = sq;
    for (int m = 1; m <= n / 2; ++m) {
      if (m > 1) q = q * sq;
      d.values.push_back(q.trace());
      d.scales.push_back(std::pow(norm, 2 * m));
    }
  }
  return d;
}

State time_reversed(const State& s) { return State(s.u(), -s.v(), -s.s_upper(), -s.t_upper()); }

double relative_drift(double value, double initial, double initial_scale) {
  const double denom = std::max({std::abs(initial), kDriftScaleFloor * initial_scale,
                                 std::numeric_limits<double>::min()});
  return std::abs(value - initial) / denom;
}

double DriftReport::drift(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::out_of_range("no diagnostic named '" + name + "'");
  return max_drift[static_cast<std::size_t>(it - names.begin())];
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// Fifth-order weights minus embedded fourth-order weights.
constexpr std::array<double, 7> kE{71.0 / 57600,      0.0, -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

class VectorField {
 public:
  VectorField(int n, double sep_min) : n_(n), sep_min_(sep_min) {}
  // Throws SeparationError on a near-collision.
  Vec operator()(const Vec& x) const { return eom(State::from_coordinates(n_, x), sep_min_).flat(); }
  bool admissible(const Vec& x) const {
    for (int i = 0; i + 1 < n_; ++i) {
      if (!(x(i) - x(i + 1) >= sep_min_)) return false;
    }
    return x.allFinite();
  }

 private:
  int n_;
  double sep_min_;
};

struct StepResult {
  Vec x;
  Vec f_end;  // FSAL derivative at the new point
  double error = 0.0;
};

StepResult dopri_step(const VectorField& f, const Vec& x, const Vec& f0, double h) {
  std::array<Vec, 7> k;
  k[0] = f0;
  Vec xs;
  for (int s = 1; s < 7; ++s) {
    xs = x;
    for (int j = 0; j < s; ++j) {
      if (kA[s][j] != 0.0) xs += h * kA[s][j] * k[static_cast<std::size_t>(j)];
    }
    k[static_cast<std::size_t>(s)] = f(xs);
  }
  StepResult out;
  out.x = xs;  // stage 7 sits at the fifth-order solution
  out.f_end = k[6];
  Vec err = Vec::Zero(x.size());
  for (int s = 0; s < 7; ++s) {
    if (kE[static_cast<std::size_t>(s)] != 0.0) err += h * kE[static_cast<std::size_t>(s)] * k[static_cast<std::size_t>(s)];
  }
  double e = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    e = std::max(e, std::abs(err(i)) / (1.0 + std::max(std::abs(x(i)), std::abs(out.x(i)))));
  }
  out.error = e;
  return out;
}

Vec rk4_step(const VectorField& f, const Vec& x, double h) {
  const Vec k1 = f(x);
  const Vec k2 = f(x + 0.5 * h * k1);
  const Vec k3 = f(x + 0.5 * h * k2);
  const Vec k4 = f(x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

class Recorder {
 public:
  Recorder(Trajectory& tr, int n) : tr_(tr), n_(n) {}
  void record(double t, const Vec& x, double h, double err) {
    State s = State::from_coordinates(n_, x);
    Diagnostics d = diagnose(s, tr_.config.probe_z);
    d.step_size = h;
    d.error_estimate = err;
    tr_.times.push_back(t);
    tr_.states.push_back(std::move(s));
    tr_.diagnostics.push_back(std::move(d));
  }

 private:
  Trajectory& tr_;
  int n_;
};

bool underflows(double h, double t) { return h < 1e-14 * (1.0 + std::abs(t)); }

void underflow_check(double h, double t) {
  if (underflows(h, t)) throw StepUnderflowError("integrator: step size underflow");
}

// Rejections caused by the separation floor end in a collision, not an underflow.
void collision_check(double h, double t) {
  if (underflows(h, t)) throw CollisionError("integrator: separation floor unreachable near t = " + std::to_string(t));
}

void integrate_adaptive(const VectorField& f, Vec x, Trajectory& tr, Recorder& rec) {
  const IntegratorConfig& cfg = tr.config;
  double t = 0.0;
  Vec fx = f(x);
  double h = cfg.dt > 0.0 ? cfg.dt : 0.01 / std::max(1.0, max_abs(fx));
  h = std::min(h, cfg.t_end);
  double err_prev = 1e-4;
  int consecutive_rejections = 0;
  long since_sample = 0;
  constexpr double kBeta = 0.04;
  constexpr double kAlpha = 0.2 - 0.75 * kBeta;

  while (t < cfg.t_end) {
    const bool last = t + h >= cfg.t_end;
    const double step = last ? cfg.t_end - t : h;
    StepResult res;
    bool ok = true;
    try {
      res = dopri_step(f, x, fx, step);
      ok = f.admissible(res.x) && std::isfinite(res.error);
    } catch (const SeparationError&) {
      ok = false;
    }
    if (!ok) {
      ++tr.rejected_steps;
      if (++consecutive_rejections >= cfg.max_consecutive_rejections) {
        throw CollisionError("integrator: separation floor unreachable near t = " + std::to_string(t));
      }
      h = 0.5 * step;
      collision_check(h, t);
      continue;
    }
    const double ratio = res.error / cfg.tol;
    if (ratio <= 1.0) {
      t = last ? cfg.t_end : t + step;
      x = res.x;
      fx = res.f_end;
      ++tr.accepted_steps;
      consecutive_rejections = 0;
      if (++since_sample >= cfg.sample_stride || last) {
        rec.record(t, x, step, res.error);
        since_sample = 0;
      }
      const double r = std::max(ratio, 1e-10);
      double fac = 0.9 * std::pow(r, -kAlpha) * std::pow(err_prev, kBeta);
      fac = std::clamp(fac, 0.2, 10.0);
      err_prev = std::max(r, 1e-4);
      h = step * fac;
    } else {
      ++tr.rejected_steps;
      if (++consecutive_rejections >= cfg.max_consecutive_rejections) {
        throw StepUnderflowError("integrator: too many consecutive error-test failures");
      }
      h = step * std::max(0.2, 0.9 * std::pow(ratio, -kAlpha));
      underflow_check(h, t);
    }
  }
}

// Finer splits cost 2^m full passes and never rescue a genuine crossing.
constexpr int kMaxSubstepLevel = 16;

void integrate_fixed(const VectorField& f, Vec x, Trajectory& tr, Recorder& rec) {
  const IntegratorConfig& cfg = tr.config;
  const long steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  long since_sample = 0;
  for (long k = 0; k < steps; ++k) {
    const double t0 = k * cfg.dt;
    const double t1 = k + 1 == steps ? cfg.t_end : (k + 1) * cfg.dt;
    // A collision inside the step splits it into 2^m substeps.
    int level = 0;
    int consecutive_rejections = 0;
    for (;;) {
      const long pieces = 1L << level;
      const double h = (t1 - t0) / static_cast<double>(pieces);
      Vec y = x;
      bool ok = true;
      try {
        for (long p = 0; p < pieces && ok; ++p) {
          y = rk4_step(f, y, h);
          ok = f.admissible(y);
        }
      } catch (const SeparationError&) {
        ok = false;
      }
      if (ok) {
        x = y;
        break;
      }
      tr.rejected_steps += 1;
      if (++consecutive_rejections >= cfg.max_consecutive_rejections || level >= kMaxSubstepLevel) {
        throw CollisionError("integrator: separation floor unreachable near t = " + std::to_string(t0));
      }
      ++level;
      collision_check(h * 0.5, t0);
    }
    ++tr.accepted_steps;
    if (++since_sample >= cfg.sample_stride || k + 1 == steps) {
      rec.record(t1, x, t1 - t0, 0.0);
      since_sample = 0;
    }
  }
}

}  // namespace

Trajectory integrate(const State& s0, const IntegratorConfig& cfg) {
  cfg.validate();
  const auto violations = validate_state(s0, cfg.sep_min);
  if (!violations.empty()) throw InvalidState(violations);
  Trajectory tr;
  tr.config = cfg;
  const VectorField f(s0.n(), cfg.sep_min);
  Recorder rec(tr, s0.n());
  rec.record(0.0, s0.coordinates(), 0.0, 0.0);
  if (cfg.method == Method::kFixedRk4) {
    integrate_fixed(f, s0.coordinates(), tr, rec);
  } else {
    integrate_adaptive(f, s0.coordinates(), tr, rec);
  }
  return tr;
}

DriftReport drift_report(const Trajectory& tr, bool with_reversal) {
  if (tr.states.empty()) throw std::invalid_argument("drift_report: empty trajectory");
  DriftReport rep;
  rep.names = diagnostic_names(tr.n());
  rep.max_drift.assign(rep.names.size(), 0.0);
  const Diagnostics& first = tr.diagnostics.front();
  for (const auto& d : tr.diagnostics) {
    for (std::size_t i = 0; i < rep.names.size(); ++i) {
      rep.max_drift[i] = std::max(rep.max_drift[i], relative_drift(d.values[i], first.values[i], first.scales[i]));
    }
  }
  rep.worst_drift = rep.max_drift.empty() ? 0.0 : *std::max_element(rep.max_drift.begin(), rep.max_drift.end());

  if (with_reversal) {
    IntegratorConfig back = tr.config;
    back.t_end = tr.times.back();
    back.sample_stride = std::numeric_limits<int>::max();
    const Trajectory rev = integrate(time_reversed(tr.states.back()), back);
    const State returned = time_reversed(rev.states.back());
    rep.reversal_mismatch = max_abs(returned.coordinates() - tr.states.front().coordinates());
  }
  return rep;
}

}  // namespace gcs
