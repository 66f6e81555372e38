#include "gcs/brackets.hpp"

namespace gcs {
namespace {

double delta(int a, int b) { return a == b ? 1.0 : 0.0; }

// Shared index pattern of both spin brackets, without the overall sign.
template <class Entry>
double lie_poisson_pattern(int i, int j, int k, int l, Entry m) {
  return 0.5 * (m(i, l) * delta(k, j) - m(k, j) * delta(i, l) - m(i, k) * delta(l, j) +
                m(l, j) * delta(i, k));
}

Gradient trace_power_gradient(const Mat& m, int power, bool is_s) {
  const int n = static_cast<int>(m.rows());
  Gradient g = Gradient::zeros(n);
  Mat p = Mat::Identity(n, n);
  for (int k = 1; k < power; ++k) p = p * m;
  Vec& target = is_s ? g.d_S : g.d_T;
  int q = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++q) target(q) = power * (p(j, i) - p(i, j));
  }
  return g;
}

}  // namespace

Gradient Gradient::zeros(int n) {
  const int p = pair_count(n);
  return {Vec::Zero(n), Vec::Zero(n), Vec::Zero(p), Vec::Zero(p)};
}

Gradient Gradient::from_flat(int n, const Vec& flat) {
  const int p = pair_count(n);
  return {flat.segment(0, n), flat.segment(n, n), flat.segment(2 * n, p), flat.segment(2 * n + p, p)};
}

Vec Gradient::flat() const {
  Vec x(d_u.size() + d_v.size() + d_S.size() + d_T.size());
  x << d_u, d_v, d_S, d_T;
  return x;
}

bool Gradient::all_finite() const {
  return d_u.allFinite() && d_v.allFinite() && d_S.allFinite() && d_T.allFinite();
}

double spin_bracket_S(int i, int j, int k, int l, const State& s) {
  return -lie_poisson_pattern(i, j, k, l, [&](int a, int b) { return s.s(a, b); });
}

double spin_bracket_T(int i, int j, int k, int l, const State& s) {
  return lie_poisson_pattern(i, j, k, l, [&](int a, int b) { return s.t(a, b); });
}

Mat poisson_tensor(const State& s) {
  const int n = s.n();
  const CoordinateLayout lay{n};
  Mat J = Mat::Zero(lay.size(), lay.size());
  for (int j = 0; j < n; ++j) {
    J(lay.v(j), lay.u(j)) = 1.0;
    J(lay.u(j), lay.v(j)) = -1.0;
  }
  const auto pairs = upper_pairs(n);
  const int np = static_cast<int>(pairs.size());
  for (int a = 0; a < np; ++a) {
    for (int b = 0; b < np; ++b) {
      const auto [i, j] = pairs[static_cast<std::size_t>(a)];
      const auto [k, l] = pairs[static_cast<std::size_t>(b)];
      J(lay.s(a), lay.s(b)) = spin_bracket_S(i, j, k, l, s);
      J(lay.t(a), lay.t(b)) = spin_bracket_T(i, j, k, l, s);
    }
  }
  return J;
}

Mat poisson_tensor_derivative(int n, int coordinate) {
  const CoordinateLayout lay{n};
  if (coordinate < lay.s(0)) return Mat::Zero(lay.size(), lay.size());
  Vec x = Vec::Zero(lay.size());
  x(coordinate) = 1.0;
  Mat J = poisson_tensor(State::from_coordinates(n, x));
  for (int j = 0; j < n; ++j) {
    J(lay.v(j), lay.u(j)) = 0.0;
    J(lay.u(j), lay.v(j)) = 0.0;
  }
  return J;
}

double bracket_magnitude(const Mat& J, const Vec& dF, const Vec& dG) {
  return (dF.cwiseAbs().transpose() * J.cwiseAbs() * dG.cwiseAbs())(0, 0);
}

double poisson(const Observable& F, const Observable& G, const State& s) {
  return bracket_of_gradients<double>(poisson_tensor(s), F.grad(s).flat(), G.grad(s).flat());
}

Vec fd_gradient(const ScalarFunction& f, const State& s, double h) {
  const int n = s.n();
  const Vec x0 = s.coordinates();
  Vec g(x0.size());
  auto at = [&](Eigen::Index a, double offset) {
    Vec x = x0;
    x(a) += offset;
    return f(State::from_coordinates(n, x));
  };
  for (Eigen::Index a = 0; a < x0.size(); ++a) {
    g(a) = (-at(a, 2 * h) + 8.0 * at(a, h) - 8.0 * at(a, -h) + at(a, -2 * h)) / (12.0 * h);
  }
  return g;
}

FdBracket poisson_fd_estimate(const ScalarFunction& F, const ScalarFunction& G, const State& s,
                              double h) {
  const Mat J = poisson_tensor(s);
  const double fine = bracket_of_gradients<double>(J, fd_gradient(F, s, h), fd_gradient(G, s, h));
  const double coarse =
      bracket_of_gradients<double>(J, fd_gradient(F, s, 2 * h), fd_gradient(G, s, 2 * h));
  return {fine, std::abs(fine - coarse)};
}

double poisson_fd(const ScalarFunction& F, const ScalarFunction& G, const State& s, double h) {
  return poisson_fd_estimate(F, G, s, h).value;
}

Observable coordinate_observable(int n, int coordinate) {
  return {"x" + std::to_string(coordinate),
          [coordinate](const State& s) { return s.coordinates()(coordinate); },
          [n, coordinate](const State&) {
            Vec g = Vec::Zero(CoordinateLayout{n}.size());
            g(coordinate) = 1.0;
            return Gradient::from_flat(n, g);
          }};
}

namespace {

Observable spin_entry_observable(int n, int i, int j, bool is_s) {
  const CoordinateLayout lay{n};
  const double sign = i < j ? 1.0 : -1.0;
  const int p = i < j ? pair_index(n, i, j) : pair_index(n, j, i);
  const int c = is_s ? lay.s(p) : lay.t(p);
  Observable base = coordinate_observable(n, c);
  return {std::string(is_s ? "S" : "T") + std::to_string(i) + std::to_string(j),
          [base, sign](const State& s) { return sign * base.eval(s); },
          [base, sign](const State& s) {
            Gradient g = base.grad(s);
            g.d_S *= sign;
            g.d_T *= sign;
            return g;
          }};
}

}  // namespace

Observable spin_S_observable(int n, int i, int j) { return spin_entry_observable(n, i, j, true); }
Observable spin_T_observable(int n, int i, int j) { return spin_entry_observable(n, i, j, false); }

Observable trace_power_S_observable(int power) {
  return {"trS^" + std::to_string(power),
          [power](const State& s) { return trace_power(s.S(), power); },
          [power](const State& s) { return trace_power_gradient(s.S(), power, true); }};
}

Observable trace_power_T_observable(int power) {
  return {"trT^" + std::to_string(power),
          [power](const State& s) { return trace_power(s.T(), power); },
          [power](const State& s) { return trace_power_gradient(s.T(), power, false); }};
}

Observable product(const Observable& a, const Observable& b) {
  return {a.name + "*" + b.name, [a, b](const State& s) { return a.eval(s) * b.eval(s); },
          [a, b](const State& s) {
            const double fa = a.eval(s);
            const double fb = b.eval(s);
            const Vec g = fb * a.grad(s).flat() + fa * b.grad(s).flat();
            return Gradient::from_flat(s.n(), g);
          }};
}

Observable linear_combination(double ca, const Observable& f, double cb, const Observable& g) {
  return {"lin(" + f.name + "," + g.name + ")",
          [=](const State& s) { return ca * f.eval(s) + cb * g.eval(s); },
          [=](const State& s) {
            return Gradient::from_flat(s.n(), ca * f.grad(s).flat() + cb * g.grad(s).flat());
          }};
}

}  // namespace gcs
