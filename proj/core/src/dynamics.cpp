#include "gcs/dynamics.hpp"

#include <sstream>

namespace gcs {

PairTable::PairTable(const State& s, double sep_min) : n_(s.n()) {
  entries_.reserve(static_cast<std::size_t>(pair_count(n_)));
  for (int i = 0; i < n_; ++i) {
    for (int k = i + 1; k < n_; ++k) {
      const double d = s.u()(i) - s.u()(k);
      if (!(std::abs(d) >= sep_min)) {
        std::ostringstream msg;
        msg << "particles " << i << " and " << k << " closer than sep_min (" << std::abs(d) << " < "
            << sep_min << ")";
        throw SeparationError(msg.str());
      }
      const double sh = std::sinh(d);
      const double ch = std::cosh(d);
      double ish, coth, em, ep;
      if (std::abs(d) < 20.0) {
        ish = 1.0 / sh;
        coth = ch * ish;
        em = std::exp(-d) * ish;
        ep = std::exp(d) * ish;
      } else {
        const double e2 = std::exp(-2.0 * std::abs(d));
        const double sgn = d > 0.0 ? 1.0 : -1.0;
        ish = sgn * 2.0 * std::exp(-std::abs(d)) / (1.0 - e2);
        coth = sgn * (1.0 + e2) / (1.0 - e2);
        em = 2.0 / std::expm1(2.0 * d);
        ep = -2.0 / std::expm1(-2.0 * d);
      }
      const double ish2 = ish * ish;
      entries_.push_back({sh, ch, ish, ish2, coth, coth * ish, ish2 * ish, coth * ish2, coth * coth * ish, em, ep});
    }
  }
}

Vec StateDerivative::flat() const {
  Vec x(du.size() + dv.size() + 2 * pair_count(static_cast<int>(du.size())));
  x << du, dv, upper_of(dS), upper_of(dT);
  return x;
}

StateDerivative StateDerivative::from_flat(int n, const Vec& flat) {
  const int p = pair_count(n);
  return {flat.segment(0, n), flat.segment(n, n), antisymmetric_from_upper(n, flat.segment(2 * n, p)),
          antisymmetric_from_upper(n, flat.segment(2 * n + p, p))};
}

double hamiltonian(const State& s, double sep_min) {
  const PairTable pt(s, sep_min);
  double h = 0.5 * s.v().squaredNorm();
  for (int j = 0; j < s.n(); ++j) {
    for (int k = j + 1; k < s.n(); ++k) {
      const double a = s.s(j, k);
      const double b = s.t(j, k);
      h += (a * a + b * b) * pt.inv_sinh2(j, k) - 2.0 * a * b * pt.cosh_over_sinh2(j, k);
    }
  }
  return h;
}

Gradient hamiltonian_gradient(const State& s, double sep_min) {
  const int n = s.n();
  const PairTable pt(s, sep_min);
  Gradient g = Gradient::zeros(n);
  g.d_v = s.v();
  int p = 0;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k, ++p) {
      const double a = s.s(j, k);
      const double b = s.t(j, k);
      // d/du_jk of the pair potential
      const double dpot = -2.0 * (a * a + b * b) * pt.cosh_over_sinh3(j, k) +
                          2.0 * a * b * (pt.cosh2_over_sinh3(j, k) + pt.inv_sinh3(j, k));
      g.d_u(j) += dpot;
      g.d_u(k) -= dpot;
      g.d_S(p) = 2.0 * (a * pt.inv_sinh2(j, k) - b * pt.cosh_over_sinh2(j, k));
      g.d_T(p) = 2.0 * (b * pt.inv_sinh2(j, k) - a * pt.cosh_over_sinh2(j, k));
    }
  }
  return g;
}

Observable hamiltonian_observable() {
  return {"H", [](const State& s) { return hamiltonian(s); },
          [](const State& s) { return hamiltonian_gradient(s); }};
}

StateDerivative eom(const State& s, double sep_min) {
  const int n = s.n();
  const PairTable pt(s, sep_min);
  const Mat S = s.S();
  const Mat T = s.T();

  StateDerivative d{s.v(), Vec::Zero(n), Mat::Zero(n, n), Mat::Zero(n, n)};

  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      const double a = S(i, k);
      const double b = T(i, k);
      const double force = 2.0 * (a * a + b * b) * pt.cosh_over_sinh3(i, k) -
                           2.0 * a * b * (pt.cosh2_over_sinh3(i, k) + pt.inv_sinh3(i, k));
      d.dv(i) += force;
      d.dv(k) -= force;
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double ds = 0.0;
      double dt = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double a_ik = pt.inv_sinh2(i, k);
        const double a_kj = pt.inv_sinh2(k, j);
        const double c_ik = pt.cosh_over_sinh2(i, k);
        const double c_kj = pt.cosh_over_sinh2(k, j);
        ds += S(i, k) * S(k, j) * (a_ik - a_kj) + S(i, k) * T(k, j) * c_kj - T(i, k) * S(k, j) * c_ik;
        dt += T(i, k) * T(k, j) * (a_kj - a_ik) - T(i, k) * S(k, j) * c_kj + S(i, k) * T(k, j) * c_ik;
      }
      d.dS(i, j) = ds;
      d.dS(j, i) = -ds;
      d.dT(i, j) = dt;
      d.dT(j, i) = -dt;
    }
  }
  return d;
}

StateDerivative eom_via_brackets(const State& s, double sep_min) {
  const Vec dH = hamiltonian_gradient(s, sep_min).flat();
  const Vec xdot = poisson_tensor(s).transpose() * dH;
  return StateDerivative::from_flat(s.n(), xdot);
}

}  // namespace gcs
