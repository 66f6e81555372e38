#pragma once

// Poisson structure on R^{2N} x so*(N) x so*(N):
//
//   {v_k, u_j}   = delta_jk
//   {S_ij, S_kl} = -1/2 (S_il d_kj - S_kj d_il - S_ik d_lj + S_lj d_ik)
//   {T_ij, T_kl} = +1/2 (T_il d_kj - T_kj d_il - T_ik d_lj + T_lj d_ik)
//   {S_ij, T_kl} = 0
//
// Time derivatives follow dF/dt = {H, F}. Derivatives with respect to spins
// are taken against the independent coordinates S_ij, T_ij with i < j.

#include <functional>
#include <string>

#include "gcs/phase_space.hpp"

namespace gcs {

struct Gradient {
  Vec d_u, d_v, d_S, d_T;

  static Gradient zeros(int n);
  /// Layout of State::coordinates().
  static Gradient from_flat(int n, const Vec& flat);
  Vec flat() const;
  bool all_finite() const;
};

using ScalarFunction = std::function<double(const State&)>;

struct Observable {
  std::string name;
  ScalarFunction eval;
  std::function<Gradient(const State&)> grad;
};

/// Lie-Poisson bracket of spin entries; any index order, antisymmetry applied.
double spin_bracket_S(int i, int j, int k, int l, const State& s);
double spin_bracket_T(int i, int j, int k, int l, const State& s);

/// Antisymmetric matrix J with {F, G} = dF^T J dG over State::coordinates().
Mat poisson_tensor(const State& s);

/// Derivative of poisson_tensor along one coordinate. The structure is linear
/// in the spins and constant in (u, v), so this does not depend on the state.
Mat poisson_tensor_derivative(int n, int coordinate);

/// dF^T J dG summed as sum_{a<b} J_ab (dF_a dG_b - dF_b dG_a), so {F, F} is exactly 0.
template <class Scalar>
Scalar bracket_of_gradients(const Mat& J, const VecX<Scalar>& dF, const VecX<Scalar>& dG) {
  Scalar sum(0);
  for (Eigen::Index b = 1; b < J.cols(); ++b) {
    for (Eigen::Index a = 0; a < b; ++a) {
      if (J(a, b) != 0.0) sum += J(a, b) * (dF(a) * dG(b) - dF(b) * dG(a));
    }
  }
  return sum;
}

/// Sum of |dF_a| |J_ab| |dG_b|: the magnitude scale of {F, G} for tolerance checks.
double bracket_magnitude(const Mat& J, const Vec& dF, const Vec& dG);

double poisson(const Observable& F, const Observable& G, const State& s);

/// Fourth-order centered finite-difference gradient with step h.
Vec fd_gradient(const ScalarFunction& f, const State& s, double h = 1e-5);

struct FdBracket {
  double value;
  /// |B(h) - B(2h)|, a Richardson estimate of the truncation error.
  double error_estimate;
};

/// Gradient-free oracle for poisson(): same contraction with FD gradients.
FdBracket poisson_fd_estimate(const ScalarFunction& F, const ScalarFunction& G, const State& s,
                              double h = 1e-5);
double poisson_fd(const ScalarFunction& F, const ScalarFunction& G, const State& s, double h = 1e-5);

// Elementary observables.
Observable coordinate_observable(int n, int coordinate);
Observable spin_S_observable(int n, int i, int j);
Observable spin_T_observable(int n, int i, int j);
/// tr(S^power) / tr(T^power); Casimirs for even powers.
Observable trace_power_S_observable(int power);
Observable trace_power_T_observable(int power);
Observable product(const Observable& a, const Observable& b);
Observable linear_combination(double a, const Observable& f, double b, const Observable& g);

}  // namespace gcs
