#pragma once

// Lax pair with spectral parameter z, w = coth z:
//
//   L_ij(z) = d_ij v_i + (1 - d_ij) (S_ij / sinh u_ij - (coth u_ij + coth z) T_ij)
//           = eta~_ij - (1 + coth z) T_ij
//   eta~_ij = d_ij v_i + (1 - d_ij) (S_ij - T_ij exp(-u_ij)) / sinh u_ij
//   M_ij    = (1 - d_ij) (T_ij - S_ij cosh u_ij) / sinh^2 u_ij
//
// so that dL/dt = {H, L(z)} = [L(z), M] for every z.
//
// Functions templated on Scalar are instantiated for double and
// std::complex<double>.

#include <vector>

#include "gcs/dynamics.hpp"
#include "gcs/phase_space.hpp"

namespace gcs {

template <class Scalar>
struct LaxEval {
  Scalar z;
  MatX<Scalar> L;
  Mat M;
  Mat eta_tilde;
};

/// Residual of a matrix identity together with the magnitude it is judged against.
struct IdentityResidual {
  double residual = 0.0;
  double scale = 0.0;
  double relative() const { return scale > 0.0 ? residual / scale : residual; }
};

Mat eta_tilde(const State& s);
Mat lax_M(const State& s);

/// L as a function of w = coth z; entire in w, so no pole guard is needed.
template <class Scalar>
MatX<Scalar> lax_L_coth(const State& s, Scalar w);

/// Throws PoleError when |sinh z| < 1e-12.
template <class Scalar>
MatX<Scalar> lax_L(const State& s, Scalar z);

template <class Scalar>
LaxEval<Scalar> lax_pair(const State& s, Scalar z);

/// sum_ij W_ij grad L_ij(w) as a flat gradient over State::coordinates().
/// Linear in W; with W = k (L^{k-1})^T it is the gradient of tr L^k.
template <class Scalar>
VecX<Scalar> lax_pullback(const State& s, Scalar w, const MatX<Scalar>& weights);

/// dL/dt by the chain rule through a given vector field.
template <class Scalar>
MatX<Scalar> lax_time_derivative(const State& s, Scalar z, const StateDerivative& d);

/// max |dL/dt - [L, M]| with dL/dt from eom(); scale = ||L||_F ||M||_F.
template <class Scalar>
IdentityResidual lax_residual(const State& s, Scalar z);

/// tr L(z)^k for k = 2..k_max (real for real z).
template <class Scalar>
VecX<Scalar> spectral_invariants(const State& s, Scalar z, int k_max);

/// Gradient of tr L(z)^k.
template <class Scalar>
VecX<Scalar> spectral_invariant_gradient(const State& s, Scalar z, int k);

/// Interpolation nodes for the degree-l trace polynomial: l+1 points centred
/// on 0 with unit spacing, moved by 1/2 if one of them would be w = -1.
std::vector<double> expansion_nodes(int l);

/// Monomial coefficients of the polynomial through (nodes, values), Newton form.
Vec interpolation_coefficients(const std::vector<double>& nodes, const Vec& values);

/// Coefficients c_0..c_l of w -> tr((eta~ - (1 + w) T)^l) = tr L(w)^l, w = coth z.
Vec expansion_invariants(const State& s, int l);

/// Gradients of expansion_invariants(s, l), one flat vector per coefficient.
std::vector<Vec> expansion_invariant_gradients(const State& s, int l);

/// tr(T^{l-k} eta~^k): the mixed traces taken in this fixed word order.
double mixed_trace_invariant(const State& s, int l, int k);

/// Lax operator on the rational chart, L1(z1) = T/z1 + (T + eta)/(1 - z1),
/// eta = diag(v) + X, X_jk = (S_jk - T_jk exp(-u_jk)) / (2 sinh u_jk).
/// eta_spin_factor multiplies the spins inside eta only.
Mat chart_lax(const State& s, double z1, double eta_spin_factor);

/// max |L(z) - (1 - z1) L1(z1)| at coth z = -(1 + z1)/z1. With doubled spins
/// inside eta (eta = diag(v) + 2X = eta~) this vanishes identically; passing
/// rescale_spins = false builds L1 from undoubled spins as a negative control.
/// Throws PoleError for z1 at 0 or 1.
IdentityResidual chart_relation_residual(const State& s, double z1, bool rescale_spins = true);

/// Counting formulas.
/// Sum over l = 2..N of (l + 1), minus the N - 1 Casimirs tr T^l.
int integral_count(int n);
/// Same quantity in closed form, (N - 1)(N + 2) / 2.
int integral_count_closed_form(int n);
/// integral_count(n) - [N/2]: the so(N) count after even-l I_{l,1} become Casimirs.
int so_integral_count(int n);
/// (N - 1)(N + 2) - 2[N/2], the phase-space dimension in the centre-of-mass frame.
int reduced_phase_space_dimension(int n);

struct IntegralRank {
  int n = 0;
  /// Number of expansion coefficients for l = 2..N.
  int family_size = 0;
  /// Numerical rank of their gradients over all 2N + N(N-1) coordinates.
  int jacobian_rank = 0;
  /// Rank of their Hamiltonian vector fields J grad c; Casimir directions drop out.
  int flow_rank = 0;
  /// jacobian_rank - flow_rank: independent Casimir combinations in the family.
  int casimir_rank = 0;
  /// Coefficients that vanish identically (odd powers of w and, for odd l, tr T^l).
  int vanishing_coefficients = 0;
  int expected_total = 0;      // integral_count
  int expected_so = 0;         // so_integral_count
  int casimir_levels = 0;      // [N/2] Casimirs tr T^{2m} reachable from the family
  std::vector<double> jacobian_singular_values;
  std::vector<double> flow_singular_values;
};

/// Rank threshold is 1e-8 times the largest singular value.
IntegralRank independent_integral_rank(const State& s);

}  // namespace gcs
