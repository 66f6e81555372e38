#pragma once

// Hamiltonian
//
//   H = 1/2 sum_j v_j^2
//     + sum_{j<k} (S_jk^2 + T_jk^2 - 2 S_jk T_jk cosh u_jk) / sinh^2 u_jk
//
// and its vector field in two independent forms: the closed-form equations of
// motion, and {H, x} assembled through the bracket engine.

#include <vector>

#include "gcs/brackets.hpp"
#include "gcs/phase_space.hpp"

namespace gcs {

/// Hyperbolic factors of u_i - u_k for i < k, computed once per evaluation.
// Products that stay finite for any separation are stored directly: beyond
// |u| ~ 355 sinh^2 overflows while 1/sinh^2 is still representable.
class PairTable {
 public:
  /// Throws SeparationError if some |u_i - u_k| < sep_min.
  explicit PairTable(const State& s, double sep_min = kDefaultSepMin);

  int n() const { return n_; }
  // Values for the ordered pair (i, k), i != k, with parity applied.
  double sinh(int i, int k) const { return sign(i, k) * at(i, k).sinh; }
  double cosh(int i, int k) const { return at(i, k).cosh; }
  double inv_sinh(int i, int k) const { return sign(i, k) * at(i, k).inv_sinh; }
  double inv_sinh2(int i, int k) const { return at(i, k).inv_sinh2; }
  double coth(int i, int k) const { return sign(i, k) * at(i, k).coth; }
  /// cosh / sinh^2, even in (i, k).
  double cosh_over_sinh2(int i, int k) const { return at(i, k).cosh_over_sinh2; }
  /// 1 / sinh^3, odd in (i, k).
  double inv_sinh3(int i, int k) const { return sign(i, k) * at(i, k).inv_sinh3; }
  /// cosh / sinh^3 and cosh^2 / sinh^3, odd in (i, k).
  double cosh_over_sinh3(int i, int k) const { return sign(i, k) * at(i, k).cosh_over_sinh3; }
  double cosh2_over_sinh3(int i, int k) const { return sign(i, k) * at(i, k).cosh2_over_sinh3; }
  /// exp(-u_ik) / sinh(u_ik).
  double exp_minus_over_sinh(int i, int k) const { return i < k ? at(i, k).em_over_sinh : -at(i, k).ep_over_sinh; }

 private:
  struct Entry {
    double sinh, cosh, inv_sinh, inv_sinh2, coth, cosh_over_sinh2, inv_sinh3;
    double cosh_over_sinh3, cosh2_over_sinh3, em_over_sinh, ep_over_sinh;
  };
  static double sign(int i, int k) { return i < k ? 1.0 : -1.0; }
  const Entry& at(int i, int k) const {
    return i < k ? entries_[static_cast<std::size_t>(pair_index(n_, i, k))]
                 : entries_[static_cast<std::size_t>(pair_index(n_, k, i))];
  }

  int n_;
  std::vector<Entry> entries_;
};

/// Time derivatives of the State fields.
struct StateDerivative {
  Vec du, dv;
  Mat dS, dT;

  /// Layout of State::coordinates() (upper spin entries).
  Vec flat() const;
  static StateDerivative from_flat(int n, const Vec& flat);
};

double hamiltonian(const State& s, double sep_min = kDefaultSepMin);
Gradient hamiltonian_gradient(const State& s, double sep_min = kDefaultSepMin);
Observable hamiltonian_observable();

/// Closed-form vector field:
///   du_i = v_i
///   dv_i = sum_{k!=i} [2 cosh(u_ik)(S_ik^2+T_ik^2) - 2(cosh^2(u_ik)+1) S_ik T_ik] / sinh^3(u_ik)
///   dS_ij = sum_{k!=i,j} S_ik S_kj (1/sinh^2 u_ik - 1/sinh^2 u_kj)
///           + S_ik T_kj cosh(u_kj)/sinh^2(u_kj) - T_ik S_kj cosh(u_ik)/sinh^2(u_ik)
///   dT_ij = sum_{k!=i,j} T_ik T_kj (1/sinh^2 u_kj - 1/sinh^2 u_ik)
///           - T_ik S_kj cosh(u_kj)/sinh^2(u_kj) + S_ik T_kj cosh(u_ik)/sinh^2(u_ik)
/// dS and dT are filled from their upper triangles and are exactly antisymmetric.
StateDerivative eom(const State& s, double sep_min = kDefaultSepMin);

/// Same vector field as {H, x} for every coordinate x through poisson_tensor.
StateDerivative eom_via_brackets(const State& s, double sep_min = kDefaultSepMin);

}  // namespace gcs
