#pragma once

// Classical r-matrix on Mat(N) (x) Mat(N):
//
//   r12(z, w) = 1/2 (coth(z-w) + coth(z+w)) sum_i E_ii (x) E_ii
//             + 1/2 sum_{i!=j} E_ij (x) E_ji (coth(z-w) + coth u_ij)
//             + 1/2 sum_{i!=j} E_ij (x) E_ij (coth(z+w) + coth u_ij)
//
// with {L1(z), L2(w)} = [L1(z), r12(z,w)] - [L2(w), r21(w,z)] and
// tr_2(r12(z,w) L2(w)) = 1/2 (coth(z-w) + coth(z+w)) L(z) - M.
//
// Tensor index convention: the coefficient of E_ab (x) E_cd sits at row
// a*N + c, column b*N + d (zero-based), i.e. the Kronecker product A (x) B.

#include "gcs/lax.hpp"
#include "gcs/phase_space.hpp"

namespace gcs {

template <class Scalar>
using TensorOp = MatX<Scalar>;

constexpr int tensor_index(int n, int first, int second) { return first * n + second; }

/// A (x) B in the convention above.
template <class Scalar>
TensorOp<Scalar> kron(const MatX<Scalar>& a, const MatX<Scalar>& b);

/// Permutation operator P = sum E_ij (x) E_ji.
Mat permutation_operator(int n);

/// P X P: swaps the tensor legs.
template <class Scalar>
TensorOp<Scalar> flip(const TensorOp<Scalar>& x);

/// r12 from positions alone (valid for any N >= 1). Throws PoleError when
/// |sinh(z -+ w)| < 1e-12.
template <class Scalar>
TensorOp<Scalar> r12(const Vec& u, Scalar z, Scalar w);
template <class Scalar>
TensorOp<Scalar> r12(const State& s, Scalar z, Scalar w);

/// r21(w, z) = P r12(w, z) P.
template <class Scalar>
TensorOp<Scalar> r21(const State& s, Scalar w, Scalar z);

/// Entry ((a,c),(b,d)) = {L(z)_ab, L(w)_cd}, from analytic gradients of the
/// Lax entries contracted with the Poisson tensor.
template <class Scalar>
TensorOp<Scalar> lax_bracket_table(const State& s, Scalar z, Scalar w);

/// max |{L1(z), L2(w)} - [L1(z), r12] + [L2(w), r21]|;
/// scale = max(||L(z)|| ||r12||, ||L(w)|| ||r21||) in Frobenius norms.
template <class Scalar>
IdentityResidual rmatrix_residual(const State& s, Scalar z, Scalar w);

/// (tr_2 X)_ab = sum_c X_(a,c),(b,c).
template <class Scalar>
MatX<Scalar> partial_trace_second(const TensorOp<Scalar>& x, int n);

/// M as recovered from the r-matrix: 1/2 (coth(z-w) + coth(z+w)) L(z) - tr_2(r12 L2(w)).
template <class Scalar>
MatX<Scalar> reconstructed_M(const State& s, Scalar z, Scalar w);

/// max |reconstructed_M - M|; scale = ||r12||_F ||L(w)||_F.
template <class Scalar>
IdentityResidual m_from_r_residual(const State& s, Scalar z, Scalar w);

}  // namespace gcs
