#include "gcs/rmatrix.hpp"

#include "gcs/brackets.hpp"

namespace gcs {

template <class Scalar>
TensorOp<Scalar> kron(const MatX<Scalar>& a, const MatX<Scalar>& b) {
  const auto n = a.rows();
  const auto m = b.rows();
  TensorOp<Scalar> out(n * m, a.cols() * b.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * m, j * b.cols(), m, b.cols()) = a(i, j) * b;
  }
  return out;
}

Mat permutation_operator(int n) {
  Mat p = Mat::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) p(tensor_index(n, i, j), tensor_index(n, j, i)) = 1.0;
  }
  return p;
}

template <class Scalar>
TensorOp<Scalar> flip(const TensorOp<Scalar>& x) {
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(x.rows()))));
  // P X P permutes rows and columns (a,c) -> (c,a).
  TensorOp<Scalar> out(x.rows(), x.cols());
  for (int a = 0; a < n; ++a) {
    for (int c = 0; c < n; ++c) {
      for (int b = 0; b < n; ++b) {
        for (int d = 0; d < n; ++d) {
          out(tensor_index(n, a, c), tensor_index(n, b, d)) = x(tensor_index(n, c, a), tensor_index(n, d, b));
        }
      }
    }
  }
  return out;
}

template <class Scalar>
TensorOp<Scalar> r12(const Vec& u, Scalar z, Scalar w) {
  const int n = static_cast<int>(u.size());
  const Scalar c_minus = checked_coth(Scalar(z - w));
  const Scalar c_plus = checked_coth(Scalar(z + w));
  TensorOp<Scalar> r = TensorOp<Scalar>::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    r(tensor_index(n, i, i), tensor_index(n, i, i)) = 0.5 * (c_minus + c_plus);
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double cu = checked_coth(u(i) - u(j));
      // E_ij (x) E_ji: row (i, j), column (j, i)
      r(tensor_index(n, i, j), tensor_index(n, j, i)) += 0.5 * (c_minus + cu);
      // E_ij (x) E_ij: row (i, i), column (j, j)
      r(tensor_index(n, i, i), tensor_index(n, j, j)) += 0.5 * (c_plus + cu);
    }
  }
  return r;
}

template <class Scalar>
TensorOp<Scalar> r12(const State& s, Scalar z, Scalar w) {
  return r12<Scalar>(s.u(), z, w);
}

template <class Scalar>
TensorOp<Scalar> r21(const State& s, Scalar w, Scalar z) {
  return flip<Scalar>(r12<Scalar>(s.u(), w, z));
}

template <class Scalar>
TensorOp<Scalar> lax_bracket_table(const State& s, Scalar z, Scalar w) {
  const int n = s.n();
  const int dim = s.dimension();
  const Scalar cz = checked_coth(z);
  const Scalar cw = checked_coth(w);
  // Rows: gradients of L_ab, indexed a*N + b.
  MatX<Scalar> gz(n * n, dim), gw(n * n, dim);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      MatX<Scalar> unit = MatX<Scalar>::Zero(n, n);
      unit(a, b) = Scalar(1.0);
      gz.row(a * n + b) = lax_pullback(s, cz, unit).transpose();
      gw.row(a * n + b) = lax_pullback(s, cw, unit).transpose();
    }
  }
  const MatX<Scalar> by_entry = gz * poisson_tensor(s).cast<Scalar>() * gw.transpose();
  TensorOp<Scalar> table(n * n, n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
          table(tensor_index(n, a, c), tensor_index(n, b, d)) = by_entry(a * n + b, c * n + d);
        }
      }
    }
  }
  return table;
}

template <class Scalar>
IdentityResidual rmatrix_residual(const State& s, Scalar z, Scalar w) {
  const int n = s.n();
  const MatX<Scalar> id = MatX<Scalar>::Identity(n, n);
  const MatX<Scalar> Lz = lax_L(s, z);
  const MatX<Scalar> Lw = lax_L(s, w);
  const TensorOp<Scalar> L1 = kron<Scalar>(Lz, id);
  const TensorOp<Scalar> L2 = kron<Scalar>(id, Lw);
  const TensorOp<Scalar> r_12 = r12(s, z, w);
  const TensorOp<Scalar> r_21 = r21(s, w, z);
  const TensorOp<Scalar> rhs = (L1 * r_12 - r_12 * L1) - (L2 * r_21 - r_21 * L2);
  const TensorOp<Scalar> lhs = lax_bracket_table(s, z, w);
  return {max_abs(lhs - rhs), std::max(Lz.norm() * r_12.norm(), Lw.norm() * r_21.norm())};
}

template <class Scalar>
MatX<Scalar> partial_trace_second(const TensorOp<Scalar>& x, int n) {
  MatX<Scalar> out = MatX<Scalar>::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) out(a, b) += x(tensor_index(n, a, c), tensor_index(n, b, c));
    }
  }
  return out;
}

template <class Scalar>
MatX<Scalar> reconstructed_M(const State& s, Scalar z, Scalar w) {
  const int n = s.n();
  const MatX<Scalar> id = MatX<Scalar>::Identity(n, n);
  const TensorOp<Scalar> r_12 = r12(s, z, w);
  const MatX<Scalar> traced = partial_trace_second<Scalar>(r_12 * kron<Scalar>(id, lax_L(s, w)), n);
  const Scalar factor = 0.5 * (checked_coth(Scalar(z - w)) + checked_coth(Scalar(z + w)));
  return factor * lax_L(s, z) - traced;
}

template <class Scalar>
IdentityResidual m_from_r_residual(const State& s, Scalar z, Scalar w) {
  const MatX<Scalar> M = lax_M(s).cast<Scalar>();
  const double scale = r12(s, z, w).norm() * lax_L(s, w).norm();
  return {max_abs(reconstructed_M(s, z, w) - M), scale};
}

#define GCS_INSTANTIATE_RMATRIX(Scalar)                                                        \
  template TensorOp<Scalar> kron<Scalar>(const MatX<Scalar>&, const MatX<Scalar>&);           \
  template TensorOp<Scalar> flip<Scalar>(const TensorOp<Scalar>&);                            \
  template TensorOp<Scalar> r12<Scalar>(const Vec&, Scalar, Scalar);                          \
  template TensorOp<Scalar> r12<Scalar>(const State&, Scalar, Scalar);                        \
  template TensorOp<Scalar> r21<Scalar>(const State&, Scalar, Scalar);                        \
  template TensorOp<Scalar> lax_bracket_table<Scalar>(const State&, Scalar, Scalar);          \
  template IdentityResidual rmatrix_residual<Scalar>(const State&, Scalar, Scalar);           \
  template MatX<Scalar> partial_trace_second<Scalar>(const TensorOp<Scalar>&, int);           \
  template MatX<Scalar> reconstructed_M<Scalar>(const State&, Scalar, Scalar);                \
  template IdentityResidual m_from_r_residual<Scalar>(const State&, Scalar, Scalar);

GCS_INSTANTIATE_RMATRIX(double)
GCS_INSTANTIATE_RMATRIX(Complex)

#undef GCS_INSTANTIATE_RMATRIX

}  // namespace gcs
