#include "gcs/lax.hpp"

#include <algorithm>

#include "gcs/brackets.hpp"

namespace gcs {

Mat eta_tilde(const State& s) {
  const int n = s.n();
  const PairTable pt(s);
  Mat eta = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    eta(i, i) = s.v()(i);
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      eta(i, j) = s.s(i, j) * pt.inv_sinh(i, j) - s.t(i, j) * pt.exp_minus_over_sinh(i, j);
    }
  }
  return eta;
}

Mat lax_M(const State& s) {
  const int n = s.n();
  const PairTable pt(s);
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) m(i, j) = s.t(i, j) * pt.inv_sinh2(i, j) - s.s(i, j) * pt.cosh_over_sinh2(i, j);
    }
  }
  return m;
}

template <class Scalar>
MatX<Scalar> lax_L_coth(const State& s, Scalar w) {
  const int n = s.n();
  const PairTable pt(s);
  MatX<Scalar> L = MatX<Scalar>::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    L(i, i) = s.v()(i);
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      L(i, j) = s.s(i, j) * pt.inv_sinh(i, j) - (pt.coth(i, j) + w) * s.t(i, j);
    }
  }
  return L;
}

template <class Scalar>
MatX<Scalar> lax_L(const State& s, Scalar z) {
  return lax_L_coth(s, checked_coth(z));
}

template <class Scalar>
LaxEval<Scalar> lax_pair(const State& s, Scalar z) {
  return {z, lax_L(s, z), lax_M(s), eta_tilde(s)};
}

template <class Scalar>
VecX<Scalar> lax_pullback(const State& s, Scalar w, const MatX<Scalar>& weights) {
  const int n = s.n();
  const CoordinateLayout lay{n};
  const PairTable pt(s);
  VecX<Scalar> g = VecX<Scalar>::Zero(lay.size());
  for (int i = 0; i < n; ++i) {
    g(lay.v(i)) += weights(i, i);
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Scalar wij = weights(i, j);
      // dL_ij/du_i = (T_ij - S_ij cosh u_ij) / sinh^2 u_ij = M_ij
      const double m_ij = s.t(i, j) * pt.inv_sinh2(i, j) - s.s(i, j) * pt.cosh_over_sinh2(i, j);
      g(lay.u(i)) += wij * m_ij;
      g(lay.u(j)) -= wij * m_ij;
      const double sign = i < j ? 1.0 : -1.0;
      const int p = i < j ? pair_index(n, i, j) : pair_index(n, j, i);
      g(lay.s(p)) += sign * wij * pt.inv_sinh(i, j);
      g(lay.t(p)) -= sign * wij * (pt.coth(i, j) + w);
    }
  }
  return g;
}

template <class Scalar>
MatX<Scalar> lax_time_derivative(const State& s, Scalar z, const StateDerivative& d) {
  const int n = s.n();
  const PairTable pt(s);
  const Scalar w = checked_coth(z);
  const Mat M = lax_M(s);
  MatX<Scalar> dL = MatX<Scalar>::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    dL(i, i) = d.dv(i);
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      dL(i, j) = M(i, j) * (d.du(i) - d.du(j)) + d.dS(i, j) * pt.inv_sinh(i, j) -
                 (pt.coth(i, j) + w) * d.dT(i, j);
    }
  }
  return dL;
}

template <class Scalar>
IdentityResidual lax_residual(const State& s, Scalar z) {
  const MatX<Scalar> L = lax_L(s, z);
  const MatX<Scalar> M = lax_M(s).cast<Scalar>();
  const MatX<Scalar> dL = lax_time_derivative(s, z, eom(s));
  const MatX<Scalar> commutator = L * M - M * L;
  return {max_abs(dL - commutator), L.norm() * M.norm()};
}

template <class Scalar>
VecX<Scalar> spectral_invariants(const State& s, Scalar z, int k_max) {
  if (k_max < 2) throw std::invalid_argument("spectral_invariants: k_max must be >= 2");
  const MatX<Scalar> L = lax_L(s, z);
  VecX<Scalar> t(k_max - 1);
  MatX<Scalar> p = L;
  for (int k = 2; k <= k_max; ++k) {
    p = p * L;
    t(k - 2) = p.trace();
  }
  return t;
}

template <class Scalar>
VecX<Scalar> spectral_invariant_gradient(const State& s, Scalar z, int k) {
  const Scalar w = checked_coth(z);
  const MatX<Scalar> L = lax_L_coth(s, w);
  MatX<Scalar> p = MatX<Scalar>::Identity(s.n(), s.n());
  for (int m = 1; m < k; ++m) p = p * L;
  const MatX<Scalar> weights = Scalar(static_cast<double>(k)) * p.transpose();
  return lax_pullback(s, w, weights);
}

std::vector<double> expansion_nodes(int l) {
  std::vector<double> nodes(static_cast<std::size_t>(l + 1));
  for (int m = 0; m <= l; ++m) nodes[static_cast<std::size_t>(m)] = m - 0.5 * l;
  if (std::find(nodes.begin(), nodes.end(), -1.0) != nodes.end()) {
    for (auto& x : nodes) x += 0.5;
  }
  return nodes;
}

Vec interpolation_coefficients(const std::vector<double>& nodes, const Vec& values) {
  const int m = static_cast<int>(nodes.size());
  // Divided differences in place.
  Vec dd = values;
  for (int level = 1; level < m; ++level) {
    for (int i = m - 1; i >= level; --i) {
      dd(i) = (dd(i) - dd(i - 1)) /
              (nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(i - level)]);
    }
  }
  // Horner expansion of the Newton form into monomials.
  Vec coef = Vec::Zero(m);
  coef(0) = dd(m - 1);
  for (int i = m - 2; i >= 0; --i) {
    const double x = nodes[static_cast<std::size_t>(i)];
    for (int k = m - 1; k >= 1; --k) coef(k) = coef(k - 1) - x * coef(k);
    coef(0) = dd(i) - x * coef(0);
  }
  return coef;
}

namespace {

double trace_of_power(const Mat& L, int l) {
  Mat p = L;
  for (int k = 1; k < l; ++k) p = p * L;
  return p.trace();
}

void check_degree(const State& s, int l) {
  if (l < 2 || l > s.n()) throw std::invalid_argument("expansion degree must satisfy 2 <= l <= N");
}

}  // namespace

Vec expansion_invariants(const State& s, int l) {
  check_degree(s, l);
  const auto nodes = expansion_nodes(l);
  Vec values(l + 1);
  for (int m = 0; m <= l; ++m) values(m) = trace_of_power(lax_L_coth(s, nodes[static_cast<std::size_t>(m)]), l);
  return interpolation_coefficients(nodes, values);
}

std::vector<Vec> expansion_invariant_gradients(const State& s, int l) {
  check_degree(s, l);
  const auto nodes = expansion_nodes(l);
  const int dim = s.dimension();
  Mat value_grads(l + 1, dim);
  for (int m = 0; m <= l; ++m) {
    const double w = nodes[static_cast<std::size_t>(m)];
    const Mat L = lax_L_coth(s, w);
    Mat p = Mat::Identity(s.n(), s.n());
    for (int k = 1; k < l; ++k) p = p * L;
    value_grads.row(m) = lax_pullback<double>(s, w, l * p.transpose()).transpose();
  }
  // Coefficients are linear in the node values: apply the interpolation map.
  Mat to_coef(l + 1, l + 1);
  for (int m = 0; m <= l; ++m) to_coef.col(m) = interpolation_coefficients(nodes, Vec::Unit(l + 1, m));
  const Mat coef_grads = to_coef * value_grads;
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(l + 1));
  for (int k = 0; k <= l; ++k) out.emplace_back(coef_grads.row(k).transpose());
  return out;
}

double mixed_trace_invariant(const State& s, int l, int k) {
  if (l < 2 || l > s.n() || k < 0 || k > l) {
    throw std::invalid_argument("mixed_trace_invariant: need 2 <= l <= N and 0 <= k <= l");
  }
  const int n = s.n();
  const Mat T = s.T();
  const Mat eta = eta_tilde(s);
  Mat word = Mat::Identity(n, n);
  for (int a = 0; a < l - k; ++a) word = word * T;
  for (int b = 0; b < k; ++b) word = word * eta;
  return word.trace();
}

Mat chart_lax(const State& s, double z1, double eta_spin_factor) {
  if (std::abs(z1) < kPoleThreshold || std::abs(1.0 - z1) < kPoleThreshold) {
    throw PoleError("chart_lax: z1 at a pole (0 or 1)");
  }
  const int n = s.n();
  const PairTable pt(s);
  Mat eta = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    eta(j, j) = s.v()(j);
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      eta(j, k) = eta_spin_factor * 0.5 * (s.s(j, k) * pt.inv_sinh(j, k) - s.t(j, k) * pt.exp_minus_over_sinh(j, k));
    }
  }
  const Mat T = s.T();
  return T / z1 + (T + eta) / (1.0 - z1);
}

IdentityResidual chart_relation_residual(const State& s, double z1, bool rescale_spins) {
  const Mat L1 = chart_lax(s, z1, rescale_spins ? 2.0 : 1.0);
  const double w = -(1.0 + z1) / z1;
  const Mat L = lax_L_coth(s, w);
  const Mat rhs = (1.0 - z1) * L1;
  return {max_abs(L - rhs), std::max(max_abs(L), max_abs(rhs))};
}

int integral_count(int n) {
  int total = 0;
  for (int l = 2; l <= n; ++l) total += l + 1;
  return total - (n - 1);
}

int integral_count_closed_form(int n) { return (n - 1) * (n + 2) / 2; }

int so_integral_count(int n) { return integral_count(n) - n / 2; }

int reduced_phase_space_dimension(int n) { return (n - 1) * (n + 2) - 2 * (n / 2); }

namespace {

int numerical_rank(const Mat& rows, std::vector<double>& singular_values) {
  singular_values.clear();
  if (rows.rows() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(rows);
  const Vec sv = svd.singularValues();
  singular_values.assign(sv.data(), sv.data() + sv.size());
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-8 * sv(0)) ++rank;
  }
  return rank;
}

}  // namespace

IntegralRank independent_integral_rank(const State& s) {
  const int n = s.n();
  IntegralRank out;
  out.n = n;
  out.expected_total = integral_count(n);
  out.expected_so = so_integral_count(n);
  out.casimir_levels = n / 2;

  std::vector<Vec> rows;
  for (int l = 2; l <= n; ++l) {
    const auto grads = expansion_invariant_gradients(s, l);
    double level_max = 0.0;
    for (const auto& g : grads) level_max = std::max(level_max, g.norm());
    for (const auto& g : grads) {
      ++out.family_size;
      // Rows at rounding level relative to their degree are identically zero.
      if (g.norm() <= 1e-9 * level_max) {
        ++out.vanishing_coefficients;
      } else {
        rows.push_back(g / g.norm());
      }
    }
  }

  const int dim = s.dimension();
  Mat jac(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) jac.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  const Mat flows = jac * poisson_tensor(s);

  out.jacobian_rank = numerical_rank(jac, out.jacobian_singular_values);
  out.flow_rank = numerical_rank(flows, out.flow_singular_values);
  out.casimir_rank = out.jacobian_rank - out.flow_rank;
  return out;
}

#define GCS_INSTANTIATE_LAX(Scalar)                                                          \
  template MatX<Scalar> lax_L_coth<Scalar>(const State&, Scalar);                           \
  template MatX<Scalar> lax_L<Scalar>(const State&, Scalar);                                \
  template LaxEval<Scalar> lax_pair<Scalar>(const State&, Scalar);                          \
  template VecX<Scalar> lax_pullback<Scalar>(const State&, Scalar, const MatX<Scalar>&);    \
  template MatX<Scalar> lax_time_derivative<Scalar>(const State&, Scalar,                   \
                                                    const StateDerivative&);                \
  template IdentityResidual lax_residual<Scalar>(const State&, Scalar);                     \
  template VecX<Scalar> spectral_invariants<Scalar>(const State&, Scalar, int);             \
  template VecX<Scalar> spectral_invariant_gradient<Scalar>(const State&, Scalar, int);

GCS_INSTANTIATE_LAX(double)
GCS_INSTANTIATE_LAX(Complex)

#undef GCS_INSTANTIATE_LAX

}  // namespace gcs
