#include "oracles.hpp"

#include <cmath>

namespace oracle {

double hamiltonian(const State& s) {
  const int n = s.n();
  double h = 0.0;
  for (int j = 0; j < n; ++j) h += 0.5 * s.v()(j) * s.v()(j);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const double d = s.u()(j) - s.u()(k);
      const double a = s.S()(j, k);
      const double b = s.T()(j, k);
      h += (a * a + b * b - 2.0 * a * b * std::cosh(d)) / std::pow(std::sinh(d), 2);
    }
  }
  return h;
}

Vec fd_gradient(const std::function<double(const State&)>& f, const State& s, double h) {
  const Vec x = s.coordinates();
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(State::from_coordinates(s.n(), xp)) - f(State::from_coordinates(s.n(), xm))) / (2.0 * h);
  }
  return g;
}

Derivative eom_matrix_form(const State& s) {
  const int n = s.n();
  Mat A = Mat::Zero(n, n), C = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = s.u()(i) - s.u()(j);
      A(i, j) = 1.0 / std::pow(std::sinh(d), 2);
      C(i, j) = std::cosh(d) / std::pow(std::sinh(d), 2);
    }
  }
  const Mat S = s.S(), T = s.T();
  const Mat X = T.cwiseProduct(C) - S.cwiseProduct(A);
  const Mat Y = T.cwiseProduct(A) - S.cwiseProduct(C);
  Derivative d;
  d.du = s.v();
  d.dS = S * X - X * S;
  d.dT = T * Y - Y * T;
  const Vec g = fd_gradient(hamiltonian, s, 1e-5);
  d.dv = -g.head(n);
  return d;
}

Mat lax_L(const State& s, double z) {
  const int n = s.n();
  Mat L(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        L(i, j) = s.v()(i);
        continue;
      }
      const double d = s.u()(i) - s.u()(j);
      L(i, j) = s.S()(i, j) / std::sinh(d) - (1.0 / std::tanh(d) + 1.0 / std::tanh(z)) * s.T()(i, j);
    }
  }
  return L;
}

Mat lax_M(const State& s) {
  const int n = s.n();
  Mat M = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = s.u()(i) - s.u()(j);
      M(i, j) = (s.T()(i, j) - s.S()(i, j) * std::cosh(d)) / std::pow(std::sinh(d), 2);
    }
  }
  return M;
}

Vec word_expansion(const Mat& A, const Mat& B, int l) {
  Vec c = Vec::Zero(l + 1);
  const int n = static_cast<int>(A.rows());
  for (unsigned mask = 0; mask < (1u << l); ++mask) {
    Mat w = Mat::Identity(n, n);
    int k = 0;
    for (int pos = 0; pos < l; ++pos) {
      if (mask & (1u << pos)) {
        w = w * B;
        ++k;
      } else {
        w = w * A;
      }
    }
    c(k) += w.trace();
  }
  return c;
}

namespace {

Mat unit(int n, int i, int j) {
  Mat e = Mat::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

double coth(double x) { return 1.0 / std::tanh(x); }

}  // namespace

Mat r12_from_units(const Vec& u, double z, double w) {
  const int n = static_cast<int>(u.size());
  Mat r = Mat::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    r += 0.5 * (coth(z - w) + coth(z + w)) * kron(unit(n, i, i), unit(n, i, i));
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double cu = coth(u(i) - u(j));
      r += 0.5 * (coth(z - w) + cu) * kron(unit(n, i, j), unit(n, j, i));
      r += 0.5 * (coth(z + w) + cu) * kron(unit(n, i, j), unit(n, i, j));
    }
  }
  return r;
}

Mat poisson_matrix(const State& s) {
  const int n = s.n();
  const int p = gcs::pair_count(n);
  const int dim = 2 * n + 2 * p;
  Mat J = Mat::Zero(dim, dim);
  // Coordinates ordered (u, v, S_upper, T_upper); {v_k, u_j} = delta_jk.
  for (int j = 0; j < n; ++j) {
    J(n + j, j) = 1.0;
    J(j, n + j) = -1.0;
  }
  const Mat S = s.S(), T = s.T();
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  auto lie = [&](const Mat& X, int i, int j, int k, int l) {
    return X(i, l) * delta(k, j) - X(k, j) * delta(i, l) - X(i, k) * delta(l, j) + X(l, j) * delta(i, k);
  };
  const auto pairs = gcs::upper_pairs(n);
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      const auto [i, j] = pairs[static_cast<std::size_t>(a)];
      const auto [k, l] = pairs[static_cast<std::size_t>(b)];
      J(2 * n + a, 2 * n + b) = -0.5 * lie(S, i, j, k, l);
      J(2 * n + p + a, 2 * n + p + b) = 0.5 * lie(T, i, j, k, l);
    }
  }
  return J;
}

std::vector<std::complex<double>> eigenvalues(const Mat& m) {
  Eigen::EigenSolver<Mat> es(m);
  const auto ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace oracle
