// Copyright 2026 The qcav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Independent reference computations used by the unit tests and the acceptance binary. Nothing
// here calls into the library's numerics.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Columns: Dicke states with k = 0..3 excitations written in the 3-qubit product basis
// (bit i set = qubit i excited).
inline Mat symmetric_isometry() {
  Mat v = Mat::Zero(8, 4);
  const double binom[4] = {1, 3, 3, 1};
  for (int s = 0; s < 8; ++s) {
    const int k = std::popcount(static_cast<unsigned>(s));
    v(s, k) = 1.0 / std::sqrt(binom[k]);
  }
  return v;
}

// exp(-|a|^2/2) sum a^n / sqrt(n!) |n>, built by the term recursion c_n = c_{n-1} a / sqrt(n).
inline Vec coherent_state(cplx alpha, int cutoff) {
  Vec v(cutoff + 1);
  v(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n <= cutoff; ++n) v(n) = v(n - 1) * alpha / std::sqrt(double(n));
  return v;
}

// mode vector (photon-major) times an emitter basis state.
inline Vec with_emitter(const Vec& mode, int emitter_dim, int emitter_index) {
  Vec out = Vec::Zero(mode.size() * emitter_dim);
  for (Eigen::Index p = 0; p < mode.size(); ++p) out(p * emitter_dim + emitter_index) = mode(p);
  return out;
}

inline Vec random_state(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> nd;
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cplx(nd(rng), nd(rng));
  return v / v.norm();
}

inline Mat random_sparse_dense(std::mt19937_64& rng, int dim, double fill) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> nd;
  Mat m = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (u(rng) < fill) m(i, j) = cplx(nd(rng), nd(rng));
  return m;
}

// Dense model pieces straight from the definitions, for cross-checks.
struct DenseModel {
  Mat h;
  std::vector<Mat> jumps;  // rates folded in
};

inline Mat dense_annihilation(int cutoff) {
  Mat a = Mat::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

inline DenseModel dense_model(double g, double eta, double delta, double kappa, double gamma, bool distinct,
                              int cutoff) {
  const int de = distinct ? 8 : 4;
  const Mat a = dense_annihilation(cutoff);
  Mat sm = Mat::Zero(de, de), sz = Mat::Zero(de, de);
  std::vector<Mat> qubit;
  if (distinct) {
    for (int q = 0; q < 3; ++q) {
      Mat s = Mat::Zero(8, 8);
      for (int b = 0; b < 8; ++b)
        if (b >> q & 1) s(b & ~(1 << q), b) = 1.0;
      qubit.push_back(s);
      sm += s;
    }
    for (int b = 0; b < 8; ++b) sz(b, b) = 2.0 * std::popcount(static_cast<unsigned>(b)) - 3.0;
  } else {
    // S^- |m> = sqrt(s(s+1) - m(m-1)) |m-1>, index m + 3/2
    for (int k = 1; k < 4; ++k) {
      const double m = k - 1.5;
      sm(k - 1, k) = std::sqrt(15.0 / 4.0 - m * (m - 1.0));
    }
    for (int k = 0; k < 4; ++k) sz(k, k) = 2.0 * k - 3.0;
  }
  const Mat im = Mat::Identity(cutoff + 1, cutoff + 1), ie = Mat::Identity(de, de);
  const Mat A = kron(a, ie), Sm = kron(im, sm), Sz = kron(im, sz);
  const cplx i(0.0, 1.0);
  DenseModel d;
  d.h = -delta * (A.adjoint() * A + 0.5 * Sz) + i * g * (A.adjoint() * Sm - Sm.adjoint() * A) +
        i * eta * (A.adjoint() - A);
  d.jumps.push_back(std::sqrt(2.0 * kappa) * A);
  if (gamma > 0.0)
    for (const auto& s : qubit) d.jumps.push_back(std::sqrt(2.0 * gamma) * kron(im, s));
  return d;
}

// drho/dt applied directly, no vectorization.
inline Mat lindblad_rhs(const DenseModel& m, const Mat& rho) {
  const cplx i(0.0, 1.0);
  Mat out = -i * (m.h * rho - rho * m.h);
  for (const auto& l : m.jumps) {
    const Mat ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

// Smallest-magnitude eigenvector of the dense Liouvillian built column by column from
// lindblad_rhs, reshaped and normalized to unit trace.
inline Mat steady_state_by_eigen(const DenseModel& m) {
  const Eigen::Index n = m.h.rows();
  Mat L(n * n, n * n);
  for (Eigen::Index c = 0; c < n * n; ++c) {
    Mat e = Mat::Zero(n, n);
    e(c % n, c / n) = 1.0;
    const Mat col = lindblad_rhs(m, e);
    L.col(c) = Eigen::Map<const Vec>(col.data(), n * n);
  }
  Eigen::ComplexEigenSolver<Mat> es(L);
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < es.eigenvalues().size(); ++k)
    if (std::abs(es.eigenvalues()(k)) < std::abs(es.eigenvalues()(best))) best = k;
  Vec v = es.eigenvectors().col(best);
  Mat rho = Eigen::Map<Mat>(v.data(), n, n);
  rho = 0.5 * (rho + rho.adjoint().eval());
  return rho / rho.trace();
}

// Larger root of n (1 + (delta - u g / (2 sqrt n))^2) = eta^2 (kappa = 1), by bisection on the
// branch where the photon number grows with eta. Returns nullopt when no root exists.
inline std::optional<double> branch_photons_bisect(int u, double g, double eta, double delta) {
  // f(x) = x^2 (1 + (delta - c/x)^2) - eta^2 with c = u g / 2, x = sqrt(n) > 0
  const double c = u * g / 2.0;
  auto f = [&](double x) { return x * x + (delta * x - c) * (delta * x - c) - eta * eta; };
  // f is a convex quadratic in x; its vertex is at x_v = delta c / (1 + delta^2).
  const double xv = delta * c / (1.0 + delta * delta);
  double lo = std::max(xv, 0.0);
  if (f(lo) > 0.0) return std::nullopt;
  double hi = std::max(lo, 1.0);
  while (f(hi) < 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.25 * (lo + hi) * (lo + hi);
}

// Asymptotic Kolmogorov distribution: P(K > x) = 2 sum (-1)^(k-1) exp(-2 k^2 x^2).
inline double kolmogorov_survival(double x) {
  if (x < 1e-3) return 1.0;
  double s = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

// One-sample KS test against the CDF; returns the p-value with the Stephens small-sample factor.
template <class Cdf>
double ks_pvalue(std::vector<double> x, Cdf cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double sq = std::sqrt(n);
  return kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d);
}

}  // namespace oracle
