#pragma once

// Independent reference computations shared by the unit tests. Nothing here
// calls into the library's counting or spectral code.

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Eigenvalues of the free d=1 stencil with n interior points and mesh h.
inline std::vector<double> free_1d(int n, double h) {
  std::vector<double> out;
  for (int k = 1; k <= n; ++k)
    out.push_back((1.0 - std::cos(k * std::numbers::pi / (n + 1))) / (h * h));
  return out;
}

inline std::size_t count_leq(const std::vector<double>& values, double E) {
  std::size_t c = 0;
  for (double v : values) c += v <= E;
  return c;
}

/// Free d=2 spectrum as tensor sums of the 1D eigenvalues.
inline std::vector<double> free_2d(int n, double h) {
  const auto one = free_1d(n, h);
  std::vector<double> out;
  for (double a : one)
    for (double b : one) out.push_back(a + b);
  return out;
}

/// xi(E) = N_0(E) - N_1(E) for H_1 = H_0 + diag(v) on the free d=1 grid, with
/// v > 0 on `support` (indices) and 0 elsewhere, computed as the number of
/// negative eigenvalues of C^{-1} + G(E) on the support, where
/// G(E) = P^T (H_0 - E)^{-1} P is built from the closed-form sine eigenbasis.
inline long birman_schwinger_1d(int n, double h, const std::vector<int>& support,
                                const std::vector<double>& v, double E) {
  const auto lambda = free_1d(n, h);
  const auto s = support.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s),
                                            static_cast<Eigen::Index>(s));
  const double norm = std::sqrt(2.0 / (n + 1));
  for (int k = 1; k <= n; ++k) {
    const double inv = 1.0 / (lambda[static_cast<std::size_t>(k - 1)] - E);
    for (std::size_t a = 0; a < s; ++a) {
      const double pa = norm * std::sin(k * std::numbers::pi * (support[a] + 1) / (n + 1));
      for (std::size_t b = 0; b < s; ++b) {
        const double pb = norm * std::sin(k * std::numbers::pi * (support[b] + 1) / (n + 1));
        M(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += pa * pb * inv;
      }
    }
  }
  for (std::size_t a = 0; a < s; ++a)
    M(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) += 1.0 / v[a];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  long negative = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) negative += es.eigenvalues()(i) < 0;
  return negative;
}

/// P[sup |b| > r] for a 1D bridge of duration t (alternating series).
inline double kolmogorov_series(double r, double t) {
  double s = 0.0;
  for (int k = 1; k < 200; ++k) s += (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * r * r / t);
  return 2.0 * s;
}

}  // namespace oracle
