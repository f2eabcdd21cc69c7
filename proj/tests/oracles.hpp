#pragma once

// Brute-force reference values, kept independent of the library code paths:
// everything below works directly on the 2^N register by enumeration.

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <complex>
#include <vector>

namespace oracles {

using Complex = std::complex<double>;

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// |D_k> as a 2^N vector, enumerating every k-subset
inline Eigen::VectorXcd brute_dicke(int num_ions, int k) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(1 << num_ions);
  std::vector<int> mask(num_ions, 0);
  std::fill(mask.end() - k, mask.end(), 1);
  const double amp = 1.0 / std::sqrt(static_cast<double>(binomial(num_ions, k)));
  do {
    int bits = 0;
    for (int j = 0; j < num_ions; ++j) bits |= mask[j] << j;
    out(bits) = amp;
  } while (std::next_permutation(mask.begin(), mask.end()));
  return out;
}

// <D_{k+1}| sum_j sigma_j^+ |D_k> by direct application
inline double brute_ladder_element(int num_ions, int k) {
  const Eigen::VectorXcd lo = brute_dicke(num_ions, k);
  const Eigen::VectorXcd hi = brute_dicke(num_ions, k + 1);
  Eigen::VectorXcd raised = Eigen::VectorXcd::Zero(lo.size());
  for (int b = 0; b < lo.size(); ++b)
    for (int j = 0; j < num_ions; ++j)
      if (!(b >> j & 1)) raised(b | 1 << j) += lo(b);
  return (hi.adjoint() * raised)(0).real();
}

// <D_k| sum_j |g_j><g_j| |D_k> by popcount
inline double brute_ground_count(int num_ions, int k) {
  const Eigen::VectorXcd d = brute_dicke(num_ions, k);
  double total = 0.0;
  for (int b = 0; b < d.size(); ++b)
    total += std::norm(d(b)) * (num_ions - std::popcount(static_cast<unsigned>(b)));
  return total;
}

// exp(i theta G)|k=0> on the (N+1)-level ladder with G = w T + conj(w) T^dag,
// T[k+1,k] taken from brute_ladder_element
inline Eigen::VectorXcd coherent_coefficients(int num_ions, Complex w, double theta) {
  const int dim = num_ions + 1;
  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < num_ions; ++k) {
    gen(k + 1, k) = w * brute_ladder_element(num_ions, k);
    gen(k, k + 1) = std::conj(gen(k + 1, k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gen);
  Eigen::VectorXcd modal = solver.eigenvectors().adjoint().col(0);
  for (int i = 0; i < dim; ++i)
    modal(i) *= std::exp(Complex(0.0, theta * solver.eigenvalues()(i)));
  return solver.eigenvectors() * modal;
}

}  // namespace oracles
