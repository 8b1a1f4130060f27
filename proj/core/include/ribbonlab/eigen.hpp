#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ribbonlab {

// Ascending eigenvalues, optionally with orthonormal eigenvectors (vectors[i] pairs with values[i]).
struct SpectrumResult {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;

  // Centered index: k = -N..N maps to values[k + N] for a size 2N+1 spectrum.
  double at(int k) const;
};

struct HermitianSpectrum {
  std::vector<double> values;
  std::vector<std::vector<std::complex<double>>> vectors;
};

// Number of eigenvalues strictly below x (LDL^T inertia with a tiny-pivot safeguard).
std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double x);

SpectrumResult eig_tridiag(std::span<const double> diag, std::span<const double> off,
                           bool want_vectors = false);

std::vector<double> eigvals_tridiag(std::span<const double> diag, std::span<const double> off);

// Hermitian tridiagonal with complex off-diagonal: gauge to real, solve, undo the gauge.
HermitianSpectrum eig_hermitian_tridiag(std::span<const double> diag,
                                        std::span<const std::complex<double>> off,
                                        bool want_vectors = false);

// Dense Hermitian eigenvalues (row-major n x n), via Householder reduction to tridiagonal.
std::vector<double> eigvals_hermitian_dense(std::vector<std::complex<double>> a, std::size_t n);
std::vector<double> eigvals_symmetric_dense(std::vector<double> a, std::size_t n);

// Phases theta with D M D^* real non-negative off-diagonal, D = diag(e^{i theta}).
struct GaugeResult {
  std::vector<double> theta;
  std::vector<double> off;  // |m_{j,j+1}|
};
GaugeResult gauge_to_real(std::span<const std::complex<double>> off);

double tridiag_inf_norm(std::span<const double> diag, std::span<const double> off);

}  // namespace ribbonlab
