#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ribbonlab/eigen.hpp"
#include "ribbonlab/lattice.hpp"

namespace ribbonlab {

// Real symmetric Jacobi matrix J_t(b, v) of size p.
struct FiberMatrix {
  std::vector<double> diag;
  std::vector<double> off;  // a_1..a_{p-1}
  double t = 0.0;
  double b = 0.0;

  int size() const { return static_cast<int>(diag.size()); }
};

// Complex Hermitian form before the diagonal gauge.
struct ComplexFiberMatrix {
  std::vector<double> diag;
  std::vector<std::complex<double>> off;
  double t = 0.0;
  double b = 0.0;

  int size() const { return static_cast<int>(diag.size()); }
  // Dense row-major p x p.
  std::vector<std::complex<double>> dense() const;
};

// a_n = 1 for n even, 2|cos(t/2 - (3n-2) b/2)| for n odd. b is used as given (no reduction).
double offdiag_entry(int n, double t, double b);
// Before the absolute value: 2 cos(t/2 - (3n-2) b/2), n odd.
double signed_offdiag_entry(int n, double t, double b);

FiberMatrix build_fiber(std::span<const double> v, double t, double b);
FiberMatrix build_fiber(const RibbonSpec& spec, double t);

ComplexFiberMatrix build_complex_fiber(std::span<const double> v, double t, double b);
ComplexFiberMatrix build_complex_fiber(const RibbonSpec& spec, double t);

// Diagonal unitary conjugation to a real matrix; phases are returned alongside.
struct GaugedFiber {
  FiberMatrix real;
  std::vector<double> theta;
};
GaugedFiber gauge_reduce(const ComplexFiberMatrix& m);

// Nonzero pattern as 1-based (row, col, value) triples, for debug dumps.
struct MatrixEntry {
  int row = 0;
  int col = 0;
  std::complex<double> value;
};
std::vector<MatrixEntry> fiber_triples(const FiberMatrix& m);
std::vector<MatrixEntry> fiber_triples(const ComplexFiberMatrix& m);

SpectrumResult fiber_spectrum(const FiberMatrix& m, bool want_vectors = false);

}  // namespace ribbonlab
