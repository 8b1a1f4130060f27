#include "ribbonlab/fiber.hpp"

#include <cmath>
#include <stdexcept>

namespace ribbonlab {

namespace {

void check_potential(std::span<const double> v) {
  if (v.size() < 3 || v.size() % 2 == 0)
    throw std::invalid_argument("fiber: potential length must be p = 2N+1 with N >= 1");
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument("fiber: non-finite potential entry");
}

}  // namespace

double signed_offdiag_entry(int n, double t, double b) {
  if (n < 1) throw std::out_of_range("offdiag_entry: index must be >= 1");
  return 2.0 * std::cos(0.5 * t - 0.5 * (3.0 * n - 2.0) * b);
}

double offdiag_entry(int n, double t, double b) {
  if (n < 1) throw std::out_of_range("offdiag_entry: index must be >= 1");
  if (n % 2 == 0) return 1.0;
  return std::abs(signed_offdiag_entry(n, t, b));
}

FiberMatrix build_fiber(std::span<const double> v, double t, double b) {
  check_potential(v);
  FiberMatrix m;
  m.t = t;
  m.b = b;
  m.diag.assign(v.begin(), v.end());
  m.off.resize(v.size() - 1);
  for (std::size_t i = 0; i < m.off.size(); ++i) m.off[i] = offdiag_entry(static_cast<int>(i) + 1, t, b);
  return m;
}

FiberMatrix build_fiber(const RibbonSpec& spec, double t) { return build_fiber(spec.v, t, spec.b); }

ComplexFiberMatrix build_complex_fiber(std::span<const double> v, double t, double b) {
  check_potential(v);
  ComplexFiberMatrix m;
  m.t = t;
  m.b = b;
  m.diag.assign(v.begin(), v.end());
  m.off.resize(v.size() - 1);
  // r_{2k} = tau^k, r_{2k+1} = tau^{-k} (1 + tau^{6k+1} e^{-it}), tau = e^{ib}.
  for (std::size_t i = 0; i < m.off.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    if (n % 2 == 0) {
      m.off[i] = std::polar(1.0, (n / 2) * b);
    } else {
      const int k = (n - 1) / 2;
      m.off[i] = std::polar(1.0, -k * b) * (1.0 + std::polar(1.0, (6 * k + 1) * b - t));
    }
  }
  return m;
}

ComplexFiberMatrix build_complex_fiber(const RibbonSpec& spec, double t) {
  return build_complex_fiber(spec.v, t, spec.b);
}

std::vector<std::complex<double>> ComplexFiberMatrix::dense() const {
  const std::size_t n = diag.size();
  std::vector<std::complex<double>> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] = diag[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    a[i * n + i + 1] = off[i];
    a[(i + 1) * n + i] = std::conj(off[i]);
  }
  return a;
}

std::vector<MatrixEntry> fiber_triples(const ComplexFiberMatrix& m) {
  std::vector<MatrixEntry> out;
  const int p = m.size();
  for (int i = 0; i < p; ++i) {
    if (i > 0) out.push_back({i + 1, i, std::conj(m.off[static_cast<std::size_t>(i - 1)])});
    out.push_back({i + 1, i + 1, m.diag[static_cast<std::size_t>(i)]});
    if (i + 1 < p) out.push_back({i + 1, i + 2, m.off[static_cast<std::size_t>(i)]});
  }
  return out;
}

std::vector<MatrixEntry> fiber_triples(const FiberMatrix& m) {
  ComplexFiberMatrix c;
  c.diag = m.diag;
  c.off.assign(m.off.begin(), m.off.end());
  return fiber_triples(c);
}

GaugedFiber gauge_reduce(const ComplexFiberMatrix& m) {
  const GaugeResult g = gauge_to_real(m.off);
  GaugedFiber out;
  out.real.diag = m.diag;
  out.real.off = g.off;
  out.real.t = m.t;
  out.real.b = m.b;
  out.theta = g.theta;
  return out;
}

SpectrumResult fiber_spectrum(const FiberMatrix& m, bool want_vectors) {
  return eig_tridiag(m.diag, m.off, want_vectors);
}

}  // namespace ribbonlab
