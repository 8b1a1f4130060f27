#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ribbonlab/eigen.hpp"
#include "ribbonlab/fiber.hpp"

using namespace ribbonlab;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

double residual(const std::vector<double>& d, const std::vector<double>& e, const std::vector<double>& x, double lam) {
  double r = 0;
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    double y = (d[i] - lam) * x[i];
    if (i > 0) y += e[i - 1] * x[i - 1];
    if (i + 1 < n) y += e[i] * x[i + 1];
    r += y * y;
  }
  return std::sqrt(r);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_vectors(const std::vector<double>& d, const std::vector<double>& e) {
  const SpectrumResult r = eig_tridiag(d, e, true);
  REQUIRE(r.vectors.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(residual(d, e, r.vectors[i], r.values[i]) <= 1e-10 * (1 + std::abs(r.values[i])));
    CHECK(std::abs(dot(r.vectors[i], r.vectors[i]) - 1) < 1e-12);
    for (std::size_t j = 0; j < i; ++j) CHECK(std::abs(dot(r.vectors[i], r.vectors[j])) <= 1e-8);
  }
}

}  // namespace

TEST_CASE("sturm_count") {
  const FiberMatrix m = build_fiber(std::vector<double>{0, 0, 0}, 0.0, 0.0);
  CHECK(sturm_count(m.diag, m.off, -10.0) == 0);
  CHECK(sturm_count(m.diag, m.off, 10.0) == 3);
  CHECK(sturm_count(m.diag, m.off, 1.0) == 2);
  // Strictly below: the eigenvalue 0 itself is not counted.
  CHECK(sturm_count(m.diag, m.off, 0.0) == 1);

  std::mt19937 rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = oracle::random_vector(rng, 7, -2, 2), e = oracle::random_vector(rng, 6, -1, 1);
    std::size_t prev = 0;
    for (double x = -6; x <= 6; x += 0.05) {
      const std::size_t c = sturm_count(d, e, x);
      CHECK(c >= prev);
      prev = c;
    }
    CHECK(sturm_count(d, e, -1e300) == 0);
    CHECK(sturm_count(d, e, 1e300) == 7);
  }
}

TEST_CASE("eig_tridiag examples") {
  const double s5 = std::sqrt(5.0);
  const auto a = eigvals_tridiag(build_fiber(std::vector<double>{0, 0, 0}, 0.0, 0.0).diag,
                                 build_fiber(std::vector<double>{0, 0, 0}, 0.0, 0.0).off);
  CHECK(oracle::max_abs_diff(a, {-s5, 0, s5}) < 1e-12);
  const FiberMatrix m = build_fiber(std::vector<double>{0, 0, 0}, kPi, 0.0);
  CHECK(oracle::max_abs_diff(eigvals_tridiag(m.diag, m.off), {-1, 0, 1}) < 1e-12);
  SpectrumResult r = eig_tridiag(m.diag, m.off);
  CHECK(r.at(-1) == doctest::Approx(-1.0));
  CHECK(r.at(1) == doctest::Approx(1.0));
  CHECK(eig_tridiag(std::vector<double>{3.5}, std::vector<double>{}).values == std::vector<double>{3.5});
}

TEST_CASE("eig_tridiag against the 50-digit oracle") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 9);
    auto d = oracle::random_vector(rng, n, -3, 3);
    auto e = oracle::random_vector(rng, n - 1, -2, 2);
    if (trial % 5 == 0 && n > 2) e[n / 2 - 1] = 0.0;  // decoupled blocks
    if (trial % 7 == 0) std::fill(d.begin(), d.end(), 0.0);
    CHECK(oracle::max_abs_diff(eigvals_tridiag(d, e), oracle::tridiag_eigs_50(d, e)) < 1e-10);
  }
  SUBCASE("fibers at random t, b") {
    std::uniform_real_distribution<double> U(0, 2 * kPi);
    for (int trial = 0; trial < 30; ++trial) {
      const int N = 1 + trial % 4;
      const auto v = oracle::random_vector(rng, static_cast<std::size_t>(2 * N + 1), -1, 1);
      const FiberMatrix m = build_fiber(v, U(rng), U(rng));
      CHECK(oracle::max_abs_diff(fiber_spectrum(m).values, oracle::tridiag_eigs_50(m.diag, m.off)) < 1e-10);
    }
  }
}

TEST_CASE("eigenvectors") {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 11);
    check_vectors(oracle::random_vector(rng, n, -2, 2), oracle::random_vector(rng, n - 1, -1, 1));
  }
  SUBCASE("t = pi decouples the fiber into degenerate blocks") {
    for (int N : {1, 2, 5}) {
      const FiberMatrix m = build_fiber(std::vector<double>(static_cast<std::size_t>(2 * N + 1), 0.0), kPi, 0.0);
      check_vectors(m.diag, m.off);
    }
  }
  SUBCASE("exactly repeated eigenvalues") {
    check_vectors({1, 1, 1, 1}, {0, 0, 0});
    check_vectors({0, 0, 0, 0, 0}, {1, 0, 1, 0});
  }
  SUBCASE("tight cluster (Wilkinson-type)") {
    std::vector<double> d, e(20, 1.0);
    for (int i = -10; i <= 10; ++i) d.push_back(std::abs(i));
    check_vectors(d, e);
  }
}

TEST_CASE("Hermitian tridiagonal") {
  SUBCASE("b=0 coincides with the real solver") {
    const auto v = std::vector<double>{0.2, -0.1, 0.4, 0.0, 0.3};
    const ComplexFiberMatrix c = build_complex_fiber(v, 1.1, 0.0);
    const FiberMatrix r = build_fiber(v, 1.1, 0.0);
    CHECK(oracle::max_abs_diff(eig_hermitian_tridiag(c.diag, c.off).values, fiber_spectrum(r).values) < 1e-14);
  }
  SUBCASE("N=2, b=0.7, t=2.1, v=0 is symmetric about 0") {
    const ComplexFiberMatrix c = build_complex_fiber(std::vector<double>(5, 0.0), 2.1, 0.7);
    const auto ev = eig_hermitian_tridiag(c.diag, c.off).values;
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(ev[i] + ev[4 - i]) < 1e-11);
  }
  SUBCASE("vectors solve the complex problem") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
      const auto v = oracle::random_vector(rng, 7, -1, 1);
      const ComplexFiberMatrix c = build_complex_fiber(v, 0.3 * trial, 0.2 * trial - 2);
      const HermitianSpectrum h = eig_hermitian_tridiag(c.diag, c.off, true);
      const auto a = c.dense();
      for (std::size_t e = 0; e < 7; ++e) {
        double r = 0;
        for (std::size_t i = 0; i < 7; ++i) {
          cd y = -h.values[e] * h.vectors[e][i];
          for (std::size_t j = 0; j < 7; ++j) y += a[i * 7 + j] * h.vectors[e][j];
          r += std::norm(y);
        }
        CHECK(std::sqrt(r) < 1e-10);
      }
    }
  }
}

TEST_CASE("dense solvers against Jacobi") {
  std::mt19937 rng(14);
  std::normal_distribution<double> G;
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 10);
    std::vector<cd> h(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      h[i * n + i] = G(rng);
      for (std::size_t j = i + 1; j < n; ++j) {
        h[i * n + j] = cd(G(rng), trial % 2 ? G(rng) : 0.0);
        h[j * n + i] = std::conj(h[i * n + j]);
      }
    }
    CHECK(oracle::max_abs_diff(eigvals_hermitian_dense(h, n), oracle::hermitian_eigs_realified(h, n)) < 1e-10);
    if (trial % 2 == 0) {
      std::vector<double> s(n * n);
      std::vector<long double> sl(n * n);
      for (std::size_t i = 0; i < n * n; ++i) sl[i] = s[i] = h[i].real();
      CHECK(oracle::max_abs_diff(eigvals_symmetric_dense(s, n), oracle::jacobi_eigs(sl, n)) < 1e-10);
    }
  }
}

TEST_CASE("spectral identities and continuity") {
  std::mt19937 rng(15);
  std::uniform_real_distribution<double> U(0, 2 * kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const int N = 1 + trial % 6;
    const auto v = oracle::random_vector(rng, static_cast<std::size_t>(2 * N + 1), -1, 1);
    const double t = U(rng), b = U(rng);
    const FiberMatrix m = build_fiber(v, t, b);
    const auto ev = fiber_spectrum(m).values;
    double tr = 0, tv = 0, fr = 0, fv = 0;
    for (double x : ev) tr += x, fr += x * x;
    for (double x : v) tv += x, fv += x * x;
    for (double a : m.off) fv += 2 * a * a;
    CHECK(std::abs(tr - tv) < 1e-10);
    CHECK(std::abs(fr - fv) < 1e-9);
    const double delta = 1e-3;
    const auto ev2 = fiber_spectrum(build_fiber(v, t + delta, b)).values;
    CHECK(oracle::max_abs_diff(ev, ev2) <= (2 * N + 1) * delta);
  }
}

TEST_CASE("gauge_to_real and norms") {
  const GaugeResult g = gauge_to_real(std::vector<cd>{std::polar(2.0, 0.5), std::polar(1.0, -0.25)});
  CHECK(g.theta[0] == 0.0);
  CHECK(g.theta[1] == doctest::Approx(0.5));
  CHECK(g.theta[2] == doctest::Approx(0.25));
  CHECK(g.off[0] == doctest::Approx(2.0));
  CHECK(tridiag_inf_norm(std::vector<double>{1, -3}, std::vector<double>{0.5}) == doctest::Approx(3.5));
}
