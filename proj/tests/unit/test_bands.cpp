#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ribbonlab/bands.hpp"
#include "ribbonlab/eigen.hpp"
#include "ribbonlab/fiber.hpp"

using namespace ribbonlab;

namespace {

constexpr double kPi = std::numbers::pi;

RibbonSpec zero_spec(int N, double b = 0.0) {
  return RibbonSpec::make(N, b, std::vector<double>(static_cast<std::size_t>(2 * N + 1), 0.0));
}

double matvec_residual(const FiberMatrix& m, const std::vector<double>& x, double lam) {
  double r = 0;
  const std::size_t n = m.diag.size();
  for (std::size_t i = 0; i < n; ++i) {
    double y = (m.diag[i] - lam) * x[i];
    if (i > 0) y += m.off[i - 1] * x[i - 1];
    if (i + 1 < n) y += m.off[i] * x[i + 1];
    r += y * y;
  }
  return std::sqrt(r);
}

double norm(const std::vector<double>& x) {
  double s = 0;
  for (double a : x) s += a * a;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("dispersion") {
  const double s5 = std::sqrt(5.0);
  SUBCASE("M=4 rows") {
    const DispersionSet d = dispersion(zero_spec(1), 4);
    REQUIRE(d.grid.size() == 4);
    CHECK(d.grid[2] == doctest::Approx(kPi));
    CHECK(d.value(0, -1) == doctest::Approx(-s5));
    CHECK(std::abs(d.value(0, 0)) < 1e-12);
    CHECK(d.value(0, 1) == doctest::Approx(s5));
    CHECK(d.value(2, -1) == doctest::Approx(-1.0));
    CHECK(d.value(2, 1) == doctest::Approx(1.0));
  }
  SUBCASE("rows ascending, middle curve zero at v=0") {
    for (double b : {0.0, 0.4, -2.2}) {
      const DispersionSet d = dispersion(zero_spec(3, b), 128);
      for (std::size_t j = 0; j < d.grid.size(); ++j) {
        CHECK(std::abs(d.value(j, 0)) < 1e-12);
        for (int k = -3; k < 3; ++k) CHECK(d.value(j, k) <= d.value(j, k + 1));
      }
    }
  }
  SUBCASE("b=0 reflection through pi") {
    std::mt19937 rng(20);
    const RibbonSpec s = RibbonSpec::make(2, 0.0, oracle::random_vector(rng, 5, -1, 1));
    const int M = 64;
    const DispersionSet d = dispersion(s, M);
    for (int j = 1; j < M / 2; ++j)
      for (int k = -2; k <= 2; ++k)
        CHECK(std::abs(d.value(static_cast<std::size_t>(M / 2 + j), k) - d.value(static_cast<std::size_t>(M / 2 - j), k)) < 1e-12);
  }
  SUBCASE("particle-hole symmetry at v=0 for any b") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> U(-kPi, kPi);
    for (int trial = 0; trial < 10; ++trial) {
      const DispersionSet d = dispersion(zero_spec(1 + trial % 4, U(rng)), 32);
      const int N = d.spec.N;
      for (std::size_t j = 0; j < d.grid.size(); ++j)
        for (int k = 1; k <= N; ++k) CHECK(std::abs(d.value(j, k) + d.value(j, -k)) < 1e-11);
    }
  }
  SUBCASE("curve accessor") {
    const DispersionSet d = dispersion(zero_spec(1), 8);
    CHECK(d.curve(1).size() == 8);
    CHECK(d.curve(1)[0] == d.value(0, 1));
  }
}

TEST_CASE("band_edges") {
  const double s5 = std::sqrt(5.0);
  SUBCASE("N=1 unrefined and refined") {
    const std::vector<std::pair<double, double>> want{{-s5, -1}, {0, 0}, {1, s5}};
    const BandStructure raw = band_edges(dispersion(zero_spec(1), 1024), false);
    const BandStructure ref = band_edges(dispersion(zero_spec(1), 1024), true);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(raw.bands[i].lo - want[i].first) < 2e-4);
      CHECK(std::abs(raw.bands[i].hi - want[i].second) < 2e-4);
      CHECK(std::abs(ref.bands[i].lo - want[i].first) < 1e-8);
      CHECK(std::abs(ref.bands[i].hi - want[i].second) < 1e-8);
    }
    CHECK(ref.bands[1].flat);
    REQUIRE(ref.bands[1].flat_value.has_value());
    CHECK(*ref.bands[1].flat_value == 0.0);
    CHECK_FALSE(ref.bands[0].flat);
  }
  SUBCASE("N=3, sigma_1") {
    const BandStructure bs = band_structure(zero_spec(3));
    const Band& b1 = bs.bands[4];
    CHECK(b1.k == 1);
    CHECK(std::abs(b1.lo - std::sin(kPi / 4)) < 1e-6);
    CHECK(std::abs(b1.hi - std::sqrt(5 - 2 * std::sqrt(2.0))) < 1e-6);
    CHECK(b1.lo == doctest::Approx(0.70711).epsilon(1e-5));
    CHECK(b1.hi == doctest::Approx(1.47363).epsilon(1e-5));
    for (int k = 1; k <= 3; ++k) {
      CHECK(std::abs(bs.bands[static_cast<std::size_t>(3 + k)].lo + bs.bands[static_cast<std::size_t>(3 - k)].hi) < 1e-9);
      CHECK(std::abs(bs.bands[static_cast<std::size_t>(3 + k)].hi + bs.bands[static_cast<std::size_t>(3 - k)].lo) < 1e-9);
    }
  }
  SUBCASE("refinement never worsens an edge") {
    std::mt19937 rng(22);
    for (int trial = 0; trial < 6; ++trial) {
      const RibbonSpec s = RibbonSpec::make(2, 0.3 * trial, oracle::random_vector(rng, 5, -1, 1));
      const DispersionSet d = dispersion(s, 256);
      const BandStructure raw = band_edges(d, false), ref = band_edges(d, true);
      for (std::size_t i = 0; i < 5; ++i) {
        CHECK(ref.bands[i].lo <= raw.bands[i].lo);
        CHECK(ref.bands[i].hi >= raw.bands[i].hi);
        CHECK(ref.bands[i].lo <= ref.bands[i].hi);
      }
    }
  }
  SUBCASE("number of maximal gaps is at most 2N") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
      const int N = 1 + trial % 4;
      const RibbonSpec s = RibbonSpec::make(N, 0.5 * trial, oracle::random_vector(rng, static_cast<std::size_t>(2 * N + 1), -2, 2));
      BandStructure bs = band_structure(s, 256);
      std::sort(bs.bands.begin(), bs.bands.end(), [](const Band& a, const Band& b) { return a.lo < b.lo; });
      int gaps = 0;
      double reach = bs.bands[0].hi;
      for (std::size_t i = 1; i < bs.bands.size(); ++i) {
        if (bs.bands[i].lo > reach) ++gaps;
        reach = std::max(reach, bs.bands[i].hi);
      }
      CHECK(gaps <= 2 * N);
    }
  }
  CHECK(flatness_threshold(RibbonSpec::make(1, 0, {0, -3, 1})) == doctest::Approx(4e-9));
}

TEST_CASE("flat band detection") {
  CHECK(detect_flat(zero_spec(2, 1.3)).value() == 0.0);
  CHECK(detect_flat(RibbonSpec::make(2, 0.7, {0.3, -1.0, 0.3, 2.0, 0.3})).value() == doctest::Approx(0.3));
  CHECK_FALSE(detect_flat(RibbonSpec::make(1, 0, {0, 0, 0.1})).has_value());
  const BandStructure bs = band_structure(RibbonSpec::make(1, 0, {0, 0, 0.1}), 512);
  CHECK(bs.bands[1].hi - bs.bands[1].lo > 1e-6);
  CHECK_FALSE(bs.bands[1].flat);

  SUBCASE("three detectors agree on random specs") {
    std::mt19937 rng(24);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int trial = 0; trial < 40; ++trial) {
      const int N = 1 + trial % 4;
      auto v = oracle::random_vector(rng, static_cast<std::size_t>(2 * N + 1), -1, 1);
      if (trial % 2 == 0)
        for (std::size_t i = 2; i < v.size(); i += 2) v[i] = v[0];
      const RibbonSpec s = RibbonSpec::make(N, U(rng) * kPi, v);
      const bool alg = detect_flat(s).has_value();
      const bool num = band_structure(s, 1024).bands[static_cast<std::size_t>(N)].flat;
      const bool u = u_detects_flat(s);
      CHECK(alg == (trial % 2 == 0));
      CHECK(num == alg);
      CHECK(u == alg);
    }
  }
}

TEST_CASE("u_sequence") {
  std::mt19937 rng(25);
  std::uniform_real_distribution<double> U(0, 2 * kPi);
  SUBCASE("initial values and the v=0, N=1 pattern") {
    const double t = 0.9;
    const TransferState st = u_sequence(t, zero_spec(1));
    REQUIRE(st.u.size() == 5);
    CHECK(st.u[0] == 0.0);
    CHECK(st.u[1] == 1.0);
    CHECK(std::abs(st.u[2]) < 1e-15);
    const double a1 = signed_offdiag_entry(1, t, 0.0);
    CHECK(st.u[3] == doctest::Approx(-a1 * a1));
    CHECK(std::abs(st.u[4]) < 1e-15);
  }
  SUBCASE("terminal value vanishes exactly for flat-band potentials") {
    for (int trial = 0; trial < 64; ++trial) {
      const int N = 1 + trial % 5;
      auto v = oracle::random_vector(rng, static_cast<std::size_t>(2 * N + 1), -1, 1);
      for (std::size_t i = 0; i < v.size(); i += 2) v[i] = 0.0;
      const TransferState st = u_sequence(U(rng), RibbonSpec::make(N, U(rng), v));
      CHECK(std::abs(st.terminal()) <= 1e-10 * st.scale());
    }
  }
  SUBCASE("terminal value is proportional to det(J_t)") {
    for (int trial = 0; trial < 20; ++trial) {
      const int N = 1 + trial % 4;
      const auto v = oracle::random_vector(rng, static_cast<std::size_t>(2 * N + 1), -1, 1);
      const double t = U(rng), b = U(rng);
      const RibbonSpec s = RibbonSpec::make(N, b, v);
      const FiberMatrix m = build_fiber(s, t);
      const auto q = oracle::tridiag_charpoly(m.diag, m.off);  // q(0) = (-1)^p det
      const double det = -static_cast<double>(q[0]);
      const double u = u_sequence(t, s).terminal();
      CHECK(std::abs(std::abs(u) - std::abs(det)) < 1e-10 * (1 + std::abs(det)));
    }
  }
  SUBCASE("non-constant odd rows are detected after centering") {
    for (int trial = 0; trial < 20; ++trial) {
      const int N = 1 + trial % 4;
      auto v = oracle::random_vector(rng, static_cast<std::size_t>(2 * N + 1), -1, 1);
      v[0] = 0.0;
      v[2] = 0.5;
      const RibbonSpec s = RibbonSpec::make(N, U(rng), v);
      CHECK(u_terminal_ratio(s) > 1e-6);
    }
  }
}

TEST_CASE("flatband_eigvec") {
  const auto x0 = flatband_eigvec(0.0, zero_spec(1));
  CHECK(oracle::max_abs_diff(x0, {1, 0, -2}) < 1e-15);
  const auto xp = flatband_eigvec(kPi, zero_spec(1));
  CHECK(oracle::max_abs_diff(xp, {1, 0, 0}) < 1e-15);
  CHECK_THROWS_AS(flatband_eigvec(0.0, RibbonSpec::make(1, 0, {0, 0, 1})), std::domain_error);

  std::mt19937 rng(26);
  std::uniform_real_distribution<double> U(0, 2 * kPi);
  for (int trial = 0; trial < 40; ++trial) {
    const int N = 1 + trial % 6;
    auto v = oracle::random_vector(rng, static_cast<std::size_t>(2 * N + 1), -1, 1);
    for (std::size_t i = 2; i < v.size(); i += 2) v[i] = v[0];
    const RibbonSpec s = RibbonSpec::make(N, U(rng), v);
    const double t = U(rng);
    const auto x = flatband_eigvec(t, s);
    for (std::size_t i = 1; i < x.size(); i += 2) CHECK(x[i] == 0.0);
    CHECK(matvec_residual(build_fiber(s, t), x, v[0]) <= 1e-11 * norm(x));
  }
}

TEST_CASE("closed forms at b = v = 0") {
  const double s5 = std::sqrt(5.0);
  CHECK(oracle::max_abs_diff(unperturbed_eigs(1, 0.0), {-s5, 0, s5}) < 1e-14);
  CHECK(oracle::max_abs_diff(unperturbed_eigs(2, kPi), {-1, -1, 0, 1, 1}) < 1e-14);

  SUBCASE("eigenvalues match the solver") {
    for (int N = 1; N <= 20; ++N)
      for (int j = 0; j < 64; ++j) {
        const double t = 2 * kPi * (j + 0.37) / 64;
        const FiberMatrix m = build_fiber(zero_spec(N), t);
        CHECK(oracle::max_abs_diff(unperturbed_eigs(N, t), fiber_spectrum(m).values) < 1e-11);
      }
  }
  SUBCASE("eigenvectors on both sides of pi") {
    for (int N = 1; N <= 8; ++N) {
      for (int j = 0; j < 32; ++j) {
        const double t = 2 * kPi * (j + 0.5) / 32;
        if (std::abs(t - kPi) < 1e-3) continue;
        const FiberMatrix m = build_fiber(zero_spec(N), t);
        const auto lam = unperturbed_eigs(N, t);
        std::vector<std::vector<double>> phis;
        for (int k = -N; k <= N; ++k) {
          if (k == 0) continue;
          const auto phi = unperturbed_eigvec(N, k, t);
          CHECK(std::abs(norm(phi) - 1) < 1e-12);
          CHECK(matvec_residual(m, phi, lam[static_cast<std::size_t>(k + N)]) < 1e-10);
          phis.push_back(phi);
        }
        phis.push_back(unperturbed_flat_eigvec(N, t));
        CHECK(matvec_residual(m, phis.back(), 0.0) < 1e-10);
        for (std::size_t a = 0; a < phis.size(); ++a)
          for (std::size_t c = 0; c < a; ++c) {
            double d = 0;
            for (std::size_t i = 0; i < phis[a].size(); ++i) d += phis[a][i] * phis[c][i];
            CHECK(std::abs(d) < 1e-10);
          }
      }
    }
  }
  CHECK_THROWS(unperturbed_eigvec(2, 1, kPi));
  CHECK_THROWS(unperturbed_eigvec(2, 1, 0.0));
  CHECK_THROWS(unperturbed_eigvec(2, 0, 1.0));

  SUBCASE("closed-form bands") {
    const BandStructure u1 = unperturbed_spectrum(1);
    CHECK(u1.bands[0].lo == doctest::Approx(-s5));
    CHECK(u1.bands[0].hi == doctest::Approx(-1));
    CHECK(u1.bands[1].flat);
    CHECK(u1.bands[2].lo == doctest::Approx(1));
    CHECK(u1.bands[2].hi == doctest::Approx(s5));
    const BandStructure u3 = unperturbed_spectrum(3);
    CHECK(u3.bands[6].lo == doctest::Approx(1.0));
    CHECK(u3.bands[6].hi == doctest::Approx(std::sqrt(5 + 2 * std::sqrt(2.0))));
    for (int N = 1; N <= 10; ++N) {
      const BandStructure a = unperturbed_spectrum(N), num = band_structure(zero_spec(N));
      for (std::size_t i = 0; i < a.bands.size(); ++i) {
        CHECK(std::abs(a.bands[i].lo - num.bands[i].lo) < 1e-6);
        CHECK(std::abs(a.bands[i].hi - num.bands[i].hi) < 1e-6);
      }
    }
  }
}
