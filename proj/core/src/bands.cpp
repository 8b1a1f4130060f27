#include "ribbonlab/bands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ribbonlab/eigen.hpp"
#include "ribbonlab/fiber.hpp"
#include "ribbonlab/parallel.hpp"

namespace ribbonlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double eigenvalue_at(const RibbonSpec& spec, double t, int k) {
  const FiberMatrix m = build_fiber(spec, t);
  return eigvals_tridiag(m.diag, m.off)[static_cast<std::size_t>(k + spec.N)];
}

// Successive parabolic steps on a shrinking stencil around the best grid node.
// sign = +1 refines a minimum, -1 a maximum. Only ever improves the extreme value.
double refine_extremum(const RibbonSpec& spec, int k, double t0, double f0, double h, double sign) {
  double c = t0;
  double fc = f0;
  for (int it = 0; it < 8 && h > 1e-7; ++it) {
    const double fm = eigenvalue_at(spec, c - h, k);
    const double fp = eigenvalue_at(spec, c + h, k);
    if (sign * fm < sign * fc) {
      c -= h;
      fc = fm;
      continue;
    }
    if (sign * fp < sign * fc) {
      c += h;
      fc = fp;
      continue;
    }
    const double curv = sign * (fm - 2.0 * fc + fp);
    if (curv > 0.0) {
      double delta = 0.5 * h * (fm - fp) / (fm - 2.0 * fc + fp);
      delta = std::clamp(delta, -h, h);
      const double fs = eigenvalue_at(spec, c + delta, k);
      if (sign * fs < sign * fc) {
        c += delta;
        fc = fs;
      }
    }
    h *= 0.25;
  }
  return fc;
}

}  // namespace

std::vector<double> uniform_grid(int M) {
  if (M < 1) throw std::invalid_argument("uniform_grid: M must be >= 1");
  std::vector<double> g(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j) g[static_cast<std::size_t>(j)] = kTwoPi * j / M;
  return g;
}

double DispersionSet::value(std::size_t j, int k) const {
  return values[j * static_cast<std::size_t>(p()) + static_cast<std::size_t>(k + spec.N)];
}

std::vector<double> DispersionSet::curve(int k) const {
  if (k < -spec.N || k > spec.N) throw std::out_of_range("DispersionSet::curve: index outside -N..N");
  std::vector<double> c(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) c[j] = value(j, k);
  return c;
}

DispersionSet dispersion(const RibbonSpec& spec, std::vector<double> grid) {
  if (grid.empty()) throw std::invalid_argument("dispersion: empty grid");
  DispersionSet d;
  d.spec = spec;
  d.grid = std::move(grid);
  const std::size_t p = static_cast<std::size_t>(spec.p());
  d.values.resize(d.grid.size() * p);
  parallel_for(d.grid.size(), [&](std::size_t j) {
    const FiberMatrix m = build_fiber(spec, d.grid[j]);
    const std::vector<double> ev = eigvals_tridiag(m.diag, m.off);
    std::copy(ev.begin(), ev.end(), d.values.begin() + static_cast<std::ptrdiff_t>(j * p));
  });
  return d;
}

DispersionSet dispersion(const RibbonSpec& spec, int M) { return dispersion(spec, uniform_grid(M)); }

double flatness_threshold(const RibbonSpec& spec) {
  double vmax = 0.0;
  for (double x : spec.v) vmax = std::max(vmax, std::abs(x));
  return 1e-9 * (1.0 + vmax);
}

BandStructure band_edges(const DispersionSet& d, bool refine) {
  const RibbonSpec& spec = d.spec;
  const std::size_t M = d.grid.size();
  BandStructure bs;
  bs.flat_threshold = flatness_threshold(spec);
  bs.bands.resize(static_cast<std::size_t>(spec.p()));
  std::vector<std::size_t> argmin(bs.bands.size()), argmax(bs.bands.size());
  for (int k = -spec.N; k <= spec.N; ++k) {
    const std::size_t bi = static_cast<std::size_t>(k + spec.N);
    Band& band = bs.bands[bi];
    band.k = k;
    band.lo = d.value(0, k);
    band.hi = band.lo;
    for (std::size_t j = 1; j < M; ++j) {
      const double x = d.value(j, k);
      if (x < band.lo) {
        band.lo = x;
        argmin[bi] = j;
      }
      if (x > band.hi) {
        band.hi = x;
        argmax[bi] = j;
      }
    }
  }
  if (refine && M >= 3) {
    parallel_for(2 * bs.bands.size(), [&](std::size_t task) {
      const std::size_t bi = task / 2;
      Band& band = bs.bands[bi];
      if (band.hi - band.lo < bs.flat_threshold) return;
      // Local spacing from the neighbouring nodes, wrapping around the period.
      const std::size_t j = task % 2 == 0 ? argmin[bi] : argmax[bi];
      const double tl = j == 0 ? d.grid[M - 1] - kTwoPi : d.grid[j - 1];
      const double tr = j + 1 == M ? d.grid[0] + kTwoPi : d.grid[j + 1];
      const double h = 0.5 * (tr - tl);
      if (task % 2 == 0)
        band.lo = refine_extremum(spec, band.k, d.grid[j], band.lo, h, 1.0);
      else
        band.hi = refine_extremum(spec, band.k, d.grid[j], band.hi, h, -1.0);
    });
  }
  // A narrow band is only reported flat when the algebraic criterion agrees.
  const std::optional<double> criterion = detect_flat(spec);
  for (Band& band : bs.bands) {
    if (criterion && band.k == 0 && band.hi - band.lo < bs.flat_threshold) {
      band.flat = true;
      band.flat_value = *criterion;
    }
  }
  return bs;
}

BandStructure band_structure(const RibbonSpec& spec, int M, bool refine) {
  return band_edges(dispersion(spec, M), refine);
}

std::optional<double> detect_flat(const RibbonSpec& spec, double tol) {
  const double v1 = spec.v.at(0);
  const double scale = std::max(1.0, std::abs(v1));
  for (int k = 3; k <= spec.p(); k += 2)
    if (std::abs(spec.v_at(k) - v1) > tol * scale) return std::nullopt;
  return v1;
}

double TransferState::scale() const {
  double m = 0.0;
  for (double x : u) m = std::max(m, std::abs(x));
  return m;
}

TransferState u_sequence(double t, const RibbonSpec& spec) {
  const int N = spec.N;
  TransferState st;
  st.u.assign(static_cast<std::size_t>(2 * N + 3), 0.0);
  st.u[0] = 0.0;
  st.u[1] = 1.0;
  // (u_{2k}, u_{2k+1}) = T_k (u_{2k-2}, u_{2k-1}); T_k uses v_{2k-1}, v_{2k} (v_{2N+2} = 0)
  // and the signed coupling of row 2k-1. Only u_{2N+2} is kept from the last step.
  for (int k = 1; k <= N + 1; ++k) {
    const double vo = spec.v_at(2 * k - 1);
    const double ve = spec.v_at(2 * k);
    const double a = signed_offdiag_entry(2 * k - 1, t, spec.b);
    const double u0 = st.u[static_cast<std::size_t>(2 * k - 2)];
    const double u1 = st.u[static_cast<std::size_t>(2 * k - 1)];
    st.u[static_cast<std::size_t>(2 * k)] = -u0 - vo * u1;
    if (k <= N) st.u[static_cast<std::size_t>(2 * k + 1)] = ve * u0 + (ve * vo - a * a) * u1;
  }
  return st;
}

double u_terminal_ratio(const RibbonSpec& spec, int samples) {
  if (samples < 1) throw std::invalid_argument("u_terminal_ratio: samples must be >= 1");
  RibbonSpec c = spec;
  const double v1 = spec.v.at(0);
  for (double& x : c.v) x -= v1;
  double term = 0.0, scale = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double t = kTwoPi * (j + 0.5) / samples;
    const TransferState st = u_sequence(t, c);
    term = std::max(term, std::abs(st.terminal()));
    scale = std::max(scale, st.scale());
  }
  return term / scale;
}

bool u_detects_flat(const RibbonSpec& spec, int samples, double tol) {
  return u_terminal_ratio(spec, samples) <= tol;
}

std::vector<double> flatband_eigvec(double t, const RibbonSpec& spec) {
  if (!detect_flat(spec)) throw std::domain_error("flatband_eigvec: odd-row potentials are not all equal to v_1");
  std::vector<double> x(static_cast<std::size_t>(spec.p()), 0.0);
  double acc = 1.0;
  x[0] = 1.0;
  for (int k = 1; k <= spec.N; ++k) {
    acc *= -offdiag_entry(2 * k - 1, t, spec.b);
    x[static_cast<std::size_t>(2 * k)] = acc;
  }
  return x;
}

std::vector<double> unperturbed_eigs(int N, double t) {
  if (N < 1) throw std::invalid_argument("unperturbed_eigs: N must be >= 1");
  const double a = 2.0 * std::abs(std::cos(0.5 * t));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * N + 1));
  for (int k = -N; k <= N; ++k) {
    if (k == 0) {
      out.push_back(0.0);
      continue;
    }
    const double c = std::cos(k * std::numbers::pi / (N + 1));
    const double s = k > 0 ? 1.0 : -1.0;
    out.push_back(s * std::sqrt(std::max(0.0, a * a - 2.0 * c * a + 1.0)));
  }
  return out;
}

std::vector<double> unperturbed_eigvec(int N, int k, double t) {
  if (N < 1) throw std::invalid_argument("unperturbed_eigvec: N must be >= 1");
  if (k == 0 || k < -N || k > N) throw std::invalid_argument("unperturbed_eigvec: k must satisfy 1 <= |k| <= N");
  double tr = std::fmod(t, kTwoPi);
  if (tr < 0) tr += kTwoPi;
  if (std::abs(std::sin(tr)) < 1e-12) throw std::domain_error("unperturbed_eigvec: t must avoid 0 and pi (mod 2pi)");
  // J_t^0 depends on t only through |cos(t/2)|, so (pi, 2pi) reflects onto (0, pi).
  if (tr > std::numbers::pi) tr = kTwoPi - tr;
  const double pi_n = std::numbers::pi / (N + 1);
  auto s = [&](int m) { return std::sin(m * pi_n); };
  const double lam = unperturbed_eigs(N, tr)[static_cast<std::size_t>(k + N)];
  const double cs = std::cos(0.5 * tr);
  const double norm = std::sqrt(static_cast<double>(N + 1));
  std::vector<double> x(static_cast<std::size_t>(2 * N + 1));
  for (int n = 1; n <= N + 1; ++n) {
    const double sign = n % 2 == 1 ? 1.0 : -1.0;  // (-1)^{n+1}
    if (n <= N) x[static_cast<std::size_t>(2 * n - 1)] = sign * s(n * k) / norm;
    x[static_cast<std::size_t>(2 * n - 2)] = sign * (2.0 * s(n * k) * cs - s((n - 1) * k)) / (norm * lam);
  }
  return x;
}

std::vector<double> unperturbed_flat_eigvec(int N, double t) {
  RibbonSpec spec = RibbonSpec::make(N, 0.0, std::vector<double>(static_cast<std::size_t>(2 * N + 1), 0.0));
  std::vector<double> x = flatband_eigvec(t, spec);
  double n2 = 0.0;
  for (double xi : x) n2 += xi * xi;
  const double nrm = std::sqrt(n2);
  for (double& xi : x) xi /= nrm;
  return x;
}

BandStructure unperturbed_spectrum(int N) {
  if (N < 1) throw std::invalid_argument("unperturbed_spectrum: N must be >= 1");
  BandStructure bs;
  bs.flat_threshold = 1e-9;
  for (int k = -N; k <= N; ++k) {
    Band b;
    b.k = k;
    if (k == 0) {
      b.flat = true;
      b.flat_value = 0.0;
    } else {
      const int m = std::abs(k);
      const double c = std::cos(m * std::numbers::pi / (N + 1));
      const double s = std::sin(m * std::numbers::pi / (N + 1));
      const double lo = c >= 0.0 ? s : 1.0;
      const double hi = std::sqrt(5.0 - 4.0 * c);
      b.lo = k > 0 ? lo : -hi;
      b.hi = k > 0 ? hi : -lo;
    }
    bs.bands.push_back(b);
  }
  return bs;
}

}  // namespace ribbonlab
