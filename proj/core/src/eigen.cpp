#include "ribbonlab/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ribbonlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSafeMin = std::numeric_limits<double>::min();

void check_shape(std::span<const double> diag, std::size_t off_size) {
  if (diag.empty()) throw std::invalid_argument("eigen: empty matrix");
  if (off_size + 1 != diag.size())
    throw std::invalid_argument("eigen: off-diagonal length must be size - 1");
  for (double d : diag)
    if (!std::isfinite(d)) throw std::invalid_argument("eigen: non-finite diagonal entry");
}

struct Workspace {
  std::span<const double> d;
  std::vector<double> e2;
  double pivmin = kSafeMin;

  Workspace(std::span<const double> diag, std::span<const double> off) : d(diag), e2(off.size()) {
    double emax = 1.0;
    for (std::size_t i = 0; i < off.size(); ++i) {
      if (!std::isfinite(off[i])) throw std::invalid_argument("eigen: non-finite off-diagonal entry");
      e2[i] = off[i] * off[i];
      emax = std::max(emax, e2[i]);
    }
    pivmin = kSafeMin * emax;
  }

  std::size_t count(double x) const {
    std::size_t neg = 0;
    double q = d[0] - x;
    // A vanishing pivot is nudged positive, so x itself is not counted.
    if (std::abs(q) < pivmin) q = pivmin;
    if (q < 0) ++neg;
    for (std::size_t i = 1; i < d.size(); ++i) {
      q = (d[i] - x) - e2[i - 1] / q;
      if (std::abs(q) < pivmin) q = pivmin;
      if (q < 0) ++neg;
    }
    return neg;
  }

  // Newton correction -f/f' for f = det(T - x).
  bool newton_step(double x, double& step) const {
    double q = d[0] - x;
    double dq = -1.0;
    if (q == 0.0) return false;
    double s = dq / q;
    for (std::size_t i = 1; i < d.size(); ++i) {
      const double qn = (d[i] - x) - e2[i - 1] / q;
      const double dqn = -1.0 + e2[i - 1] * dq / (q * q);
      q = qn;
      dq = dqn;
      if (q == 0.0) return false;
      s += dq / q;
    }
    if (s == 0.0 || !std::isfinite(s)) return false;
    step = -1.0 / s;
    return true;
  }
};

void gershgorin(std::span<const double> d, std::span<const double> off, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < n) r += std::abs(off[i]);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  const double pad = 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + kSafeMin;
  lo -= pad;
  hi += pad;
}

std::vector<double> bisect_all(std::span<const double> diag, std::span<const double> off) {
  const std::size_t n = diag.size();
  if (n == 1) return {diag[0]};
  Workspace ws(diag, off);
  double glo, ghi;
  gershgorin(diag, off, glo, ghi);
  const double tol = 1e-13 * std::max(1.0, tridiag_inf_norm(diag, off));

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    // i-th eigenvalue x satisfies count(lo) <= i < count(hi).
    double lo = glo, hi = ghi;
    if (i > 0) lo = std::max(lo, out[i - 1] - tol);
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (ws.count(mid) > i)
        hi = mid;
      else
        lo = mid;
    }
    double x = 0.5 * (lo + hi);
    double step = 0.0;
    if (ws.newton_step(x, step)) {
      const double y = x + step;
      if (y >= lo && y <= hi) x = y;
    }
    out[i] = x;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Solves (T - lambda I) y = x in place with partial pivoting.
void shifted_solve(std::span<const double> d, std::span<const double> e, double lambda,
                   std::vector<double>& x, double tiny) {
  const std::size_t n = d.size();
  if (n == 1) {
    double piv = d[0] - lambda;
    if (std::abs(piv) < tiny) piv = tiny;
    x[0] /= piv;
    return;
  }
  // Banded LU with row swaps; swapping fills the second super-diagonal.
  std::vector<double> a0(n), a1(n), a2(n);  // diagonal, first and second super-diagonal
  std::vector<double> sub(n);
  for (std::size_t i = 0; i < n; ++i) {
    a0[i] = d[i] - lambda;
    a1[i] = i + 1 < n ? e[i] : 0.0;
    a2[i] = 0.0;
    sub[i] = i > 0 ? e[i - 1] : 0.0;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // Pivot between row i and row i+1 (which has sub-diagonal entry sub[i+1]).
    if (std::abs(sub[i + 1]) > std::abs(a0[i])) {
      std::swap(a0[i], sub[i + 1]);
      std::swap(a1[i], a0[i + 1]);
      std::swap(a2[i], a1[i + 1]);
      std::swap(x[i], x[i + 1]);
    }
    if (std::abs(a0[i]) < tiny) a0[i] = tiny;
    const double m = sub[i + 1] / a0[i];
    a0[i + 1] -= m * a1[i];
    a1[i + 1] -= m * a2[i];
    x[i + 1] -= m * x[i];
  }
  if (std::abs(a0[n - 1]) < tiny) a0[n - 1] = tiny;
  x[n - 1] /= a0[n - 1];
  if (n >= 2) x[n - 2] = (x[n - 2] - a1[n - 2] * x[n - 1]) / a0[n - 2];
  for (std::size_t ii = n - 2; ii-- > 0;) {
    x[ii] = (x[ii] - a1[ii] * x[ii + 1] - a2[ii] * x[ii + 2]) / a0[ii];
  }
}

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return std::sqrt(s);
}

// Eigenpairs of one unreduced block.
void block_eigenpairs(std::span<const double> d, std::span<const double> e, double scale,
                      std::vector<double>& vals, std::vector<std::vector<double>>& vecs) {
  const std::size_t n = d.size();
  vals = bisect_all(d, e);
  vecs.assign(n, std::vector<double>(n, 0.0));
  if (n == 1) {
    vecs[0][0] = 1.0;
    return;
  }
  const double tiny = kEps * scale;
  const double cluster_gap = 1e-8 * scale;
  std::size_t cluster_start = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0 && vals[j] - vals[j - 1] > cluster_gap) cluster_start = j;
    // Nearly equal eigenvalues are separated a little so the solves differ.
    const double lambda = vals[j] + static_cast<double>(j - cluster_start) * 10.0 * tiny;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.37 * std::sin(1.3 * static_cast<double>(i + j) + 0.5);
    for (int it = 0; it < 4; ++it) {
      shifted_solve(d, e, lambda, x, tiny);
      for (std::size_t c = cluster_start; c < j; ++c) {
        const double dot = std::inner_product(x.begin(), x.end(), vecs[c].begin(), 0.0);
        for (std::size_t i = 0; i < n; ++i) x[i] -= dot * vecs[c][i];
      }
      const double nx = norm2(x);
      if (nx == 0.0 || !std::isfinite(nx)) {
        for (std::size_t i = 0; i < n; ++i) x[i] = (i == j) ? 1.0 : 0.0;
        continue;
      }
      for (double& xi : x) xi /= nx;
    }
    vecs[j] = std::move(x);
  }
}

}  // namespace

double SpectrumResult::at(int k) const {
  const int n = static_cast<int>(values.size());
  const int N = (n - 1) / 2;
  if (n % 2 == 0 || k < -N || k > N) throw std::out_of_range("SpectrumResult::at: index outside -N..N");
  return values[static_cast<std::size_t>(k + N)];
}

double tridiag_inf_norm(std::span<const double> diag, std::span<const double> off) {
  double m = 0.0;
  const std::size_t n = diag.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = std::abs(diag[i]);
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < n) r += std::abs(off[i]);
    m = std::max(m, r);
  }
  return m;
}

std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double x) {
  check_shape(diag, off.size());
  return Workspace(diag, off).count(x);
}

std::vector<double> eigvals_tridiag(std::span<const double> diag, std::span<const double> off) {
  check_shape(diag, off.size());
  return bisect_all(diag, off);
}

SpectrumResult eig_tridiag(std::span<const double> diag, std::span<const double> off, bool want_vectors) {
  check_shape(diag, off.size());
  SpectrumResult res;
  if (!want_vectors) {
    res.values = bisect_all(diag, off);
    return res;
  }
  const std::size_t n = diag.size();
  const double scale = std::max(1.0, tridiag_inf_norm(diag, off));
  const double split = 4.0 * kEps * scale;

  struct Pair {
    double value;
    std::vector<double> vec;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n);
  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool end = (i + 1 == n) || std::abs(off[i]) <= split;
    if (!end) continue;
    const std::size_t len = i - start + 1;
    std::vector<double> vals;
    std::vector<std::vector<double>> vecs;
    block_eigenpairs(diag.subspan(start, len), off.subspan(start, len - 1), scale, vals, vecs);
    for (std::size_t j = 0; j < len; ++j) {
      std::vector<double> full(n, 0.0);
      std::copy(vecs[j].begin(), vecs[j].end(), full.begin() + static_cast<std::ptrdiff_t>(start));
      pairs.push_back({vals[j], std::move(full)});
    }
    start = i + 1;
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.value < b.value; });
  res.values.reserve(n);
  res.vectors.reserve(n);
  for (auto& p : pairs) {
    res.values.push_back(p.value);
    res.vectors.push_back(std::move(p.vec));
  }
  return res;
}

GaugeResult gauge_to_real(std::span<const std::complex<double>> off) {
  GaugeResult g;
  g.theta.assign(off.size() + 1, 0.0);
  g.off.resize(off.size());
  for (std::size_t j = 0; j < off.size(); ++j) {
    const double r = std::abs(off[j]);
    g.off[j] = r;
    // With a zero coupling the two blocks decouple and the phase restarts.
    g.theta[j + 1] = r == 0.0 ? 0.0 : g.theta[j] + std::arg(off[j]);
  }
  return g;
}

HermitianSpectrum eig_hermitian_tridiag(std::span<const double> diag,
                                        std::span<const std::complex<double>> off, bool want_vectors) {
  check_shape(diag, off.size());
  const GaugeResult g = gauge_to_real(off);
  SpectrumResult r = eig_tridiag(diag, g.off, want_vectors);
  HermitianSpectrum out;
  out.values = std::move(r.values);
  if (want_vectors) {
    // Real eigenvector y of D M D^* gives x = D^* y for M.
    for (const auto& y : r.vectors) {
      std::vector<std::complex<double>> x(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) x[i] = std::polar(1.0, -g.theta[i]) * y[i];
      out.vectors.push_back(std::move(x));
    }
  }
  return out;
}

std::vector<double> eigvals_symmetric_dense(std::vector<double> a, std::size_t n) {
  if (n == 0) throw std::invalid_argument("eigen: empty matrix");
  if (a.size() != n * n) throw std::invalid_argument("eigen: dense matrix size mismatch");
  std::vector<double> v(n), p(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += a[i * n + k] * a[i * n + k];
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const double alpha = a[(k + 1) * n + k];
    const double beta = alpha >= 0.0 ? -xnorm : xnorm;
    v[k + 1] = alpha - beta;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a[i * n + k];
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    const double tau = 2.0 / vnorm2;
    for (std::size_t i = k + 1; i < n; ++i) {
      double s = 0.0;
      const double* row = &a[i * n];
      for (std::size_t j = k + 1; j < n; ++j) s += row[j] * v[j];
      p[i] = tau * s;
    }
    double vp = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vp += v[i] * p[i];
    const double kfac = 0.5 * tau * vp;
    for (std::size_t i = k + 1; i < n; ++i) w[i] = p[i] - kfac * v[i];
    for (std::size_t i = k + 1; i < n; ++i) {
      double* row = &a[i * n];
      const double vi = v[i], wi = w[i];
      for (std::size_t j = k + 1; j < n; ++j) row[j] -= vi * w[j] + wi * v[j];
    }
    a[(k + 1) * n + k] = beta;
    a[k * n + k + 1] = beta;
    for (std::size_t i = k + 2; i < n; ++i) {
      a[i * n + k] = 0.0;
      a[k * n + i] = 0.0;
    }
  }
  std::vector<double> diag(n), off(n - 1);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i];
  for (std::size_t i = 0; i + 1 < n; ++i) off[i] = std::abs(a[(i + 1) * n + i]);
  return bisect_all(diag, off);
}

std::vector<double> eigvals_hermitian_dense(std::vector<std::complex<double>> a, std::size_t n) {
  using cd = std::complex<double>;
  if (n == 0) throw std::invalid_argument("eigen: empty matrix");
  if (a.size() != n * n) throw std::invalid_argument("eigen: dense matrix size mismatch");
  if (std::all_of(a.begin(), a.end(), [](const cd& z) { return z.imag() == 0.0; })) {
    std::vector<double> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i].real();
    return eigvals_symmetric_dense(std::move(r), n);
  }
  auto A = [&](std::size_t i, std::size_t j) -> cd& { return a[i * n + j]; };

  std::vector<double> diag(n), off(n > 1 ? n - 1 : 0);
  std::vector<cd> v(n), p(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    // Householder reflector annihilating A(k+2.., k).
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(A(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const cd alpha = A(k + 1, k);
    const cd phase = std::abs(alpha) == 0.0 ? cd(1.0) : alpha / std::abs(alpha);
    const cd beta = -phase * xnorm;
    for (std::size_t i = 0; i < n; ++i) v[i] = 0.0;
    v[k + 1] = alpha - beta;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = A(i, k);
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
    if (vnorm2 == 0.0) continue;
    const double tau = 2.0 / vnorm2;
    // H = I - tau v v^*; A <- H A H using p = tau A v, w = p - (tau/2)(v^* p) v.
    for (std::size_t i = k; i < n; ++i) {
      cd s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += A(i, j) * v[j];
      p[i] = tau * s;
    }
    cd vp = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vp += std::conj(v[i]) * p[i];
    const cd kfac = 0.5 * tau * vp;
    for (std::size_t i = k; i < n; ++i) w[i] = p[i] - kfac * v[i];
    w[k] = p[k];
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= v[i] * std::conj(w[j]) + w[i] * std::conj(v[j]);
    }
    A(k + 1, k) = beta;
    A(k, k + 1) = std::conj(beta);
    for (std::size_t i = k + 2; i < n; ++i) {
      A(i, k) = 0.0;
      A(k, i) = 0.0;
    }
  }
  std::vector<cd> coff(off.size());
  for (std::size_t i = 0; i < n; ++i) diag[i] = A(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i) coff[i] = A(i + 1, i);
  // The sub-diagonal is complex in general; gauge it real before bisection.
  const GaugeResult g = gauge_to_real(coff);
  return bisect_all(diag, g.off);
}

}  // namespace ribbonlab
