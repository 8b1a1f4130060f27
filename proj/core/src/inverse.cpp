#include "ribbonlab/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ribbonlab/asymptotics.hpp"
#include "ribbonlab/eigen.hpp"
#include "ribbonlab/fiber.hpp"

namespace ribbonlab {

namespace {

using Matrix = std::vector<std::vector<double>>;

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return std::sqrt(s);
}

// Gaussian elimination with partial pivoting. Returns false if a pivot falls below tol * max|A|.
bool solve_linear(Matrix A, std::vector<double> rhs, double tol, std::vector<double>& x) {
  const std::size_t n = A.size();
  double amax = 0.0;
  for (const auto& row : A)
    for (double a : row) amax = std::max(amax, std::abs(a));
  if (amax == 0.0) return false;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    if (std::abs(A[piv][c]) <= tol * amax) return false;
    std::swap(A[piv], A[c]);
    std::swap(rhs[piv], rhs[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double m = A[r][c] / A[c][c];
      if (m == 0.0) continue;
      for (std::size_t j = c; j < n; ++j) A[r][j] -= m * A[c][j];
      rhs[r] -= m * rhs[c];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
    x[i] = s / A[i][i];
  }
  return true;
}

double middle_eigenvalue(const std::vector<double>& v, double t, double b) {
  const FiberMatrix m = build_fiber(v, t, b);
  return eigvals_tridiag(m.diag, m.off)[(v.size() - 1) / 2];
}

std::vector<double> mismatch(const OddPotential& w, double b, const NodeSet& nodes, const std::vector<double>& targets) {
  std::vector<double> f = forward_odd(w, b, nodes);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] -= targets[i];
  return f;
}

bool strictly_increasing(const std::vector<double>& x) {
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) return false;
  return true;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

std::vector<double> OddPotential::expand() const {
  std::vector<double> v(2 * odd.size() - 1, 0.0);
  for (std::size_t j = 0; j < odd.size(); ++j) v[2 * j] = odd[j];
  return v;
}

NodeSet NodeSet::periodic(int N) {
  if (N < 1) throw std::invalid_argument("NodeSet: N must be >= 1");
  NodeSet s;
  for (int k = 0; k <= N; ++k) s.t.push_back(k * std::numbers::pi / (N + 1));
  return s;
}

void NodeSet::validate() const {
  if (t.empty()) throw std::invalid_argument("NodeSet: no nodes");
  for (double x : t)
    if (!(x >= 0.0 && x < 2.0 * std::numbers::pi)) throw std::invalid_argument("NodeSet: nodes must lie in [0, 2pi)");
  std::vector<double> s = t;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] == s[i - 1]) throw std::invalid_argument("NodeSet: nodes must be distinct");
}

std::vector<double> forward_odd(const OddPotential& w, double b, const NodeSet& nodes) {
  if (w.N() < 1) throw std::invalid_argument("forward_odd: need N >= 1 (at least two odd entries)");
  nodes.validate();
  const std::vector<double> v = w.expand();
  std::vector<double> out;
  out.reserve(nodes.t.size());
  for (double t : nodes.t) out.push_back(middle_eigenvalue(v, t, b));
  return out;
}

std::vector<std::vector<double>> forward_odd_jacobian(const OddPotential& w, double b, const NodeSet& nodes, double h) {
  const std::size_t n = nodes.t.size();
  const std::size_t m = w.odd.size();
  Matrix J(n, std::vector<double>(m));
  for (std::size_t j = 0; j < m; ++j) {
    OddPotential wp = w, wm = w;
    wp.odd[j] += h;
    wm.odd[j] -= h;
    const std::vector<double> fp = forward_odd(wp, b, nodes);
    const std::vector<double> fm = forward_odd(wm, b, nodes);
    for (std::size_t i = 0; i < n; ++i) J[i][j] = (fp[i] - fm[i]) / (2.0 * h);
  }
  return J;
}

std::vector<std::vector<double>> linearization_matrix(int N, double b, const NodeSet& nodes) {
  Matrix D;
  for (double t : nodes.t) D.push_back(flatband_weights(N, t, b));
  return D;
}

InverseResult recover_odd(const std::vector<double>& targets, double b, const NodeSet& nodes, const NewtonOptions& opt) {
  const int N = static_cast<int>(targets.size()) - 1;
  if (N < 1) throw std::invalid_argument("recover_odd: need at least two targets");
  if (nodes.t.size() != targets.size())
    throw std::invalid_argument("recover_odd: number of nodes must equal number of targets (N+1)");
  nodes.validate();
  for (double x : targets)
    if (!std::isfinite(x)) throw std::invalid_argument("recover_odd: targets must be finite");

  const double tol = 1e-10 * (1.0 + norm2(targets));
  InverseResult res;
  std::vector<double> w0;
  if (!solve_linear(linearization_matrix(N, b, nodes), targets, opt.singular_tol, w0))
    throw std::domain_error("nodes yield degenerate linearization");

  OddPotential w{w0};
  std::vector<double> F = mismatch(w, b, nodes, targets);
  double r = norm2(F);
  int polish = 0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (r <= tol) {
      // A couple of extra steps tighten the potential itself, not just the residual.
      if (r == 0.0 || polish >= 2) break;
      ++polish;
    }
    const Matrix J = forward_odd_jacobian(w, b, nodes, opt.fd_step);
    std::vector<double> neg(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) neg[i] = -F[i];
    std::vector<double> delta;
    if (!solve_linear(J, neg, opt.singular_tol, delta)) throw std::domain_error("nodes yield degenerate linearization");
    if (r <= tol && norm2(delta) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + norm2(w.odd))) break;
    double step = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opt.max_halvings; ++h, step *= 0.5) {
      OddPotential trial = w;
      for (std::size_t j = 0; j < delta.size(); ++j) trial.odd[j] += step * delta[j];
      std::vector<double> Ft = mismatch(trial, b, nodes, targets);
      const double rt = norm2(Ft);
      if (rt < r) {
        w = std::move(trial);
        F = std::move(Ft);
        r = rt;
        accepted = true;
        break;
      }
    }
    res.iterations = it + 1;
    if (!accepted) break;
  }
  res.recovered = w.odd;
  res.residual = r;
  res.converged = r <= tol;
  res.message = res.converged ? "converged" : "no convergence: residual " + fmt(r) + " after " +
                                                  std::to_string(res.iterations) + " iterations";
  return res;
}

OddPotential nonuniqueness_seed(int N) {
  if (N < 1) throw std::invalid_argument("nonuniqueness_seed: N must be >= 1");
  OddPotential w;
  w.odd.push_back(-1.0);
  for (int n = 1; n <= N; ++n) w.odd.push_back(n);
  return w;
}

std::vector<double> antiperiodic_eigs(const std::vector<double>& v) {
  if (v.size() < 3 || v.size() % 2 == 0) throw std::invalid_argument("antiperiodic_eigs: length must be 2N+1, N >= 1");
  std::vector<double> out{v[0]};
  for (std::size_t k = 1; k + 1 < v.size(); k += 2) {
    // (lambda - x)(lambda - y) = 1
    const double x = v[k], y = v[k + 1];
    const double s = x + y;
    const double d = std::hypot(x - y, 2.0);
    const double big = s >= 0 ? 0.5 * (s + d) : 0.5 * (s - d);
    const double small = (x * y - 1.0) / big;  // product of the roots is xy - 1
    out.push_back(big);
    out.push_back(small);
  }
  std::sort(out.begin(), out.end());
  return out;
}

InverseResult recover_monotone(const std::vector<double>& psi, Direction direction, bool check_domain) {
  if (psi.size() < 3 || psi.size() % 2 == 0) throw std::invalid_argument("recover_monotone: length must be 2N+1, N >= 1");
  for (double x : psi)
    if (!std::isfinite(x)) throw std::invalid_argument("recover_monotone: non-finite spectral data");
  if (!std::is_sorted(psi.begin(), psi.end())) throw std::invalid_argument("recover_monotone: psi must be sorted ascending");
  const std::size_t N = (psi.size() - 1) / 2;
  const double tol = 1e-12;
  if (check_domain) {
    const double lm1 = psi[N - 1], l0 = psi[N], l1 = psi[N + 1];
    if (!(lm1 < 0.0) || l0 < -tol || l0 > 1.0 + tol || l1 < 1.0 - tol)
      throw std::domain_error("outside injectivity domain (alpha <= 1 required)");
  }
  std::vector<double> v(psi.size());
  v[0] = psi[N];
  for (std::size_t k = 1; k <= N; ++k) {
    const double la = psi[k - 1], lb = psi[N + k];
    const double sigma = la + lb;
    const double prod = la * lb + 1.0;
    double disc = sigma * sigma - 4.0 * prod;
    if (disc < -tol) throw std::domain_error("inconsistent spectral data");
    disc = std::max(disc, 0.0);
    const double sq = std::sqrt(disc);
    // Larger-magnitude root from the sum, the other from the product.
    double hi, lo;
    if (sigma >= 0.0) {
      hi = 0.5 * (sigma + sq);
      lo = hi != 0.0 ? prod / hi : 0.0;
    } else {
      lo = 0.5 * (sigma - sq);
      hi = prod / lo;
    }
    if (direction == Direction::increasing) {
      v[2 * k - 1] = lo;
      v[2 * k] = hi;
    } else {
      // Smallest pair sits at the far end of a decreasing potential.
      const std::size_t kk = N + 1 - k;
      v[2 * kk - 1] = hi;
      v[2 * kk] = lo;
    }
  }
  InverseResult res;
  res.recovered = v;
  const std::vector<double> back = antiperiodic_eigs(v);
  double r = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) r = std::max(r, std::abs(back[i] - psi[i]));
  res.residual = r;
  res.iterations = 0;
  res.converged = true;
  res.message = "closed form";
  return res;
}

CounterexamplePair counterexample_pair(double alpha, double epsilon, int N) {
  if (N < 1) throw std::invalid_argument("counterexample_pair: N must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("counterexample_pair: epsilon must be positive");
  const int p = 2 * N + 1;
  const double e = epsilon;
  const double bound = std::min(alpha, 1.25);
  CounterexamplePair out;
  out.v.assign(static_cast<std::size_t>(p), 0.0);
  out.w.assign(static_cast<std::size_t>(p), 0.0);
  // Shared middle entries v_2 .. v_{p-2}, evenly spread inside (1/4, 3/4).
  const int mid = p - 3;
  for (int i = 1; i <= mid; ++i) {
    const double x = 0.25 + 0.5 * i / (mid + 1.0);
    out.v[static_cast<std::size_t>(i)] = x;
    out.w[static_cast<std::size_t>(i)] = x;
  }
  out.v[0] = 2.0 * e;
  out.v[static_cast<std::size_t>(p - 2)] = 1.0 + 5.0 * e - std::sqrt(2.0 * e + e * e);
  out.v[static_cast<std::size_t>(p - 1)] = 1.0 + 5.0 * e + std::sqrt(2.0 * e + e * e);
  out.w[0] = 4.0 * e;
  out.w[static_cast<std::size_t>(p - 2)] = 1.0 + 4.0 * e - 2.0 * std::sqrt(e + e * e);
  out.w[static_cast<std::size_t>(p - 1)] = 1.0 + 4.0 * e + 2.0 * std::sqrt(e + e * e);

  auto check = [&](const std::vector<double>& x, const char* name) {
    if (!strictly_increasing(x))
      throw std::domain_error(std::string("counterexample_pair: ") + name + " is not strictly increasing for eps = " + fmt(e));
    if (x.back() > bound)
      throw std::domain_error(std::string("counterexample_pair: ") + name + "_p = " + fmt(x.back()) +
                              " exceeds min(alpha, 5/4) = " + fmt(bound));
    if (x.front() < 0.0) throw std::domain_error(std::string("counterexample_pair: ") + name + "_1 is negative");
  };
  check(out.v, "v");
  check(out.w, "w");
  return out;
}

double feasible_epsilon(double alpha, int N) {
  for (double e = 0.01; e >= 1e-12; e *= 0.5) {
    try {
      counterexample_pair(alpha, e, N);
      return e;
    } catch (const std::domain_error&) {
    }
  }
  throw std::domain_error("counterexample_pair: no feasible epsilon for alpha = " + fmt(alpha) +
                          " (the construction needs alpha > 1)");
}

}  // namespace ribbonlab
