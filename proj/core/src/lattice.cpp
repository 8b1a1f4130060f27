#include "ribbonlab/lattice.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ribbonlab/eigen.hpp"

namespace ribbonlab {

namespace {

struct Neighbor {
  Site site;
  long long coeff;
};

// The three neighbours of a vertex with the phase coefficient of the hop towards each.
std::array<Neighbor, 3> neighbors(Site s) {
  const long long n = s.n;
  if (s.k % 2 != 0) {
    const long long k = (s.k - 1) / 2;  // s = (n, 2k+1)
    return {{{{s.n, s.k + 1}, n - k},
             {{s.n - 1, s.k + 1}, n + 2 * k},
             {{s.n, s.k - 1}, -(2 * n + k)}}};
  }
  const long long k = s.k / 2;  // s = (n, 2k)
  return {{{{s.n, s.k - 1}, -(n - k + 1)},
           {{s.n + 1, s.k - 1}, -(n + 2 * k - 1)},
           {{s.n, s.k + 1}, 2 * n + k}}};
}

[[noreturn]] void not_adjacent(Site a, Site b) {
  throw std::invalid_argument("lattice: sites (" + std::to_string(a.n) + "," + std::to_string(a.k) + ") and (" +
                              std::to_string(b.n) + "," + std::to_string(b.k) + ") are not joined by an edge");
}

}  // namespace

double RibbonSpec::v_at(int k) const {
  if (k < 1 || k > p()) return 0.0;
  return v[static_cast<std::size_t>(k - 1)];
}

double reduce_flux(double b) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = b - two_pi * std::floor((b + std::numbers::pi) / two_pi);
  if (r >= std::numbers::pi) r -= two_pi;
  return r;
}

double flux_from_field(double B) { return B * std::sqrt(3.0) / 2.0; }

RibbonSpec RibbonSpec::make(int N, double b, std::vector<double> v) {
  if (N < 1) throw std::invalid_argument("RibbonSpec: N must be >= 1");
  if (v.size() != static_cast<std::size_t>(2 * N + 1))
    throw std::invalid_argument("RibbonSpec: potential must have p = 2N+1 = " + std::to_string(2 * N + 1) +
                                " entries, got " + std::to_string(v.size()));
  if (!std::isfinite(b)) throw std::invalid_argument("RibbonSpec: b must be finite");
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument("RibbonSpec: potential entries must be finite");
  RibbonSpec s;
  s.N = N;
  s.b = reduce_flux(b);
  s.v = std::move(v);
  return s;
}

Point vertex_position(Site s) {
  const double r3 = std::sqrt(3.0);
  if (s.k % 2 != 0) {
    const int k = (s.k - 1) / 2;
    return {r3 * (2 * s.n + k), 3.0 * k};
  }
  const int k = s.k / 2;
  return {r3 * (2 * s.n + k), 3.0 * k - 2.0};
}

int edge_class(Site from, Site to) {
  const bool from_even = from.k % 2 == 0;
  const Site e = from_even ? from : to;
  const Site o = from_even ? to : from;
  if (e.k % 2 != 0 || o.k % 2 == 0) not_adjacent(from, to);
  if (o.n == e.n && o.k == e.k + 1) return 1;
  if (o.n == e.n && o.k == e.k - 1) return 2;
  if (o.n == e.n + 1 && o.k == e.k - 1) return 3;
  not_adjacent(from, to);
}

long long phase_coefficient(Site from, Site to) {
  for (const auto& nb : neighbors(from))
    if (nb.site == to) return nb.coeff;
  not_adjacent(from, to);
}

double magnetic_phase(Site from, Site to, double b) {
  return static_cast<double>(phase_coefficient(from, to)) * b;
}

LatticeField::LatticeField(Window w, int p) : w_(w), p_(p) {
  if (w.n_max < w.n_min) throw std::invalid_argument("LatticeField: empty window");
  if (p < 3 || p % 2 == 0) throw std::invalid_argument("LatticeField: p must be 2N+1 with N >= 1");
  data_.assign(static_cast<std::size_t>(w.size()) * static_cast<std::size_t>(p), 0.0);
}

std::size_t LatticeField::index(int n, int k) const {
  return static_cast<std::size_t>(n - w_.n_min) * static_cast<std::size_t>(p_) + static_cast<std::size_t>(k - 1);
}

std::complex<double>& LatticeField::operator()(int n, int k) {
  if (n < w_.n_min || n > w_.n_max || k < 1 || k > p_) throw std::out_of_range("LatticeField: site outside window");
  return data_[index(n, k)];
}

std::complex<double> LatticeField::operator()(int n, int k) const {
  if (n < w_.n_min || n > w_.n_max || k < 1 || k > p_) return 0.0;
  return data_[index(n, k)];
}

LatticeField apply_hamiltonian(const LatticeField& f, const RibbonSpec& spec) {
  if (f.p() != spec.p()) throw std::invalid_argument("apply_hamiltonian: field width does not match spec");
  const Window in = f.window();
  LatticeField out(Window{in.n_min - 1, in.n_max + 1}, f.p());
  const int p = f.p();
  for (int n = in.n_min - 1; n <= in.n_max + 1; ++n) {
    for (int k = 1; k <= p; ++k) {
      std::complex<double> acc = spec.v_at(k) * f(n, k);
      for (const auto& nb : neighbors({n, k})) {
        if (nb.site.k < 1 || nb.site.k > p) continue;
        acc += std::polar(1.0, static_cast<double>(nb.coeff) * spec.b) * f(nb.site.n, nb.site.k);
      }
      out(n, k) = acc;
    }
  }
  return out;
}

std::vector<double> truncated_spectrum(const RibbonSpec& spec, int L) {
  if (L < 2) throw std::invalid_argument("truncated_spectrum: L must be >= 2");
  const int p = spec.p();
  const std::size_t dim = static_cast<std::size_t>(L) * static_cast<std::size_t>(p);
  std::vector<std::complex<double>> a(dim * dim, 0.0);
  auto idx = [p](int n, int k) { return static_cast<std::size_t>(n) * static_cast<std::size_t>(p) + static_cast<std::size_t>(k - 1); };
  for (int n = 0; n < L; ++n) {
    for (int k = 1; k <= p; ++k) {
      const std::size_t i = idx(n, k);
      a[i * dim + i] = spec.v_at(k);
      for (const auto& nb : neighbors({n, k})) {
        if (nb.site.k < 1 || nb.site.k > p || nb.site.n < 0 || nb.site.n >= L) continue;
        a[i * dim + idx(nb.site.n, nb.site.k)] = std::polar(1.0, static_cast<double>(nb.coeff) * spec.b);
      }
    }
  }
  return eigvals_hermitian_dense(std::move(a), dim);
}

RibbonGraph build_ribbon(int N, Window w) {
  if (N < 1) throw std::invalid_argument("build_ribbon: N must be >= 1");
  if (w.n_max < w.n_min) throw std::invalid_argument("build_ribbon: empty window");
  const int p = 2 * N + 1;
  RibbonGraph g;
  g.N = N;
  g.window = w;
  auto idx = [&](int n, int k) {
    return static_cast<std::size_t>(n - w.n_min) * static_cast<std::size_t>(p) + static_cast<std::size_t>(k - 1);
  };
  for (int n = w.n_min; n <= w.n_max; ++n)
    for (int k = 1; k <= p; ++k) g.vertices.push_back({{n, k}, vertex_position({n, k})});
  for (int n = w.n_min; n <= w.n_max; ++n) {
    for (int kk = 1; kk <= N; ++kk) {
      const Site s{n, 2 * kk};
      const std::array<Site, 3> ends{{{n, 2 * kk + 1}, {n, 2 * kk - 1}, {n + 1, 2 * kk - 1}}};
      for (int c = 0; c < 3; ++c) {
        const Site o = ends[static_cast<std::size_t>(c)];
        if (o.n < w.n_min || o.n > w.n_max) continue;
        g.edges.push_back({idx(s.n, s.k), idx(o.n, o.k), c + 1, phase_coefficient(s, o)});
      }
    }
  }
  return g;
}

}  // namespace ribbonlab
