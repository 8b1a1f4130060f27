#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace ribbonlab {

// Zigzag ribbon of width parameter N: p = 2N+1 transverse rows, periodic along n.
// b is the reduced flux, stored reduced to [-pi, pi). v holds v_1..v_p (v[0] is v_1).
struct RibbonSpec {
  int N = 0;
  double b = 0.0;
  std::vector<double> v;

  int p() const { return 2 * N + 1; }
  double v_at(int k) const;  // 1-based; 0 outside 1..p

  // Validates N >= 1, |v| == p, finite entries; reduces b.
  static RibbonSpec make(int N, double b, std::vector<double> v);
};

double reduce_flux(double b);
// Flux in terms of field strength: b = B * sqrt(3) / 2.
double flux_from_field(double B);

// Lattice site (n, k): n along the ribbon, k the transverse row 0..p+1 (0 and p+1 are virtual).
struct Site {
  int n = 0;
  int k = 0;
  bool operator==(const Site&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

Point vertex_position(Site s);

// Edge classes, edges hang off the even vertex (n, 2k):
//   1: (n,2k)-(n,2k+1)   2: (n,2k)-(n,2k-1)   3: (n,2k)-(n+1,2k-1)
int edge_class(Site from, Site to);  // throws if the sites are not adjacent

// Integer c with phase(from -> to) = c * b. Antisymmetric under reversal.
long long phase_coefficient(Site from, Site to);
double magnetic_phase(Site from, Site to, double b);

struct Window {
  int n_min = 0;
  int n_max = 0;  // inclusive
  int size() const { return n_max - n_min + 1; }
};

// Complex field on a window of cells, rows 1..p. Values outside are zero.
class LatticeField {
 public:
  LatticeField(Window w, int p);
  std::complex<double>& operator()(int n, int k);
  std::complex<double> operator()(int n, int k) const;  // 0 outside the support
  const Window& window() const { return w_; }
  int p() const { return p_; }
  std::size_t index(int n, int k) const;
  std::vector<std::complex<double>>& data() { return data_; }
  const std::vector<std::complex<double>>& data() const { return data_; }

 private:
  Window w_;
  int p_;
  std::vector<std::complex<double>> data_;
};

// Evaluates the magnetic Schroedinger operator on a finitely supported field.
// The result lives on the window grown by one cell on each side.
LatticeField apply_hamiltonian(const LatticeField& f, const RibbonSpec& spec);

// Spectrum of the operator restricted to cells n = 0..L-1 (Dirichlet at the cut).
std::vector<double> truncated_spectrum(const RibbonSpec& spec, int L);

struct Vertex {
  Site site;
  Point pos;
};

struct Edge {
  std::size_t from = 0;  // index into vertices, always the even-row endpoint
  std::size_t to = 0;
  int cls = 0;
  long long phase_coeff = 0;  // phase(from -> to) / b
};

struct RibbonGraph {
  int N = 0;
  Window window;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
};

// Real rows 1..p only; edges leaving the window are dropped.
RibbonGraph build_ribbon(int N, Window w);

}  // namespace ribbonlab
