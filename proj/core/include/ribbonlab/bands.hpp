#pragma once

#include <optional>
#include <vector>

#include "ribbonlab/lattice.hpp"

namespace ribbonlab {

// Uniform grid on [0, 2pi): t_j = 2 pi j / M.
std::vector<double> uniform_grid(int M);

struct DispersionSet {
  RibbonSpec spec;
  std::vector<double> grid;
  std::vector<double> values;  // row-major, grid.size() x p, each row ascending

  int p() const { return spec.p(); }
  double value(std::size_t j, int k) const;  // k = -N..N
  std::vector<double> curve(int k) const;
};

DispersionSet dispersion(const RibbonSpec& spec, int M = 1024);
DispersionSet dispersion(const RibbonSpec& spec, std::vector<double> grid);

struct Band {
  int k = 0;  // -N..N
  double lo = 0.0;
  double hi = 0.0;
  bool flat = false;
  std::optional<double> flat_value;
};

struct BandStructure {
  std::vector<Band> bands;
  double flat_threshold = 0.0;
};

double flatness_threshold(const RibbonSpec& spec);

BandStructure band_edges(const DispersionSet& d, bool refine = true);
BandStructure band_structure(const RibbonSpec& spec, int M = 1024, bool refine = true);

// Flat band is present iff all odd-row potentials coincide; the value is v_1.
std::optional<double> detect_flat(const RibbonSpec& spec, double tol = 1e-12);

// Signed transfer recursion u_0..u_{2N+2} at quasimomentum t.
struct TransferState {
  std::vector<double> u;
  double terminal() const { return u.back(); }
  double scale() const;  // max |u_j|
};
TransferState u_sequence(double t, const RibbonSpec& spec);

// max_t |u_{2N+2}| / max_t max_j |u_j| for v centered by v_1, over `samples` points.
double u_terminal_ratio(const RibbonSpec& spec, int samples = 257);
bool u_detects_flat(const RibbonSpec& spec, int samples = 257, double tol = 1e-10);

// Kernel vector of J_t - v_1 supported on odd rows. Requires a flat band.
std::vector<double> flatband_eigvec(double t, const RibbonSpec& spec);

// Zero-field, zero-potential closed forms.
std::vector<double> unperturbed_eigs(int N, double t);
// Orthonormal eigenvector for lambda_k, k != 0, t not in {0, pi} mod 2pi.
std::vector<double> unperturbed_eigvec(int N, int k, double t);
// Flat band eigenvector at b = 0, v = 0, unit norm (t != pi).
std::vector<double> unperturbed_flat_eigvec(int N, double t);
BandStructure unperturbed_spectrum(int N);

}  // namespace ribbonlab
