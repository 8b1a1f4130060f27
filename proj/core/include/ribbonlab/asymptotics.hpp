#pragma once

#include <map>
#include <string>
#include <vector>

#include "ribbonlab/lattice.hpp"

namespace ribbonlab {

// predicted/numeric are flat lists; intervals are stored as consecutive (lo, hi) pairs.
struct AsymptoticReport {
  std::string formula_id;
  std::map<std::string, double> params;
  std::vector<double> predicted;
  std::vector<double> numeric;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string order_claim;
  bool passed = false;
  std::vector<std::string> notes;
};

struct MagneticEdges {
  double mu1_minus = 0.0;
  double mu2_minus = 0.0;
  double mu2_plus = 0.0;
  double mu1_plus = 0.0;
};

// First-order outer/inner edges of the band gap structure in small field, v = 0.
MagneticEdges magnetic_edges_asym(int N, double b);
// Slope coefficient of mu_2^+ as displayed: 3 c_1 sqrt(4 - c_1^2) / (2 (N+1) s_1), entering with a minus sign.
double magnetic_edge_coefficient(int N);

std::vector<double> flatband_weights(int N, double t, double b);
double flatband_firstorder(const RibbonSpec& spec, double t);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

// Strong-coupling band intervals for the potential tau * v, v strictly increasing; entry k-1 is band k.
std::vector<Interval> strongfield_edges(int N, const std::vector<double>& v, double tau);

// d/db lambda_k(t, b, 0) at b = 0 from two closed-form candidates.
struct DerivativeCandidates {
  double displayed = 0.0;    // the stated lemma bracket with c_k sign(t - pi)
  double proof_final = 0.0;  // the last line of its derivation, continued to t > pi by t -> 2pi - t
};
DerivativeCandidates db_lambda_formula(int N, int k, double t);

// Finite-difference oracle for d/db lambda_k(t, b, 0): central, Richardson-extrapolated once.
double db_lambda_numeric(int N, int k, double t, double h = 1e-4);

struct DerivativeSample {
  int N = 0;
  int k = 0;
  double t = 0.0;
  double numeric = 0.0;
  DerivativeCandidates candidates;
};

// Which candidate family agrees with the oracle on every sample.
struct DerivativeAdjudication {
  std::vector<DerivativeSample> samples;
  int displayed_matches = 0;
  int proof_final_matches = 0;
  double tol = 0.0;
  std::string winner;  // "displayed", "proof_final", "both" or "none"
  bool consistent() const { return winner == "displayed" || winner == "proof_final"; }
};

DerivativeAdjudication adjudicate_db_lambda(const std::vector<DerivativeSample>& points, double tol = 1e-5);

// Report builders shared by the acceptance suite and the `verify` subcommand.
AsymptoticReport verify_closed_form(int N, int M = 1024);
AsymptoticReport verify_magnetic_edge(int N, double b, double tol = 5e-3);
AsymptoticReport verify_flatband_order(const RibbonSpec& spec, double t,
                                       const std::vector<double>& eps = {0.1, 0.05, 0.025});
AsymptoticReport verify_flatband_weights(int N, double t, double b, double tol = 1e-6);
AsymptoticReport verify_strong_field(int N, const std::vector<double>& v, double tau,
                                     double rel_tol = 0.1);
AsymptoticReport verify_db_lambda(int N, int k, double t, double tol = 1e-5);

}  // namespace ribbonlab
