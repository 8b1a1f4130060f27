#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ribbonlab {

// Potential with zero even rows: odd[j] = v_{2j+1}, j = 0..N.
struct OddPotential {
  std::vector<double> odd;

  int N() const { return static_cast<int>(odd.size()) - 1; }
  std::vector<double> expand() const;
};

struct NodeSet {
  std::vector<double> t;

  // t_k = k pi / (N+1), k = 0..N.
  static NodeSet periodic(int N);
  void validate() const;  // throws on duplicates or values outside [0, 2pi)
};

struct InverseResult {
  std::vector<double> recovered;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

std::vector<double> forward_odd(const OddPotential& w, double b, const NodeSet& nodes);

// Columns by forward differences of step h.
std::vector<std::vector<double>> forward_odd_jacobian(const OddPotential& w, double b,
                                                      const NodeSet& nodes, double h = 1e-6);
// D_0[n][m] = eta_m(t_n).
std::vector<std::vector<double>> linearization_matrix(int N, double b, const NodeSet& nodes);

struct NewtonOptions {
  int max_iterations = 50;
  int max_halvings = 8;
  double fd_step = 1e-6;
  double singular_tol = 1e-12;
};

// Square problem: nodes.t.size() == targets.size() == N+1.
InverseResult recover_odd(const std::vector<double>& targets, double b, const NodeSet& nodes,
                          const NewtonOptions& opt = {});

OddPotential nonuniqueness_seed(int N);

// Spectrum of J_pi(0, v) from its 1x1 and 2x2 blocks, ascending.
std::vector<double> antiperiodic_eigs(const std::vector<double>& v);

enum class Direction { increasing, decreasing };

// check_domain = false skips the interlacing test (used to show what the formula does outside it).
InverseResult recover_monotone(const std::vector<double>& psi, Direction direction,
                               bool check_domain = true);

struct CounterexamplePair {
  std::vector<double> v;
  std::vector<double> w;
};
CounterexamplePair counterexample_pair(double alpha, double epsilon, int N);
// Largest eps = 2^-j * 0.01 (j >= 0) for which the construction is feasible; throws if none down to 1e-12.
double feasible_epsilon(double alpha, int N);

}  // namespace ribbonlab
