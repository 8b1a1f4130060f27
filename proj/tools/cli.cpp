#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "ribbonlab/asymptotics.hpp"
#include "ribbonlab/bands.hpp"
#include "ribbonlab/fiber.hpp"
#include "ribbonlab/inverse.hpp"
#include "ribbonlab/lattice.hpp"

namespace ribbonlab::cli {

using nlohmann::json;

namespace {

struct RunConfig {
  int N = 1;
  double b = 0.0;
  double B = 0.0;
  std::string v;
  int samples = 1024;
  bool no_refine = false;
  std::string out;
  std::string format;
  unsigned seed = 1;

  // subcommand specific
  std::string formula;
  double t = 0.5;
  int k = 1;
  double tau = 50.0;
  std::string in;
  std::string targets;
  std::string nodes;
  std::string w;
  std::string psi;
  std::string direction = "increasing";
  bool unchecked = false;
  double alpha = 1.25;
  double eps = 0.0;
  std::string window = "0:1";
  double dump_fiber_t = 0.0;
};

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot open " + path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw UsageError("malformed JSON in " + path + ": " + e.what());
  }
}

std::vector<double> json_numbers(const json& j, const std::string& what) {
  if (!j.is_array()) throw UsageError(what + " must be a JSON array of numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw UsageError(what + " must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

// Inline list or a JSON file holding an array (or an object with the given key).
std::vector<double> list_or_file(const std::string& text, const std::string& key) {
  const std::string s = trim(text);
  if (!s.empty() && std::filesystem::is_regular_file(s)) {
    const json j = read_json_file(s);
    if (j.is_object()) {
      if (!j.contains(key)) throw UsageError(s + " has no \"" + key + "\" entry");
      return json_numbers(j.at(key), key);
    }
    return json_numbers(j, key);
  }
  return parse_list(s);
}

double flux(const RunConfig& c, const CLI::App& sub) {
  if (sub.count("--B") > 0) return flux_from_field(c.B);
  return c.b;
}

RibbonSpec make_spec(const RunConfig& c, const CLI::App& sub) {
  const std::vector<double> v = c.v.empty() ? std::vector<double>(static_cast<std::size_t>(2 * c.N + 1), 0.0)
                                            : parse_potential(c.v, c.N);
  return RibbonSpec::make(c.N, flux(c, sub), v);
}

json band_json(const BandStructure& bs) {
  json arr = json::array();
  for (const Band& b : bs.bands) {
    json o;
    o["k"] = b.k;
    o["lo"] = b.lo;
    o["hi"] = b.hi;
    o["flat"] = b.flat;
    o["flat_value"] = b.flat_value ? json(*b.flat_value) : json(nullptr);
    arr.push_back(o);
  }
  return arr;
}

json report_json(const AsymptoticReport& r) {
  json j;
  j["formula_id"] = r.formula_id;
  json params = json::object();
  for (const auto& [key, val] : r.params) {
    if (std::floor(val) == val && std::abs(val) < 1e9)
      params[key] = static_cast<long long>(val);
    else
      params[key] = val;
  }
  j["params"] = params;
  j["predicted"] = r.predicted;
  j["numeric"] = r.numeric;
  j["residual"] = r.residual;
  j["tolerance"] = r.tolerance;
  j["order_claim"] = r.order_claim;
  j["passed"] = r.passed;
  j["notes"] = r.notes;
  return j;
}

json inverse_json(const InverseResult& r) {
  json j;
  j["recovered"] = r.recovered;
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["message"] = r.message;
  return j;
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream os(c.out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + c.out);
  os << text;
  if (!os) throw std::runtime_error("write failed for " + c.out);
}

void emit_json(const RunConfig& c, std::ostream& out, const json& j) { emit(c, out, j.dump(2) + "\n"); }

void require_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
  if (c.format.empty()) return;
  for (const char* a : allowed)
    if (c.format == a) return;
  throw UsageError("unsupported --format " + c.format);
}

// Canonical identifiers; the short labels are accepted as aliases.
const std::map<std::string, std::string>& formula_aliases() {
  static const std::map<std::string, std::string> m = {
      {"closed-form-bands", "closed-form-bands"},
      {"T2-2a", "closed-form-bands"},
      {"T2-3a", "closed-form-bands"},
      {"magnetic-edge", "magnetic-edge"},
      {"T3-2", "magnetic-edge"},
      {"flatband-first-order", "flatband-first-order"},
      {"T4-1", "flatband-first-order"},
      {"flatband-weights", "flatband-weights"},
      {"T4-2", "flatband-weights"},
      {"strong-field", "strong-field"},
      {"T5", "strong-field"},
      {"T5.1", "strong-field"},
      {"T5.3", "strong-field"},
      {"magnetic-derivative", "magnetic-derivative"},
      {"i2", "magnetic-derivative"},
  };
  return m;
}

void add_common(CLI::App* sub, RunConfig& c, bool with_v = true) {
  sub->add_option("--N", c.N, "ribbon width parameter (p = 2N+1 rows)")->check(CLI::PositiveNumber);
  auto* ob = sub->add_option("--b", c.b, "reduced flux b (radians)");
  auto* oB = sub->add_option("--B", c.B, "field strength B, converted as b = B*sqrt(3)/2");
  ob->excludes(oB);
  if (with_v)
    sub->add_option("--v", c.v,
                    "potential: p comma-separated values, one value (broadcast), odd:<N+1 values>, or a JSON file");
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--format", c.format, "output format (csv|json)");
  sub->add_option("--seed", c.seed, "seed for randomized inputs");
}

std::vector<double> random_potential(unsigned seed, int N) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(2 * N + 1));
  for (double& x : v) x = U(rng);
  return v;
}

int dispatch(const std::string& name, RunConfig& c, const CLI::App& sub, std::ostream& out) {
  if (name == "bands") {
    require_format(c, {"json", "csv"});
    const RibbonSpec spec = make_spec(c, sub);
    const BandStructure bs = band_structure(spec, c.samples, !c.no_refine);
    if (c.format == "csv") {
      std::ostringstream os;
      os << "k,lo,hi,flat,flat_value\n";
      for (const Band& b : bs.bands)
        os << b.k << ',' << g17(b.lo) << ',' << g17(b.hi) << ',' << (b.flat ? 1 : 0) << ','
           << (b.flat_value ? g17(*b.flat_value) : "") << '\n';
      emit(c, out, os.str());
    } else {
      emit_json(c, out, band_json(bs));
    }
    return kOk;
  }
  if (name == "dispersion") {
    require_format(c, {"csv", "json"});
    const RibbonSpec spec = make_spec(c, sub);
    if (sub.count("--dump-fiber") > 0) {
      json j;
      j["t"] = c.dump_fiber_t;
      json re = json::array(), cx = json::array();
      for (const MatrixEntry& e : fiber_triples(build_fiber(spec, c.dump_fiber_t)))
        re.push_back({e.row, e.col, e.value.real()});
      for (const MatrixEntry& e : fiber_triples(build_complex_fiber(spec, c.dump_fiber_t)))
        cx.push_back({e.row, e.col, e.value.real(), e.value.imag()});
      j["real"] = re;
      j["complex"] = cx;
      emit_json(c, out, j);
      return kOk;
    }
    const DispersionSet d = dispersion(spec, c.samples);
    if (c.format == "json") {
      json j;
      j["t"] = d.grid;
      json curves = json::array();
      for (int k = -spec.N; k <= spec.N; ++k) curves.push_back(d.curve(k));
      j["curves"] = curves;
      emit_json(c, out, j);
    } else {
      std::ostringstream os;
      write_dispersion_csv(d, os);
      emit(c, out, os.str());
    }
    return kOk;
  }
  if (name == "flatband") {
    require_format(c, {"json"});
    const RibbonSpec spec = make_spec(c, sub);
    const auto crit = detect_flat(spec);
    const BandStructure bs = band_structure(spec, c.samples, false);
    const Band& mid = bs.bands[static_cast<std::size_t>(spec.N)];
    const double ratio = u_terminal_ratio(spec);
    const bool u_flat = ratio <= 1e-10;
    json j;
    j["criterion"] = crit.has_value();
    j["flat_value"] = crit ? json(*crit) : json(nullptr);
    j["curve0_width"] = mid.hi - mid.lo;
    j["threshold"] = bs.flat_threshold;
    j["width_flat"] = mid.flat;
    j["u_terminal_ratio"] = ratio;
    j["u_flat"] = u_flat;
    j["consistent"] = crit.has_value() == mid.flat && mid.flat == u_flat;
    if (crit) {
      j["t"] = c.t;
      j["eigenvector"] = flatband_eigvec(c.t, spec);
    }
    emit_json(c, out, j);
    return kOk;
  }
  if (name == "verify") {
    require_format(c, {"json"});
    const auto it = formula_aliases().find(c.formula);
    if (it == formula_aliases().end()) throw UsageError("unknown --formula " + c.formula);
    const std::string& id = it->second;
    AsymptoticReport r;
    if (id == "closed-form-bands") {
      r = verify_closed_form(c.N, c.samples);
    } else if (id == "magnetic-edge") {
      const double b = flux(c, sub);
      r = verify_magnetic_edge(c.N, b == 0.0 ? 0.01 : std::abs(b));
    } else if (id == "flatband-first-order") {
      std::vector<double> v = c.v.empty() ? random_potential(c.seed, c.N) : parse_potential(c.v, c.N);
      r = verify_flatband_order(RibbonSpec::make(c.N, flux(c, sub), v), c.t);
    } else if (id == "flatband-weights") {
      r = verify_flatband_weights(c.N, c.t, flux(c, sub));
    } else if (id == "strong-field") {
      std::vector<double> v;
      if (c.v.empty()) {
        for (int i = 1; i <= 2 * c.N + 1; ++i) v.push_back(i / (2.0 * c.N + 1.0));
      } else {
        v = parse_potential(c.v, c.N);
      }
      r = verify_strong_field(c.N, v, c.tau);
    } else {
      r = verify_db_lambda(c.N, c.k, c.t);
    }
    emit_json(c, out, report_json(r));
    return kOk;
  }
  if (name == "inverse-odd") {
    require_format(c, {"json"});
    std::vector<double> targets, nodes;
    double b = flux(c, sub);
    if (!c.in.empty()) {
      const json j = read_json_file(c.in);
      if (!j.is_object() || !j.contains("targets")) throw UsageError(c.in + " must hold {targets, b, nodes}");
      targets = json_numbers(j.at("targets"), "targets");
      if (j.contains("b")) {
        if (!j.at("b").is_number()) throw UsageError("b must be a number");
        b = j.at("b").get<double>();
      }
      if (j.contains("nodes")) nodes = json_numbers(j.at("nodes"), "nodes");
    } else if (!c.w.empty()) {
      OddPotential w{parse_list(c.w)};
      const NodeSet ns = c.nodes.empty() ? NodeSet::periodic(w.N()) : NodeSet{list_or_file(c.nodes, "nodes")};
      targets = forward_odd(w, b, ns);
      nodes = ns.t;
    } else if (!c.targets.empty()) {
      targets = list_or_file(c.targets, "targets");
    } else {
      throw UsageError("inverse-odd needs --in, --targets or --w");
    }
    if (nodes.empty()) {
      if (!c.nodes.empty()) nodes = list_or_file(c.nodes, "nodes");
      else if (targets.size() >= 2) nodes = NodeSet::periodic(static_cast<int>(targets.size()) - 1).t;
    }
    const InverseResult r = recover_odd(targets, b, NodeSet{nodes});
    json j = inverse_json(r);
    j["targets"] = targets;
    j["nodes"] = nodes;
    j["b"] = b;
    emit_json(c, out, j);
    return kOk;
  }
  if (name == "inverse-mono") {
    require_format(c, {"json"});
    std::vector<double> psi;
    if (!c.psi.empty())
      psi = list_or_file(c.psi, "psi");
    else if (!c.v.empty())
      psi = antiperiodic_eigs(parse_list(c.v));
    else
      throw UsageError("inverse-mono needs --psi or --v");
    Direction dir;
    if (c.direction == "increasing")
      dir = Direction::increasing;
    else if (c.direction == "decreasing")
      dir = Direction::decreasing;
    else
      throw UsageError("--direction must be increasing or decreasing");
    const InverseResult r = recover_monotone(psi, dir, !c.unchecked);
    json j = inverse_json(r);
    j["psi"] = psi;
    emit_json(c, out, j);
    return kOk;
  }
  if (name == "counterexample") {
    require_format(c, {"json"});
    const double eps = sub.count("--eps") > 0 ? c.eps : feasible_epsilon(c.alpha, c.N);
    const CounterexamplePair pr = counterexample_pair(c.alpha, eps, c.N);
    const auto pv = antiperiodic_eigs(pr.v);
    const auto pw = antiperiodic_eigs(pr.w);
    double diff = 0.0;
    for (std::size_t i = 0; i < pv.size(); ++i) diff = std::max(diff, std::abs(pv[i] - pw[i]));
    json j;
    j["alpha"] = c.alpha;
    j["eps"] = eps;
    j["v"] = pr.v;
    j["w"] = pr.w;
    j["psi_v"] = pv;
    j["psi_w"] = pw;
    j["max_psi_diff"] = diff;
    j["recovered_increasing"] = recover_monotone(pv, Direction::increasing, false).recovered;
    emit_json(c, out, j);
    return kOk;
  }
  if (name == "graph") {
    require_format(c, {"json"});
    const auto colon = c.window.find(':');
    if (colon == std::string::npos) throw UsageError("--window must be n_min:n_max");
    Window w;
    try {
      w.n_min = std::stoi(c.window.substr(0, colon));
      w.n_max = std::stoi(c.window.substr(colon + 1));
    } catch (const std::exception&) {
      throw UsageError("--window must be n_min:n_max with integers");
    }
    const RibbonGraph g = build_ribbon(c.N, w);
    json verts = json::array(), edges = json::array();
    for (const Vertex& v : g.vertices) verts.push_back({{"n", v.site.n}, {"k", v.site.k}, {"x", v.pos.x}, {"y", v.pos.y}});
    for (const Edge& e : g.edges)
      edges.push_back({{"from", e.from}, {"to", e.to}, {"class", e.cls}, {"phase_coeff", e.phase_coeff}});
    json j;
    j["N"] = g.N;
    j["vertices"] = verts;
    j["edges"] = edges;
    emit_json(c, out, j);
    return kOk;
  }
  throw UsageError("unknown subcommand " + name);
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::string s = trim(text);
  if (!s.empty() && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw UsageError("empty entry in list '" + text + "'");
    std::size_t used = 0;
    double x;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
    if (used != item.size()) throw UsageError("not a number: '" + item + "'");
    out.push_back(x);
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::vector<double> parse_potential(const std::string& text, int N) {
  const std::string s = trim(text);
  const std::size_t p = static_cast<std::size_t>(2 * N + 1);
  if (s.rfind("odd:", 0) == 0) {
    const std::vector<double> odd = parse_list(s.substr(4));
    if (odd.size() != static_cast<std::size_t>(N + 1))
      throw std::invalid_argument("odd potential must have N+1 = " + std::to_string(N + 1) + " entries");
    return OddPotential{odd}.expand();
  }
  std::vector<double> v = list_or_file(s, "v");
  if (v.size() == 1) v.assign(p, v[0]);
  if (v.size() != p) throw std::invalid_argument("potential must have p = 2N+1 = " + std::to_string(p) + " entries");
  return v;
}

void write_dispersion_csv(const DispersionSet& d, std::ostream& os) {
  const int N = d.spec.N;
  os << 't';
  for (int k = -N; k <= N; ++k) os << ",lambda_" << k;
  os << '\n';
  for (std::size_t j = 0; j < d.grid.size(); ++j) {
    os << g17(d.grid[j]);
    for (int k = -N; k <= N; ++k) os << ',' << g17(d.value(j, k));
    os << '\n';
  }
}

void emit_dispersion_csv(const DispersionSet& d, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_dispersion_csv(d, os);
  if (!os) throw std::runtime_error("write failed for " + path);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ribbonlab: spectra of zigzag nanoribbons in magnetic and electric fields"};
  app.set_config("--config", "", "TOML file with the same keys as the flags, one [section] per subcommand");
  app.require_subcommand(1);
  RunConfig c;

  auto* bands = app.add_subcommand(
      "bands",
      "Band edges sigma_k = [min_t lambda_k, max_t lambda_k]; at v = 0, b = 0 these are "
      "[s_k, sqrt(5-4c_k)] for c_k >= 0, [1, sqrt(5-4c_k)] for c_k < 0, and the flat band {0}");
  add_common(bands, c);
  bands->add_option("--samples", c.samples, "grid size M on [0, 2pi)")->check(CLI::PositiveNumber);
  bands->add_flag("--no-refine", c.no_refine, "skip the local parabolic refinement of edges");

  auto* disp = app.add_subcommand(
      "dispersion", "Sorted eigenvalue curves lambda_k(t) of the fiber matrix J_t(b, v) on a uniform grid; "
                    "at b = v = 0 they follow lambda_k = sqrt(a^2 - 2 c_k a + 1), a = 2|cos(t/2)|");
  add_common(disp, c);
  disp->add_option("--samples", c.samples, "grid size M on [0, 2pi)")->check(CLI::PositiveNumber);
  disp->add_option("--dump-fiber", c.dump_fiber_t, "instead of curves, dump J_t and its complex form at this t as (row, col, value) triples");

  auto* flat = app.add_subcommand(
      "flatband", "Flat-band test: the band {v_1} exists iff v_{2n+1} = v_1 for all n; compares this criterion with "
                  "the numeric width of lambda_0 and with the transfer recursion u_{2N+2}(t) = 0");
  add_common(flat, c);
  flat->add_option("--samples", c.samples, "grid size M used for the width test")->check(CLI::PositiveNumber);
  flat->add_option("--t", c.t, "quasimomentum for the reported kernel vector");

  auto* ver = app.add_subcommand(
      "verify",
      "Compare an asymptotic formula with exact numerics. Formulas: closed-form-bands (zero-field band edges), "
      "magnetic-edge (mu_2 = s_1 - 3c_1 sqrt(4-c_1^2)/(2(N+1)s_1) b), flatband-first-order "
      "(lambda_0 = sum v_{2k+1} eta_k + O(|v|^2)), flatband-weights (eta_k = beta_k^2 / sum beta_s^2), strong-field "
      "(edges tau v_k - xi_k/tau), magnetic-derivative (two closed forms of d lambda_k / db at b = 0)");
  add_common(ver, c);
  ver->add_option("--formula", c.formula, "formula id (short labels like T3-2 are accepted)")->required();
  ver->add_option("--samples", c.samples, "grid size M")->check(CLI::PositiveNumber);
  ver->add_option("--t", c.t, "quasimomentum");
  ver->add_option("--k", c.k, "band index for magnetic-derivative");
  ver->add_option("--tau", c.tau, "coupling for strong-field")->check(CLI::PositiveNumber);

  auto* inv_odd = app.add_subcommand(
      "inverse-odd", "Recover an odd-row potential from flat-band values lambda_0(t_j, b, v) by damped Newton, "
                     "started from the linearization lambda_0 = sum v_{2k+1} eta_k(t)");
  add_common(inv_odd, c, false);
  inv_odd->add_option("--in", c.in, "JSON file {targets, b, nodes}");
  inv_odd->add_option("--targets", c.targets, "targets as a list or JSON file");
  inv_odd->add_option("--nodes", c.nodes, "nodes t_j (default k pi/(N+1))");
  inv_odd->add_option("--w", c.w, "odd entries of a potential; targets are computed from it first");

  auto* inv_mono = app.add_subcommand(
      "inverse-mono", "Recover a monotone potential from the spectrum at t = pi, b = 0: v_1 = lambda_0 and "
                      "{v_2k, v_2k+1} are the roots of x^2 - (l_a + l_b) x + l_a l_b + 1 for paired eigenvalues");
  add_common(inv_mono, c);
  inv_mono->add_option("--psi", c.psi, "sorted spectrum as a list or JSON file (array or {\"psi\": [...]})");
  inv_mono->add_option("--direction", c.direction, "increasing|decreasing");
  inv_mono->add_flag("--unchecked", c.unchecked, "skip the interlacing domain check");

  auto* cex = app.add_subcommand(
      "counterexample", "Two distinct increasing potentials with the same spectrum at t = pi: v_1 = 2eps, "
                        "v_{p-1,p} = 1 + 5eps -+ sqrt(2eps + eps^2) versus w_1 = 4eps, w_{p-1,p} = 1 + 4eps -+ 2 sqrt(eps + eps^2)");
  add_common(cex, c, false);
  cex->add_option("--alpha", c.alpha, "upper bound alpha > 1 on the potentials");
  cex->add_option("--eps", c.eps, "epsilon (default: largest feasible 0.01 / 2^j)");

  auto* graph = app.add_subcommand(
      "graph", "Vertices (sqrt3 (2n+k), 3k or 3k-2) and edges of the zigzag ribbon with their magnetic phase "
               "coefficients (phase = coefficient * b)");
  add_common(graph, c, false);
  graph->add_option("--window", c.window, "cell range n_min:n_max");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsageError;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsageError;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    return dispatch(sub->get_name(), c, *sub, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("ribbonlab");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ribbonlab::cli
