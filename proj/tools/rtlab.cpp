// rtlab: batch front-end for the construction and certificate library.
//
// Exit codes: 0 pass, 1 assertion failure, 2 usage error.

#include "rtlab/rtlab.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace rtlab;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key=value file; keys are long option names of the subcommand.
// Options given on the command line win.
void apply_config(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_file(path);
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string("cannot read config: ") + e.what());
  }
  for (const auto& it : items) {
    if (!it.parents.empty()) throw UsageError("config keys must be flat: '" + it.fullname() + "'");
    if (it.name == "config") throw UsageError("config files cannot include other config files");
    CLI::Option* o = cmd->get_option_no_throw("--" + it.name);
    if (o == nullptr) throw UsageError("unknown config key '" + it.name + "' for " + cmd->get_name());
    if (o->count() == 0) {
      o->add_result(it.inputs);
      o->run_callback();
    }
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << content;
  if (!f) throw UsageError("write failed for " + path);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

CliqueCertificate clique_with_bound(const LabeledGraph& g, std::size_t bound) {
  if (g.size() <= kMaxCliqueExhaustiveLimit) return max_clique(g);
  return max_clique(g, bound);
}

Json density_json(const DensityReport& r) {
  Json pairs = Json::array();
  for (std::size_t i = 0; i < r.class_names.size(); ++i)
    for (std::size_t j = i + 1; j < r.class_names.size(); ++j)
      pairs.push_back(Json{{"a", r.class_names[i]}, {"b", r.class_names[j]}, {"density", r.density(i, j)},
                           {"edges", r.cross_edges[i][j]}});
  Json inner = Json::object();
  for (std::size_t i = 0; i < r.class_names.size(); ++i) inner[r.class_names[i]] = r.inner_edges[i];
  return Json{{"global", r.global_density}, {"inner_edges", inner}, {"pairs", pairs}};
}

std::string stats_csv(const Json& config, const std::string& id, const LabeledGraph& g, const CliqueCertificate& c,
                      const PIndependence& a) {
  return "# " + config.dump() + "\n" + kStatsCsvHeader + "\n" + stats_csv_row(id, g, c, a) + "\n";
}

// ---------------------------------------------------------------------------
// Parameter parsing shared by gen-* and sweep

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw UsageError("'" + key + "' expects an integer, got '" + v + "'");
  }
}

double to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw UsageError("'" + key + "' expects a number, got '" + v + "'");
  }
}

std::size_t to_size(const std::string& key, const std::string& v) {
  long long x = to_int(key, v);
  if (x < 0) throw UsageError("'" + key + "' must be nonnegative");
  return static_cast<std::size_t>(x);
}

void set_cbe(CbeParams& P, const std::string& key, const std::string& v) {
  if (key == "p") P.p = static_cast<int>(to_int(key, v));
  else if (key == "ell") P.ell = static_cast<int>(to_int(key, v));
  else if (key == "k") P.k = to_size(key, v);
  else if (key == "n") P.n = to_size(key, v);
  else if (key == "epsilon") P.epsilon = to_real(key, v);
  else if (key == "K") P.bigK = to_real(key, v);
  else if (key == "mode") P.mode = parse_cbe_mode(v);
  else if (key == "cluster-size") P.cluster_size = to_size(key, v);
  else if (key == "seed") P.seed = static_cast<std::uint64_t>(to_size(key, v));
  else throw UsageError("unknown cbe parameter '" + key + "'");
}

void set_mbe(MbeParams& P, const std::string& key, const std::string& v) {
  if (key == "ell") P.ell = static_cast<int>(to_int(key, v));
  else if (key == "p") P.p = static_cast<int>(to_int(key, v));
  else if (key == "q") P.q = static_cast<int>(to_int(key, v));
  else if (key == "k") P.k = to_size(key, v);
  else if (key == "m") P.m = to_size(key, v);
  else if (key == "epsilon") P.epsilon = to_real(key, v);
  else if (key == "t") P.t = to_size(key, v);
  else if (key == "retention") P.retention = to_real(key, v);
  else if (key == "seed") P.seed = static_cast<std::uint64_t>(to_size(key, v));
  else throw UsageError("unknown mbe parameter '" + key + "'");
}

// ---------------------------------------------------------------------------
// Runs

struct CbeRun {
  Json summary;
  std::string edges, csv;
  bool pass = false;
};

CbeRun run_cbe(const CbeParams& P, std::size_t exact_limit, const std::string& out) {
  P.validate();
  const CbeGraph G = build_cbe(P);
  const Json config{{"command", "gen-cbe"}, {"params", to_json(P)}, {"out", out}};
  const std::size_t n = P.n, bound = static_cast<std::size_t>(P.p + P.ell);
  const bool bound_asserted = 2 * P.ell <= P.p;

  std::vector<std::size_t> wv(n), zv(n);
  for (std::size_t i = 0; i < n; ++i) wv[i] = i, zv[i] = n + i;
  const CliqueCertificate full = clique_with_bound(G.graph, bound);
  const CliqueCertificate cw = clique_with_bound(G.graph.induced(wv), static_cast<std::size_t>(P.p));
  const CliqueCertificate cz = clique_with_bound(G.graph.induced(zv), static_cast<std::size_t>(P.p));
  const PIndependence alpha = p_independence(G.graph, static_cast<std::size_t>(P.p), exact_limit);
  const DensityReport dr = density_report(G.graph);

  const bool inner_ok = cw.size <= static_cast<std::size_t>(P.p) && cz.size <= static_cast<std::size_t>(P.p);
  const bool clique_ok = !bound_asserted || full.size <= bound;
  CbeRun run;
  run.pass = inner_ok && clique_ok;
  run.summary = Json{{"config", config},
                     {"warnings", P.warnings()},
                     {"vertices", G.graph.size()},
                     {"edges", G.graph.edge_count()},
                     {"density", density_json(dr)},
                     {"cross_density", dr.density(0, 1)},
                     {"clique", to_json(full)},
                     {"omega", full.size},
                     {"bound", bound},
                     {"bound_asserted", bound_asserted},
                     {"inner_clique", Json{{"W", to_json(cw)}, {"Z", to_json(cz)}}},
                     {"inner_bound", P.p},
                     {"alpha_p", Json{{"p", P.p}, {"lower", alpha.lower}, {"upper", alpha.upper}, {"exact", alpha.exact}}},
                     {"pass", run.pass}};
  std::ostringstream es;
  write_edge_list(es, G.graph, Json{{"config", config}});
  run.edges = es.str();
  run.csv = stats_csv(config, "cbe-seed" + std::to_string(P.seed), G.graph, full, alpha);
  return run;
}

struct MbeRun {
  Json summary;
  std::string edges, csv, hyper;
  bool pass = false;
};

MbeRun run_mbe(const MbeParams& P, std::size_t exact_limit, const std::string& out) {
  P.validate();
  const MbeGraph G = build_mbe(P);
  const Json config{{"command", "gen-mbe"}, {"params", to_json(P)}, {"out", out}};
  const std::size_t bound = P.bound();
  const CliqueCertificate full = clique_with_bound(G.graph, bound);
  const std::size_t ap = std::size_t{1} << P.ell;
  const PIndependence alpha = p_independence(G.graph, ap, exact_limit);
  const DensityReport dr = density_report(G.graph);
  double lo = 1.0, hi = 0.0;
  for (std::size_t i = 0; i < dr.class_names.size(); ++i)
    for (std::size_t j = i + 1; j < dr.class_names.size(); ++j) {
      lo = std::min(lo, dr.density(i, j));
      hi = std::max(hi, dr.density(i, j));
    }
  const BlowupReport& b = G.blowup;
  MbeRun run;
  run.pass = full.size <= bound;
  run.summary = Json{{"config", config},
                     {"class_size", G.class_size()},
                     {"vertices", G.graph.size()},
                     {"edges", G.graph.edge_count()},
                     {"base_hyperedges", G.base->edges.size()},
                     {"blowup", Json{{"candidates", b.candidates},
                                     {"retained", b.retained},
                                     {"deleted_overlap", b.deleted_overlap},
                                     {"deleted_triangle", b.deleted_triangle},
                                     {"deleted_sparse", b.deleted_sparse},
                                     {"final_edges", b.final_edges}}},
                     {"density", density_json(dr)},
                     {"pair_density_min", dr.class_names.size() > 1 ? lo : 0.0},
                     {"pair_density_max", dr.class_names.size() > 1 ? hi : 0.0},
                     {"target_density", std::ldexp(1.0, P.p - P.ell)},
                     {"clique", to_json(full)},
                     {"omega", full.size},
                     {"bound", bound},
                     {"alpha_p", Json{{"p", ap}, {"lower", alpha.lower}, {"upper", alpha.upper}, {"exact", alpha.exact}}},
                     {"pass", run.pass}};
  std::ostringstream es, hs;
  write_edge_list(es, G.graph, Json{{"config", config}});
  run.edges = es.str();
  write_hypergraph(hs, *G.borsuk.hypergraph);
  run.hyper = hs.str();
  run.csv = stats_csv(config, "mbe-seed" + std::to_string(P.seed), G.graph, full, alpha);
  return run;
}

// ---------------------------------------------------------------------------
// Sweep

struct GridAxis {
  std::string key;
  std::vector<std::string> values;
};

GridAxis parse_axis(const std::string& entry) {
  const auto eq = entry.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == entry.size())
    throw UsageError("grid entries look like key=v1,v2,...; got '" + entry + "'");
  GridAxis a;
  a.key = entry.substr(0, eq);
  std::stringstream ss(entry.substr(eq + 1));
  for (std::string v; std::getline(ss, v, ',');) {
    if (v.empty()) throw UsageError("empty value in grid entry '" + entry + "'");
    a.values.push_back(v);
  }
  return a;
}

int cmd_sweep(const std::string& family, const std::vector<std::string>& grid, const std::string& seed,
              std::size_t exact_limit, const std::string& out) {
  if (family != "cbe" && family != "mbe") throw UsageError("--family must be cbe or mbe");
  std::vector<GridAxis> axes;
  bool seeded = !seed.empty();
  for (const auto& g : grid) {
    axes.push_back(parse_axis(g));
    if (axes.back().key == "seed") seeded = true;
  }
  if (!seeded) throw UsageError("sweep needs --seed or a seed grid axis");

  std::ostringstream csv;
  for (const auto& a : axes) csv << a.key << ',';
  csv << "vertices,edges,density,cross_density,omega,omega_exhaustive,bound,pass\n";
  bool all = true;
  std::vector<std::size_t> idx(axes.size(), 0);
  for (bool more = true; more;) {
    CbeParams cp;
    MbeParams mp;
    if (!seed.empty()) {
      (family == "cbe") ? set_cbe(cp, "seed", seed) : set_mbe(mp, "seed", seed);
    }
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const std::string& v = axes[i].values[idx[i]];
      (family == "cbe") ? set_cbe(cp, axes[i].key, v) : set_mbe(mp, axes[i].key, v);
      csv << v << ',';
    }
    Json s;
    bool pass;
    if (family == "cbe") {
      CbeRun r = run_cbe(cp, exact_limit, "");
      s = r.summary, pass = r.pass;
      csv << s["vertices"] << ',' << s["edges"] << ',' << format_double(s["density"]["global"].get<double>()) << ','
          << format_double(s["cross_density"].get<double>());
    } else {
      MbeRun r = run_mbe(mp, exact_limit, "");
      s = r.summary, pass = r.pass;
      csv << s["vertices"] << ',' << s["edges"] << ',' << format_double(s["density"]["global"].get<double>()) << ','
          << format_double(s["pair_density_min"].get<double>());
    }
    csv << ',' << s["omega"] << ',' << (s["clique"]["exhaustive"].get<bool>() ? "true" : "false") << ','
        << s["bound"] << ',' << (pass ? "true" : "false") << '\n';
    all = all && pass;
    // odometer over the axes, last axis fastest
    more = false;
    for (std::size_t i = axes.size(); i-- > 0;) {
      if (++idx[i] < axes[i].values.size()) {
        more = true;
        break;
      }
      idx[i] = 0;
    }
  }
  if (out.empty()) std::cout << csv.str();
  else write_file(out, csv.str());
  return all ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ramsey-Turan constructions, clique checks and weighted-graph certificates", "rtlab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "rtlab 1.0.0");
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads; results do not depend on it")->envname("RT_LAB_THREADS");

  // gen-cbe
  CbeParams cbe;
  std::string cbe_mode = "sampled", cbe_out, cbe_config;
  std::size_t exact_limit = 40;
  auto* gen_cbe = app.add_subcommand("gen-cbe", "Build a two-class complex-sphere graph and check its clique bounds");
  gen_cbe->add_option("--p", cbe.p, "Rotation order p")->capture_default_str();
  gen_cbe->add_option("--ell", cbe.ell, "Argument window ell, 1 <= ell < p")->capture_default_str();
  gen_cbe->add_option("--k", cbe.k, "Complex dimension")->capture_default_str();
  gen_cbe->add_option("--n", cbe.n, "Class size")->capture_default_str();
  gen_cbe->add_option("--epsilon", cbe.epsilon, "epsilon; mu = epsilon / sqrt(2k)")->capture_default_str();
  gen_cbe->add_option("--K", cbe.bigK, "Cross-edge margin factor")->capture_default_str();
  gen_cbe->add_option("--mode", cbe_mode, "sampled | strict | planted")->capture_default_str();
  gen_cbe->add_option("--cluster-size", cbe.cluster_size, "Planted cluster size (0 = 2p)")->capture_default_str();
  auto* cbe_seed = gen_cbe->add_option("--seed", cbe.seed, "RNG seed (required)");
  gen_cbe->add_option("--exact-limit", exact_limit, "Exact p-independence up to this many vertices")->capture_default_str();
  gen_cbe->add_option("--out", cbe_out, "Output prefix for .edges/.csv/.json");
  gen_cbe->add_option("--config", cbe_config, "Flat key=value file of the options above");

  // gen-mbe
  MbeParams mbe;
  std::string mbe_out, mbe_config;
  auto* gen_mbe = app.add_subcommand("gen-mbe", "Build a q-class Borsuk-graph construction and check its clique bound");
  gen_mbe->add_option("--ell", mbe.ell, "Sphere product exponent ell")->capture_default_str();
  gen_mbe->add_option("--p", mbe.p, "p, with ell >= p(q-1)")->capture_default_str();
  gen_mbe->add_option("--q", mbe.q, "Number of classes (even)")->capture_default_str();
  gen_mbe->add_option("--k", mbe.k, "Sphere dimension (S^k in R^{k+1})")->capture_default_str();
  gen_mbe->add_option("--m", mbe.m, "Cells per sphere (even)")->capture_default_str();
  gen_mbe->add_option("--epsilon", mbe.epsilon, "epsilon; mu = epsilon / sqrt(k)")->capture_default_str();
  gen_mbe->add_option("--t", mbe.t, "Blow-up multiplicity (perfect ell-th power)")->capture_default_str();
  gen_mbe->add_option("--retention", mbe.retention, "Hyperedge retention probability")->capture_default_str();
  auto* mbe_seed = gen_mbe->add_option("--seed", mbe.seed, "RNG seed (required)");
  gen_mbe->add_option("--exact-limit", exact_limit, "Exact p-independence up to this many vertices")->capture_default_str();
  gen_mbe->add_option("--out", mbe_out, "Output prefix for .edges/.csv/.json/.hyper");
  gen_mbe->add_option("--config", mbe_config, "Flat key=value file of the options above");

  // analyze
  std::string an_file, an_id, an_config;
  std::size_t an_p = 3, an_cutoff = 0;
  auto* analyze = app.add_subcommand("analyze", "Clique and p-independence statistics of an edge list");
  analyze->add_option("edge-list", an_file, "Edge list file")->required()->check(CLI::ExistingFile);
  analyze->add_option("--p", an_p, "p for the p-independence bounds")->capture_default_str();
  analyze->add_option("--id", an_id, "graph-id column (default: file name)");
  analyze->add_option("--cutoff", an_cutoff, "Clique cutoff; needed above 5000 vertices");
  analyze->add_option("--exact-limit", exact_limit, "Exact p-independence up to this many vertices")->capture_default_str();
  analyze->add_option("--config", an_config, "Flat key=value file of the options above");

  // certify
  std::string suite, cert_out, cert_config;
  SuiteOptions sopt;
  auto* certify = app.add_subcommand("certify", "Run an exhaustive or randomized certification suite");
  certify->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(suite_names()));
  certify->add_option("--trials", sopt.trials, "Random trials for randomized suites")->capture_default_str();
  certify->add_option("--seed", sopt.seed, "RNG seed for randomized suites")->capture_default_str();
  certify->add_option("--out", cert_out, "Also write the JSON report here");
  certify->add_option("--config", cert_config, "Flat key=value file of the options above");

  // rho-star
  long long rs_p = 0, rs_q = 0;
  bool rs_details = false;
  auto* rho = app.add_subcommand("rho-star", "Print the conjectured density for (p, q) as an exact fraction");
  rho->add_option("--p", rs_p, "p")->required();
  rho->add_option("--q", rs_q, "q >= p + 2")->required();
  rho->add_flag("--details", rs_details, "Print JSON with t, r and the conjectured class sizes");

  // sweep
  std::string sw_family, sw_seed, sw_out, sw_config;
  std::vector<std::string> sw_grid;
  auto* sweep = app.add_subcommand("sweep", "Cartesian parameter grid, one CSV row per cell");
  sweep->add_option("--family", sw_family, "cbe | mbe")->required();
  sweep->add_option("--grid", sw_grid, "key=v1,v2,... (repeatable)");
  sweep->add_option("--seed", sw_seed, "Seed for every cell unless seed is a grid axis");
  sweep->add_option("--exact-limit", exact_limit, "Exact p-independence up to this many vertices")->capture_default_str();
  sweep->add_option("--out", sw_out, "CSV path (default stdout)");
  sweep->add_option("--config", sw_config, "Flat key=value file of the options above");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }
  set_thread_count(threads);

  try {
    if (gen_cbe->parsed()) {
      apply_config(gen_cbe, cbe_config);
      if (cbe_seed->count() == 0) throw UsageError("gen-cbe needs an explicit --seed");
      cbe.mode = parse_cbe_mode(cbe_mode);
      CbeRun r = run_cbe(cbe, exact_limit, cbe_out);
      if (!cbe_out.empty()) {
        write_file(cbe_out + ".edges", r.edges);
        write_file(cbe_out + ".csv", r.csv);
        write_file(cbe_out + ".json", dump(r.summary));
      }
      std::cout << dump(r.summary);
      return r.pass ? kExitPass : kExitFail;
    }
    if (gen_mbe->parsed()) {
      apply_config(gen_mbe, mbe_config);
      if (mbe_seed->count() == 0) throw UsageError("gen-mbe needs an explicit --seed");
      MbeRun r = run_mbe(mbe, exact_limit, mbe_out);
      if (!mbe_out.empty()) {
        write_file(mbe_out + ".edges", r.edges);
        write_file(mbe_out + ".csv", r.csv);
        write_file(mbe_out + ".json", dump(r.summary));
        write_file(mbe_out + ".hyper", r.hyper);
      }
      std::cout << dump(r.summary);
      return r.pass ? kExitPass : kExitFail;
    }
    if (analyze->parsed()) {
      apply_config(analyze, an_config);
      std::ifstream f(an_file);
      if (!f) throw UsageError("cannot open " + an_file);
      EdgeListFile e = read_edge_list(f);
      if (e.graph.size() > kMaxCliqueExhaustiveLimit && an_cutoff == 0)
        throw UsageError("graphs above 5000 vertices need --cutoff");
      const CliqueCertificate c = an_cutoff ? max_clique(e.graph, an_cutoff) : max_clique(e.graph);
      const PIndependence a = p_independence(e.graph, an_p, exact_limit);
      std::cout << kStatsCsvHeader << '\n' << stats_csv_row(an_id.empty() ? an_file : an_id, e.graph, c, a) << '\n';
      return kExitPass;
    }
    if (certify->parsed()) {
      apply_config(certify, cert_config);
      const SuiteReport r = run_suite(suite, sopt);
      Json j = r.to_json();
      j["config"] = Json{{"command", "certify"}, {"suite", suite}, {"trials", sopt.trials}, {"seed", sopt.seed}};
      if (!cert_out.empty()) write_file(cert_out, dump(j));
      std::cout << dump(j);
      return r.passed() ? kExitPass : kExitFail;
    }
    if (rho->parsed()) {
      const RhoStar r = rho_star(rs_p, rs_q);
      if (!rs_details) {
        std::cout << to_string(r.value) << '\n';
      } else {
        const ConjecturedSizes cs = conjectured_class_sizes(rs_p, rs_q);
        std::cout << dump(Json{{"p", rs_p}, {"q", rs_q}, {"t", r.t}, {"r", r.r}, {"value", to_string(r.value)},
                               {"ordinary_classes", r.t - 1}, {"ordinary_size", to_string(cs.ordinary)},
                               {"special_size", to_string(cs.special)}, {"density", to_string(cs.density)}});
      }
      return kExitPass;
    }
    if (sweep->parsed()) {
      apply_config(sweep, sw_config);
      return cmd_sweep(sw_family, sw_grid, sw_seed, exact_limit, sw_out);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SizeLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InfeasiblePartition& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
