#pragma once

#include "rtlab/analysis.hpp"
#include "rtlab/cbe.hpp"
#include "rtlab/clique.hpp"
#include "rtlab/common.hpp"
#include "rtlab/graph.hpp"
#include "rtlab/mbe.hpp"
#include "rtlab/partition.hpp"
#include "rtlab/simplex.hpp"
#include "rtlab/weighted.hpp"

#include "json.hpp"

#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace rtlab {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Parameter blocks

inline Json to_json(const CbeParams& p) {
  return Json{{"p", p.p},         {"ell", p.ell},   {"k", p.k},       {"n", p.n},
              {"epsilon", p.epsilon}, {"K", p.bigK}, {"mu", p.mu()}, {"mode", to_string(p.mode)},
              {"cluster_size", p.cluster_size}, {"seed", p.seed}};
}

inline Json to_json(const MbeParams& p) {
  return Json{{"ell", p.ell}, {"p", p.p}, {"q", p.q}, {"k", p.k}, {"m", p.m}, {"epsilon", p.epsilon},
              {"mu", p.mu()}, {"t", p.t}, {"retention", p.retention}, {"zeta", p.zeta()}, {"seed", p.seed}};
}

inline Json to_json(const CliqueCertificate& c) {
  return Json{{"size", c.size}, {"witness", c.witness}, {"exhaustive", c.exhaustive}};
}

// ---------------------------------------------------------------------------
// Edge lists: one "# {json}" header line, then "u v" per edge (u < v).
// The header carries "vertices" and class runs [class, first, count].

inline Json class_header(const LabeledGraph& g) {
  Json runs = Json::array();
  const std::size_t n = g.size();
  for (std::size_t v = 0; v < n;) {
    std::size_t w = v;
    while (w < n && g.class_of(w) == g.class_of(v)) ++w;
    if (g.class_of(v) != LabeledGraph::kNoClass) runs.push_back(Json::array({g.class_of(v), v, w - v}));
    v = w;
  }
  return Json{{"vertices", n}, {"classes", g.class_names()}, {"class_runs", runs}};
}

inline void write_edge_list(std::ostream& os, const LabeledGraph& g, Json header) {
  const Json classes = class_header(g);
  for (auto& [key, val] : classes.items()) header[key] = val;
  os << "# " << header.dump() << '\n';
  for (auto [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

struct EdgeListFile {
  LabeledGraph graph;
  Json header;
};

inline EdgeListFile read_edge_list(std::istream& is) {
  EdgeListFile out;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::string line;
  std::size_t lineno = 0, max_id = 0;
  bool any = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (out.header.is_null()) {
        try {
          out.header = Json::parse(line.substr(1));
        } catch (const nlohmann::json::exception&) {
          out.header = Json::object();  // comment line, not a header
        }
      }
      continue;
    }
    std::istringstream ls(line);
    long long u = -1, v = -1;
    std::string extra;
    if (!(ls >> u >> v) || (ls >> extra) || u < 0 || v < 0)
      throw DomainError("bad edge at line " + std::to_string(lineno) + ": '" + line + "'");
    edges.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
    max_id = std::max({max_id, static_cast<std::size_t>(u), static_cast<std::size_t>(v)});
    any = true;
  }
  if (out.header.is_null()) out.header = Json::object();
  std::size_t n = any ? max_id + 1 : 0;
  if (out.header.contains("vertices")) {
    const std::size_t hn = out.header["vertices"].get<std::size_t>();
    if (any && max_id >= hn) throw DomainError("edge endpoint exceeds the declared vertex count");
    n = hn;
  }
  out.graph = LabeledGraph(n);
  if (out.header.contains("classes")) {
    for (const auto& name : out.header["classes"]) out.graph.add_class(name.get<std::string>());
    if (out.header.contains("class_runs"))
      for (const auto& run : out.header["class_runs"]) {
        const std::size_t c = run.at(0).get<std::size_t>(), first = run.at(1).get<std::size_t>(),
                          count = run.at(2).get<std::size_t>();
        for (std::size_t v = first; v < first + count; ++v) out.graph.set_class(v, c);
      }
  }
  for (auto [u, v] : edges) out.graph.add_edge(u, v);
  return out;
}

// ---------------------------------------------------------------------------
// Stats CSV

inline constexpr const char* kStatsCsvHeader = "graph-id,n,density,omega,omega_exhaustive,alpha_p_lb,alpha_p_ub";

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string format_double(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

inline std::string stats_csv_row(const std::string& id, const LabeledGraph& g, const CliqueCertificate& c,
                                 const PIndependence& a) {
  const DensityReport r = density_report(g);
  std::ostringstream os;
  os << csv_escape(id) << ',' << g.size() << ',' << format_double(r.global_density) << ',' << c.size << ','
     << (c.exhaustive ? "true" : "false") << ',' << a.lower << ',' << a.upper;
  return os.str();
}

// ---------------------------------------------------------------------------
// Hypergraphs: one hyperedge per line, r vertex ids

inline void write_hypergraph(std::ostream& os, const GeometricHypergraph& h) {
  for (const auto& e : h.edges) {
    for (std::size_t i = 0; i < e.size(); ++i) os << (i ? " " : "") << e[i];
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// Weighted graphs: "p m", then row i lists w(i, j) for j > i

inline void write_weighted(std::ostream& os, const PWeightedGraph& g) {
  os << g.p() << ' ' << g.size() << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool first = true;
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      os << (first ? "" : " ") << g.weight(i, j);
      first = false;
    }
    os << '\n';
  }
}

inline PWeightedGraph read_weighted(std::istream& is) {
  long long p = 0, m = -1;
  if (!(is >> p >> m) || p < 1 || m < 0) throw DomainError("weighted graph must start with 'p m'");
  if (static_cast<std::size_t>(m) > 4096) throw SizeLimitError("weighted graph too large");
  PWeightedGraph g(static_cast<int>(p), static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i)
    for (long long j = i + 1; j < m; ++j) {
      long long w;
      if (!(is >> w)) throw DomainError("weighted graph: missing weight for pair " + std::to_string(i) + "," + std::to_string(j));
      if (w < 0 || w > p) throw DomainError("weighted graph: weight out of range");
      g.set_weight(static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<int>(w));
    }
  std::string extra;
  if (is >> extra) throw DomainError("weighted graph: trailing data '" + extra + "'");
  return g;
}

/// {order, weights, size, checks}
inline Json certificate_json(const PWeightedGraph& g, const DominatingExtension& e) {
  std::vector<Json> per;
  std::vector<std::size_t> before;
  for (std::size_t j = 0; j < e.order.size(); ++j) {
    Json c{{"position", j + 1}, {"vertex", e.order[j]}, {"weight", e.weights[j]}};
    if (j >= 1) {
      std::vector<int> back;
      for (std::size_t i = 0; i < j; ++i) back.push_back(g.weight(e.order[i], e.order[j]));
      c["backwards"] = back;
      std::vector<std::string> target;
      for (const auto& r : dominance_target(g.p(), e.weights[j], j + 1)) target.push_back(to_string(r));
      c["target"] = target;
    }
    per.push_back(std::move(c));
  }
  return Json{{"order", e.order},
              {"weights", e.weights},
              {"size", e.size()},
              {"checks", Json{{"dominating", is_dominating_extension(g, e)}, {"positions", per}}}};
}

inline Json to_json(const SimplexSolution& s) {
  std::vector<std::string> u;
  for (const auto& x : s.u) u.push_back(to_string(x));
  Json j{{"exact", s.exact}, {"value", s.value}, {"support", s.support}};
  if (s.exact) {
    j["g"] = to_string(s.g);
    j["u"] = u;
  } else {
    j["u"] = s.u_value;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Partitions: {k, n, max_diameter, representatives: [[[re, im], ...], ...]}

inline Json partition_json(const SpherePartition& part) {
  Json reps = Json::array();
  for (const auto& z : part.representatives) {
    Json pt = Json::array();
    for (std::size_t i = 0; i < z.dim(); ++i) pt.push_back(Json::array({z[i].real(), z[i].imag()}));
    reps.push_back(std::move(pt));
  }
  return Json{{"k", part.k}, {"n", part.n}, {"max_diameter", part.max_diameter}, {"representatives", reps}};
}

}  // namespace rtlab
