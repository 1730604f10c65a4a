#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fbc/gog.hpp"

namespace fbc {

// ---------------------------------------------------------------------------
// Label-preserving automorphisms of a finite graph.

struct GraphEdge {
  int from = 0;
  int to = 0;
  std::string label;
};

struct LabeledGraph {
  std::vector<std::string> vertex_labels;
  std::vector<GraphEdge> edges;
};

/// A vertex permutation together with an edge permutation; flip[e] records
/// that edge e is sent to the inverse of edge[e].
struct GraphAutomorphism {
  std::vector<int> vertex;
  std::vector<int> edge;
  std::vector<bool> flip;

  bool operator==(const GraphAutomorphism&) const = default;
  auto operator<=>(const GraphAutomorphism& o) const {
    if (auto c = vertex <=> o.vertex; c != 0) return c;
    if (auto c = edge <=> o.edge; c != 0) return c;
    return flip <=> o.flip;
  }

  /// First this, then o.
  GraphAutomorphism then(const GraphAutomorphism& o) const {
    GraphAutomorphism r;
    for (int v : vertex) r.vertex.push_back(o.vertex[static_cast<std::size_t>(v)]);
    for (std::size_t e = 0; e < edge.size(); ++e) {
      const auto mid = static_cast<std::size_t>(edge[e]);
      r.edge.push_back(o.edge[mid]);
      r.flip.push_back(flip[e] != o.flip[mid]);
    }
    return r;
  }

  GraphAutomorphism inverse() const {
    GraphAutomorphism r{std::vector<int>(vertex.size()), std::vector<int>(edge.size()), std::vector<bool>(edge.size())};
    for (std::size_t v = 0; v < vertex.size(); ++v) r.vertex[static_cast<std::size_t>(vertex[v])] = static_cast<int>(v);
    for (std::size_t e = 0; e < edge.size(); ++e) {
      r.edge[static_cast<std::size_t>(edge[e])] = static_cast<int>(e);
      r.flip[static_cast<std::size_t>(edge[e])] = flip[e];
    }
    return r;
  }

  bool is_identity() const {
    for (std::size_t v = 0; v < vertex.size(); ++v) {
      if (vertex[v] != static_cast<int>(v)) return false;
    }
    for (std::size_t e = 0; e < edge.size(); ++e) {
      if (edge[e] != static_cast<int>(e) || flip[e]) return false;
    }
    return true;
  }
};

inline constexpr std::size_t kMaxReportVertices = 12;

/// Every automorphism, by backtracking over vertex images (labels and
/// degrees must agree) and then over edge images. Sorted.
inline std::vector<GraphAutomorphism> graph_automorphisms(const LabeledGraph& g) {
  const std::size_t nv = g.vertex_labels.size();
  const std::size_t ne = g.edges.size();
  if (nv > kMaxReportVertices) throw Error("graph too large for automorphism enumeration");
  for (const auto& e : g.edges) {
    if (e.from < 0 || e.to < 0 || static_cast<std::size_t>(e.from) >= nv || static_cast<std::size_t>(e.to) >= nv) {
      throw Error("labeled edge endpoint out of range");
    }
  }
  // Vertex signature: label plus sorted incident (edge label, loop?) list.
  std::vector<std::vector<std::string>> sig(nv);
  for (const auto& e : g.edges) {
    if (e.from == e.to) {
      sig[static_cast<std::size_t>(e.from)].push_back("loop:" + e.label);
    } else {
      sig[static_cast<std::size_t>(e.from)].push_back("end:" + e.label);
      sig[static_cast<std::size_t>(e.to)].push_back("end:" + e.label);
    }
  }
  for (auto& s : sig) std::sort(s.begin(), s.end());
  // Edge multiplicities between ordered vertex pairs, per label.
  std::map<std::tuple<int, int, std::string>, int> mult;
  for (const auto& e : g.edges) {
    auto key = std::make_tuple(std::min(e.from, e.to), std::max(e.from, e.to), e.label);
    ++mult[key];
  }
  auto count = [&](int a, int b, const std::string& l) {
    auto it = mult.find(std::make_tuple(std::min(a, b), std::max(a, b), l));
    return it == mult.end() ? 0 : it->second;
  };

  std::vector<GraphAutomorphism> out;
  std::vector<int> pi(nv, -1);
  std::vector<bool> used(nv, false);

  std::function<void(std::size_t, GraphAutomorphism&, std::vector<bool>&)> edges_from = [&](std::size_t e, GraphAutomorphism& a,
                                                                                            std::vector<bool>& taken) {
    if (e == ne) {
      out.push_back(a);
      return;
    }
    const auto& src = g.edges[e];
    const int pf = pi[static_cast<std::size_t>(src.from)];
    const int pt = pi[static_cast<std::size_t>(src.to)];
    for (std::size_t d = 0; d < ne; ++d) {
      if (taken[d] || g.edges[d].label != src.label) continue;
      for (bool fl : {false, true}) {
        const int want_from = fl ? pt : pf;
        const int want_to = fl ? pf : pt;
        if (g.edges[d].from != want_from || g.edges[d].to != want_to) continue;
        taken[d] = true;
        a.edge[e] = static_cast<int>(d);
        a.flip[e] = fl;
        edges_from(e + 1, a, taken);
        taken[d] = false;
      }
    }
  };

  std::function<void(std::size_t)> assign = [&](std::size_t v) {
    if (v == nv) {
      GraphAutomorphism a{pi, std::vector<int>(ne, -1), std::vector<bool>(ne, false)};
      std::vector<bool> taken(ne, false);
      edges_from(0, a, taken);
      return;
    }
    for (std::size_t w = 0; w < nv; ++w) {
      if (used[w] || g.vertex_labels[w] != g.vertex_labels[v] || sig[w] != sig[v]) continue;
      bool ok = true;
      for (std::size_t u = 0; u <= v && ok; ++u) {
        const int iu = u == v ? static_cast<int>(w) : pi[u];
        for (const auto& [key, m] : mult) {
          (void)m;
          const auto& l = std::get<2>(key);
          if (count(static_cast<int>(u), static_cast<int>(v), l) != count(iu, static_cast<int>(w), l)) {
            ok = false;
            break;
          }
        }
      }
      if (!ok) continue;
      used[w] = true;
      pi[v] = static_cast<int>(w);
      assign(v + 1);
      used[w] = false;
      pi[v] = -1;
    }
  };
  assign(0);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Layered finite-generation report.

inline const char* kFinitelyGenerated = "finitely-generated";
inline const char* kFinite = "finite";
inline const char* kUnknown = "unknown";

/// Verdict rules. Each entry of a report cites exactly one.
struct Rule {
  std::string id;
  std::string statement;
};

inline const std::vector<Rule>& report_rules() {
  static const std::vector<Rule> rules{
      {"finite-graph", "automorphisms of a finite graph form a finite group"},
      {"abelian-vertex", "a free abelian vertex group of rank at most 2 has trivial McCool group relative to its edge groups"},
      {"klein-vertex", "the Klein bottle group has finite outer automorphism group"},
      {"rank2-mapping-torus", "a free-by-cyclic vertex group with fibre of rank at most 2 has finitely generated McCool groups"},
      {"central-edges", "a free-times-cyclic vertex whose incident edge groups all contain its centre reduces to a finitely generated free-factor McCool group"},
      {"virtually-abelian-edge", "a virtually abelian edge group contributes a finite group of outer automorphisms"},
      {"centraliser", "centralisers of finitely generated subgroups of a free-by-cyclic group are finitely generated"},
      {"centre", "the centre of a subgroup of a free-by-cyclic group is trivial, cyclic or free abelian of rank 2"},
      {"none", "no implemented rule applies"},
  };
  return rules;
}

inline const Rule& report_rule(const std::string& id) {
  for (const auto& r : report_rules()) {
    if (r.id == id) return r;
  }
  throw Error("unknown report rule " + id);
}

struct ReportEntry {
  std::string subject;
  std::string descriptor;
  std::string verdict;
  std::string rule;
  std::vector<std::string> generators;
  bool bounded = false;
};

struct FiltrationReport {
  std::size_t automorphism_count = 0;
  ReportEntry layer1;
  std::vector<ReportEntry> layer2;
  std::vector<ReportEntry> layer3;
  std::vector<ReportEntry> layer4;
  std::vector<ReportEntry> layer5;
  std::string overall;
  int bound = 0;
};

struct ReportOptions {
  int bound = 6;
  int centre_power = 6;
  int centre_span = 16;
};

/// The underlying graph labelled by vertex and edge descriptors.
inline LabeledGraph labeled_graph(const GraphOfGroups& g) {
  LabeledGraph out;
  for (const auto& v : g.vertices()) out.vertex_labels.push_back(v.desc.str());
  for (const auto& e : g.edges()) out.edges.push_back({e.from, e.to, e.desc.str()});
  return out;
}

namespace detail {

inline bool edge_virtually_abelian(const GroupDescriptor& d) { return d.abelian() || d.kind == GroupKind::Klein; }

/// A generator of the centre of a vertex group, searched as sigma^m w^{-1}
/// where conjugation by sigma^m acts on the free part as Ad(w).
inline std::optional<FbcElement> fbc_sub_centre(const SubFbc& v, const ReportOptions& opt) {
  const FbcContext& ctx = v.context();
  if (!v.has_sigma()) return std::nullopt;
  const FbcElement& s = *v.sigma();
  FreeAut psi = ctx.phi().pow(s.k).then(FreeAut::inner(ctx.basis(), s.w));
  FreeAut p = psi;
  for (int m = 1; m <= opt.centre_power; ++m, p = p.then(psi)) {
    auto u = restricted_inner(p, v.free_generators(), opt.centre_span);
    if (!u || !v.free_graph().contains(*u)) continue;
    FbcElement z = ctx.mul(ctx.power(s, m), ctx.inv(ctx.from_word(*u)));
    bool central = true;
    for (const auto& gen : v.generators()) central = central && ctx.commute(z, gen);
    if (central) return z;
  }
  return std::nullopt;
}

}  // namespace detail

inline FiltrationReport filtration_report(const GraphOfGroups& g, const ReportOptions& opt = {}) {
  g.require_valid();
  const FbcContext& ctx = g.context();
  FiltrationReport r;
  r.bound = opt.bound;

  auto autos = graph_automorphisms(labeled_graph(g));
  r.automorphism_count = autos.size();
  r.layer1 = {"graph", "order " + std::to_string(autos.size()), kFinite, "finite-graph", {}, false};
  for (const auto& a : autos) {
    if (a.is_identity()) continue;
    std::ostringstream os;
    os << "v[";
    for (std::size_t i = 0; i < a.vertex.size(); ++i) os << (i ? "," : "") << a.vertex[i];
    os << "] e[";
    for (std::size_t i = 0; i < a.edge.size(); ++i) os << (i ? "," : "") << a.edge[i] << (a.flip[i] ? "'" : "");
    os << "]";
    r.layer1.generators.push_back(os.str());
  }

  for (std::size_t vi = 0; vi < g.vertices().size(); ++vi) {
    const auto& v = g.vertices()[vi];
    ReportEntry e{v.id, v.desc.str(), kUnknown, "none", {}, false};
    switch (v.desc.kind) {
      case GroupKind::Trivial:
      case GroupKind::Cyclic:
      case GroupKind::ZxZ:
        e.verdict = kFinitelyGenerated;
        e.rule = "abelian-vertex";
        break;
      case GroupKind::Klein:
        e.verdict = kFinitelyGenerated;
        e.rule = "klein-vertex";
        break;
      case GroupKind::FbcSub:
        if (v.desc.rank <= 2) {
          e.verdict = kFinitelyGenerated;
          e.rule = "rank2-mapping-torus";
        }
        break;
      case GroupKind::FreeTimesZ: {
        bool central = true;
        for (const auto& ed : g.edges()) {
          if (ed.from == static_cast<int>(vi)) central = central && ed.from_group.contains(*v.group.sigma());
          if (ed.to == static_cast<int>(vi)) central = central && ed.to_group.contains(*v.group.sigma());
        }
        if (central) {
          e.verdict = kFinitelyGenerated;
          e.rule = "central-edges";
        }
        break;
      }
      case GroupKind::Free:
        break;
    }
    r.layer2.push_back(std::move(e));
  }

  for (const auto& ed : g.edges()) {
    ReportEntry e{ed.id, ed.desc.str(), kUnknown, "none", {}, false};
    if (detail::edge_virtually_abelian(ed.desc)) {
      e.verdict = kFinite;
      e.rule = "virtually-abelian-edge";
    }
    r.layer3.push_back(std::move(e));

    ReportEntry c{ed.id, ed.desc.str(), kFinitelyGenerated, "centraliser", {}, false};
    for (const auto& x : ed.from_group.generators()) {
      auto cr = centralizer_bounded(ctx, x, opt.bound);
      std::string line = "C(" + ctx.render(x) + ") = <";
      for (std::size_t i = 0; i < cr.generators.size(); ++i) line += (i ? ", " : "") + ctx.render(cr.generators[i]);
      line += ">";
      c.generators.push_back(line);
      c.bounded = c.bounded || !cr.complete;
    }
    r.layer4.push_back(std::move(c));
  }

  for (const auto& v : g.vertices()) {
    ReportEntry e{v.id, "", kFinitelyGenerated, "centre", {}, false};
    switch (v.desc.kind) {
      case GroupKind::Trivial:
      case GroupKind::Free:
        e.descriptor = "Trivial";
        break;
      case GroupKind::Cyclic:
      case GroupKind::ZxZ:
        e.descriptor = v.desc.str();
        for (const auto& x : v.group.generators()) e.generators.push_back(ctx.render(x));
        break;
      case GroupKind::Klein:
        e.descriptor = "Cyclic";
        e.generators.push_back(ctx.render(ctx.power(*v.group.sigma(), 2)));
        break;
      case GroupKind::FreeTimesZ:
        e.descriptor = "Cyclic";
        e.generators.push_back(ctx.render(*v.group.sigma()));
        break;
      case GroupKind::FbcSub: {
        auto z = detail::fbc_sub_centre(v.group, opt);
        e.descriptor = z ? "Cyclic" : "Trivial";
        if (z) e.generators.push_back(ctx.render(*z));
        else e.bounded = true;
        break;
      }
    }
    r.layer5.push_back(std::move(e));
  }

  bool all = true;
  auto good = [](const ReportEntry& e) { return e.verdict != kUnknown; };
  all = good(r.layer1);
  for (const auto* layer : {&r.layer2, &r.layer3, &r.layer4, &r.layer5}) {
    for (const auto& e : *layer) all = all && good(e);
  }
  r.overall = all ? kFinitelyGenerated : kUnknown;
  return r;
}

inline std::string render_report(const FiltrationReport& r) {
  std::ostringstream os;
  auto line = [&](const char* layer, const ReportEntry& e) {
    os << layer << "  " << e.subject << "  " << e.descriptor << "  -> " << e.verdict << "  [" << e.rule << ": "
       << report_rule(e.rule).statement << "]" << (e.bounded ? "  (bounded search)" : "") << "\n";
    for (const auto& gline : e.generators) os << "      " << gline << "\n";
  };
  line("layer 1", r.layer1);
  for (const auto& e : r.layer2) line("layer 2", e);
  for (const auto& e : r.layer3) line("layer 3", e);
  for (const auto& e : r.layer4) line("layer 4", e);
  for (const auto& e : r.layer5) line("layer 5", e);
  os << "overall: " << r.overall << "\n";
  return os.str();
}

}  // namespace fbc
