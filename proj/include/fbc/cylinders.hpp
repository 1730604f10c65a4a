#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "fbc/gog.hpp"
#include "fbc/twisted.hpp"

namespace fbc {

/// Edge groups considered: maximal Z^2 or maximal cyclic subgroups, related
/// by equality.
enum class EdgeFamily { MaximalZxZ, MaximalCyclic };

inline std::string to_string(EdgeFamily f) { return f == EdgeFamily::MaximalZxZ ? "MaximalZxZ" : "MaximalCyclic"; }

inline EdgeFamily parse_edge_family(const std::string& s) {
  if (s == "MaximalZxZ" || s == "ZxZ") return EdgeFamily::MaximalZxZ;
  if (s == "MaximalCyclic" || s == "Cyclic") return EdgeFamily::MaximalCyclic;
  throw Error("unknown edge family '" + s + "'");
}

inline bool in_family(const GroupDescriptor& d, EdgeFamily f) {
  return d.kind == (f == EdgeFamily::MaximalZxZ ? GroupKind::ZxZ : GroupKind::Cyclic);
}

struct CylinderOptions {
  int bound = 8;
};

enum class Verdict { Yes, No, Unknown };

/// Whether x^{-1} A x = B for some x in the vertex group.
struct Comparison {
  Verdict verdict = Verdict::Unknown;
  FbcElement conjugator;
  std::string certificate;
  bool bounded = false;
};

/// Normalizer of an edge group inside its vertex group.
struct NormalizerFacts {
  bool known = false;
  bool index_one = false;  // N(A) = A
  bool normal = false;     // N(A) is the whole vertex group
  std::vector<FbcElement> generators;
  std::string certificate;
  bool bounded = false;
};

inline SubFbc conjugate_group(const SubFbc& a, const FbcElement& x) {
  std::vector<FbcElement> gens;
  for (const auto& g : a.generators()) gens.push_back(a.context().conj(g, x));
  return SubFbc::generated_by(a.context_ptr(), gens);
}

/// Answers conjugacy and normalizer questions about edge groups inside vertex
/// groups. Abelian vertices, F x Z vertices with Z^2 edge groups, and
/// <W> x| <t> vertices (W spanned by basis letters) with cyclic edge groups
/// <t h> are supported; everything else is reported as unknown.
class CylinderOracle {
 public:
  CylinderOracle(const GraphOfGroups& g, EdgeFamily fam, CylinderOptions opt) : g_(g), fam_(fam), opt_(opt) {}

  Comparison compare(int v, const SubFbc& a, const SubFbc& b) const {
    const GogVertex& vx = g_.vertices()[static_cast<std::size_t>(v)];
    if (vx.desc.abelian()) {
      if (a.same_as(b)) return {Verdict::Yes, {}, "equal subgroups of an abelian vertex group", false};
      return {Verdict::No, {}, "distinct subgroups of an abelian vertex group", false};
    }
    if (vx.desc.kind == GroupKind::FreeTimesZ && fam_ == EdgeFamily::MaximalZxZ) return compare_product(vx, a, b);
    if (auto s = twisted_setting(vx); s && fam_ == EdgeFamily::MaximalCyclic) return compare_twisted(*s, a, b);
    return {Verdict::Unknown, {}, unsupported(vx), false};
  }

  NormalizerFacts normalizer(int v, const SubFbc& a) const {
    const GogVertex& vx = g_.vertices()[static_cast<std::size_t>(v)];
    NormalizerFacts out;
    if (vx.desc.abelian()) {
      out.known = true;
      out.generators = vx.group.generators();
      out.index_one = a.same_as(vx.group);
      out.normal = true;
      out.certificate = "abelian vertex group normalizes every subgroup";
      return out;
    }
    if (vx.desc.kind == GroupKind::FreeTimesZ && fam_ == EdgeFamily::MaximalZxZ) return normalizer_product(vx, a);
    if (auto s = twisted_setting(vx); s && fam_ == EdgeFamily::MaximalCyclic) return normalizer_twisted(vx, *s, a);
    out.certificate = unsupported(vx);
    return out;
  }

 private:
  std::string unsupported(const GogVertex& vx) const {
    return "no oracle for " + vx.desc.str() + " vertex '" + vx.id + "' with " + to_string(fam_) + " edge groups";
  }

  // A = <z> x <sigma'> inside <W> x <sigma> with sigma central.
  static std::optional<Word> product_axis(const GogVertex& vx, const SubFbc& a) {
    if (a.free_rank() != 1 || !a.has_sigma() || !vx.group.contains(a)) return std::nullopt;
    return a.free_generators().front();
  }

  Comparison compare_product(const GogVertex& vx, const SubFbc& a, const SubFbc& b) const {
    auto za = product_axis(vx, a), zb = product_axis(vx, b);
    if (!za || !zb) return {Verdict::Unknown, {}, "edge group is not <z> x <sigma> inside '" + vx.id + "'", false};
    for (int sign : {1, -1}) {
      Word target = sign > 0 ? *zb : zb->inverse();
      auto c0 = are_conjugate(*za, target);
      if (!c0) continue;
      // Conjugators inside F_n form c0 <r>; those inside W form a coset of
      // <r^d> with d dividing m, and all of them act the same way on A.
      auto pr = primitive_root(target);
      for (long long j = 0; j < static_cast<long long>(pr.multiplicity); ++j) {
        Word x = *c0 * power(pr.root, j);
        if (!vx.group.free_graph().contains(x)) continue;
        FbcElement cx{0, x};
        if (conjugate_group(a, cx).same_as(b)) {
          return {Verdict::Yes, cx, "conjugator " + g_.context().render(cx) + " inside the free factor", false};
        }
        return {Verdict::No, {}, "the free conjugators of the axes do not carry the central factor across", false};
      }
    }
    return {Verdict::No, {}, "axes are not conjugate inside the free factor of '" + vx.id + "'", false};
  }

  NormalizerFacts normalizer_product(const GogVertex& vx, const SubFbc& a) const {
    NormalizerFacts out;
    auto z = product_axis(vx, a);
    if (!z) {
      out.certificate = "edge group is not <z> x <sigma> inside '" + vx.id + "'";
      return out;
    }
    auto pr = primitive_root(*z);
    long long d = 1;
    while (!vx.group.free_graph().contains(power(pr.root, d))) ++d;
    out.known = true;
    out.generators = {{0, power(pr.root, d)}, *vx.group.sigma()};
    SubFbc n = SubFbc::generated_by(vx.group.context_ptr(), out.generators);
    out.index_one = n.same_as(a);
    out.normal = n.same_as(vx.group);
    out.certificate = "normalizer is <" + g_.context().render(out.generators[0]) + "> x <" +
                      g_.context().render(out.generators[1]) + ">";
    return out;
  }

  // Vertex <W> x| <t> with W spanned by basis letters and phi(W) = W.
  std::optional<TwistedSetting> twisted_setting(const GogVertex& vx) const {
    if (vx.desc.kind != GroupKind::FbcSub && vx.desc.kind != GroupKind::FreeTimesZ) return std::nullopt;
    const auto& sig = vx.group.sigma();
    if (!sig || sig->k != 1 || !sig->w.empty()) return std::nullopt;
    std::vector<int> letters;
    for (const Word& w : vx.group.free_generators()) {
      if (w.size() != 1 || w[0] < 0) return std::nullopt;
      letters.push_back(w[0]);
    }
    try {
      return TwistedSetting(g_.context().phi(), letters);
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  static std::optional<Word> twisted_axis(const TwistedSetting& s, const SubFbc& a) {
    if (a.free_rank() != 0 || !a.has_sigma() || a.sigma()->k != 1 || !s.in_span(a.sigma()->w)) return std::nullopt;
    return a.sigma()->w;
  }

  Comparison compare_twisted(const TwistedSetting& s, const SubFbc& a, const SubFbc& b) const {
    auto ha = twisted_axis(s, a), hb = twisted_axis(s, b);
    if (!ha || !hb) return {Verdict::Unknown, {}, "edge group is not generated by t h with h in the letter subgroup", false};
    auto r = twisted_conjugacy_search(s, *ha, *hb, opt_.bound);
    const auto& ctx = g_.context();
    if (const auto* f = std::get_if<Found>(&r)) {
      FbcElement x{0, f->witness};
      return {Verdict::Yes, x, "twisted conjugator " + ctx.render(x), false};
    }
    if (const auto* o = std::get_if<Obstructed>(&r)) return {Verdict::No, {}, "obstructed: " + o->reason, false};
    return {Verdict::Unknown, {}, "no twisted conjugator up to length " + std::to_string(opt_.bound), true};
  }

  NormalizerFacts normalizer_twisted(const GogVertex& vx, const TwistedSetting& s, const SubFbc& a) const {
    NormalizerFacts out;
    auto h = twisted_axis(s, a);
    if (!h) {
      out.certificate = "edge group is not generated by t h with h in the letter subgroup";
      return out;
    }
    // Conjugation preserves the t-exponent, so the normalizer of <t h> is its
    // centralizer: <t h> times the twisted centralizer of h.
    auto tc = twisted_centralizer_bounded(s, *h, opt_.bound);
    out.known = true;
    out.generators.push_back(*a.sigma());
    for (const Word& w : tc.generators) out.generators.push_back({0, w});
    out.index_one = tc.graph.is_trivial();
    out.bounded = out.index_one && !tc.complete;
    SubFbc n = SubFbc::generated_by(vx.group.context_ptr(), out.generators);
    out.normal = n.same_as(vx.group);
    const auto& ctx = g_.context();
    if (out.index_one) {
      out.certificate = "twisted centralizer of " + ctx.basis().render(*h) + " is trivial up to length " + std::to_string(opt_.bound);
    } else {
      out.certificate = "twisted centralizer of " + ctx.basis().render(*h) + " contains " + ctx.basis().render(tc.generators.front());
      if (tc.complete) out.certificate += " (complete: " + tc.reason + ")";
    }
    return out;
  }

  const GraphOfGroups& g_;
  EdgeFamily fam_;
  CylinderOptions opt_;
};

enum class CylinderShape { SingleEdge, Star, Line };

inline std::string to_string(CylinderShape s) {
  switch (s) {
    case CylinderShape::SingleEdge: return "single-edge";
    case CylinderShape::Star: return "star-at-vertex";
    case CylinderShape::Line: return "bi-infinite-line";
  }
  return "?";
}

/// One end of an edge: side 0 sits at `from`, side 1 at `to`.
struct EdgeEnd {
  int edge = -1;
  int side = 0;
  int vertex = -1;
  int node = -1;
  FbcElement conjugator;  // conjugator^{-1} A_rep conjugator = A_end
};

/// A conjugacy class of edge groups at one vertex: the edges of one cylinder
/// that meet that vertex orbit.
struct CylinderNode {
  int vertex = -1;
  std::vector<int> ends;  // indices into CylinderSummary::ends
  NormalizerFacts normalizer;
  bool many() const { return ends.size() > 1 || !normalizer.index_one; }
};

struct Cylinder {
  CylinderShape shape = CylinderShape::SingleEdge;
  std::vector<int> edges;
  std::vector<int> nodes;
  int center = -1;  // node index for stars
  bool center_interior = false;
  FbcElement translation;  // lines
  std::vector<FbcElement> stabilizer;
  GroupDescriptor stabilizer_desc;
  bool bounded = false;
};

struct CylinderSummary {
  EdgeFamily family = EdgeFamily::MaximalCyclic;
  int bound = 0;
  std::vector<EdgeEnd> ends;
  std::vector<CylinderNode> nodes;
  std::vector<Cylinder> cylinders;
  std::vector<std::string> certificates;
  bool determined = true;
  std::string reason;
  bool bounded = false;
};

/// Groups edge ends into conjugacy classes at each vertex, joins edges through
/// shared classes, and classifies each cylinder as a single edge, a star
/// around one vertex, or a line translated by a cyclic stabilizer.
inline CylinderSummary analyze_cylinders(const GraphOfGroups& g, EdgeFamily fam, const CylinderOptions& opt = {}) {
  CylinderSummary out;
  out.family = fam;
  out.bound = opt.bound;
  const auto& ctx = g.context();
  const auto& edges = g.edges();
  for (const auto& e : edges) {
    if (!in_family(e.desc, fam)) throw Error("edge '" + e.id + "' has group " + e.desc.str() + " outside the family " + to_string(fam));
  }
  CylinderOracle oracle(g, fam, opt);
  auto end_group = [&](const EdgeEnd& x) -> const SubFbc& {
    const auto& e = edges[static_cast<std::size_t>(x.edge)];
    return x.side == 0 ? e.from_group : e.to_group;
  };
  auto fail = [&](const std::string& why) {
    if (out.determined) out.reason = why;
    out.determined = false;
  };

  for (std::size_t i = 0; i < edges.size() && out.determined; ++i) {
    for (int side : {0, 1}) {
      EdgeEnd end{static_cast<int>(i), side, side == 0 ? edges[i].from : edges[i].to, -1, {}};
      for (std::size_t n = 0; n < out.nodes.size() && end.node < 0; ++n) {
        if (out.nodes[n].vertex != end.vertex) continue;
        const EdgeEnd& rep = out.ends[static_cast<std::size_t>(out.nodes[n].ends.front())];
        Comparison c = oracle.compare(end.vertex, end_group(rep), end_group(end));
        out.bounded = out.bounded || c.bounded;
        std::string tag = edges[static_cast<std::size_t>(rep.edge)].id + (rep.side ? ".to" : ".from") + " vs " + edges[i].id + (side ? ".to" : ".from");
        out.certificates.push_back(tag + ": " + c.certificate);
        if (c.verdict == Verdict::Unknown) {
          fail("cannot decide conjugacy of edge groups " + tag + " (" + c.certificate + ")");
          break;
        }
        if (c.verdict == Verdict::Yes) {
          end.node = static_cast<int>(n);
          end.conjugator = c.conjugator;
        }
      }
      if (!out.determined) break;
      if (end.node < 0) {
        CylinderNode node;
        node.vertex = end.vertex;
        node.normalizer = oracle.normalizer(end.vertex, end_group(end));
        out.certificates.push_back(edges[i].id + (side ? ".to" : ".from") + " normalizer: " + node.normalizer.certificate);
        if (!node.normalizer.known) {
          fail(node.normalizer.certificate);
          break;
        }
        out.bounded = out.bounded || node.normalizer.bounded;
        end.node = static_cast<int>(out.nodes.size());
        out.nodes.push_back(node);
      }
      out.nodes[static_cast<std::size_t>(end.node)].ends.push_back(static_cast<int>(out.ends.size()));
      out.ends.push_back(end);
    }
  }
  if (!out.determined) return out;

  // Edges sharing a node lie in one cylinder.
  std::vector<int> parent(edges.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[static_cast<std::size_t>(x)] == x ? x : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]); };
  for (const auto& node : out.nodes) {
    for (int ei : node.ends) parent[static_cast<std::size_t>(find(out.ends[static_cast<std::size_t>(ei)].edge))] = find(out.ends[static_cast<std::size_t>(node.ends.front())].edge);
  }
  std::vector<int> ends_at_vertex(g.vertices().size(), 0);
  for (const auto& x : out.ends) ++ends_at_vertex[static_cast<std::size_t>(x.vertex)];

  std::vector<bool> seen(edges.size(), false);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    int root = find(static_cast<int>(i));
    if (seen[static_cast<std::size_t>(root)]) continue;
    seen[static_cast<std::size_t>(root)] = true;
    Cylinder cyl;
    for (std::size_t j = 0; j < edges.size(); ++j) {
      if (find(static_cast<int>(j)) == root) cyl.edges.push_back(static_cast<int>(j));
    }
    for (std::size_t n = 0; n < out.nodes.size(); ++n) {
      if (find(out.ends[static_cast<std::size_t>(out.nodes[n].ends.front())].edge) == root) cyl.nodes.push_back(static_cast<int>(n));
    }
    for (int n : cyl.nodes) cyl.bounded = cyl.bounded || out.nodes[static_cast<std::size_t>(n)].normalizer.bounded;
    const auto& e0 = edges[static_cast<std::size_t>(cyl.edges.front())];
    auto node_of = [&](int n) -> const CylinderNode& { return out.nodes[static_cast<std::size_t>(n)]; };
    if (cyl.edges.size() == 1 && cyl.nodes.size() == 1 && node_of(cyl.nodes[0]).ends.size() == 2 && node_of(cyl.nodes[0]).normalizer.index_one) {
      cyl.shape = CylinderShape::Line;
      const EdgeEnd& to_end = out.ends[static_cast<std::size_t>(node_of(cyl.nodes[0]).ends[1])];
      cyl.translation = ctx.mul(g.letter_of(cyl.edges.front()), ctx.inv(to_end.conjugator));
      cyl.stabilizer = e0.incl_from;
      cyl.stabilizer.push_back(cyl.translation);
    } else if (cyl.edges.size() == 1 && cyl.nodes.size() == 2 && !node_of(cyl.nodes[0]).many() && !node_of(cyl.nodes[1]).many()) {
      cyl.shape = CylinderShape::SingleEdge;
      cyl.stabilizer = e0.incl_from;
    } else {
      std::vector<int> centers;
      for (int n : cyl.nodes) {
        if (node_of(n).many()) centers.push_back(n);
      }
      bool star = centers.size() == 1;
      if (star) {
        for (int e : cyl.edges) {
          int at_center = 0;
          for (int ei : node_of(centers[0]).ends) at_center += out.ends[static_cast<std::size_t>(ei)].edge == e ? 1 : 0;
          star = star && at_center == 1;
        }
      }
      if (!star) {
        fail("cylinder through edge '" + e0.id + "' is neither a single edge, a star nor a line");
        return out;
      }
      cyl.shape = CylinderShape::Star;
      cyl.center = centers[0];
      const CylinderNode& c = node_of(cyl.center);
      cyl.center_interior = c.normalizer.normal && static_cast<int>(c.ends.size()) == ends_at_vertex[static_cast<std::size_t>(c.vertex)];
      cyl.stabilizer = cyl.center_interior ? g.vertices()[static_cast<std::size_t>(c.vertex)].group.generators() : c.normalizer.generators;
    }
    cyl.stabilizer_desc = describe(SubFbc::generated_by(g.context_ptr(), cyl.stabilizer));
    out.cylinders.push_back(std::move(cyl));
  }

  // A vertex whose edges all lie in one class with normal stabilizer belongs
  // to a single cylinder; it must then be that cylinder's centre.
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    for (std::size_t n = 0; n < out.nodes.size(); ++n) {
      const auto& node = out.nodes[n];
      if (node.vertex != static_cast<int>(v) || !node.normalizer.normal || static_cast<int>(node.ends.size()) != ends_at_vertex[v]) continue;
      bool centre = false;
      for (const auto& cyl : out.cylinders) centre = centre || (cyl.shape == CylinderShape::Star && cyl.center == static_cast<int>(n));
      if (!centre) {
        fail("vertex '" + g.vertices()[v].id + "' lies in a single cylinder without being its centre");
        return out;
      }
    }
  }
  return out;
}

namespace detail {

inline Route reverse_route(const FbcContext& ctx, const Route& r) {
  Route out;
  for (auto it = r.rbegin(); it != r.rend(); ++it) {
    RouteStep s = *it;
    if (s.is_edge) s.dir = -s.dir;
    else s.elem = ctx.inv(s.elem);
    out.push_back(s);
  }
  return out;
}

inline std::vector<FbcElement> conjugate_all(const FbcContext& ctx, const std::vector<FbcElement>& xs, const FbcElement& by) {
  std::vector<FbcElement> out;
  for (const auto& x : xs) out.push_back(ctx.conj(x, by));
  return out;
}

}  // namespace detail

/// Replaces each cylinder by the cone on its boundary. Original vertices keep
/// their indices; new cylinder vertices are appended. `cylinder_vertex`
/// receives one flag per output vertex.
inline GraphOfGroups tree_of_cylinders(const GraphOfGroups& g, const CylinderSummary& summary, std::vector<bool>* cylinder_vertex = nullptr) {
  if (!summary.determined) throw Error("tree of cylinders needs a determined summary: " + summary.reason);
  const auto& ctx = g.context();
  const auto& edges = g.edges();
  GraphOfGroups out(g.context_ptr());
  std::vector<bool> marks;
  for (const auto& v : g.vertices()) {
    out.add_vertex(v.id, v.group.generators());
    marks.push_back(false);
  }
  std::vector<Route> repl(edges.size());
  int count = 0;
  for (const auto& cyl : summary.cylinders) {
    std::string name = "cyl" + std::to_string(++count);
    auto new_vertex = [&](const std::vector<FbcElement>& gens) {
      marks.push_back(true);
      return out.add_vertex(name, gens);
    };
    if (cyl.shape == CylinderShape::SingleEdge) {
      const auto& e = edges[static_cast<std::size_t>(cyl.edges.front())];
      int c = new_vertex(cyl.stabilizer);
      int e1 = out.add_edge(e.id + ".1", e.from, c, e.incl_from, std::nullopt);
      int e2 = out.add_edge(e.id + ".2", c, e.to, e.incl_from, e.letter, e.letter_name, e.incl_to);
      repl[static_cast<std::size_t>(cyl.edges.front())] = {RouteStep::cross(e1, 1), RouteStep::cross(e2, 1)};
    } else if (cyl.shape == CylinderShape::Line) {
      const int ei = cyl.edges.front();
      const auto& e = edges[static_cast<std::size_t>(ei)];
      int c = new_vertex(cyl.stabilizer);
      int hub = out.add_edge(e.id + ".hub", e.from, c, e.incl_from, std::nullopt);
      // letter = tau x with x^{-1} A_from x = A_to.
      FbcElement x = ctx.mul(ctx.inv(cyl.translation), g.letter_of(ei));
      repl[static_cast<std::size_t>(ei)] = {RouteStep::cross(hub, 1), RouteStep::at(c, cyl.translation), RouteStep::cross(hub, -1),
                                            RouteStep::at(e.from, x)};
    } else if (cyl.center_interior) {
      marks[static_cast<std::size_t>(summary.nodes[static_cast<std::size_t>(cyl.center)].vertex)] = true;
      for (int ei : cyl.edges) {
        const auto& e = edges[static_cast<std::size_t>(ei)];
        int ne = out.add_edge(e.id, e.from, e.to, e.incl_from, e.letter, e.letter_name, e.incl_to);
        repl[static_cast<std::size_t>(ei)] = {RouteStep::cross(ne, 1)};
      }
    } else {
      const CylinderNode& centre = summary.nodes[static_cast<std::size_t>(cyl.center)];
      const int v = centre.vertex;
      int c = new_vertex(cyl.stabilizer);
      int hub = out.add_edge(name + ".hub", v, c, cyl.stabilizer, std::nullopt);
      for (int end_index : centre.ends) {
        const EdgeEnd& end = summary.ends[static_cast<std::size_t>(end_index)];
        const auto& e = edges[static_cast<std::size_t>(end.edge)];
        const FbcElement& x = end.conjugator;
        FbcElement l = g.letter_of(end.edge);
        if (!e.letter && !x.is_identity()) throw Error("star at '" + g.vertices()[static_cast<std::size_t>(v)].id + "' reaches tree edge '" + e.id + "' through a nontrivial conjugator");
        FbcElement xi = ctx.inv(x);
        if (end.side == 0) {
          FbcElement lambda = ctx.mul(x, l);
          int ne = out.add_edge(e.id, c, e.to, detail::conjugate_all(ctx, e.incl_from, xi), lambda, e.letter_name, e.incl_to);
          repl[static_cast<std::size_t>(end.edge)] = {RouteStep::at(v, xi), RouteStep::cross(hub, 1), RouteStep::cross(ne, 1)};
        } else {
          FbcElement lambda = ctx.mul(x, ctx.inv(l));
          int ne = out.add_edge(e.id, c, e.from, detail::conjugate_all(ctx, e.incl_to, xi), lambda, e.letter_name, e.incl_from);
          repl[static_cast<std::size_t>(end.edge)] = {RouteStep::cross(ne, -1), RouteStep::cross(hub, -1), RouteStep::at(v, x)};
        }
      }
    }
  }
  for (int i = 0; i <= ctx.rank(); ++i) {
    Route r;
    for (const auto& s : g.route(i)) {
      if (!s.is_edge) {
        r.push_back(s);
        continue;
      }
      const Route& piece = repl[static_cast<std::size_t>(s.edge)];
      if (s.dir > 0) r.insert(r.end(), piece.begin(), piece.end());
      else {
        Route back = detail::reverse_route(ctx, piece);
        r.insert(r.end(), back.begin(), back.end());
      }
    }
    out.set_route(i, std::move(r));
  }
  out.set_base(g.base());
  out.require_valid();
  if (cylinder_vertex) *cylinder_vertex = std::move(marks);
  return out;
}

namespace detail {

// Contracts tree edge `e`, keeping the endpoint with the larger group.
inline GraphOfGroups contract_edge(const GraphOfGroups& g, int e) {
  const auto& edge = g.edges()[static_cast<std::size_t>(e)];
  const auto& vs = g.vertices();
  int keep = edge.from, gone = edge.to;
  if (!vs[static_cast<std::size_t>(keep)].group.contains(vs[static_cast<std::size_t>(gone)].group) &&
      vs[static_cast<std::size_t>(gone)].group.contains(vs[static_cast<std::size_t>(keep)].group)) {
    std::swap(keep, gone);
  }
  std::vector<FbcElement> merged = vs[static_cast<std::size_t>(keep)].group.generators();
  if (!vs[static_cast<std::size_t>(keep)].group.contains(vs[static_cast<std::size_t>(gone)].group)) {
    for (const auto& x : vs[static_cast<std::size_t>(gone)].group.generators()) merged.push_back(x);
  }
  GraphOfGroups out(g.context_ptr());
  std::vector<int> index(vs.size(), -1);
  for (std::size_t v = 0; v < vs.size(); ++v) {
    if (static_cast<int>(v) == gone) continue;
    index[v] = out.add_vertex(vs[v].id, static_cast<int>(v) == keep ? merged : vs[v].group.generators());
  }
  index[static_cast<std::size_t>(gone)] = index[static_cast<std::size_t>(keep)];
  std::vector<int> edge_index(g.edges().size(), -1);
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    if (static_cast<int>(i) == e) continue;
    const auto& x = g.edges()[i];
    edge_index[i] = out.add_edge(x.id, index[static_cast<std::size_t>(x.from)], index[static_cast<std::size_t>(x.to)], x.incl_from, x.letter, x.letter_name, x.incl_to);
  }
  for (int i = 0; i <= g.context().rank(); ++i) {
    Route r;
    for (auto s : g.route(i)) {
      if (s.is_edge) {
        if (s.edge == e) continue;
        s.edge = edge_index[static_cast<std::size_t>(s.edge)];
      } else {
        s.vertex = index[static_cast<std::size_t>(s.vertex)];
      }
      r.push_back(s);
    }
    out.set_route(i, std::move(r));
  }
  out.set_base(index[static_cast<std::size_t>(g.base())]);
  return out;
}

}  // namespace detail

/// Collapses every edge whose group lies outside the family.
inline GraphOfGroups collapse(const GraphOfGroups& tc, EdgeFamily fam) {
  GraphOfGroups cur = tc;
  while (true) {
    int target = -1;
    for (std::size_t i = 0; i < cur.edges().size(); ++i) {
      if (!in_family(cur.edges()[i].desc, fam)) {
        if (cur.edges()[i].letter) throw Error("cannot collapse edge '" + cur.edges()[i].id + "' outside the spanning tree");
        target = static_cast<int>(i);
        break;
      }
    }
    if (target < 0) break;
    cur = detail::contract_edge(cur, target);
  }
  cur.require_valid();
  return cur;
}

/// Ambient words (over basis letters and the stable letter) of length at
/// most `max_len`, as signed generator indices.
inline std::vector<std::vector<int>> sample_ambient_words(int rank, int max_len) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void()> grow = [&] {
    if (!cur.empty()) out.push_back(cur);
    if (static_cast<int>(cur.size()) == max_len) return;
    for (int i = 1; i <= rank + 1; ++i) {
      for (int s : {i, -i}) {
        if (!cur.empty() && cur.back() == -s) continue;
        cur.push_back(s);
        grow();
        cur.pop_back();
      }
    }
  };
  grow();
  return out;
}

/// Quotient-graph isomorphism with equal vertex and edge descriptors, plus
/// equal translation lengths on all ambient words of length <= 3.
inline bool isomorphic(const GraphOfGroups& a, const GraphOfGroups& b) {
  const auto& va = a.vertices();
  const auto& vb = b.vertices();
  if (va.size() != vb.size() || a.edges().size() != b.edges().size()) return false;
  if (va.size() > 9) throw Error("isomorphism check is limited to 9 vertices");
  using Key = std::tuple<int, int, GroupKind, int, bool>;
  auto edge_keys = [](const GraphOfGroups& g, const std::vector<int>& map) {
    std::vector<Key> keys;
    for (const auto& e : g.edges()) {
      int x = map[static_cast<std::size_t>(e.from)], y = map[static_cast<std::size_t>(e.to)];
      keys.emplace_back(std::min(x, y), std::max(x, y), e.desc.kind, e.desc.rank, e.letter.has_value());
    }
    std::sort(keys.begin(), keys.end());
    return keys;
  };
  std::vector<int> id(vb.size());
  std::iota(id.begin(), id.end(), 0);
  const auto target = edge_keys(b, id);
  std::vector<int> perm(va.size());
  std::iota(perm.begin(), perm.end(), 0);
  bool matched = false;
  do {
    bool ok = true;
    for (std::size_t v = 0; v < va.size() && ok; ++v) ok = va[v].desc == vb[static_cast<std::size_t>(perm[v])].desc;
    if (ok && edge_keys(a, perm) == target) matched = true;
  } while (!matched && std::next_permutation(perm.begin(), perm.end()));
  if (!matched) return false;
  for (const auto& w : sample_ambient_words(a.context().rank(), 3)) {
    if (a.translation_length(w) != b.translation_length(w)) return false;
  }
  return true;
}

struct IdempotenceResult {
  bool determined = false;
  bool holds = false;
  std::string reason;
  bool bounded = false;
};

/// Builds T* = collapse(T_c) and checks that the same construction applied
/// to T* returns an isomorphic splitting.
inline IdempotenceResult idempotence_check(const GraphOfGroups& g, EdgeFamily fam, const CylinderOptions& opt = {}) {
  IdempotenceResult out;
  auto s1 = analyze_cylinders(g, fam, opt);
  if (!s1.determined) {
    out.reason = s1.reason;
    return out;
  }
  GraphOfGroups t1 = collapse(tree_of_cylinders(g, s1), fam);
  auto s2 = analyze_cylinders(t1, fam, opt);
  if (!s2.determined) {
    out.reason = "second pass: " + s2.reason;
    return out;
  }
  GraphOfGroups t2 = collapse(tree_of_cylinders(t1, s2), fam);
  out.determined = true;
  out.bounded = s1.bounded || s2.bounded;
  out.holds = isomorphic(t1, t2);
  out.reason = out.holds ? "collapsed tree of cylinders is reproduced" : "second pass changed the splitting";
  return out;
}

}  // namespace fbc
