#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fbc/subgroup.hpp"

namespace fbc {

enum class GroupKind { Trivial, Cyclic, ZxZ, Klein, Free, FreeTimesZ, FbcSub };

inline std::string to_string(GroupKind k) {
  switch (k) {
    case GroupKind::Trivial: return "Trivial";
    case GroupKind::Cyclic: return "Cyclic";
    case GroupKind::ZxZ: return "ZxZ";
    case GroupKind::Klein: return "Klein";
    case GroupKind::Free: return "Free";
    case GroupKind::FreeTimesZ: return "FreeTimesZ";
    case GroupKind::FbcSub: return "FbcSub";
  }
  return "?";
}

inline GroupKind parse_group_kind(const std::string& s) {
  for (auto k : {GroupKind::Trivial, GroupKind::Cyclic, GroupKind::ZxZ, GroupKind::Klein, GroupKind::Free,
                 GroupKind::FreeTimesZ, GroupKind::FbcSub}) {
    if (to_string(k) == s) return k;
  }
  throw Error("unknown group kind '" + s + "'");
}

/// Isomorphism type of a vertex or edge group; `rank` is the rank of the
/// free part (A meet F_n).
struct GroupDescriptor {
  GroupKind kind = GroupKind::Trivial;
  int rank = 0;
  bool operator==(const GroupDescriptor&) const = default;
  std::string str() const {
    switch (kind) {
      case GroupKind::Free:
      case GroupKind::FreeTimesZ:
      case GroupKind::FbcSub: return to_string(kind) + "(" + std::to_string(rank) + ")";
      default: return to_string(kind);
    }
  }
  bool abelian() const { return kind == GroupKind::Trivial || kind == GroupKind::Cyclic || kind == GroupKind::ZxZ; }
};

/// Reads the isomorphism type off the <W> x| <sigma> form.
inline GroupDescriptor describe(const SubFbc& g) {
  const int r = g.free_rank();
  if (!g.has_sigma()) {
    if (r == 0) return {GroupKind::Trivial, 0};
    if (r == 1) return {GroupKind::Cyclic, 1};
    return {GroupKind::Free, r};
  }
  if (r == 0) return {GroupKind::Cyclic, 0};
  bool commutes = true;
  for (const Word& w : g.free_generators()) commutes = commutes && g.conjugate_by_sigma(w, 1) == w;
  if (r == 1) {
    const Word& w = g.free_generators().front();
    if (commutes) return {GroupKind::ZxZ, 1};
    if (g.conjugate_by_sigma(w, 1) == w.inverse()) return {GroupKind::Klein, 1};
  }
  return {commutes ? GroupKind::FreeTimesZ : GroupKind::FbcSub, r};
}

struct GogVertex {
  std::string id;
  SubFbc group;
  GroupDescriptor desc;
};

struct GogEdge {
  std::string id;
  int from = 0;
  int to = 0;
  std::vector<FbcElement> incl_from;
  std::vector<FbcElement> incl_to;
  std::optional<FbcElement> letter;  // none for tree edges (letter 1)
  std::string letter_name;
  SubFbc from_group;
  SubFbc to_group;
  GroupDescriptor desc;
};

/// One step of a route: multiply by a vertex-group element, or cross an edge
/// (dir = +1 from -> to, -1 to -> from).
struct RouteStep {
  bool is_edge = false;
  int vertex = -1;
  FbcElement elem;
  int edge = -1;
  int dir = 1;

  static RouteStep at(int v, FbcElement g) { return {false, v, std::move(g), -1, 1}; }
  static RouteStep cross(int e, int dir) { return {true, -1, {}, e, dir}; }
};

using Route = std::vector<RouteStep>;

/// Finite graph of groups realized inside G = F_n x|_phi <t>: vertex and edge
/// groups are concrete subgroups of G, tree edges carry the letter 1, and
/// every edge satisfies letter^{-1} incl_from[i] letter = incl_to[i]. Each
/// ambient generator (basis letters, then the stable letter) has a route:
/// a closed path at the base vertex whose product is that generator.
class GraphOfGroups {
 public:
  explicit GraphOfGroups(std::shared_ptr<const FbcContext> ctx) : ctx_(std::move(ctx)) {
    routes_.resize(static_cast<std::size_t>(ctx_->rank() + 1));
  }

  const FbcContext& context() const { return *ctx_; }
  const std::shared_ptr<const FbcContext>& context_ptr() const { return ctx_; }
  const std::vector<GogVertex>& vertices() const { return vertices_; }
  const std::vector<GogEdge>& edges() const { return edges_; }
  int base() const { return base_; }
  void set_base(int v) { base_ = v; }

  int add_vertex(const std::string& id, const std::vector<FbcElement>& gens) {
    SubFbc g = SubFbc::generated_by(ctx_, gens);
    GroupDescriptor d = describe(g);
    vertices_.push_back({id, std::move(g), d});
    return static_cast<int>(vertices_.size()) - 1;
  }

  /// Adds an edge; incl_to defaults to the conjugates letter^{-1} x letter.
  int add_edge(const std::string& id, int from, int to, const std::vector<FbcElement>& incl_from,
               std::optional<FbcElement> letter, const std::string& letter_name = "",
               std::optional<std::vector<FbcElement>> incl_to = std::nullopt) {
    std::vector<FbcElement> to_gens;
    if (incl_to) {
      to_gens = *incl_to;
    } else {
      for (const auto& x : incl_from) to_gens.push_back(letter ? ctx_->conj(x, *letter) : x);
    }
    if (letter && letter->is_identity()) letter.reset();
    SubFbc fg = SubFbc::generated_by(ctx_, incl_from);
    SubFbc tg = SubFbc::generated_by(ctx_, to_gens);
    GroupDescriptor d = describe(fg);
    edges_.push_back({id, from, to, incl_from, to_gens, letter, letter_name, std::move(fg), std::move(tg), d});
    return static_cast<int>(edges_.size()) - 1;
  }

  /// Route for ambient generator index i (0-based basis letters, rank() for
  /// the stable letter).
  void set_route(int generator, Route r) { routes_.at(static_cast<std::size_t>(generator)) = std::move(r); }
  const Route& route(int generator) const { return routes_.at(static_cast<std::size_t>(generator)); }
  const std::vector<Route>& routes() const { return routes_; }

  /// Routes for generators lying in the base vertex group are filled in.
  void default_routes() {
    for (int i = 0; i <= ctx_->rank(); ++i) {
      if (!routes_[static_cast<std::size_t>(i)].empty()) continue;
      FbcElement g = ambient_generator(i);
      if (vertices_[static_cast<std::size_t>(base_)].group.contains(g)) {
        routes_[static_cast<std::size_t>(i)] = {RouteStep::at(base_, g)};
      }
    }
  }

  FbcElement ambient_generator(int i) const { return i == ctx_->rank() ? ctx_->t() : ctx_->letter(i + 1); }

  int vertex_index(const std::string& id) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (vertices_[i].id == id) return static_cast<int>(i);
    }
    throw Error("unknown vertex '" + id + "'");
  }

  int edge_index(const std::string& id) const {
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (edges_[i].id == id) return static_cast<int>(i);
    }
    throw Error("unknown edge '" + id + "'");
  }

  FbcElement letter_of(int e) const {
    const auto& edge = edges_[static_cast<std::size_t>(e)];
    return edge.letter ? *edge.letter : FbcElement{};
  }

  /// Product of a route in G; throws on a broken path.
  FbcElement route_product(const Route& r) const {
    FbcElement acc;
    int cur = base_;
    for (const auto& s : r) {
      if (s.is_edge) {
        const auto& e = edges_.at(static_cast<std::size_t>(s.edge));
        int start = s.dir > 0 ? e.from : e.to;
        if (start != cur) throw Error("route crosses edge '" + e.id + "' from the wrong vertex");
        FbcElement l = letter_of(s.edge);
        acc = ctx_->mul(acc, s.dir > 0 ? l : ctx_->inv(l));
        cur = s.dir > 0 ? e.to : e.from;
      } else {
        if (s.vertex != cur) throw Error("route element placed at the wrong vertex");
        acc = ctx_->mul(acc, s.elem);
      }
    }
    if (cur != base_) throw Error("route does not return to the base vertex");
    return acc;
  }

  std::vector<std::string> validate() const {
    std::vector<std::string> bad;
    const std::size_t nv = vertices_.size();
    if (nv == 0) return {"graph has no vertices"};
    if (base_ < 0 || static_cast<std::size_t>(base_) >= nv) bad.push_back("base vertex out of range");
    // Connectivity over all edges, and tree edges spanning.
    std::vector<int> comp(nv), tree_comp(nv);
    std::iota(comp.begin(), comp.end(), 0);
    std::iota(tree_comp.begin(), tree_comp.end(), 0);
    auto find = [](std::vector<int>& p, int x) {
      while (p[static_cast<std::size_t>(x)] != x) x = p[static_cast<std::size_t>(x)] = p[static_cast<std::size_t>(p[static_cast<std::size_t>(x)])];
      return x;
    };
    int tree_edges = 0;
    for (const auto& e : edges_) {
      if (e.from < 0 || e.to < 0 || static_cast<std::size_t>(e.from) >= nv || static_cast<std::size_t>(e.to) >= nv) {
        bad.push_back("edge '" + e.id + "' has an endpoint out of range");
        continue;
      }
      comp[static_cast<std::size_t>(find(comp, e.from))] = find(comp, e.to);
      if (!e.letter) {
        ++tree_edges;
        int a = find(tree_comp, e.from), b = find(tree_comp, e.to);
        if (a == b) bad.push_back("tree edges contain a cycle at edge '" + e.id + "'");
        tree_comp[static_cast<std::size_t>(a)] = b;
      }
    }
    if (!bad.empty()) return bad;
    for (std::size_t v = 0; v < nv; ++v) {
      if (find(comp, static_cast<int>(v)) != find(comp, 0)) {
        bad.push_back("graph is disconnected at vertex '" + vertices_[v].id + "'");
        break;
      }
    }
    if (tree_edges != static_cast<int>(nv) - 1) bad.push_back("edges with trivial letter do not form a spanning tree");
    for (const auto& e : edges_) {
      const auto& gf = vertices_[static_cast<std::size_t>(e.from)].group;
      const auto& gt = vertices_[static_cast<std::size_t>(e.to)].group;
      if (e.incl_from.size() != e.incl_to.size()) {
        bad.push_back("edge '" + e.id + "' has mismatched inclusion lists");
        continue;
      }
      for (std::size_t i = 0; i < e.incl_from.size(); ++i) {
        if (!gf.contains(e.incl_from[i])) bad.push_back("edge '" + e.id + "': inclusion image " + ctx_->render(e.incl_from[i]) + " outside vertex '" + vertices_[static_cast<std::size_t>(e.from)].id + "'");
        if (!gt.contains(e.incl_to[i])) bad.push_back("edge '" + e.id + "': inclusion image " + ctx_->render(e.incl_to[i]) + " outside vertex '" + vertices_[static_cast<std::size_t>(e.to)].id + "'");
        FbcElement l = e.letter ? *e.letter : FbcElement{};
        if (ctx_->conj(e.incl_from[i], l) != e.incl_to[i]) bad.push_back("edge '" + e.id + "': letter does not conjugate inclusion " + std::to_string(i));
      }
    }
    for (int i = 0; i <= ctx_->rank(); ++i) {
      const Route& r = routes_[static_cast<std::size_t>(i)];
      std::string name = i == ctx_->rank() ? std::string(1, ctx_->stable_letter()) : ctx_->basis().letter_name(i + 1);
      if (r.empty()) {
        if (!ambient_generator(i).is_identity()) bad.push_back("no route for generator " + name);
        continue;
      }
      try {
        for (const auto& s : r) {
          if (!s.is_edge && !vertices_.at(static_cast<std::size_t>(s.vertex)).group.contains(s.elem)) {
            bad.push_back("route for " + name + " uses " + ctx_->render(s.elem) + " outside its vertex group");
          }
        }
        if (route_product(r) != ambient_generator(i)) bad.push_back("route for " + name + " multiplies to the wrong element");
      } catch (const std::exception& ex) {
        bad.push_back("route for " + name + ": " + ex.what());
      }
    }
    return bad;
  }

  void require_valid() const {
    auto bad = validate();
    if (!bad.empty()) throw Error("invalid graph of groups: " + bad.front());
  }

  /// Simplicial translation length (unit edges) of an ambient element given
  /// as a sequence of generator indices with signs (+-(i+1)).
  std::size_t translation_length(const std::vector<int>& letters) const {
    Route path;
    for (int l : letters) {
      const Route& r = routes_.at(static_cast<std::size_t>(std::abs(l) - 1));
      if (l > 0) {
        path.insert(path.end(), r.begin(), r.end());
      } else {
        for (auto it = r.rbegin(); it != r.rend(); ++it) {
          RouteStep s = *it;
          if (s.is_edge) s.dir = -s.dir;
          else s.elem = ctx_->inv(s.elem);
          path.push_back(s);
        }
      }
    }
    return cyclic_edge_count(path);
  }

  /// Parses a word over the basis letters and the stable letter.
  std::vector<int> parse_generators(std::string_view s) const {
    std::vector<int> out;
    const char st = ctx_->stable_letter();
    for (char c : s) {
      if (c == st) out.push_back(ctx_->rank() + 1);
      else if (c == st - 'a' + 'A') out.push_back(-(ctx_->rank() + 1));
      else {
        auto ls = ctx_->basis().parse_letters(std::string(1, c));
        out.push_back(ls.front());
      }
    }
    return out;
  }

  std::size_t translation_length(std::string_view word) const { return translation_length(parse_generators(word)); }

 private:
  struct Item {
    int vertex;
    FbcElement elem;
  };

  std::size_t cyclic_edge_count(const Route& path) const {
    // Linear form g_0 x_1 g_1 ... x_m g_m, then close it up: g_m g_0 at base.
    std::vector<Item> elems{{base_, {}}};
    std::vector<std::pair<int, int>> crossings;
    int cur = base_;
    for (const auto& s : path) {
      if (s.is_edge) {
        const auto& e = edges_[static_cast<std::size_t>(s.edge)];
        crossings.emplace_back(s.edge, s.dir);
        cur = s.dir > 0 ? e.to : e.from;
        elems.push_back({cur, {}});
      } else {
        elems.back().elem = ctx_->mul(elems.back().elem, s.elem);
      }
    }
    if (cur != base_) throw Error("path is not closed");
    if (crossings.empty()) return 0;
    elems.front().elem = ctx_->mul(elems.back().elem, elems.front().elem);
    elems.pop_back();
    // Cyclic order: elems[0] x[0] elems[1] x[1] ... elems[m-1] x[m-1].
    bool changed = true;
    while (changed && !crossings.empty()) {
      changed = false;
      const std::size_t m = crossings.size();
      for (std::size_t i = 0; i < m; ++i) {
        std::size_t in = (i + m - 1) % m;  // crossing arriving at elems[i]
        auto [ein, din] = crossings[in];
        auto [eout, dout] = crossings[i];
        if (ein != eout || din != -dout) continue;
        if (m == 1) continue;
        const auto& e = edges_[static_cast<std::size_t>(ein)];
        const FbcElement& x = elems[i].elem;
        FbcElement l = letter_of(ein);
        FbcElement repl;
        if (din > 0) {
          if (!e.to_group.contains(x)) continue;
          repl = ctx_->mul(l, ctx_->mul(x, ctx_->inv(l)));
        } else {
          if (!e.from_group.contains(x)) continue;
          repl = ctx_->mul(ctx_->inv(l), ctx_->mul(x, l));
        }
        if (m == 2) return 0;
        std::size_t prev = in, next = (i + 1) % m;
        FbcElement merged = ctx_->mul(elems[prev].elem, ctx_->mul(repl, elems[next].elem));
        std::vector<Item> ne;
        std::vector<std::pair<int, int>> nc;
        for (std::size_t j = 0; j < m; ++j) {
          if (j == i || j == next) continue;
          ne.push_back(j == prev ? Item{elems[prev].vertex, merged} : elems[j]);
          if (j == prev) nc.push_back(crossings[next]);
          else nc.push_back(crossings[j]);
        }
        elems = std::move(ne);
        crossings = std::move(nc);
        changed = true;
        break;
      }
    }
    return crossings.size();
  }

  std::shared_ptr<const FbcContext> ctx_;
  std::vector<GogVertex> vertices_;
  std::vector<GogEdge> edges_;
  std::vector<Route> routes_;
  int base_ = 0;
};

/// Translation lengths agree on every test word.
inline bool trees_equal_on(const GraphOfGroups& g1, const GraphOfGroups& g2, const std::vector<std::string>& words) {
  for (const auto& w : words) {
    if (g1.translation_length(w) != g2.translation_length(w)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- Dehn twists

struct DehnTwistEdge {
  int from = 0;
  int to = 0;
  std::optional<Word> letter;  // none: tree edge
  Word generator;              // edge group generator inside the from-vertex
  std::optional<long long> twistor;
};

/// Cyclic splitting of F_n together with the Dehn twist phi it supports.
struct DehnTwistData {
  FreeAut phi;
  std::vector<std::vector<Word>> vertex_generators;
  std::vector<DehnTwistEdge> edges;
  std::vector<Route> routes;  // optional, same indexing as GraphOfGroups
};

struct Suspension {
  GraphOfGroups gog;
  std::vector<Word> vertex_conjugators;  // u_v with x phi = u_v^{-1} x u_v on G_v
  std::vector<long long> twistors;
};

namespace detail {

// Length-lex least u with w phi = u^{-1} w u for every generator w.
inline std::optional<Word> restricted_inner(const FreeAut& phi, const std::vector<Word>& gens, int span) {
  if (gens.empty()) return Word();
  auto c = are_conjugate(gens.front(), phi.apply(gens.front()));
  if (!c) return std::nullopt;
  Word root = primitive_root(gens.front()).root;
  std::optional<Word> best;
  for (int j = -span; j <= span; ++j) {
    Word u = power(root, j) * *c;
    bool ok = true;
    for (const auto& w : gens) ok = ok && phi.apply(w) == u.inverse() * w * u;
    if (ok && (!best || u < *best)) best = u;
  }
  return best;
}

}  // namespace detail

/// Suspension of a Dehn twist: vertex groups G_v x <s_v>, edge groups Z^2.
inline Suspension suspension_of_dehn_twist(const DehnTwistData& dt, char stable = 't', int search_span = 64) {
  const Basis& B = dt.phi.basis();
  const int n = B.rank;
  auto ctx = std::make_shared<const FbcContext>(dt.phi, stable);
  const std::size_t nv = dt.vertex_generators.size();
  if (nv == 0) throw Error("Dehn twist data has no vertices");
  // Underlying free splitting: ranks add up and the pieces generate F_n.
  int rank_sum = 0;
  std::vector<Word> all;
  for (const auto& gens : dt.vertex_generators) {
    auto g = SubgroupGraph::from_generators(n, gens);
    rank_sum += g.rank();
    all.insert(all.end(), gens.begin(), gens.end());
  }
  for (const auto& e : dt.edges) {
    if (e.letter) all.push_back(*e.letter);
  }
  const int euler_rank = rank_sum - static_cast<int>(nv) + 1;
  int loops = 0;
  for (const auto& e : dt.edges) loops += e.letter ? 1 : 0;
  if (euler_rank != n) throw Error("Euler characteristic of the splitting gives rank " + std::to_string(euler_rank) + ", expected " + std::to_string(n));
  if (static_cast<int>(dt.edges.size()) - loops != static_cast<int>(nv) - 1) throw Error("tree edges do not span the splitting");
  if (SubgroupGraph::from_generators(n, all).index() != 1) throw Error("vertex groups and edge letters do not generate the free group");

  Suspension out{GraphOfGroups(ctx), {}, {}};
  for (std::size_t v = 0; v < nv; ++v) {
    auto u = detail::restricted_inner(dt.phi, dt.vertex_generators[v], search_span);
    if (!u) throw Error("automorphism does not act on vertex " + std::to_string(v) + " by conjugation");
    out.vertex_conjugators.push_back(*u);
    std::vector<FbcElement> gens;
    for (const auto& w : dt.vertex_generators[v]) gens.push_back({0, w});
    gens.push_back({1, u->inverse()});
    out.gog.add_vertex("v" + std::to_string(v), gens);
  }
  for (std::size_t i = 0; i < dt.edges.size(); ++i) {
    const auto& e = dt.edges[i];
    const Word& uf = out.vertex_conjugators[static_cast<std::size_t>(e.from)];
    const Word& ut = out.vertex_conjugators[static_cast<std::size_t>(e.to)];
    Word l = e.letter ? *e.letter : Word();
    Word z_to = l.inverse() * e.generator * l;
    // l^{-1} s_from l = s (l phi)^{-1} u_from^{-1} l must equal s_to z_to^m.
    Word lhs = dt.phi.apply(l).inverse() * uf.inverse() * l;
    std::optional<long long> m;
    for (long long j = -search_span; j <= search_span && !m; ++j) {
      if (lhs == ut.inverse() * power(z_to, j)) m = j;
    }
    if (!m) throw Error("edge " + std::to_string(i) + " has no twistor relating its vertex stable letters");
    if (e.twistor && *e.twistor != *m) throw Error("edge " + std::to_string(i) + " twistor disagrees with the automorphism");
    out.twistors.push_back(*m);
    std::vector<FbcElement> incl{{0, e.generator}, {1, uf.inverse()}};
    std::optional<FbcElement> letter;
    if (e.letter) letter = FbcElement{0, *e.letter};
    out.gog.add_edge("e" + std::to_string(i), e.from, e.to, incl, letter, e.letter ? B.render(*e.letter) : "");
  }
  for (std::size_t i = 0; i < dt.routes.size(); ++i) {
    if (!dt.routes[i].empty()) out.gog.set_route(static_cast<int>(i), dt.routes[i]);
  }
  // Remaining routes: generators in the base vertex, or letters of base loops.
  out.gog.default_routes();
  for (int i = 0; i < n; ++i) {
    if (!out.gog.route(i).empty()) continue;
    for (std::size_t k = 0; k < dt.edges.size(); ++k) {
      const auto& e = dt.edges[k];
      if (!e.letter || e.from != 0 || e.to != 0) continue;
      if (*e.letter == Word::letter(i + 1)) out.gog.set_route(i, {RouteStep::cross(static_cast<int>(k), 1)});
      else if (*e.letter == Word::letter(-(i + 1))) out.gog.set_route(i, {RouteStep::cross(static_cast<int>(k), -1)});
    }
  }
  out.gog.require_valid();
  return out;
}

}  // namespace fbc
