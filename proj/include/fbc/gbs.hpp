#pragma once

#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "fbc/fbc_group.hpp"

namespace fbc {

/// Exact rational with positive denominator.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d = 1) : num(n), den(d) {
    if (d == 0) throw Error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  Rational operator+(const Rational& o) const { return {num * o.den + o.num * den, den * o.den}; }
  Rational operator-(const Rational& o) const { return {num * o.den - o.num * den, den * o.den}; }
  Rational operator*(const Rational& o) const { return {num * o.num, den * o.den}; }
  Rational operator/(const Rational& o) const { return {num * o.den, den * o.num}; }
  bool operator==(const Rational&) const = default;
  bool is_integer() const { return den == 1; }
  std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }
};

/// Edge of a generalized Baumslag-Solitar graph: x_from^label_from is
/// identified with x_to^label_to (through the edge's stable letter when the
/// edge lies outside the spanning tree).
struct GbsEdge {
  int from = 0;
  int to = 0;
  long long label_from = 1;
  long long label_to = 1;
};

struct GbsGraph {
  std::vector<std::string> vertices;
  std::vector<GbsEdge> edges;

  void validate() const {
    if (vertices.empty()) throw Error("GBS graph has no vertices");
    const int n = static_cast<int>(vertices.size());
    std::vector<int> parent(vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
      return x;
    };
    for (const auto& e : edges) {
      if (e.from < 0 || e.to < 0 || e.from >= n || e.to >= n) throw Error("GBS edge endpoint out of range");
      if (e.label_from == 0 || e.label_to == 0) throw Error("GBS labels must be nonzero");
      parent[static_cast<std::size_t>(find(e.from))] = find(e.to);
    }
    for (int v = 0; v < n; ++v) {
      if (find(v) != find(0)) throw Error("GBS graph is disconnected");
    }
  }

  static GbsGraph baumslag_solitar(long long p, long long q) { return {{"x"}, {{0, 0, p, q}}}; }
  /// <x> *_{x^2 = y^3} <y>.
  static GbsGraph trefoil() { return {{"x", "y"}, {{0, 1, 2, 3}}}; }
};

/// Spanning tree (BFS from vertex 0) and the rational exponents r_v with
/// x_v^{r_v} constant along tree edges (r_0 = 1).
struct GbsStructure {
  std::vector<bool> tree_edge;
  std::vector<Rational> ratio;
  bool trivial_modulus = true;
};

inline GbsStructure gbs_structure(const GbsGraph& g) {
  g.validate();
  GbsStructure s;
  s.tree_edge.assign(g.edges.size(), false);
  s.ratio.assign(g.vertices.size(), Rational(0));
  std::vector<bool> seen(g.vertices.size(), false);
  seen[0] = true;
  s.ratio[0] = Rational(1);
  std::vector<int> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int u = queue[head];
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      const auto& e = g.edges[i];
      int w = -1;
      Rational r;
      if (e.from == u && !seen[static_cast<std::size_t>(e.to)]) {
        w = e.to;
        r = s.ratio[static_cast<std::size_t>(u)] * Rational(e.label_to, e.label_from);
      } else if (e.to == u && !seen[static_cast<std::size_t>(e.from)]) {
        w = e.from;
        r = s.ratio[static_cast<std::size_t>(u)] * Rational(e.label_from, e.label_to);
      }
      if (w < 0) continue;
      seen[static_cast<std::size_t>(w)] = true;
      s.tree_edge[i] = true;
      s.ratio[static_cast<std::size_t>(w)] = r;
      queue.push_back(w);
    }
  }
  // Each edge outside the tree closes a loop whose modulus is the ratio
  // mismatch; the modulus is trivial iff every mismatch is 1.
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (s.tree_edge[i]) continue;
    const auto& e = g.edges[i];
    Rational lhs = s.ratio[static_cast<std::size_t>(e.from)] * Rational(e.label_to, e.label_from);
    if (!(lhs == s.ratio[static_cast<std::size_t>(e.to)])) s.trivial_modulus = false;
  }
  return s;
}

inline bool modulus_is_trivial(const GbsGraph& g) { return gbs_structure(g).trivial_modulus; }

/// Generators: x_v for each vertex, then t_e for each edge outside the tree.
struct GbsPresentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;
  std::vector<int> edge_generator;  // -1 for tree edges
};

inline GbsPresentation gbs_presentation(const GbsGraph& g) {
  auto s = gbs_structure(g);
  GbsPresentation p;
  for (const auto& v : g.vertices) p.generators.push_back("x_" + v);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (s.tree_edge[i]) {
      p.edge_generator.push_back(-1);
    } else {
      p.edge_generator.push_back(static_cast<int>(p.generators.size()));
      p.generators.push_back("t_" + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    Word xf = power(Word::letter(e.from + 1), e.label_from);
    Word xt = power(Word::letter(e.to + 1), e.label_to);
    if (p.edge_generator[i] < 0) {
      p.relators.push_back(xf * xt.inverse());
    } else {
      Word t = Word::letter(p.edge_generator[i] + 1);
      p.relators.push_back(t.inverse() * xf * t * xt.inverse());
    }
  }
  return p;
}

/// The centre generator delta = x_v^{n_v} and the tau-map G -> Q with
/// tau(x_v) = 1/n_v, tau(t_e) = 0, tau(delta) = 1.
struct TauMap {
  std::vector<long long> n;       // per vertex, signed; n_0 > 0
  std::vector<long long> m;       // per edge: delta = (x_from^label_from)^{m_e}
  long long lcm = 1;              // N = lcm |n_v|
  std::vector<Rational> values;   // per presentation generator
  std::vector<std::string> names;

  Rational evaluate(const Word& w) const {
    Rational out(0);
    for (Letter l : w.letters()) {
      const Rational& v = values[static_cast<std::size_t>(std::abs(l) - 1)];
      out = l > 0 ? out + v : out - v;
    }
    return out;
  }
};

inline TauMap tau_values(const GbsGraph& g) {
  auto s = gbs_structure(g);
  if (!s.trivial_modulus) throw Error("GBS graph has nontrivial modulus");
  // Smallest L > 0 with L r_v and L r_from / label_from integral everywhere:
  // lcm of denominators over gcd of numerators.
  std::vector<Rational> need = s.ratio;
  for (const auto& e : g.edges) need.push_back(s.ratio[static_cast<std::size_t>(e.from)] / Rational(e.label_from));
  long long den_lcm = 1, num_gcd = 0;
  for (const auto& r : need) {
    den_lcm = std::lcm(den_lcm, r.den);
    num_gcd = std::gcd(num_gcd, std::llabs(r.num));
  }
  Rational scale(den_lcm, num_gcd);
  TauMap t;
  for (const auto& r : s.ratio) {
    Rational nv = r * scale;
    t.n.push_back(nv.num);
    t.lcm = std::lcm(t.lcm, std::llabs(nv.num));
  }
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    Rational me = need[g.vertices.size() + i] * scale;
    t.m.push_back(me.num);
  }
  auto p = gbs_presentation(g);
  t.names = p.generators;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) t.values.emplace_back(1, t.n[v]);
  while (t.values.size() < p.generators.size()) t.values.emplace_back(0);
  return t;
}

/// Rank of the free group ker tau: 1 + sum_e N/|m_e| - sum_v N/|n_v|.
inline long long fiber_rank(const GbsGraph& g) {
  TauMap t = tau_values(g);
  long long r = 1;
  for (long long me : t.m) r += t.lcm / std::llabs(me);
  for (long long nv : t.n) r -= t.lcm / std::llabs(nv);
  return r;
}

/// Finite presentation over basis letters and the stable letter, rendered
/// with the stable letter's character.
struct Presentation {
  std::vector<std::string> generators;
  std::vector<std::string> relators;
};

/// Presentation of G / <t^k g^{-1}> for a central element t^k g^{-1}. The
/// relation t^k = g is used to eliminate t (k = 1) or a basis letter equal to
/// g^{+-1}; otherwise it is kept as a relator.
inline Presentation central_quotient_presentation(const FbcContext& ctx, const CentralElement& central) {
  if (central.k <= 0) throw Error("central element must have positive t-exponent");
  if (!ctx.is_central(central.element())) throw Error("element " + ctx.render(central.element()) + " is not central");
  const int n = ctx.rank();
  const Letter T = n + 1;
  auto render = [&](const Word& w) {
    std::string out;
    for (Letter l : w.letters()) {
      if (std::abs(l) == T) out += l > 0 ? ctx.stable_letter() : static_cast<char>(ctx.stable_letter() - 'a' + 'A');
      else out += ctx.basis().letter_name(l);
    }
    return out;
  };
  // Substitution for eliminated generators.
  std::vector<Word> subst(static_cast<std::size_t>(n + 2));
  for (int i = 1; i <= n + 1; ++i) subst[static_cast<std::size_t>(i)] = Word::letter(i);
  int eliminated = 0;
  Word tk = power(Word::letter(T), central.k);
  if (central.k == 1) {
    eliminated = T;
    subst[static_cast<std::size_t>(T)] = central.g;
  } else if (central.g.size() == 1) {
    Letter l = central.g[0];
    eliminated = std::abs(l);
    subst[static_cast<std::size_t>(eliminated)] = l > 0 ? tk : tk.inverse();
  }
  auto apply = [&](const Word& w) {
    Word out;
    for (Letter l : w.letters()) out = out * (l > 0 ? subst[static_cast<std::size_t>(l)] : subst[static_cast<std::size_t>(-l)].inverse());
    return out;
  };
  Presentation p;
  for (int i = 1; i <= n; ++i) {
    if (i != eliminated) p.generators.push_back(ctx.basis().letter_name(i));
  }
  if (eliminated != T) p.generators.push_back(std::string(1, ctx.stable_letter()));
  for (int i = 1; i <= n; ++i) {
    Word rel = Word::letter(-T) * Word::letter(i) * Word::letter(T) * ctx.phi().image(i).inverse();
    Word r = apply(rel);
    if (!cyclic_reduce(r).core.empty()) p.relators.push_back(render(cyclic_reduce(r).core));
  }
  if (eliminated == 0) p.relators.push_back(render(tk * central.g.inverse()));
  return p;
}

}  // namespace fbc
