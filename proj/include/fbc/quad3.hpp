#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fbc/cylinders.hpp"
#include "fbc/twisted.hpp"

namespace fbc {

/// Automorphism a -> a, b -> b a^{-k}, c -> h c g^{-1} of F(a, b, c) with
/// k != 0 and h, g in <a, b>. The stable letter of the mapping torus is s.
struct QuadNormalForm {
  long long k = 1;
  Word h;
  Word g;
  bool operator==(const QuadNormalForm&) const = default;
};

inline const Basis& quad_basis() {
  static const Basis b(3);
  return b;
}

inline constexpr char kQuadStable = 's';

inline void require_quadratic(const QuadNormalForm& nf) {
  if (nf.k == 0) throw Error("not a quadratic normal form: k = 0");
  for (const Word* w : {&nf.h, &nf.g}) {
    for (Letter l : w->letters()) {
      if (std::abs(l) == 3) throw Error("h and g must lie in <a, b>");
    }
  }
}

inline QuadNormalForm parse_quad(long long k, const std::string& h, const std::string& g) {
  QuadNormalForm nf{k, quad_basis().parse(h), quad_basis().parse(g)};
  require_quadratic(nf);
  return nf;
}

inline FreeAut make_quad_aut(const QuadNormalForm& nf) {
  require_quadratic(nf);
  const Word a = Word::letter(1), b = Word::letter(2), c = Word::letter(3);
  // Inverse: a -> a, b -> b a^k, c -> (h psi)^{-1} c (g psi) with psi the
  // inverse on <a, b>.
  FreeAut ab = FreeAut::from_images(quad_basis(), {a, b * power(a, -nf.k), c}, std::vector<Word>{a, b * power(a, nf.k), c});
  Word hi = ab.apply_inverse(nf.h), gi = ab.apply_inverse(nf.g);
  return FreeAut::from_images(quad_basis(), {a, b * power(a, -nf.k), nf.h * c * nf.g.inverse()},
                              std::vector<Word>{a, b * power(a, nf.k), hi.inverse() * c * gi});
}

/// Recognizes the normal form shape exactly; no change of basis is searched.
inline std::optional<QuadNormalForm> normal_form_check(const FreeAut& f) {
  if (f.rank() != 3) return std::nullopt;
  if (f.image(1) != Word::letter(1)) return std::nullopt;
  const Word& ib = f.image(2);
  if (ib.size() < 2 || ib[0] != 2) return std::nullopt;
  const Letter tail = ib[1];
  if (std::abs(tail) != 1) return std::nullopt;
  for (std::size_t i = 1; i < ib.size(); ++i) {
    if (ib[i] != tail) return std::nullopt;
  }
  QuadNormalForm nf;
  nf.k = -static_cast<long long>(ib.size() - 1) * tail;
  const Word& ic = f.image(3);
  std::optional<std::size_t> at;
  for (std::size_t i = 0; i < ic.size(); ++i) {
    if (std::abs(ic[i]) != 3) continue;
    if (at || ic[i] != 3) return std::nullopt;
    at = i;
  }
  if (!at) return std::nullopt;
  nf.h = ic.slice(0, *at);
  nf.g = ic.slice(*at + 1, ic.size() - *at - 1).inverse();
  return nf;
}

inline std::shared_ptr<const FbcContext> quad_context(const QuadNormalForm& nf) {
  return std::make_shared<const FbcContext>(make_quad_aut(nf), kQuadStable);
}

/// Twisted conjugacy over <a, b>.
inline TwistedSetting quad_twisted(const QuadNormalForm& nf) { return TwistedSetting(make_quad_aut(nf), {1, 2}); }

/// Obstructed certifies that sh and sg are not conjugate by <a, b>; false
/// means unknown.
inline bool twisted_conjugacy_obstruction(const QuadNormalForm& nf) { return twisted_conjugacy_obstructed(quad_twisted(nf), nf.h, nf.g); }

inline SearchResult twisted_conjugacy_search(const QuadNormalForm& nf, int bound) {
  return twisted_conjugacy_search(quad_twisted(nf), nf.h, nf.g, bound);
}

/// C_<a,b>(s w): twisted centralizer of w.
inline TwistedCentralizer twisted_centralizer_bounded(const QuadNormalForm& nf, const Word& w, int bound) {
  return twisted_centralizer_bounded(quad_twisted(nf), w, bound);
}

/// The new normal form after conjugating sh by x, sg by y and replacing c by
/// x^{-1} c y (x, y in <a, b>).
inline QuadNormalForm retarget(const QuadNormalForm& nf, const Word& x, const Word& y) {
  auto s = quad_twisted(nf);
  return {nf.k, s.act(nf.h, x), s.act(nf.g, y)};
}

/// The HNN splitting T_0: one vertex <a, b, s> and a loop with letter c from
/// <sh> to <sg>.
inline GraphOfGroups quad_t0(const std::shared_ptr<const FbcContext>& ctx, const QuadNormalForm& nf) {
  GraphOfGroups g(ctx);
  int H = g.add_vertex("H", {ctx->letter(1), ctx->letter(2), ctx->t()});
  int e = g.add_edge("e", H, H, {{1, nf.h}}, ctx->letter(3), "c");
  g.set_route(2, {RouteStep::cross(e, 1)});
  g.default_routes();
  g.require_valid();
  return g;
}

struct SplittingReport {
  QuadNormalForm input;
  QuadNormalForm normalized;
  bool swapped = false;
  int bound = 0;
  std::string case_tag;  // line | subdivision | collapsed-to-T0 | undetermined
  bool determined = false;
  bool bounded = false;
  std::string reason;
  SearchResult conjugacy = NotFoundUpTo{0};
  TwistedCentralizer centralizer_h;
  TwistedCentralizer centralizer_g;
  std::shared_ptr<const FbcContext> context;
  std::optional<GraphOfGroups> t0;
  std::optional<GraphOfGroups> splitting;
  CylinderSummary summary;
};

/// Normalizes so that C(sg) is trivial (swapping h and g by c -> c^{-1}),
/// decides sh ~ sg, and builds the collapsed tree of cylinders of T_0.
inline SplittingReport canonical_splitting(const QuadNormalForm& input, int bound = 8) {
  require_quadratic(input);
  SplittingReport r;
  r.input = input;
  r.bound = bound;
  r.normalized = input;
  r.centralizer_h = twisted_centralizer_bounded(input, input.h, bound);
  r.centralizer_g = twisted_centralizer_bounded(input, input.g, bound);
  if (!r.centralizer_g.graph.is_trivial() && r.centralizer_h.graph.is_trivial()) {
    r.swapped = true;
    r.normalized = {input.k, input.g, input.h};
    std::swap(r.centralizer_h, r.centralizer_g);
  }
  const QuadNormalForm& nf = r.normalized;
  r.context = quad_context(nf);
  r.t0 = quad_t0(r.context, nf);
  r.conjugacy = twisted_conjugacy_search(nf, bound);
  auto undetermined = [&](std::string why) {
    r.case_tag = "undetermined";
    r.determined = false;
    r.reason = std::move(why);
    return r;
  };
  if (!r.centralizer_g.graph.is_trivial()) {
    return undetermined("both C(sh) and C(sg) are nontrivial within length " + std::to_string(bound));
  }
  if (std::holds_alternative<NotFoundUpTo>(r.conjugacy)) {
    return undetermined("no twisted conjugator up to length " + std::to_string(bound) + " and no abelian obstruction");
  }
  r.summary = analyze_cylinders(*r.t0, EdgeFamily::MaximalCyclic, CylinderOptions{bound});
  if (!r.summary.determined) return undetermined(r.summary.reason);
  r.splitting = collapse(tree_of_cylinders(*r.t0, r.summary), EdgeFamily::MaximalCyclic);
  r.bounded = r.summary.bounded;
  const CylinderShape shape = r.summary.cylinders.front().shape;
  if (is_found(r.conjugacy)) {
    r.case_tag = "line";
    if (shape != CylinderShape::Line) return undetermined("conjugate ends but the cylinder is not a line");
    r.reason = "sh and sg are conjugate in <a, b, s>; the cylinder of e is a line with Z^2 stabilizer";
  } else if (r.centralizer_h.graph.is_trivial()) {
    r.case_tag = "subdivision";
    if (shape != CylinderShape::SingleEdge) return undetermined("trivial centralizers but the cylinder is not a single edge");
    r.reason = "sh and sg are not conjugate and C(sh) is trivial up to length " + std::to_string(bound) + "; T_c subdivides T_0";
  } else {
    r.case_tag = "collapsed-to-T0";
    if (!isomorphic(*r.splitting, *r.t0)) return undetermined("collapsed tree of cylinders differs from T_0");
    r.reason = "sh and sg are not conjugate and C(sh) is noncyclic; the collapsed tree of cylinders is T_0";
  }
  r.determined = true;
  return r;
}

}  // namespace fbc
