#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "fbc/free_aut.hpp"

namespace fbc {

/// Element t^k w of F_n x|_phi <t>.
struct FbcElement {
  long long k = 0;
  Word w;
  bool operator==(const FbcElement&) const = default;
  bool is_identity() const { return k == 0 && w.empty(); }
};

/// The group G = F_n x|_phi <t> with t^{-1} x t = x phi.
class FbcContext {
 public:
  FbcContext(FreeAut phi, char stable = 't') : phi_(std::move(phi)), stable_(stable) {
    const Basis& b = phi_.basis();
    if (stable < 'a' || stable > 'z') throw Error("stable letter must be a lowercase character");
    if (b.compact() && stable - 'a' + 1 <= b.rank) throw Error("stable letter collides with a basis letter");
  }

  const Basis& basis() const { return phi_.basis(); }
  const FreeAut& phi() const { return phi_; }
  char stable_letter() const { return stable_; }
  int rank() const { return phi_.rank(); }

  /// w phi^l for any integer l.
  Word twist(const Word& w, long long l) const {
    Word out = w;
    for (long long i = 0; i < l; ++i) out = phi_.apply(out);
    for (long long i = 0; i > l; --i) out = phi_.apply_inverse(out);
    return out;
  }

  FbcElement t() const { return {1, Word()}; }
  FbcElement letter(Letter l) const { return {0, Word::letter(l)}; }
  FbcElement from_word(const Word& w) const { return {0, w}; }

  /// (k, u)(l, v) = (k + l, (u phi^l) v).
  FbcElement mul(const FbcElement& x, const FbcElement& y) const { return {x.k + y.k, twist(x.w, y.k) * y.w}; }

  /// (k, u)^{-1} = (-k, u^{-1} phi^{-k}).
  FbcElement inv(const FbcElement& x) const { return {-x.k, twist(x.w.inverse(), -x.k)}; }

  FbcElement power(const FbcElement& x, long long m) const {
    FbcElement base = m < 0 ? inv(x) : x;
    FbcElement out;
    for (long long i = 0; i < std::llabs(m); ++i) out = mul(out, base);
    return out;
  }

  /// h^{-1} g h.
  FbcElement conj(const FbcElement& g, const FbcElement& h) const { return mul(inv(h), mul(g, h)); }

  bool commute(const FbcElement& x, const FbcElement& y) const { return mul(x, y) == mul(y, x); }

  bool is_central(const FbcElement& x) const {
    if (!commute(x, t())) return false;
    for (int i = 1; i <= rank(); ++i) {
      if (!commute(x, letter(i))) return false;
    }
    return true;
  }

  /// Parses a word over the basis letters and the stable letter (upper case
  /// for its inverse), e.g. "tbT".
  FbcElement parse(std::string_view s) const {
    FbcElement out;
    const char up = static_cast<char>(stable_ - 'a' + 'A');
    std::string chunk;
    auto flush = [&] {
      if (!chunk.empty()) out = mul(out, from_word(basis().parse(chunk)));
      chunk.clear();
    };
    if (!basis().compact()) throw Error("element parsing needs a basis of rank at most 26");
    for (char c : s) {
      if (c == stable_ || c == up) {
        flush();
        out = mul(out, {c == stable_ ? 1 : -1, Word()});
      } else {
        chunk += c;
      }
    }
    flush();
    return out;
  }

  /// Normal form rendering: the t-power first, then the free word.
  std::string render(const FbcElement& x) const {
    std::string out(static_cast<std::size_t>(std::llabs(x.k)), x.k > 0 ? stable_ : static_cast<char>(stable_ - 'a' + 'A'));
    return out + basis().render(x.w);
  }

 private:
  FreeAut phi_;
  char stable_;
};

struct CentralElement {
  long long k = 0;
  Word g;  // phi^k = Ad(g); the central element is t^k g^{-1}
  FbcElement element() const { return {k, g.inverse()}; }
};

/// Least k <= max_k with phi^k inner, certified by a central element.
inline std::optional<CentralElement> central_element_search(const FbcContext& ctx, int max_k, int bound) {
  FreeAut p = FreeAut::identity(ctx.basis());
  for (int k = 1; k <= max_k; ++k) {
    p = p.then(ctx.phi());
    auto r = detect_inner(p, bound);
    if (const auto* f = std::get_if<Found>(&r)) {
      CentralElement c{k, f->witness};
      if (ctx.is_central(c.element())) return c;
    }
  }
  return std::nullopt;
}

namespace detail {

// Every proper quotient of the core graph (vertices identified, then folded)
// has rank above `max_rank` or equals `whole`. Used to certify that a fixed
// subgroup of maximal rank is the full fixed subgroup inside `whole`.
inline bool rigid_below_rank(const SubgroupGraph& k, int max_rank, const SubgroupGraph& whole) {
  const int n = k.vertex_count();
  if (n > 7) return false;
  std::vector<int> block(static_cast<std::size_t>(n), 0);
  bool ok = true;
  std::function<void(int, int)> partitions = [&](int v, int blocks) {
    if (!ok) return;
    if (v == n) {
      if (blocks == n) return;
      std::vector<LabeledEdge> edges;
      for (auto e : k.edges()) edges.push_back({block[static_cast<std::size_t>(e.src)], e.label, block[static_cast<std::size_t>(e.dst)]});
      auto q = SubgroupGraph::from_edges(k.basis_rank(), blocks, edges);
      if (q.rank() <= max_rank && !(q == whole)) ok = false;
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      if (v == 0 && b > 0) break;
      block[static_cast<std::size_t>(v)] = b;
      partitions(v + 1, std::max(blocks, b + 1));
    }
  };
  partitions(0, 0);
  return ok;
}

}  // namespace detail

inline SubgroupGraph full_graph(int rank) {
  std::vector<Word> gens;
  for (int i = 1; i <= rank; ++i) gens.push_back(Word::letter(i));
  return SubgroupGraph::from_generators(rank, gens);
}

struct CentralizerResult {
  std::vector<FbcElement> generators;
  int bound = 0;
  bool complete = false;
};

/// Generators of C_G(x) discovered with free-word searches up to `bound`.
inline CentralizerResult centralizer_bounded(const FbcContext& ctx, const FbcElement& x, int bound) {
  const int n = ctx.rank();
  CentralizerResult out;
  out.bound = bound;
  if (x.is_identity()) {
    for (int i = 1; i <= n; ++i) out.generators.push_back(ctx.letter(i));
    out.generators.push_back(ctx.t());
    out.complete = true;
    return out;
  }
  if (x.k == 0) {
    // (l, v) centralizes w iff v^{-1} (w phi^l) v = w; v ranges over a coset
    // of <root(w)>. The admissible l form a subgroup of Z.
    Word root = primitive_root(x.w).root;
    out.generators.push_back({0, root});
    for (long long l = 1; l <= bound; ++l) {
      auto c = are_conjugate(ctx.twist(x.w, l), x.w);
      if (c) {
        out.generators.push_back({l, *c});
        out.complete = true;
        return out;
      }
    }
    return out;
  }
  // Conjugation by x restricted to F_n is psi = phi^k followed by Ad(w), so
  // C(x) meets F_n in Fix(psi) and projects onto d Z for some d dividing k.
  FreeAut psi = ctx.phi().pow(x.k).then(FreeAut::inner(ctx.basis(), x.w));
  SubgroupGraph fix = fixed_subgroup_bounded(psi, bound);
  for (const Word& g : fix.generators()) out.generators.push_back({0, g});
  bool fix_complete = fix.index() == 1 ||
                      (fix.rank() == n && !(psi == FreeAut::identity(ctx.basis())) && detail::rigid_below_rank(fix, n, full_graph(n)));
  const long long k = std::llabs(x.k);
  for (long long d = 1; d <= k; ++d) {
    if (k % d != 0) continue;
    std::optional<FbcElement> found;
    if (d == k) {
      found = x.k > 0 ? x : ctx.inv(x);
    } else {
      for_each_word(n, static_cast<std::size_t>(bound), [&](const Word& v) {
        FbcElement y{d, v};
        if (ctx.commute(x, y)) {
          found = y;
          return false;
        }
        return true;
      });
    }
    if (found) {
      out.generators.push_back(*found);
      out.complete = fix_complete && d == 1;
      return out;
    }
  }
  return out;
}

}  // namespace fbc
