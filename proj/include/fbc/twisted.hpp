#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "fbc/fbc_group.hpp"

namespace fbc {

/// Twisted conjugacy h ~ (x phi)^{-1} h x for x in the subgroup <W> of F_n
/// spanned by a set of basis letters. phi must map <W> into itself.
class TwistedSetting {
 public:
  TwistedSetting(FreeAut phi, std::vector<int> letters) : phi_(std::move(phi)), letters_(std::move(letters)) {
    std::sort(letters_.begin(), letters_.end());
    letters_.erase(std::unique(letters_.begin(), letters_.end()), letters_.end());
    if (letters_.empty()) throw Error("twisted setting needs at least one letter");
    for (int i : letters_) {
      if (i < 1 || i > phi_.rank()) throw Error("twisted setting letter out of range");
      if (!in_span(phi_.image(i))) throw Error("automorphism does not preserve the letter subgroup");
    }
    std::vector<Word> gens;
    for (int i : letters_) gens.push_back(Word::letter(i));
    whole_ = SubgroupGraph::from_generators(phi_.rank(), gens);
  }

  const FreeAut& phi() const { return phi_; }
  const std::vector<int>& letters() const { return letters_; }
  const SubgroupGraph& whole() const { return whole_; }
  int width() const { return static_cast<int>(letters_.size()); }

  bool in_span(const Word& w) const {
    for (Letter l : w.letters()) {
      if (!std::binary_search(letters_.begin(), letters_.end(), std::abs(l))) return false;
    }
    return true;
  }

  /// Exponent sums over the letters of W.
  IntVector abelianize(const Word& w) const {
    auto all = exponent_sums(w, phi_.rank());
    IntVector v(width());
    for (int j = 0; j < width(); ++j) v(j) = all[static_cast<std::size_t>(letters_[static_cast<std::size_t>(j)] - 1)];
    return v;
  }

  /// Matrix of phi restricted to the abelianization of <W> (image columns).
  IntMatrix matrix() const {
    IntMatrix m(width(), width());
    for (int j = 0; j < width(); ++j) m.col(j) = abelianize(phi_.image(letters_[static_cast<std::size_t>(j)]));
    return m;
  }

  /// (x phi)^{-1} h x.
  Word act(const Word& h, const Word& x) const { return phi_.apply(x).inverse() * h * x; }

  void require_in_span(const Word& w, const char* what) const {
    if (!in_span(w)) throw Error(std::string(what) + " uses letters outside the twisted subgroup");
  }

 private:
  FreeAut phi_;
  std::vector<int> letters_;
  SubgroupGraph whole_;
};

/// Certifies that no x solves (x phi)^{-1} h x = g: abelianized, the
/// equation reads (I - M) x = g - h.
inline bool twisted_conjugacy_obstructed(const TwistedSetting& s, const Word& h, const Word& g) {
  s.require_in_span(h, "h");
  s.require_in_span(g, "g");
  IntMatrix a = int_identity(s.width()) - s.matrix();
  return !in_integer_column_span(a, s.abelianize(g) - s.abelianize(h));
}

/// Length-lex least x in <W> with |x| <= bound and (x phi)^{-1} h x = g.
inline SearchResult twisted_conjugacy_search(const TwistedSetting& s, const Word& h, const Word& g, int bound) {
  if (twisted_conjugacy_obstructed(s, h, g)) {
    return Obstructed{"abelianized difference g - h lies outside the image of I - M"};
  }
  std::optional<Word> hit;
  for_each_word(s.letters(), static_cast<std::size_t>(std::max(bound, 0)), [&](const Word& x) {
    if (s.act(h, x) == g) {
      hit = x;
      return false;
    }
    return true;
  });
  if (hit) return Found{*hit};
  return NotFoundUpTo{bound};
}

struct TwistedCentralizer {
  SubgroupGraph graph;
  std::vector<Word> generators;
  int bound = 0;
  bool complete = false;
  std::string reason;
};

/// Solutions of (w phi)^{-1} h w = h with |w| <= bound, folded. These are the
/// fixed words in <W> of psi = phi followed by Ad(h).
inline TwistedCentralizer twisted_centralizer_bounded(const TwistedSetting& s, const Word& h, int bound) {
  s.require_in_span(h, "h");
  FreeAut psi = s.phi().then(FreeAut::inner(s.phi().basis(), h));
  TwistedCentralizer out;
  out.bound = bound;
  out.graph = fixed_subgroup_bounded(psi, bound, s.letters());
  out.generators = out.graph.generators();
  bool psi_trivial = true;
  for (int i : s.letters()) psi_trivial = psi_trivial && psi.image(i) == Word::letter(i);
  if (out.graph == s.whole()) {
    out.complete = true;
    out.reason = "every letter is fixed";
  } else if (out.graph.rank() == s.width() && !psi_trivial && detail::rigid_below_rank(out.graph, s.width(), s.whole())) {
    out.complete = true;
    out.reason = "rank reaches the fixed subgroup bound and no proper quotient of the core graph has rank at most " +
                 std::to_string(s.width());
  } else {
    out.reason = "bounded enumeration up to length " + std::to_string(bound);
  }
  return out;
}

}  // namespace fbc
