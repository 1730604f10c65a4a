#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "fbc/matrix.hpp"
#include "fbc/stallings.hpp"
#include "fbc/word.hpp"

namespace fbc {

/// Automorphism of F_n acting on the right, stored as basis images together
/// with the images of the inverse automorphism.
class FreeAut {
 public:
  /// Builds and verifies an automorphism. Without explicit inverse images a
  /// Nielsen reduction of the image tuple is used to find them.
  static FreeAut from_images(const Basis& basis, std::vector<Word> images,
                             std::optional<std::vector<Word>> inverse_images = std::nullopt) {
    if (static_cast<int>(images.size()) != basis.rank) throw Error("expected one image per basis letter");
    for (const Word& w : images) {
      for (Letter l : w.letters()) {
        if (!basis.in_range(l)) throw Error("image letter outside basis");
      }
    }
    FreeAut f(basis, std::move(images), {});
    if (inverse_images) {
      if (static_cast<int>(inverse_images->size()) != basis.rank) throw Error("expected one inverse image per basis letter");
      f.inverse_images_ = std::move(*inverse_images);
    } else {
      auto inv = nielsen_inverse(basis.rank, f.images_);
      if (!inv) throw Error("images do not form a basis of the free group");
      f.inverse_images_ = std::move(*inv);
    }
    f.verify();
    return f;
  }

  static FreeAut parse(const Basis& basis, const std::vector<std::string>& images,
                       const std::optional<std::vector<std::string>>& inverse_images = std::nullopt) {
    std::vector<Word> ims;
    for (const auto& s : images) ims.push_back(basis.parse(s));
    std::optional<std::vector<Word>> inv;
    if (inverse_images) {
      inv.emplace();
      for (const auto& s : *inverse_images) inv->push_back(basis.parse(s));
    }
    return from_images(basis, std::move(ims), std::move(inv));
  }

  static FreeAut identity(const Basis& basis) {
    std::vector<Word> ims;
    for (int i = 1; i <= basis.rank; ++i) ims.push_back(Word::letter(i));
    return FreeAut(basis, ims, ims);
  }

  /// Ad(u): x -> u^{-1} x u.
  static FreeAut inner(const Basis& basis, const Word& u) {
    std::vector<Word> ims, inv;
    for (int i = 1; i <= basis.rank; ++i) {
      ims.push_back(u.inverse() * Word::letter(i) * u);
      inv.push_back(u * Word::letter(i) * u.inverse());
    }
    return FreeAut(basis, ims, inv);
  }

  const Basis& basis() const { return basis_; }
  int rank() const { return basis_.rank; }
  const std::vector<Word>& images() const { return images_; }
  const std::vector<Word>& inverse_images() const { return inverse_images_; }
  const Word& image(int i) const { return images_[static_cast<std::size_t>(i - 1)]; }

  Word apply(const Word& w) const { return substitute(images_, w); }
  Word apply_inverse(const Word& w) const { return substitute(inverse_images_, w); }

  FreeAut inverse() const { return FreeAut(basis_, inverse_images_, images_); }

  /// w (f.then(g)) = (w f) g.
  FreeAut then(const FreeAut& g) const {
    if (g.rank() != rank()) throw Error("composing automorphisms of different ranks");
    std::vector<Word> ims, inv;
    for (int i = 0; i < rank(); ++i) {
      ims.push_back(g.apply(images_[static_cast<std::size_t>(i)]));
      inv.push_back(apply_inverse(g.inverse_images_[static_cast<std::size_t>(i)]));
    }
    return FreeAut(basis_, ims, inv);
  }

  FreeAut pow(long long k) const {
    FreeAut base = k < 0 ? inverse() : *this;
    FreeAut out = identity(basis_);
    for (long long i = 0; i < std::llabs(k); ++i) out = out.then(base);
    return out;
  }

  bool operator==(const FreeAut& o) const { return images_ == o.images_; }

  std::vector<std::string> rendered_images() const {
    std::vector<std::string> out;
    for (const auto& w : images_) out.push_back(basis_.render(w));
    return out;
  }

 private:
  FreeAut(Basis basis, std::vector<Word> images, std::vector<Word> inverse_images)
      : basis_(basis), images_(std::move(images)), inverse_images_(std::move(inverse_images)) {}

  static Word substitute(const std::vector<Word>& table, const Word& w) {
    std::vector<Letter> raw;
    for (Letter l : w.letters()) {
      const Word& im = table[static_cast<std::size_t>(std::abs(l) - 1)];
      if (l > 0) {
        raw.insert(raw.end(), im.letters().begin(), im.letters().end());
      } else {
        for (auto it = im.letters().rbegin(); it != im.letters().rend(); ++it) raw.push_back(-*it);
      }
    }
    return Word::from_letters(raw);
  }

  void verify() const {
    for (int i = 1; i <= rank(); ++i) {
      Word x = Word::letter(i);
      if (apply_inverse(apply(x)) != x || apply(apply_inverse(x)) != x) {
        throw Error("inverse images do not invert the automorphism at letter " + basis_.letter_name(i));
      }
    }
  }

  static std::size_t total_length(const std::vector<Word>& u) {
    std::size_t s = 0;
    for (const auto& w : u) s += w.size();
    return s;
  }

  // Nielsen moves u_i <- u_i u_j^e or u_j^e u_i, tracking v_i with
  // u_i = f(v_i). Length-decreasing moves are applied greedily; when stuck,
  // a bounded search over non-increasing moves looks for a way down.
  static std::optional<std::vector<Word>> nielsen_inverse(int rank, const std::vector<Word>& images) {
    using State = std::pair<std::vector<Word>, std::vector<Word>>;
    auto moves = [rank](const State& s, const std::function<bool(State&&)>& sink) {
      for (int i = 0; i < rank; ++i) {
        for (int j = 0; j < rank; ++j) {
          if (i == j) continue;
          for (int e : {1, -1}) {
            for (bool right : {true, false}) {
              State t = s;
              Word uj = e > 0 ? s.first[static_cast<std::size_t>(j)] : s.first[static_cast<std::size_t>(j)].inverse();
              Word vj = e > 0 ? s.second[static_cast<std::size_t>(j)] : s.second[static_cast<std::size_t>(j)].inverse();
              auto& ui = t.first[static_cast<std::size_t>(i)];
              auto& vi = t.second[static_cast<std::size_t>(i)];
              ui = right ? ui * uj : uj * ui;
              vi = right ? vi * vj : vj * vi;
              if (!sink(std::move(t))) return;
            }
          }
        }
      }
    };
    State cur{images, {}};
    for (int i = 1; i <= rank; ++i) cur.second.push_back(Word::letter(i));
    for (const auto& w : images) {
      if (w.empty()) return std::nullopt;
    }
    constexpr std::size_t kPlateauStates = 4000;
    while (total_length(cur.first) > static_cast<std::size_t>(rank)) {
      std::size_t len = total_length(cur.first);
      std::optional<State> better;
      moves(cur, [&](State&& t) {
        if (total_length(t.first) < len) {
          better = std::move(t);
          return false;
        }
        return true;
      });
      if (!better) {
        std::set<std::vector<std::vector<Letter>>> seen;
        std::deque<State> queue{cur};
        auto key = [](const State& s) {
          std::vector<std::vector<Letter>> k;
          for (const auto& w : s.first) k.push_back(w.letters());
          return k;
        };
        seen.insert(key(cur));
        while (!queue.empty() && !better && seen.size() < kPlateauStates) {
          State s = std::move(queue.front());
          queue.pop_front();
          moves(s, [&](State&& t) {
            std::size_t tl = total_length(t.first);
            if (tl < len) {
              better = std::move(t);
              return false;
            }
            if (tl == len && seen.insert(key(t)).second) queue.push_back(std::move(t));
            return true;
          });
        }
      }
      if (!better) return std::nullopt;
      cur = std::move(*better);
      for (const auto& w : cur.first) {
        if (w.empty()) return std::nullopt;
      }
    }
    // Each u_i is now a letter x_{p(i)}^{e_i}, so x_{p(i)} f^{-1} = v_i^{e_i}.
    std::vector<Word> inv(static_cast<std::size_t>(rank));
    std::vector<bool> hit(static_cast<std::size_t>(rank), false);
    for (int i = 0; i < rank; ++i) {
      Letter l = cur.first[static_cast<std::size_t>(i)][0];
      auto idx = static_cast<std::size_t>(std::abs(l) - 1);
      if (hit[idx]) return std::nullopt;
      hit[idx] = true;
      inv[idx] = l > 0 ? cur.second[static_cast<std::size_t>(i)] : cur.second[static_cast<std::size_t>(i)].inverse();
    }
    return inv;
  }

  Basis basis_;
  std::vector<Word> images_;
  std::vector<Word> inverse_images_;
};

/// Entry (i, j) is the exponent sum of x_i in x_j f. With the right-action
/// convention, matrix(f.then(g)) = matrix(g) * matrix(f).
inline IntMatrix abelianization_matrix(const FreeAut& f) {
  const int n = f.rank();
  IntMatrix m = IntMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    auto e = exponent_sums(f.images()[static_cast<std::size_t>(j)], n);
    for (int i = 0; i < n; ++i) m(i, j) = e[static_cast<std::size_t>(i)];
  }
  return m;
}

inline bool is_upg_candidate(const FreeAut& f) { return is_unipotent(abelianization_matrix(f)); }

struct UpgPower {
  int r = 1;
  bool trivial_mod_3 = false;  // M^r = I mod 3, the sufficient homology criterion
};

/// Least r <= max_r whose matrix power M^r is unipotent.
inline std::optional<UpgPower> upg_power(const FreeAut& f, int max_r) {
  IntMatrix m = abelianization_matrix(f);
  IntMatrix p = int_identity(f.rank());
  for (int r = 1; r <= max_r; ++r) {
    p = p * m;
    if (is_unipotent(p)) return UpgPower{r, congruent_identity_mod(p, 3)};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- growth

enum class GrowthKind { Polynomial, Exponential, Undetermined };

struct GrowthSequence {
  std::string label;
  std::vector<std::size_t> lengths;  // conjugacy length of w f^k for k = 0, 1, ...
};

struct GrowthVerdict {
  GrowthKind kind = GrowthKind::Undetermined;
  int degree = -1;  // set for Polynomial
  std::vector<GrowthSequence> evidence;
  std::string reason;
};

inline std::string to_string(GrowthKind k) {
  switch (k) {
    case GrowthKind::Polynomial: return "polynomial";
    case GrowthKind::Exponential: return "exponential";
    default: return "undetermined";
  }
}

struct GrowthOptions {
  int iterations = 24;
  int window = 8;
  double ratio_threshold = 1.05;
  std::size_t length_cap = 2'000'000;
};

namespace detail {

// Smallest d such that the (d+1)-th differences vanish over the last
// `window` values of every residue subsequence mod `period`.
inline std::optional<int> difference_degree(const std::vector<std::size_t>& seq, int period, int window, int max_degree) {
  for (int d = 0; d <= max_degree; ++d) {
    bool all_ok = true;
    for (int res = 0; res < period && all_ok; ++res) {
      std::vector<double> sub;
      for (std::size_t k = static_cast<std::size_t>(res); k < seq.size(); k += static_cast<std::size_t>(period)) {
        sub.push_back(static_cast<double>(seq[k]));
      }
      if (static_cast<int>(sub.size()) < d + 3) return std::nullopt;
      std::size_t take = std::min<std::size_t>(sub.size(), static_cast<std::size_t>(std::max(window, d + 3)));
      std::vector<double> tail(sub.end() - static_cast<std::ptrdiff_t>(take), sub.end());
      for (int step = 0; step <= d; ++step) {
        for (std::size_t i = 0; i + 1 < tail.size(); ++i) tail[i] = tail[i + 1] - tail[i];
        tail.pop_back();
      }
      for (double x : tail) all_ok = all_ok && x == 0.0;
    }
    if (all_ok) return d;
  }
  return std::nullopt;
}

}  // namespace detail

/// Heuristic growth classification from iterated conjugacy lengths of the
/// basis letters and of the products x_i x_j.
inline GrowthVerdict classify_growth(const FreeAut& f, const GrowthOptions& opt = {}) {
  if (opt.iterations < 8) throw Error("growth classification needs at least 8 iterations");
  const int n = f.rank();
  const Basis& B = f.basis();
  std::vector<std::pair<std::string, Word>> probes;
  for (int i = 1; i <= n; ++i) probes.emplace_back(B.letter_name(i), Word::letter(i));
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      Word w = Word::letter(i) * Word::letter(j);
      probes.emplace_back(B.render(w), w);
    }
  }
  GrowthVerdict v;
  bool capped = false;
  for (auto& [label, w] : probes) {
    GrowthSequence s{label, {conjugacy_length(w)}};
    Word cur = w;
    for (int k = 1; k <= opt.iterations; ++k) {
      cur = cyclic_reduce(f.apply(cur)).core;
      s.lengths.push_back(cur.size());
      if (cur.size() > opt.length_cap) {
        capped = true;
        break;
      }
    }
    v.evidence.push_back(std::move(s));
  }
  const int max_degree = n - 1;
  if (!capped) {
    for (int period : {1, 2, 3, 4, 6}) {
      int degree = -1;
      bool ok = true;
      for (const auto& s : v.evidence) {
        auto d = detail::difference_degree(s.lengths, period, opt.window, max_degree);
        if (!d) {
          ok = false;
          break;
        }
        degree = std::max(degree, *d);
      }
      if (ok) {
        v.kind = GrowthKind::Polynomial;
        v.degree = degree;
        v.reason = "finite differences of order " + std::to_string(degree + 1) + " vanish (period " + std::to_string(period) + ")";
        return v;
      }
    }
  }
  // Exponential: the fastest sequence keeps multiplying by a fixed factor.
  const GrowthSequence* fastest = &v.evidence.front();
  for (const auto& s : v.evidence) {
    if (s.lengths.back() > fastest->lengths.back()) fastest = &s;
  }
  const auto& L = fastest->lengths;
  if (capped) {
    v.kind = GrowthKind::Exponential;
    v.reason = "length cap exceeded after " + std::to_string(L.size() - 1) + " iterations";
    return v;
  }
  std::size_t w = static_cast<std::size_t>(opt.window);
  bool ratios_ok = L.size() > w;
  for (std::size_t i = L.size() - std::min(w, L.size() - 1); ratios_ok && i < L.size(); ++i) {
    ratios_ok = L[i - 1] > 0 && static_cast<double>(L[i]) / static_cast<double>(L[i - 1]) >= opt.ratio_threshold;
  }
  double slope = 0.0;
  {
    std::size_t k1 = L.size() - 1, k0 = k1 >= w ? k1 - w : 1;
    if (k0 >= 1 && L[k0] > 0 && L[k1] > 0 && k1 > k0) {
      slope = (std::log(static_cast<double>(L[k1])) - std::log(static_cast<double>(L[k0]))) /
              (std::log(static_cast<double>(k1)) - std::log(static_cast<double>(k0)));
    }
  }
  if (ratios_ok && slope > max_degree + 0.5) {
    v.kind = GrowthKind::Exponential;
    v.reason = "successive length ratios stay above threshold";
    return v;
  }
  double rounded = std::round(slope);
  if (std::abs(slope - rounded) <= 0.35 && rounded >= 0 && rounded <= max_degree) {
    v.kind = GrowthKind::Polynomial;
    v.degree = static_cast<int>(rounded);
    v.reason = "log-log slope fit";
    return v;
  }
  v.reason = "sequences fit neither pattern";
  return v;
}

// ---------------------------------------------------------------- inner

struct Found {
  Word witness;
};
struct NotFoundUpTo {
  int bound = 0;
};
struct Obstructed {
  std::string reason;
};
using SearchResult = std::variant<Found, NotFoundUpTo, Obstructed>;

inline bool is_found(const SearchResult& r) { return std::holds_alternative<Found>(r); }

/// Looks for u with x f = u^{-1} x u on every basis letter.
inline SearchResult detect_inner(const FreeAut& f, int bound) {
  const int n = f.rank();
  if (abelianization_matrix(f) != int_identity(n)) return Obstructed{"abelianization matrix is not the identity"};
  auto verifies = [&](const Word& u) {
    for (int i = 1; i <= n; ++i) {
      if (f.image(i) != u.inverse() * Word::letter(i) * u) return false;
    }
    return true;
  };
  if (n == 1) {
    if (verifies(Word())) return Found{Word()};
    return Obstructed{"nontrivial automorphism of Z"};
  }
  // Solutions of x_1 f = u^{-1} x_1 u form the coset <x_1> c.
  auto c = are_conjugate(Word::letter(1), f.image(1));
  if (!c) return Obstructed{"image of " + f.basis().letter_name(1) + " is not conjugate to it"};
  std::optional<Word> best;
  const long long span = bound + static_cast<long long>(c->size());
  for (long long j = -span; j <= span; ++j) {
    Word u = power(Word::letter(1), j) * *c;
    if (static_cast<int>(u.size()) > bound) continue;
    if (verifies(u) && (!best || u < *best)) best = u;
  }
  if (best) return Found{*best};
  return NotFoundUpTo{bound};
}

// ---------------------------------------------------------------- fixed words

/// Stallings closure of all fixed words of length <= bound. With a nonempty
/// `letters` list only words over those generators are searched.
inline SubgroupGraph fixed_subgroup_bounded(const FreeAut& f, int bound, const std::vector<int>& letters = {}) {
  const int n = f.rank();
  std::vector<Letter> alphabet;
  for (int i = 1; i <= n; ++i) {
    if (letters.empty() || std::find(letters.begin(), letters.end(), i) != letters.end()) {
      alphabet.push_back(i);
      alphabet.push_back(-i);
    }
  }
  std::size_t max_image = 0;
  for (Letter l : alphabet) max_image = std::max(max_image, f.image(std::abs(l)).size());
  std::vector<Word> fixed;
  std::vector<Letter> word;
  std::vector<Word> image_stack{Word()};
  auto lcp = [](const Word& a, const std::vector<Letter>& b) {
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
    return i;
  };
  std::function<void()> dfs = [&]() {
    const Word im = image_stack.back();
    const std::size_t len = word.size();
    if (len > 0 && im.letters() == word) fixed.push_back(Word::from_letters(word));
    if (static_cast<int>(len) == bound) return;
    for (Letter l : alphabet) {
      if (!word.empty() && word.back() == -l) continue;
      Word next = im * (l > 0 ? f.image(l) : f.image(-l).inverse());
      word.push_back(l);
      // A fixed extension W = w v needs the uncancelled part of (w f) to be a
      // prefix of W; at most |v f| letters of w f can cancel.
      std::size_t rest = static_cast<std::size_t>(bound) - word.size();
      std::size_t slack = rest * max_image;
      std::size_t need = next.size() > slack ? std::min(word.size(), next.size() - slack) : 0;
      if (lcp(next, word) >= need && next.size() <= static_cast<std::size_t>(bound) + slack) {
        image_stack.push_back(std::move(next));
        dfs();
        image_stack.pop_back();
      }
      word.pop_back();
    }
  };
  dfs();
  return SubgroupGraph::from_generators(n, fixed);
}

/// Sum over representatives of max(rank - 1, 0) is at most n - 1.
inline bool bh_bound_check(const std::vector<int>& fix_ranks, int n) {
  long long total = 0;
  for (int r : fix_ranks) total += std::max(r - 1, 0);
  return total <= n - 1;
}

}  // namespace fbc
