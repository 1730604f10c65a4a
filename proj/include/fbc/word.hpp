#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fbc {

/// Raised for malformed input: out-of-range letters, unparsable words,
/// automorphisms that fail verification, and similar contract violations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Signed generator index: +i is x_i, -i is x_i^{-1}; zero is never a letter.
using Letter = int;

namespace detail {

/// Position of a letter in the fixed letter order a < A < b < B < ...
inline int letter_key(Letter l) { return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0); }

}  // namespace detail

/// A freely reduced word in a free group. The empty word is the identity.
class Word {
 public:
  Word() = default;

  /// Freely reduces `raw`. Letters are not range-checked here; see reduce().
  static Word from_letters(std::span<const Letter> raw) {
    std::vector<Letter> out;
    out.reserve(raw.size());
    for (Letter l : raw) {
      if (l == 0) throw Error("letter 0 is not a generator");
      if (!out.empty() && out.back() == -l) {
        out.pop_back();
      } else {
        out.push_back(l);
      }
    }
    return Word(std::move(out));
  }

  static Word letter(Letter l) {
    if (l == 0) throw Error("letter 0 is not a generator");
    return Word(std::vector<Letter>{l});
  }

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  Word inverse() const {
    std::vector<Letter> out(letters_.rbegin(), letters_.rend());
    for (auto& l : out) l = -l;
    return Word(std::move(out));
  }

  Word operator*(const Word& rhs) const {
    std::size_t cancel = 0;
    const std::size_t n = letters_.size();
    while (cancel < n && cancel < rhs.size() &&
           letters_[n - 1 - cancel] == -rhs.letters_[cancel]) {
      ++cancel;
    }
    std::vector<Letter> out;
    out.reserve(n + rhs.size() - 2 * cancel);
    out.insert(out.end(), letters_.begin(), letters_.end() - static_cast<std::ptrdiff_t>(cancel));
    out.insert(out.end(), rhs.letters_.begin() + static_cast<std::ptrdiff_t>(cancel), rhs.letters_.end());
    return Word(std::move(out));
  }

  Word& operator*=(const Word& rhs) { return *this = *this * rhs; }

  /// Sub-word [pos, pos+len); the result is reduced because the source is.
  Word slice(std::size_t pos, std::size_t len) const {
    return Word(std::vector<Letter>(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                                    letters_.begin() + static_cast<std::ptrdiff_t>(pos + len)));
  }

  bool operator==(const Word&) const = default;

  /// Length-then-lexicographic order with a < A < b < B < ...
  std::strong_ordering operator<=>(const Word& rhs) const {
    if (auto c = letters_.size() <=> rhs.letters_.size(); c != 0) return c;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      if (auto c = detail::letter_key(letters_[i]) <=> detail::letter_key(rhs.letters_[i]); c != 0) {
        return c;
      }
    }
    return std::strong_ordering::equal;
  }

 private:
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  std::vector<Letter> letters_;
};

inline Word power(const Word& w, long long m) {
  Word base = m < 0 ? w.inverse() : w;
  Word out;
  for (long long i = 0; i < std::llabs(m); ++i) out *= base;
  return out;
}

/// Free basis x_1..x_n. Names render as a..z / A..Z up to rank 26 and as
/// dot-separated x27 / X27 tokens beyond that.
struct Basis {
  int rank = 1;

  explicit Basis(int r = 1) : rank(r) {
    if (r < 1) throw Error("basis rank must be at least 1");
  }

  bool compact() const { return rank <= 26; }

  bool in_range(Letter l) const { return l != 0 && std::abs(l) <= rank; }

  std::string letter_name(Letter l) const {
    if (compact()) {
      char c = static_cast<char>((l > 0 ? 'a' : 'A') + std::abs(l) - 1);
      return std::string(1, c);
    }
    return (l > 0 ? "x" : "X") + std::to_string(std::abs(l));
  }

  std::string render(const Word& w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!compact() && i > 0) out += '.';
      out += letter_name(w[i]);
    }
    return out;
  }

  std::vector<Letter> parse_letters(std::string_view s) const {
    std::vector<Letter> out;
    if (compact()) {
      for (char c : s) {
        Letter l = 0;
        if (c >= 'a' && c <= 'z') l = c - 'a' + 1;
        else if (c >= 'A' && c <= 'Z') l = -(c - 'A' + 1);
        else throw Error(std::string("unexpected character '") + c + "' in word");
        if (!in_range(l)) throw Error(std::string("letter '") + c + "' outside basis of rank " + std::to_string(rank));
        out.push_back(l);
      }
      return out;
    }
    std::size_t pos = 0;
    while (pos < s.size()) {
      std::size_t end = s.find('.', pos);
      if (end == std::string_view::npos) end = s.size();
      std::string_view tok = s.substr(pos, end - pos);
      if (tok.size() < 2 || (tok[0] != 'x' && tok[0] != 'X')) throw Error("bad letter token '" + std::string(tok) + "'");
      int idx = std::stoi(std::string(tok.substr(1)));
      Letter l = tok[0] == 'x' ? idx : -idx;
      if (!in_range(l)) throw Error("letter '" + std::string(tok) + "' outside basis");
      out.push_back(l);
      pos = end + 1;
    }
    return out;
  }

  Word parse(std::string_view s) const { return Word::from_letters(parse_letters(s)); }
};

/// Free reduction with range checking against `basis`.
inline Word reduce(std::span<const Letter> raw, const Basis& basis) {
  for (Letter l : raw) {
    if (!basis.in_range(l)) throw Error("letter index " + std::to_string(l) + " outside basis of rank " + std::to_string(basis.rank));
  }
  return Word::from_letters(raw);
}

struct CyclicReduction {
  Word core;        // cyclically reduced
  Word conjugator;  // w = conjugator^{-1} * core * conjugator
};

inline CyclicReduction cyclic_reduce(const Word& w) {
  std::size_t i = 0;
  const std::size_t n = w.size();
  while (2 * i + 1 < n && w[i] == -w[n - 1 - i]) ++i;
  return {w.slice(i, n - 2 * i), w.slice(n - i, i)};
}

/// Length of the shortest word in the conjugacy class of w.
inline std::size_t conjugacy_length(const Word& w) { return cyclic_reduce(w).core.size(); }

/// Cyclic rotation u -> x^{-1} u x where u = x y (x the first `k` letters).
inline Word rotate(const Word& u, std::size_t k) { return u.slice(k, u.size() - k) * u.slice(0, k); }

/// Returns c with c^{-1} u c = v, or nullopt when u and v are not conjugate.
inline std::optional<Word> are_conjugate(const Word& u, const Word& v) {
  auto [cu, p] = cyclic_reduce(u);
  auto [cv, q] = cyclic_reduce(v);
  if (cu.size() != cv.size()) return std::nullopt;
  if (cu.empty()) return p.inverse() * q;
  for (std::size_t k = 0; k < cu.size(); ++k) {
    if (rotate(cu, k) == cv) {
      Word x = cu.slice(0, k);
      return p.inverse() * x * q;
    }
  }
  return std::nullopt;
}

/// Lexicographically least cyclic rotation of the cyclic reduction: a total
/// normal form for conjugacy classes.
inline Word conjugacy_normal_form(const Word& w) {
  Word core = cyclic_reduce(w).core;
  Word best = core;
  for (std::size_t k = 1; k < core.size(); ++k) {
    Word r = rotate(core, k);
    if (r < best) best = r;
  }
  return best;
}

struct Root {
  Word root;
  int multiplicity = 1;
};

/// w = root^multiplicity with root not a proper power. Throws on the identity.
inline Root primitive_root(const Word& w) {
  if (w.empty()) throw Error("the identity has no primitive root");
  auto [core, p] = cyclic_reduce(w);
  const std::size_t n = core.size();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = core[i] == core[i - d];
    if (periodic) {
      return {p.inverse() * core.slice(0, d) * p, static_cast<int>(n / d)};
    }
  }
  return {w, 1};
}

/// Generator of the centralizer of a nontrivial element of a free group.
inline Word centralizer_free(const Word& w) {
  if (w.empty()) throw Error("centralizer of the identity is the whole group");
  return primitive_root(w).root;
}

inline bool is_proper_power(const Word& w) { return !w.empty() && primitive_root(w).multiplicity > 1; }

/// Exponent sum of each generator (index 0 is x_1).
inline std::vector<long long> exponent_sums(const Word& w, int rank) {
  std::vector<long long> out(static_cast<std::size_t>(rank), 0);
  for (Letter l : w.letters()) out[static_cast<std::size_t>(std::abs(l) - 1)] += l > 0 ? 1 : -1;
  return out;
}

/// Visits reduced words of length <= max_len over the generators in `gens`
/// (positive indices; inverses included automatically) in length-lex order.
/// Stops early when `visit` returns false.
inline void for_each_word(const std::vector<int>& gens, std::size_t max_len,
                          const std::function<bool(const Word&)>& visit) {
  std::vector<Letter> alphabet;
  for (int g : gens) {
    alphabet.push_back(g);
    alphabet.push_back(-g);
  }
  std::sort(alphabet.begin(), alphabet.end(),
            [](Letter a, Letter b) { return detail::letter_key(a) < detail::letter_key(b); });
  if (!visit(Word())) return;
  std::vector<Letter> buf;
  bool keep_going = true;
  std::function<void(std::size_t)> extend = [&](std::size_t target) {
    if (!keep_going) return;
    if (buf.size() == target) {
      keep_going = visit(Word::from_letters(buf));
      return;
    }
    for (Letter l : alphabet) {
      if (!buf.empty() && buf.back() == -l) continue;
      buf.push_back(l);
      extend(target);
      buf.pop_back();
      if (!keep_going) return;
    }
  };
  for (std::size_t len = 1; len <= max_len && keep_going; ++len) extend(len);
}

inline void for_each_word(int rank, std::size_t max_len, const std::function<bool(const Word&)>& visit) {
  std::vector<int> gens;
  for (int i = 1; i <= rank; ++i) gens.push_back(i);
  for_each_word(gens, max_len, visit);
}

}  // namespace fbc
