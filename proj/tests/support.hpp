#pragma once

#include <random>
#include <vector>

#include "fbc/word.hpp"

namespace fbc::testing {

/// Uniform random reduced word of length exactly `len` over x_1..x_rank.
inline Word random_word(std::mt19937_64& rng, int rank, std::size_t len) {
  std::uniform_int_distribution<int> pick(1, 2 * rank);
  std::vector<Letter> out;
  while (out.size() < len) {
    int r = pick(rng);
    Letter l = r <= rank ? r : -(r - rank);
    if (!out.empty() && out.back() == -l) continue;
    out.push_back(l);
  }
  return Word::from_letters(out);
}

/// Random reduced word of length in [0, max_len].
inline Word random_word_upto(std::mt19937_64& rng, int rank, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  return random_word(rng, rank, len(rng));
}

/// Random unreduced letter sequence, useful for reduction properties.
inline std::vector<Letter> random_raw(std::mt19937_64& rng, int rank, std::size_t len) {
  std::uniform_int_distribution<int> pick(1, 2 * rank);
  std::vector<Letter> out;
  for (std::size_t i = 0; i < len; ++i) {
    int r = pick(rng);
    out.push_back(r <= rank ? r : -(r - rank));
  }
  return out;
}

}  // namespace fbc::testing
