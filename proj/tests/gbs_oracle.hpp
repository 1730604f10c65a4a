#pragma once

// Brute-force fiber rank for GBS graphs: find the centre exponents by search,
// build the finite cyclic quotient it determines, run Reidemeister-Schreier
// on the kernel, and read the rank off its abelianization.

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <vector>

#include "fbc/gbs.hpp"

namespace fbc::testing {

/// Least n_0 > 0 (up to `limit`) for which x_v^{n_v} is a single element:
/// every edge needs label_from | n_from and n_from / label_from * label_to = n_to.
inline std::optional<std::vector<long long>> centre_exponents(const GbsGraph& g, long long limit) {
  const std::size_t nv = g.vertices.size();
  for (long long n0 = 1; n0 <= limit; ++n0) {
    std::vector<std::optional<long long>> n(nv);
    n[0] = n0;
    bool ok = true, changed = true;
    while (ok && changed) {
      changed = false;
      for (const auto& e : g.edges) {
        auto& a = n[static_cast<std::size_t>(e.from)];
        auto& b = n[static_cast<std::size_t>(e.to)];
        if (a) {
          if (*a % e.label_from != 0) { ok = false; break; }
          long long want = *a / e.label_from * e.label_to;
          if (!b) { b = want; changed = true; }
          else if (*b != want) { ok = false; break; }
        } else if (b) {
          if (*b % e.label_to != 0) { ok = false; break; }
          a = *b / e.label_to * e.label_from;
          changed = true;
        }
      }
    }
    if (!ok) continue;
    std::vector<long long> out;
    for (const auto& x : n) out.push_back(*x);
    return out;
  }
  return std::nullopt;
}

/// Rank of an integer matrix modulo a prime.
inline int rank_mod(std::vector<std::vector<long long>> m, std::uint64_t p) {
  auto norm = [&](long long x) { return static_cast<std::uint64_t>(((x % static_cast<long long>(p)) + static_cast<long long>(p)) % static_cast<long long>(p)); };
  std::vector<std::vector<std::uint64_t>> a;
  for (auto& row : m) {
    std::vector<std::uint64_t> r;
    for (long long x : row) r.push_back(norm(x));
    a.push_back(std::move(r));
  }
  auto mulmod = [&](std::uint64_t x, std::uint64_t y) { return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % p); };
  auto powmod = [&](std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    for (; e; e >>= 1, b = mulmod(b, b)) {
      if (e & 1) r = mulmod(r, b);
    }
    return r;
  };
  int rank = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < a.size(); ++c) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[static_cast<std::size_t>(rank)]);
    auto& pr = a[static_cast<std::size_t>(rank)];
    std::uint64_t inv = powmod(pr[c], p - 2);
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == static_cast<std::size_t>(rank) || a[r][c] == 0) continue;
      std::uint64_t f = mulmod(a[r][c], inv);
      for (std::size_t k = c; k < cols; ++k) a[r][k] = (a[r][k] + p - mulmod(f, pr[k])) % p;
    }
    ++rank;
  }
  return rank;
}

struct OracleResult {
  std::vector<long long> n;
  long long index = 0;
  long long fiber_rank = 0;
};

/// Reidemeister-Schreier on K = ker(G -> Z/N, x_v -> N/n_v, t_e -> 0).
/// K is F_r x <delta>, so the free rank of H_1(K) is r + 1.
inline std::optional<OracleResult> fiber_rank_oracle(const GbsGraph& g, long long max_index = 12, long long limit = 4096) {
  auto n = centre_exponents(g, limit);
  if (!n) return std::nullopt;
  long long N = 1;
  for (long long x : *n) N = std::lcm(N, std::llabs(x));
  if (N > max_index) return std::nullopt;
  const auto pres = gbs_presentation(g);
  const int gens = static_cast<int>(pres.generators.size());
  std::vector<long long> shift(static_cast<std::size_t>(gens), 0);
  for (std::size_t v = 0; v < n->size(); ++v) shift[v] = ((N / (*n)[v]) % N + N) % N;
  auto act = [&](long long c, Letter l) {
    long long s = shift[static_cast<std::size_t>(std::abs(l) - 1)];
    return ((l > 0 ? c + s : c - s) % N + N) % N;
  };
  for (const auto& r : pres.relators) {
    long long c = 0;
    for (Letter l : r.letters()) c = act(c, l);
    if (c != 0) throw Error("oracle quotient map does not kill a relator");
  }
  // Schreier transversal by BFS over the cosets.
  std::vector<int> tree_gen(static_cast<std::size_t>(N), 0);
  std::vector<bool> seen(static_cast<std::size_t>(N), false);
  seen[0] = true;
  std::vector<long long> order{0};
  for (std::size_t h = 0; h < order.size(); ++h) {
    for (int j = 1; j <= gens; ++j) {
      long long d = act(order[h], j);
      if (seen[static_cast<std::size_t>(d)]) continue;
      seen[static_cast<std::size_t>(d)] = true;
      order.push_back(d);
      tree_gen[static_cast<std::size_t>(d)] = static_cast<int>((order[h] * gens + (j - 1)) + 1);
    }
  }
  const long long index = static_cast<long long>(order.size());
  std::vector<bool> is_tree(static_cast<std::size_t>(N * gens), false);
  for (long long c : order) {
    if (c != 0) is_tree[static_cast<std::size_t>(tree_gen[static_cast<std::size_t>(c)] - 1)] = true;
  }
  std::vector<int> column(static_cast<std::size_t>(N * gens), -1);
  int cols = 0;
  for (long long c : order) {
    for (int j = 0; j < gens; ++j) {
      std::size_t arc = static_cast<std::size_t>(c * gens + j);
      if (!is_tree[arc]) column[arc] = cols++;
    }
  }
  std::vector<std::vector<long long>> rows;
  for (long long c0 : order) {
    for (const auto& r : pres.relators) {
      std::vector<long long> row(static_cast<std::size_t>(cols), 0);
      long long c = c0;
      for (Letter l : r.letters()) {
        if (l > 0) {
          int col = column[static_cast<std::size_t>(c * gens + (l - 1))];
          if (col >= 0) row[static_cast<std::size_t>(col)] += 1;
          c = act(c, l);
        } else {
          c = act(c, l);
          int col = column[static_cast<std::size_t>(c * gens + (-l - 1))];
          if (col >= 0) row[static_cast<std::size_t>(col)] -= 1;
        }
      }
      rows.push_back(std::move(row));
    }
  }
  int rk = 0;
  if (!rows.empty() && cols > 0) {
    rk = std::max(rank_mod(rows, 2305843009213693951ULL), rank_mod(rows, 1000000007ULL));
  }
  return OracleResult{*n, index, static_cast<long long>(cols - rk) - 1};
}

}  // namespace fbc::testing
