#pragma once

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>
#include <vector>

#include "fbc/word.hpp"

namespace fbc {

/// Edge of a subgroup graph, always stored with a positive label.
struct LabeledEdge {
  int src = 0;
  Letter label = 1;
  int dst = 0;
  bool operator==(const LabeledEdge&) const = default;
  auto operator<=>(const LabeledEdge&) const = default;
};

/// Folded, based core graph of a finitely generated subgroup of F_n.
///
/// Vertices are numbered canonically by a breadth-first walk from the base
/// (vertex 0) that tries letters in the order a, A, b, B, ...; two graphs
/// compare equal exactly when they represent the same subgroup.
class SubgroupGraph {
 public:
  static SubgroupGraph from_generators(int rank, const std::vector<Word>& gens) {
    Folder f(rank);
    f.add_vertex();
    for (const Word& w : gens) {
      int cur = 0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (std::abs(w[i]) > rank) throw Error("generator letter outside basis");
        int next = i + 1 == w.size() ? 0 : f.add_vertex();
        f.add_edge(cur, w[i], next);
        cur = next;
      }
    }
    SubgroupGraph g = f.finish(true);
    g.gens_ = gens;
    return g;
  }

  static SubgroupGraph from_edges(int rank, int n_vertices, const std::vector<LabeledEdge>& edges) {
    Folder f(rank);
    for (int i = 0; i < std::max(1, n_vertices); ++i) f.add_vertex();
    for (const auto& e : edges) f.add_edge(e.src, e.label, e.dst);
    SubgroupGraph g = f.finish(true);
    g.gens_ = g.generators();
    return g;
  }

  int basis_rank() const { return rank_; }
  int vertex_count() const { return static_cast<int>(adj_.size()); }
  int edge_count() const { return static_cast<int>(edges().size()); }

  /// Rank of the represented free subgroup: |E| - |V| + 1.
  int rank() const { return edge_count() - vertex_count() + 1; }

  bool is_trivial() const { return edge_count() == 0; }

  /// Generators the graph was built from (or a computed basis).
  const std::vector<Word>& input_generators() const { return gens_; }

  /// Target of the edge leaving v with signed label l, or -1.
  int step(int v, Letter l) const { return adj_[static_cast<std::size_t>(v)][static_cast<std::size_t>(detail::letter_key(l))]; }

  std::vector<LabeledEdge> edges() const {
    std::vector<LabeledEdge> out;
    for (int v = 0; v < vertex_count(); ++v) {
      for (int i = 1; i <= rank_; ++i) {
        int t = step(v, i);
        if (t >= 0) out.push_back({v, i, t});
      }
    }
    return out;
  }

  /// End vertex of the path reading w from `start`, if the path exists.
  std::optional<int> read(int start, const Word& w) const {
    int cur = start;
    for (Letter l : w.letters()) {
      if (std::abs(l) > rank_) return std::nullopt;
      cur = step(cur, l);
      if (cur < 0) return std::nullopt;
    }
    return cur;
  }

  bool contains(const Word& w) const {
    auto end = read(0, w);
    return end && *end == 0;
  }

  /// Index in F_n: the vertex count when every vertex has all 2n directions.
  std::optional<int> index() const {
    for (const auto& row : adj_) {
      for (int t : row) {
        if (t < 0) return std::nullopt;
      }
    }
    return vertex_count();
  }

  /// Free basis read off a breadth-first spanning tree; non-tree edges in
  /// canonical order.
  std::vector<Word> generators() const {
    std::vector<Word> path(adj_.size());
    std::vector<bool> seen(adj_.size(), false);
    std::vector<std::tuple<int, Letter, int>> tree_edges;
    std::deque<int> queue{0};
    seen[0] = true;
    std::vector<std::vector<bool>> is_tree(adj_.size(), std::vector<bool>(static_cast<std::size_t>(2 * rank_), false));
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int k = 0; k < 2 * rank_; ++k) {
        int t = adj_[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)];
        if (t < 0 || seen[static_cast<std::size_t>(t)]) continue;
        Letter l = key_letter(k);
        seen[static_cast<std::size_t>(t)] = true;
        path[static_cast<std::size_t>(t)] = path[static_cast<std::size_t>(v)] * Word::letter(l);
        is_tree[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)] = true;
        is_tree[static_cast<std::size_t>(t)][static_cast<std::size_t>(detail::letter_key(-l))] = true;
        queue.push_back(t);
      }
    }
    std::vector<Word> out;
    for (const auto& e : edges()) {
      if (is_tree[static_cast<std::size_t>(e.src)][static_cast<std::size_t>(detail::letter_key(e.label))]) continue;
      out.push_back(path[static_cast<std::size_t>(e.src)] * Word::letter(e.label) * path[static_cast<std::size_t>(e.dst)].inverse());
    }
    return out;
  }

  bool operator==(const SubgroupGraph& o) const { return rank_ == o.rank_ && adj_ == o.adj_; }

 private:
  friend SubgroupGraph intersect(const SubgroupGraph&, const SubgroupGraph&);
  friend bool conjugate_subgroups(const SubgroupGraph&, const SubgroupGraph&);

  static Letter key_letter(int k) { return (k % 2 == 0 ? 1 : -1) * (k / 2 + 1); }

  // Union-find folding over a multigraph; merges cascade through a queue.
  class Folder {
   public:
    explicit Folder(int rank) : rank_(rank) {}

    int add_vertex() {
      parent_.push_back(static_cast<int>(parent_.size()));
      adj_.emplace_back();
      return static_cast<int>(parent_.size()) - 1;
    }

    void add_edge(int s, Letter l, int t) {
      link(find(s), l, find(t));
      link(find(t), -l, find(s));
      drain();
    }

    SubgroupGraph finish(bool keep_base) {
      drain();
      // Collapse to representatives.
      std::map<int, std::map<Letter, int>> graph;
      for (int v = 0; v < static_cast<int>(parent_.size()); ++v) {
        if (find(v) != v) continue;
        auto& row = graph[v];
        for (auto [l, t] : adj_[static_cast<std::size_t>(v)]) row[l] = find(t);
      }
      int base = find(0);
      // Trim hanging trees; the base survives when keep_base is set.
      bool changed = true;
      while (changed) {
        changed = false;
        for (auto it = graph.begin(); it != graph.end();) {
          int v = it->first;
          if ((keep_base && v == base) || it->second.size() >= 2) {
            ++it;
            continue;
          }
          for (auto [l, t] : it->second) {
            if (t != v) graph[t].erase(-l);
          }
          it = graph.erase(it);
          changed = true;
        }
      }
      SubgroupGraph g;
      g.rank_ = rank_;
      if (graph.empty()) return g;
      if (!graph.count(base)) base = graph.begin()->first;
      // Canonical breadth-first numbering.
      std::map<int, int> number;
      std::deque<int> queue{base};
      number[base] = 0;
      std::vector<int> order{base};
      while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int k = 0; k < 2 * rank_; ++k) {
          auto it = graph[v].find(key_letter(k));
          if (it == graph[v].end() || number.count(it->second)) continue;
          number[it->second] = static_cast<int>(order.size());
          order.push_back(it->second);
          queue.push_back(it->second);
        }
      }
      g.adj_.assign(order.size(), std::vector<int>(static_cast<std::size_t>(2 * rank_), -1));
      for (std::size_t i = 0; i < order.size(); ++i) {
        for (auto [l, t] : graph[order[i]]) g.adj_[i][static_cast<std::size_t>(detail::letter_key(l))] = number.at(t);
      }
      return g;
    }

   private:
    int find(int v) {
      while (parent_[static_cast<std::size_t>(v)] != v) {
        parent_[static_cast<std::size_t>(v)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])];
        v = parent_[static_cast<std::size_t>(v)];
      }
      return v;
    }

    void link(int s, Letter l, int t) {
      auto& row = adj_[static_cast<std::size_t>(s)];
      auto it = row.find(l);
      if (it == row.end()) {
        row[l] = t;
      } else if (find(it->second) != find(t)) {
        pending_.emplace_back(it->second, t);
      }
    }

    void drain() {
      while (!pending_.empty()) {
        auto [a, b] = pending_.front();
        pending_.pop_front();
        a = find(a);
        b = find(b);
        if (a == b) continue;
        if (b < a) std::swap(a, b);
        parent_[static_cast<std::size_t>(b)] = a;
        auto moved = std::move(adj_[static_cast<std::size_t>(b)]);
        adj_[static_cast<std::size_t>(b)].clear();
        for (auto [l, t] : moved) link(a, l, find(t));
      }
    }

    int rank_;
    std::vector<int> parent_;
    std::vector<std::map<Letter, int>> adj_;
    std::deque<std::pair<int, int>> pending_;
  };

  int rank_ = 1;
  std::vector<std::vector<int>> adj_;
  std::vector<Word> gens_;
};

/// Pullback of the two based graphs; accepts exactly the common words.
inline SubgroupGraph intersect(const SubgroupGraph& g1, const SubgroupGraph& g2) {
  if (g1.rank_ != g2.rank_) throw Error("intersection of subgroups over different bases");
  const int rank = g1.rank_;
  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> pairs{{0, 0}};
  id[{0, 0}] = 0;
  std::vector<LabeledEdge> edges;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [u, v] = pairs[i];
    for (int l = 1; l <= rank; ++l) {
      if (g1.vertex_count() == 0 || g2.vertex_count() == 0) break;
      int a = g1.step(u, l), b = g2.step(v, l);
      if (a < 0 || b < 0) continue;
      auto [it, inserted] = id.emplace(std::make_pair(a, b), static_cast<int>(pairs.size()));
      if (inserted) pairs.emplace_back(a, b);
      edges.push_back({static_cast<int>(i), l, it->second});
    }
    for (int l = 1; l <= rank; ++l) {
      if (g1.vertex_count() == 0 || g2.vertex_count() == 0) break;
      int a = g1.step(u, -l), b = g2.step(v, -l);
      if (a < 0 || b < 0) continue;
      auto [it, inserted] = id.emplace(std::make_pair(a, b), static_cast<int>(pairs.size()));
      if (inserted) pairs.emplace_back(a, b);
    }
  }
  return SubgroupGraph::from_edges(rank, static_cast<int>(pairs.size()), edges);
}

/// True iff the subgroup of `big` contains every input generator of `small`.
inline bool contains_subgroup(const SubgroupGraph& big, const SubgroupGraph& small) {
  for (const Word& w : small.generators()) {
    if (!big.contains(w)) return false;
  }
  return true;
}

/// Whether the graph map core(h) -> core(k) induced by H <= K is injective.
/// A true answer shows H is a free factor of K; false is inconclusive.
inline bool morphism_is_injective(const SubgroupGraph& h, const SubgroupGraph& k) {
  if (h.basis_rank() != k.basis_rank()) throw Error("subgroups over different bases");
  if (!contains_subgroup(k, h)) throw Error("morphism_is_injective requires H <= K");
  std::vector<int> image(static_cast<std::size_t>(h.vertex_count()), -1);
  image[0] = 0;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int l = -h.basis_rank(); l <= h.basis_rank(); ++l) {
      if (l == 0) continue;
      int t = h.step(v, l);
      if (t < 0) continue;
      int kt = k.step(image[static_cast<std::size_t>(v)], l);
      if (kt < 0) throw Error("subgroup graph morphism undefined; containment check inconsistent");
      if (image[static_cast<std::size_t>(t)] < 0) {
        image[static_cast<std::size_t>(t)] = kt;
        queue.push_back(t);
      }
    }
  }
  std::vector<int> sorted = image;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

/// Whether two subgroups are conjugate in F_n: their unbased cores are
/// label-isomorphic.
inline bool conjugate_subgroups(const SubgroupGraph& g1, const SubgroupGraph& g2) {
  if (g1.rank_ != g2.rank_) return false;
  auto unbased = [](const SubgroupGraph& g) {
    SubgroupGraph::Folder f(g.rank_);
    for (int i = 0; i < std::max(1, g.vertex_count()); ++i) f.add_vertex();
    for (const auto& e : g.edges()) f.add_edge(e.src, e.label, e.dst);
    return f.finish(false);
  };
  SubgroupGraph a = unbased(g1), b = unbased(g2);
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  if (a.vertex_count() == 0) return true;
  const int n = a.vertex_count();
  for (int start = 0; start < n; ++start) {
    std::vector<int> map(static_cast<std::size_t>(n), -1);
    map[0] = start;
    std::deque<int> queue{0};
    bool ok = true;
    while (!queue.empty() && ok) {
      int v = queue.front();
      queue.pop_front();
      for (int k = 0; k < 2 * a.rank_ && ok; ++k) {
        int t = a.adj_[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)];
        int s = b.adj_[static_cast<std::size_t>(map[static_cast<std::size_t>(v)])][static_cast<std::size_t>(k)];
        if ((t < 0) != (s < 0)) ok = false;
        else if (t >= 0) {
          if (map[static_cast<std::size_t>(t)] < 0) {
            map[static_cast<std::size_t>(t)] = s;
            queue.push_back(t);
          } else if (map[static_cast<std::size_t>(t)] != s) {
            ok = false;
          }
        }
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace fbc
