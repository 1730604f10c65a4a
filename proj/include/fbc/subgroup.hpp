#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "fbc/fbc_group.hpp"

namespace fbc {

/// Finitely generated subgroup of G = F_n x|_phi <t> written as
/// <W> x| <sigma>, where W is a free subgroup of F_n normalized by sigma
/// (sigma absent when the subgroup lies inside F_n).
class SubFbc {
 public:
  /// Reduces generators to that shape: the t-exponents are combined by a
  /// Euclidean algorithm into sigma and the remainders join W. W is closed
  /// under conjugation by sigma for up to `closure_rounds` rounds.
  static SubFbc generated_by(std::shared_ptr<const FbcContext> ctxp, const std::vector<FbcElement>& gens, int closure_rounds = 4) {
    const FbcContext& ctx = *ctxp;
    std::optional<FbcElement> sigma;
    std::vector<Word> free_part;
    for (const auto& g0 : gens) {
      FbcElement g = g0;
      while (g.k != 0) {
        if (!sigma) {
          sigma = g.k > 0 ? g : ctx.inv(g);
          g = {};
          break;
        }
        long long q = g.k / sigma->k;
        g = ctx.mul(g, ctx.power(*sigma, -q));
        if (g.k != 0) {
          // Remainder has smaller |k|: it becomes the new sigma.
          FbcElement old = *sigma;
          sigma = g.k > 0 ? g : ctx.inv(g);
          g = old;
        }
      }
      if (!g.w.empty()) free_part.push_back(g.w);
    }
    SubFbc s(ctxp, sigma);
    s.graph_ = SubgroupGraph::from_generators(ctx.rank(), free_part);
    s.free_gens_ = s.graph_.generators();
    for (int round = 0; sigma && round <= closure_rounds; ++round) {
      std::vector<Word> extra;
      for (const Word& w : s.free_gens_) {
        for (int dir : {1, -1}) {
          Word im = s.conjugate_by_sigma(w, dir);
          if (!s.graph_.contains(im)) extra.push_back(im);
        }
      }
      if (extra.empty()) {
        s.normalized_ = true;
        break;
      }
      if (round == closure_rounds) break;
      extra.insert(extra.end(), s.free_gens_.begin(), s.free_gens_.end());
      s.graph_ = SubgroupGraph::from_generators(ctx.rank(), extra);
      s.free_gens_ = s.graph_.generators();
    }
    if (!sigma) s.normalized_ = true;
    if (!s.normalized_) throw Error("free part is not closed under the cyclic generator within the closure bound");
    return s;
  }

  const FbcContext& context() const { return *ctx_; }
  const std::shared_ptr<const FbcContext>& context_ptr() const { return ctx_; }
  const std::optional<FbcElement>& sigma() const { return sigma_; }
  const std::vector<Word>& free_generators() const { return free_gens_; }
  const SubgroupGraph& free_graph() const { return graph_; }
  int free_rank() const { return graph_.rank(); }

  /// Generators: the free basis followed by sigma.
  std::vector<FbcElement> generators() const {
    std::vector<FbcElement> out;
    for (const Word& w : free_gens_) out.push_back({0, w});
    if (sigma_) out.push_back(*sigma_);
    return out;
  }

  bool contains(const FbcElement& x) const {
    if (!sigma_) return x.k == 0 && graph_.contains(x.w);
    if (x.k % sigma_->k != 0) return false;
    FbcElement y = ctx_->mul(x, ctx_->power(*sigma_, -(x.k / sigma_->k)));
    return graph_.contains(y.w);
  }

  bool contains(const SubFbc& other) const {
    for (const auto& g : other.generators()) {
      if (!contains(g)) return false;
    }
    return true;
  }

  bool same_as(const SubFbc& other) const { return contains(other) && other.contains(*this); }

  /// sigma^{-dir} w sigma^{dir}, a word of F_n.
  Word conjugate_by_sigma(const Word& w, int dir) const {
    FbcElement s = dir > 0 ? *sigma_ : ctx_->inv(*sigma_);
    FbcElement r = ctx_->conj({0, w}, s);
    return r.w;
  }

  bool is_trivial() const { return !sigma_ && graph_.is_trivial(); }
  bool has_sigma() const { return sigma_.has_value(); }

 private:
  SubFbc(std::shared_ptr<const FbcContext> ctx, std::optional<FbcElement> sigma) : ctx_(std::move(ctx)), sigma_(std::move(sigma)) {}

  std::shared_ptr<const FbcContext> ctx_;
  std::optional<FbcElement> sigma_;
  SubgroupGraph graph_;
  std::vector<Word> free_gens_;
  bool normalized_ = false;
};

}  // namespace fbc
