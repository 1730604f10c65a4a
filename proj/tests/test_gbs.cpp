#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fbc/gbs.hpp"
#include "gbs_oracle.hpp"

using namespace fbc;
using fbc::testing::fiber_rank_oracle;

namespace {

GbsGraph z2_loop() { return {{"x"}, {{0, 0, 1, 1}}}; }

/// Connected graphs on up to four vertices with up to `max_edges` edges
/// (from <= to, edge list sorted) and every labelling from `labels`.
std::vector<GbsGraph> enumerate_graphs(int max_edges, const std::vector<long long>& labels) {
  std::vector<GbsGraph> out;
  for (int nv = 1; nv <= 4; ++nv) {
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < nv; ++i) {
      for (int j = i; j < nv; ++j) slots.emplace_back(i, j);
    }
    for (int ne = nv - 1; ne <= max_edges; ++ne) {
      std::vector<std::size_t> pick(static_cast<std::size_t>(ne), 0);
      // Nondecreasing sequences of slot indices.
      std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t lo) {
        if (pos == pick.size()) {
          GbsGraph shape;
          for (int v = 0; v < nv; ++v) shape.vertices.push_back("v" + std::to_string(v));
          for (std::size_t s : pick) shape.edges.push_back({slots[s].first, slots[s].second, 1, 1});
          try {
            shape.validate();
          } catch (const Error&) {
            return;
          }
          const std::size_t ends = 2 * pick.size();
          std::vector<std::size_t> lab(ends, 0);
          while (true) {
            GbsGraph g = shape;
            for (std::size_t i = 0; i < pick.size(); ++i) {
              g.edges[i].label_from = labels[lab[2 * i]];
              g.edges[i].label_to = labels[lab[2 * i + 1]];
            }
            out.push_back(std::move(g));
            std::size_t k = 0;
            while (k < ends && ++lab[k] == labels.size()) lab[k++] = 0;
            if (k == ends) break;
          }
          return;
        }
        for (std::size_t s = lo; s < slots.size(); ++s) {
          pick[pos] = s;
          rec(pos + 1, s);
        }
      };
      rec(0, 0);
    }
  }
  return out;
}

Word random_product(std::mt19937_64& rng, int gens, int len) {
  std::uniform_int_distribution<int> pick(1, gens);
  std::bernoulli_distribution sign;
  Word w;
  for (int i = 0; i < len; ++i) w = w * Word::letter(sign(rng) ? pick(rng) : -pick(rng));
  return w;
}

}  // namespace

TEST(Rational, NormalizesAndAdds) {
  EXPECT_EQ(Rational(2, -4), Rational(-1, 2));
  EXPECT_EQ(Rational(1, 2) + Rational(1, 3), Rational(5, 6));
  EXPECT_EQ((Rational(3, 4) * Rational(2, 3)).str(), "1/2");
  EXPECT_THROW(Rational(1, 0), Error);
}

TEST(GbsGraph, Validation) {
  EXPECT_THROW((GbsGraph{{"x"}, {{0, 0, 0, 1}}}.validate()), Error);
  EXPECT_THROW((GbsGraph{{"x", "y"}, {}}.validate()), Error);
  EXPECT_THROW((GbsGraph{{"x"}, {{0, 1, 1, 1}}}.validate()), Error);
}

TEST(ModulusIsTrivial, SpecExamples) {
  EXPECT_TRUE(modulus_is_trivial(GbsGraph::baumslag_solitar(2, 2)));
  EXPECT_FALSE(modulus_is_trivial(GbsGraph::baumslag_solitar(1, 2)));
  EXPECT_TRUE(modulus_is_trivial(GbsGraph::trefoil()));
  EXPECT_FALSE(modulus_is_trivial(GbsGraph::baumslag_solitar(2, -2)));
  EXPECT_TRUE(modulus_is_trivial(GbsGraph::baumslag_solitar(-3, -3)));
  // Two loops through a tree edge: ratios 2/3 and 3/2 cancel only together.
  GbsGraph g{{"x", "y"}, {{0, 1, 2, 3}, {0, 1, 4, 6}}};
  EXPECT_TRUE(modulus_is_trivial(g));
  g.edges[1].label_to = 5;
  EXPECT_FALSE(modulus_is_trivial(g));
}

TEST(TauValues, SpecExamples) {
  auto bs = tau_values(GbsGraph::baumslag_solitar(2, 2));
  ASSERT_EQ(bs.values.size(), 2u);
  EXPECT_EQ(bs.values[0], Rational(1, 2));
  EXPECT_EQ(bs.values[1], Rational(0));

  auto tr = tau_values(GbsGraph::trefoil());
  EXPECT_EQ(tr.values[0], Rational(1, 2));
  EXPECT_EQ(tr.values[1], Rational(1, 3));
  EXPECT_EQ(tr.lcm, 6);

  auto z2 = tau_values(z2_loop());
  EXPECT_EQ(z2.values[0], Rational(1));
  EXPECT_EQ(z2.values[1], Rational(0));

  EXPECT_THROW(tau_values(GbsGraph::baumslag_solitar(1, 2)), Error);
  EXPECT_THROW(fiber_rank(GbsGraph::baumslag_solitar(1, 2)), Error);
}

TEST(TauValues, NegativeLabelsFlipTheGenerator) {
  auto t = tau_values(GbsGraph{{"x", "y"}, {{0, 1, 2, -3}}});
  EXPECT_EQ(t.values[0], Rational(1, 2));
  EXPECT_EQ(t.values[1], Rational(-1, 3));
}

TEST(FiberRank, SpecExamples) {
  EXPECT_EQ(fiber_rank(GbsGraph::baumslag_solitar(2, 2)), 2);
  EXPECT_EQ(fiber_rank(GbsGraph::trefoil()), 2);
  EXPECT_EQ(fiber_rank(z2_loop()), 1);
}

TEST(FiberRankOracle, AgreesOnSpecExamples) {
  for (const auto& g : {GbsGraph::baumslag_solitar(2, 2), GbsGraph::trefoil(), z2_loop()}) {
    auto o = fiber_rank_oracle(g);
    ASSERT_TRUE(o);
    EXPECT_EQ(o->fiber_rank, fiber_rank(g));
  }
  EXPECT_EQ(fiber_rank_oracle(GbsGraph::baumslag_solitar(2, 2))->index, 2);
  EXPECT_EQ(fiber_rank_oracle(GbsGraph::trefoil())->index, 6);
}

// Every connected graph with at most three edges, positive labels 1..4 and
// N <= 12.
TEST(FiberRankOracle, ExhaustiveSmallGraphs) {
  int checked = 0;
  for (const auto& g : enumerate_graphs(3, {1, 2, 3, 4})) {
    if (!modulus_is_trivial(g)) continue;
    auto o = fiber_rank_oracle(g);
    auto t = tau_values(g);
    if (!o) {
      EXPECT_GT(t.lcm, 12);
      continue;
    }
    ASSERT_EQ(t.n, o->n) << "centre exponents";
    ASSERT_EQ(o->index, t.lcm);
    ASSERT_EQ(fiber_rank(g), o->fiber_rank) << "graph with " << g.edges.size() << " edges";
    ++checked;
  }
  EXPECT_GT(checked, 1000);
}

TEST(FiberRankOracle, SignedLabelsUpToTwoEdges) {
  int checked = 0;
  for (const auto& g : enumerate_graphs(2, {-4, -3, -2, -1, 1, 2, 3, 4})) {
    if (!modulus_is_trivial(g)) continue;
    auto o = fiber_rank_oracle(g);
    if (!o) continue;
    ASSERT_EQ(tau_values(g).n, o->n);
    ASSERT_EQ(fiber_rank(g), o->fiber_rank);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(TauProperties, AdditiveOnSampledProducts) {
  std::mt19937_64 rng(7);
  GbsGraph g{{"x", "y", "z"}, {{0, 1, 2, 3}, {1, 2, 2, 1}, {0, 0, 4, 4}}};
  auto t = tau_values(g);
  const int gens = static_cast<int>(t.values.size());
  for (int i = 0; i < 200; ++i) {
    Word u = random_product(rng, gens, 6), v = random_product(rng, gens, 6);
    EXPECT_EQ(t.evaluate(u * v), t.evaluate(u) + t.evaluate(v));
  }
  for (const auto& r : gbs_presentation(g).relators) EXPECT_EQ(t.evaluate(r), Rational(0));
}

TEST(TauProperties, IntegralValuesSplitOffTheCentre) {
  std::mt19937_64 rng(11);
  for (const auto& g : {GbsGraph::trefoil(), GbsGraph::baumslag_solitar(2, 2),
                        GbsGraph{{"x", "y"}, {{0, 1, 2, -3}, {0, 0, 6, 6}}}}) {
    auto t = tau_values(g);
    const Word delta = power(Word::letter(1), t.n[0]);
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
      EXPECT_EQ(t.evaluate(power(Word::letter(static_cast<Letter>(v + 1)), t.n[v])), Rational(1));
    }
    EXPECT_GT(t.n[0], 0);
    int hits = 0;
    for (int i = 0; i < 400 && hits < 50; ++i) {
      Word w = random_product(rng, static_cast<int>(t.values.size()), 8);
      Rational tw = t.evaluate(w);
      if (!tw.is_integer()) continue;
      ++hits;
      EXPECT_EQ(t.evaluate(w * power(delta, -tw.num)), Rational(0));
    }
    EXPECT_GT(hits, 0);
  }
}

TEST(CentralQuotient, IdentityKillsTheStableLetter) {
  FbcContext ctx(FreeAut::identity(Basis(2)));
  auto p = central_quotient_presentation(ctx, {1, Word()});
  EXPECT_EQ(p.generators, (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(p.relators.empty());
}

TEST(CentralQuotient, KleinBottleGivesInfiniteDihedral) {
  const Basis B(1);
  FbcContext ctx(FreeAut::parse(B, {"A"}));
  auto p = central_quotient_presentation(ctx, {2, Word()});
  EXPECT_EQ(p.generators, (std::vector<std::string>{"a", "t"}));
  // a^t = a^{-1} and t^2.
  EXPECT_EQ(p.relators, (std::vector<std::string>{"Tata", "tt"}));
}

TEST(CentralQuotient, RefibrationExample) {
  const Basis B(3);
  FbcContext ctx(FreeAut::parse(B, {"Bc", "Ac", "c"}));
  auto p = central_quotient_presentation(ctx, {2, B.parse("c")});
  EXPECT_EQ(p.generators, (std::vector<std::string>{"a", "b", "t"}));
  // a^t (b^{-1} t^2)^{-1} = TatTTb, which reduces to TaTb; same for b.
  EXPECT_EQ(p.relators, (std::vector<std::string>{"TaTb", "TbTa"}));
}

TEST(CentralQuotient, RejectsNonCentralInput) {
  const Basis B(2);
  FbcContext ctx(FreeAut::parse(B, {"a", "bA"}));
  EXPECT_THROW(central_quotient_presentation(ctx, {1, Word()}), Error);
  EXPECT_THROW(central_quotient_presentation(ctx, {0, Word()}), Error);
}
