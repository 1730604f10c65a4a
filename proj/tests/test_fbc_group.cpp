#include <gtest/gtest.h>

#include <random>

#include "fbc/fbc_group.hpp"
#include "support.hpp"

using namespace fbc;
using fbc::testing::random_word_upto;

namespace {

const Basis F2(2);
const Basis F3(3);

FbcContext ctx(const Basis& b, std::vector<std::string> images) { return FbcContext(FreeAut::parse(b, images)); }

FbcElement random_element(std::mt19937_64& rng, const FbcContext& c, int max_k, std::size_t len) {
  std::uniform_int_distribution<int> k(-max_k, max_k);
  return {k(rng), random_word_upto(rng, c.rank(), len)};
}

}  // namespace

TEST(Mul, SpecExamples) {
  auto G = ctx(F2, {"a", "bA"});
  auto a = G.letter(1), b = G.letter(2), t = G.t();
  EXPECT_EQ(G.mul(a, t), (FbcElement{1, G.phi().apply(a.w)}));
  EXPECT_TRUE(G.mul(t, G.inv(t)).is_identity());
  EXPECT_EQ(G.render(G.mul(b, a)), "ba");
  EXPECT_EQ(G.render(G.mul(b, t)), "tbA");
}

TEST(Inv, SpecExamples) {
  auto G = ctx(F2, {"ab", "a"});
  EXPECT_EQ(G.inv(G.t()), (FbcElement{-1, Word()}));
  EXPECT_EQ(G.inv(G.letter(1)), (FbcElement{0, F2.parse("A")}));
  FbcElement x{1, F2.parse("a")};
  EXPECT_EQ(G.inv(x), (FbcElement{-1, G.phi().apply_inverse(F2.parse("A"))}));
}

TEST(GroupAxioms, HoldOnSampledTriples) {
  std::mt19937_64 rng(41);
  for (auto images : std::vector<std::vector<std::string>>{{"a", "bA", "bc"}, {"ab", "a", "c"}, {"Bc", "Ac", "c"}}) {
    auto G = ctx(F3, images);
    for (int i = 0; i < 100; ++i) {
      auto x = random_element(rng, G, 3, 5), y = random_element(rng, G, 3, 5), z = random_element(rng, G, 3, 5);
      EXPECT_EQ(G.mul(G.mul(x, y), z), G.mul(x, G.mul(y, z)));
      EXPECT_TRUE(G.mul(x, G.inv(x)).is_identity());
      EXPECT_TRUE(G.mul(G.inv(x), x).is_identity());
      EXPECT_EQ(G.mul(x, FbcElement{}), x);
      EXPECT_EQ(G.conj(x, y).k, x.k);
    }
  }
}

TEST(GroupAxioms, DefiningRelation) {
  auto G = ctx(F3, {"a", "bA", "bc"});
  for (int i = 1; i <= 3; ++i) {
    EXPECT_EQ(G.conj(G.letter(i), G.t()), G.from_word(G.phi().image(i)));
  }
}

TEST(Parse, RoundTripsNormalForms) {
  auto G = ctx(F2, {"a", "bA"});
  EXPECT_EQ(G.parse("Tbt"), G.from_word(F2.parse("bA")));
  EXPECT_EQ(G.parse("tbT"), G.from_word(F2.parse("ba")));
  auto x = G.parse("TTab");
  EXPECT_EQ(x.k, -2);
  EXPECT_EQ(G.parse(G.render(x)), x);
  EXPECT_THROW(FbcContext(FreeAut::identity(Basis(21))), Error);
}

TEST(IsCentral, SpecExamples) {
  auto Id = FbcContext(FreeAut::identity(F2));
  EXPECT_TRUE(Id.is_central(Id.t()));
  EXPECT_FALSE(Id.is_central(Id.letter(1)));
  auto G = ctx(F2, {"a", "bA"});
  EXPECT_FALSE(G.is_central(G.t()));
  EXPECT_TRUE(G.commute(G.t(), G.letter(1)));
}

TEST(CentralElement, SpecExamples) {
  auto G = ctx(F3, {"Bc", "Ac", "c"});
  auto c = central_element_search(G, 6, 8);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->k, 2);
  EXPECT_EQ(F3.render(c->g), "c");
  EXPECT_TRUE(G.phi().pow(2) == FreeAut::inner(F3, F3.parse("c")));

  auto Id = FbcContext(FreeAut::identity(F2));
  c = central_element_search(Id, 6, 8);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->k, 1);
  EXPECT_TRUE(c->g.empty());

  EXPECT_FALSE(central_element_search(ctx(F2, {"a", "bA"}), 8, 8));
}

TEST(CentralElement, FindsPeriodicOrders) {
  // a <-> b has order 2; (a, b) -> (b, A) has order 4 up to inner.
  auto c = central_element_search(ctx(F2, {"b", "a"}), 6, 6);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->k, 2);
  c = central_element_search(ctx(F2, {"b", "A"}), 6, 6);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->k, 4);
}

TEST(Centralizer, SpecExamples) {
  auto G = ctx(F2, {"a", "bA"});
  auto r = centralizer_bounded(G, G.t(), 8);
  ASSERT_EQ(r.generators.size(), 3u);
  EXPECT_EQ(G.render(r.generators[0]), "a");
  EXPECT_EQ(G.render(r.generators[1]), "baB");
  EXPECT_EQ(G.render(r.generators[2]), "t");
  EXPECT_TRUE(r.complete);

  auto Id = FbcContext(FreeAut::identity(F2));
  r = centralizer_bounded(Id, Id.letter(1), 8);
  ASSERT_EQ(r.generators.size(), 2u);
  EXPECT_EQ(Id.render(r.generators[0]), "a");
  EXPECT_EQ(Id.render(r.generators[1]), "t");

  auto Fib = ctx(F2, {"ab", "a"});
  r = centralizer_bounded(Fib, Fib.t(), 8);
  ASSERT_EQ(r.generators.size(), 1u);
  EXPECT_EQ(Fib.render(r.generators[0]), "t");
  EXPECT_FALSE(r.complete);
}

TEST(Centralizer, GeneratorsCommuteWithArgument) {
  std::mt19937_64 rng(42);
  for (auto images : std::vector<std::vector<std::string>>{{"a", "bA"}, {"b", "a"}, {"a", "b"}}) {
    auto G = ctx(F2, images);
    for (int i = 0; i < 20; ++i) {
      auto x = random_element(rng, G, 2, 3);
      auto r = centralizer_bounded(G, x, 5);
      for (const auto& g : r.generators) EXPECT_TRUE(G.commute(g, x)) << G.render(g) << " vs " << G.render(x);
    }
  }
}

TEST(Centralizer, IncompleteWhenProjectionUnresolved) {
  // t^2 in a group where t itself centralizes t^2.
  auto G = ctx(F2, {"a", "bA"});
  auto r = centralizer_bounded(G, G.power(G.t(), 2), 6);
  ASSERT_FALSE(r.generators.empty());
  EXPECT_EQ(r.generators.back(), G.t());
  EXPECT_TRUE(r.complete);
}
