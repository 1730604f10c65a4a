#include <gtest/gtest.h>

#include "fbc/catalog.hpp"

using namespace fbc;

namespace {

CylinderSummary summarize(const std::string& name) {
  const auto& entry = catalog_entry(name);
  return analyze_cylinders(entry.build(), entry.family);
}

bool same_shape(const GraphOfGroups& a, const GraphOfGroups& b) {
  return a.vertices().size() == b.vertices().size() && a.edges().size() == b.edges().size() && isomorphic(a, b);
}

}  // namespace

TEST(EdgeFamily, ParsesNames) {
  EXPECT_EQ(parse_edge_family("MaximalZxZ"), EdgeFamily::MaximalZxZ);
  EXPECT_EQ(parse_edge_family("Cyclic"), EdgeFamily::MaximalCyclic);
  EXPECT_THROW(parse_edge_family("Free"), Error);
  EXPECT_TRUE(in_family({GroupKind::ZxZ, 1}, EdgeFamily::MaximalZxZ));
  EXPECT_FALSE(in_family({GroupKind::Cyclic, 0}, EdgeFamily::MaximalZxZ));
}

TEST(AnalyzeCylinders, LinearExamplesAreSingleEdges) {
  for (std::string name : {"linear-f2", "linear-f3", "linear-amalgam"}) {
    auto s = summarize(name);
    ASSERT_TRUE(s.determined) << name << ": " << s.reason;
    EXPECT_FALSE(s.bounded) << name;
    const auto g = catalog_entry(name).build();
    ASSERT_EQ(s.cylinders.size(), g.edges().size());
    for (const auto& c : s.cylinders) {
      EXPECT_EQ(c.shape, CylinderShape::SingleEdge) << name;
      EXPECT_EQ(c.stabilizer_desc.kind, GroupKind::ZxZ);
    }
    // Every edge orbit meets a cylinder once: each node carries one end.
    for (const auto& n : s.nodes) EXPECT_EQ(n.ends.size(), 1u) << name;
  }
}

TEST(AnalyzeCylinders, QuadraticShapes) {
  auto line = summarize("quad-line");
  ASSERT_TRUE(line.determined) << line.reason;
  ASSERT_EQ(line.cylinders.size(), 1u);
  EXPECT_EQ(line.cylinders[0].shape, CylinderShape::Line);
  EXPECT_EQ(line.cylinders[0].stabilizer_desc.kind, GroupKind::ZxZ);

  auto sub = summarize("quad-subdivision");
  ASSERT_TRUE(sub.determined) << sub.reason;
  EXPECT_EQ(sub.cylinders[0].shape, CylinderShape::SingleEdge);
  EXPECT_TRUE(sub.bounded);

  auto star = summarize("quad-collapsed");
  ASSERT_TRUE(star.determined) << star.reason;
  ASSERT_EQ(star.cylinders.size(), 1u);
  EXPECT_EQ(star.cylinders[0].shape, CylinderShape::Star);
  EXPECT_FALSE(star.cylinders[0].center_interior);
  EXPECT_EQ(star.cylinders[0].stabilizer_desc, (GroupDescriptor{GroupKind::FreeTimesZ, 2}));
}

TEST(AnalyzeCylinders, FamilyMismatchThrows) {
  EXPECT_THROW(analyze_cylinders(linear_f2_example(), EdgeFamily::MaximalCyclic), Error);
  EXPECT_THROW(analyze_cylinders(quad_example(1, "b", "b"), EdgeFamily::MaximalZxZ), Error);
}

TEST(AnalyzeCylinders, UnsupportedVertexIsUndetermined) {
  const Basis B(3);
  auto ctx = std::make_shared<const FbcContext>(FreeAut::identity(B));
  GraphOfGroups g(ctx);
  int v = g.add_vertex("F", {ctx->letter(1), ctx->letter(2)});
  g.add_edge("e", v, v, {ctx->letter(1)}, ctx->letter(3), "c", std::vector<FbcElement>{ctx->letter(2)});
  auto s = analyze_cylinders(g, EdgeFamily::MaximalCyclic);
  EXPECT_FALSE(s.determined);
  EXPECT_NE(s.reason.find("no oracle"), std::string::npos);
  EXPECT_THROW(tree_of_cylinders(g, s), Error);
}

TEST(TreeOfCylinders, OutputIsBipartite) {
  for (const auto& entry : example_catalog()) {
    auto g = entry.build();
    auto s = analyze_cylinders(g, entry.family);
    ASSERT_TRUE(s.determined) << entry.name << ": " << s.reason;
    std::vector<bool> cyl;
    auto tc = tree_of_cylinders(g, s, &cyl);
    ASSERT_EQ(cyl.size(), tc.vertices().size());
    EXPECT_TRUE(tc.validate().empty()) << entry.name;
    for (const auto& e : tc.edges()) {
      EXPECT_NE(cyl[static_cast<std::size_t>(e.from)], cyl[static_cast<std::size_t>(e.to)]) << entry.name << " edge " << e.id;
    }
  }
}

TEST(TreeOfCylinders, EdgeGroupsSitInsideBothEndpoints) {
  for (const auto& entry : example_catalog()) {
    auto g = entry.build();
    auto tc = tree_of_cylinders(g, analyze_cylinders(g, entry.family));
    for (const auto& e : tc.edges()) {
      EXPECT_TRUE(tc.vertices()[static_cast<std::size_t>(e.from)].group.contains(e.from_group)) << entry.name;
      EXPECT_TRUE(tc.vertices()[static_cast<std::size_t>(e.to)].group.contains(e.to_group)) << entry.name;
    }
  }
}

TEST(TreeOfCylinders, LineEdgeIsTheIntersection) {
  auto g = quad_example(1, "b", "b");
  auto tc = tree_of_cylinders(g, analyze_cylinders(g, EdgeFamily::MaximalCyclic));
  const auto& ctx = tc.context();
  const auto& H = tc.vertices()[0].group;
  const auto& C = tc.vertices()[1].group;
  const auto& E = tc.edges()[0].from_group;
  FbcElement sb = ctx.parse("sb"), c = ctx.parse("c");
  for (long long i = -3; i <= 3; ++i) {
    for (long long j = -3; j <= 3; ++j) {
      FbcElement x = ctx.mul(ctx.power(sb, i), ctx.power(c, j));
      EXPECT_TRUE(C.contains(x));
      EXPECT_EQ(H.contains(x), E.contains(x)) << i << "," << j;
    }
  }
}

TEST(TreeOfCylinders, SingleEdgeCylindersSubdivide) {
  for (std::string name : {"linear-f2", "linear-f3", "linear-amalgam", "quad-subdivision"}) {
    const auto& entry = catalog_entry(name);
    auto g = entry.build();
    auto tc = tree_of_cylinders(g, analyze_cylinders(g, entry.family));
    for (const auto& w : sample_ambient_words(g.context().rank(), 3)) {
      EXPECT_EQ(tc.translation_length(w), 2 * g.translation_length(w)) << name;
    }
  }
}

TEST(Collapse, LinearOutputsUnchanged) {
  for (std::string name : {"linear-f2", "linear-f3", "linear-amalgam"}) {
    const auto& entry = catalog_entry(name);
    auto g = entry.build();
    auto tc = tree_of_cylinders(g, analyze_cylinders(g, entry.family));
    auto star = collapse(tc, entry.family);
    EXPECT_TRUE(same_shape(star, tc)) << name;
  }
}

TEST(Collapse, QuadraticStarCollapsesToT0) {
  auto g = quad_example(1, "", "b");
  auto tc = tree_of_cylinders(g, analyze_cylinders(g, EdgeFamily::MaximalCyclic));
  EXPECT_EQ(tc.vertices().size(), 2u);
  auto star = collapse(tc, EdgeFamily::MaximalCyclic);
  EXPECT_TRUE(same_shape(star, g));
  EXPECT_TRUE(star.vertices()[0].group.same_as(g.vertices()[0].group));
}

TEST(Collapse, IsIdempotent) {
  for (const auto& entry : example_catalog()) {
    auto g = entry.build();
    auto once = collapse(tree_of_cylinders(g, analyze_cylinders(g, entry.family)), entry.family);
    auto twice = collapse(once, entry.family);
    EXPECT_TRUE(same_shape(once, twice)) << entry.name;
  }
}

TEST(Collapse, RefusesNonTreeEdges) {
  auto g = linear_f2_example();
  EXPECT_THROW(collapse(g, EdgeFamily::MaximalCyclic), Error);
}

TEST(Isomorphic, DistinguishesSplittings) {
  EXPECT_TRUE(isomorphic(linear_f2_example(), linear_f2_example()));
  auto g = quad_example(1, "b", "b");
  auto tc = tree_of_cylinders(g, analyze_cylinders(g, EdgeFamily::MaximalCyclic));
  EXPECT_FALSE(isomorphic(g, tc));
}

TEST(Idempotence, HoldsOnCatalog) {
  for (const auto& entry : example_catalog()) {
    auto r = idempotence_check(entry.build(), entry.family);
    ASSERT_TRUE(r.determined) << entry.name << ": " << r.reason;
    EXPECT_TRUE(r.holds) << entry.name;
  }
}
