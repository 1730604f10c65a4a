#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "fbc/catalog.hpp"
#include "fbc/json_io.hpp"

using namespace fbc;

namespace {

LabeledGraph theta() { return {{"v", "v"}, {{0, 1, "e"}, {0, 1, "e"}, {0, 1, "e"}}}; }

/// Every (vertex perm, edge perm, flips) triple checked directly.
std::vector<GraphAutomorphism> brute_automorphisms(const LabeledGraph& g) {
  const std::size_t nv = g.vertex_labels.size(), ne = g.edges.size();
  std::vector<GraphAutomorphism> out;
  std::vector<int> vp(nv);
  std::iota(vp.begin(), vp.end(), 0);
  do {
    bool labels = true;
    for (std::size_t v = 0; v < nv; ++v) labels = labels && g.vertex_labels[v] == g.vertex_labels[static_cast<std::size_t>(vp[v])];
    if (!labels) continue;
    std::vector<int> ep(ne);
    std::iota(ep.begin(), ep.end(), 0);
    do {
      for (unsigned mask = 0; mask < (1u << ne); ++mask) {
        GraphAutomorphism a{vp, ep, std::vector<bool>(ne)};
        bool ok = true;
        for (std::size_t e = 0; e < ne && ok; ++e) {
          a.flip[e] = (mask >> e) & 1u;
          const auto& s = g.edges[e];
          const auto& d = g.edges[static_cast<std::size_t>(ep[e])];
          int f = vp[static_cast<std::size_t>(s.from)], t = vp[static_cast<std::size_t>(s.to)];
          if (a.flip[e]) std::swap(f, t);
          ok = s.label == d.label && d.from == f && d.to == t;
        }
        if (ok) out.push_back(a);
      }
    } while (std::next_permutation(ep.begin(), ep.end()));
  } while (std::next_permutation(vp.begin(), vp.end()));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LabeledGraph> sample_graphs() {
  return {
      {{"v"}, {{0, 0, "e"}}},
      {{"FbcSub(2)", "ZxZ"}, {{0, 1, "Cyclic"}}},
      theta(),
      {{"v"}, {{0, 0, "e"}, {0, 0, "e"}}},
      {{"v", "v", "v"}, {{0, 1, "e"}, {1, 2, "e"}, {2, 0, "e"}}},
      {{"v", "v", "w"}, {{0, 2, "e"}, {1, 2, "e"}, {0, 0, "f"}}},
      {{"v", "v"}, {{0, 1, "e"}, {1, 0, "e"}, {0, 1, "f"}}},
      {{"a", "b", "a", "b"}, {{0, 1, "x"}, {1, 2, "x"}, {2, 3, "x"}, {3, 0, "x"}}},
  };
}

/// F_4 with an exponential automorphism on <a, b, c> fixing d; the vertex
/// <a, b, c, t> is amalgamated along <t> with the letter d.
GraphOfGroups free3_by_z_with_cyclic_edge() {
  const Basis B(4);
  auto ctx = std::make_shared<const FbcContext>(FreeAut::parse(B, {"b", "c", "ab", "d"}));
  GraphOfGroups g(ctx);
  int v = g.add_vertex("V", {ctx->letter(1), ctx->letter(2), ctx->letter(3), ctx->t()});
  int e = g.add_edge("e", v, v, {ctx->t()}, ctx->letter(4), "d");
  g.set_route(3, {RouteStep::cross(e, 1)});
  g.default_routes();
  g.require_valid();
  return g;
}

}  // namespace

TEST(GraphAutomorphisms, SpecExamples) {
  EXPECT_EQ(graph_automorphisms({{"v"}, {{0, 0, "e"}}}).size(), 2u);
  auto line = graph_automorphisms({{"FbcSub(2)", "ZxZ"}, {{0, 1, "Cyclic"}}});
  ASSERT_EQ(line.size(), 1u);
  EXPECT_TRUE(line[0].is_identity());
  EXPECT_EQ(graph_automorphisms(theta()).size(), 12u);
}

TEST(GraphAutomorphisms, MatchesBruteForce) {
  for (const auto& g : sample_graphs()) {
    EXPECT_EQ(graph_automorphisms(g), brute_automorphisms(g));
  }
}

TEST(GraphAutomorphisms, FormAGroup) {
  for (const auto& g : sample_graphs()) {
    auto autos = graph_automorphisms(g);
    std::set<GraphAutomorphism> set(autos.begin(), autos.end());
    bool has_identity = false;
    for (const auto& a : autos) {
      has_identity = has_identity || a.is_identity();
      EXPECT_TRUE(set.count(a.inverse()));
      EXPECT_TRUE(a.then(a.inverse()).is_identity());
      for (const auto& b : autos) EXPECT_TRUE(set.count(a.then(b)));
    }
    EXPECT_TRUE(has_identity);
  }
}

TEST(GraphAutomorphisms, RejectsOversizedGraphs) {
  LabeledGraph g;
  g.vertex_labels.assign(13, "v");
  EXPECT_THROW(graph_automorphisms(g), Error);
}

TEST(FiltrationReport, QuadraticLineIsFinitelyGenerated) {
  auto s = canonical_splitting(parse_quad(1, "b", "b"));
  ASSERT_TRUE(s.splitting);
  auto r = filtration_report(*s.splitting);
  EXPECT_EQ(r.overall, kFinitelyGenerated);
  EXPECT_EQ(r.automorphism_count, 1u);
  ASSERT_EQ(r.layer2.size(), 2u);
  EXPECT_EQ(r.layer2[0].rule, "rank2-mapping-torus");
  EXPECT_EQ(r.layer2[1].rule, "abelian-vertex");
  for (const auto& e : r.layer3) EXPECT_EQ(e.verdict, kFinite);
}

TEST(FiltrationReport, LinearSuspensionsAreFinitelyGenerated) {
  for (std::string name : {"linear-f2", "linear-f3", "linear-amalgam"}) {
    auto r = filtration_report(catalog_entry(name).build());
    EXPECT_EQ(r.overall, kFinitelyGenerated) << name << "\n" << render_report(r);
    for (const auto& e : r.layer2) EXPECT_EQ(e.rule, "central-edges") << name;
    for (const auto& e : r.layer5) EXPECT_EQ(e.descriptor, "Cyclic") << name;
  }
}

TEST(FiltrationReport, Free3ByZVertexIsUnknown) {
  auto g = free3_by_z_with_cyclic_edge();
  EXPECT_EQ(g.vertices()[0].desc, (GroupDescriptor{GroupKind::FbcSub, 3}));
  auto r = filtration_report(g);
  EXPECT_EQ(r.layer2[0].verdict, kUnknown);
  EXPECT_EQ(r.layer2[0].rule, "none");
  EXPECT_EQ(r.overall, kUnknown);
}

TEST(FiltrationReport, OverallRequiresEveryLayer) {
  for (const auto& entry : example_catalog()) {
    auto r = filtration_report(entry.build());
    bool all = r.layer1.verdict != kUnknown;
    for (const auto* layer : {&r.layer2, &r.layer3, &r.layer4, &r.layer5}) {
      for (const auto& e : *layer) {
        all = all && e.verdict != kUnknown;
        EXPECT_NO_THROW(report_rule(e.rule));
      }
    }
    EXPECT_EQ(r.overall == kFinitelyGenerated, all) << entry.name;
  }
}

TEST(FiltrationReport, VirtuallyAbelianEdgesAreFinite) {
  for (const auto& entry : example_catalog()) {
    auto g = entry.build();
    auto r = filtration_report(g);
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
      auto k = g.edges()[i].desc.kind;
      if (k == GroupKind::Cyclic || k == GroupKind::ZxZ || k == GroupKind::Klein) {
        EXPECT_EQ(r.layer3[i].verdict, kFinite);
      }
    }
  }
}

TEST(FiltrationReport, CentreOfPeriodicVertex) {
  // phi^2 = Ad(c), so <a, b, c, t> has centre generated by t^2 C.
  const Basis B(3);
  auto ctx = std::make_shared<const FbcContext>(FreeAut::parse(B, {"Bc", "Ac", "c"}));
  GraphOfGroups g(ctx);
  g.add_vertex("V", {ctx->letter(1), ctx->letter(2), ctx->letter(3), ctx->t()});
  g.default_routes();
  auto r = filtration_report(g);
  ASSERT_EQ(r.layer5.size(), 1u);
  EXPECT_EQ(r.layer5[0].descriptor, "Cyclic");
  ASSERT_EQ(r.layer5[0].generators.size(), 1u);
  FbcElement z = ctx->parse(r.layer5[0].generators[0]);
  EXPECT_TRUE(ctx->is_central(z));
  EXPECT_EQ(z.k, 2);
}

TEST(FiltrationReport, RerunOnEmbeddedGogIsByteIdentical) {
  for (const auto& entry : example_catalog()) {
    auto g = entry.build();
    std::string first = filtration_report_to_json(g, filtration_report(g)).dump(2);
    auto j = Json::parse(first);
    auto g2 = gog_from_json(j.at("gog"));
    std::string second = filtration_report_to_json(g2, filtration_report(g2)).dump(2);
    EXPECT_EQ(first, second) << entry.name;
  }
}

TEST(JsonIo, GogRoundTripPreservesLengths) {
  for (const auto& entry : example_catalog()) {
    auto g = entry.build();
    auto g2 = gog_from_json(Json::parse(gog_to_json(g).dump()));
    EXPECT_EQ(gog_to_json(g2), gog_to_json(g)) << entry.name;
    for (const auto& w : sample_ambient_words(g.context().rank(), 3)) {
      EXPECT_EQ(g.translation_length(w), g2.translation_length(w)) << entry.name;
    }
  }
}

TEST(JsonIo, GogRejectsWrongDescriptor) {
  auto j = gog_to_json(linear_f2_example());
  j["vertices"][0]["group"]["kind"] = "Free";
  EXPECT_THROW(gog_from_json(j), Error);
}

TEST(JsonIo, GbsRoundTrip) {
  auto j = Json::parse(R"({"vertices":["x","y"],"edges":[{"from":"x","to":"y","label_from":2,"label_to":3}]})");
  auto g = gbs_from_json(j);
  EXPECT_EQ(fiber_rank(g), 2);
  EXPECT_EQ(gbs_to_json(g), j);
  j["edges"][0]["to"] = "z";
  EXPECT_THROW(gbs_from_json(j), Error);
}
