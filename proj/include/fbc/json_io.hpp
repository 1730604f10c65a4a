#pragma once

#include <json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "fbc/gbs.hpp"
#include "fbc/quad3.hpp"
#include "fbc/report.hpp"

namespace fbc {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.3.0";

// ---------------------------------------------------------------- contexts

inline Json context_to_json(const FbcContext& ctx) {
  return {{"rank", ctx.rank()}, {"images", ctx.phi().rendered_images()}, {"stable", std::string(1, ctx.stable_letter())}};
}

inline std::shared_ptr<const FbcContext> context_from_json(const Json& j) {
  const int rank = j.at("rank").get<int>();
  const Basis basis(rank);
  auto images = j.at("images").get<std::vector<std::string>>();
  if (static_cast<int>(images.size()) != rank) throw Error("automorphism needs one image per basis letter");
  std::string stable = j.value("stable", std::string("t"));
  if (stable.size() != 1) throw Error("stable letter must be a single character");
  return std::make_shared<const FbcContext>(FreeAut::parse(basis, images), stable[0]);
}

// ---------------------------------------------------------------- graphs of groups

inline Json descriptor_to_json(const GroupDescriptor& d) { return {{"kind", to_string(d.kind)}, {"params", {{"rank", d.rank}}}}; }

inline GroupDescriptor descriptor_from_json(const Json& j) {
  GroupDescriptor d{parse_group_kind(j.at("kind").get<std::string>()), 0};
  if (j.contains("params")) d.rank = j.at("params").value("rank", 0);
  return d;
}

inline Json elements_to_json(const FbcContext& ctx, const std::vector<FbcElement>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(ctx.render(x));
  return out;
}

inline std::vector<FbcElement> elements_from_json(const FbcContext& ctx, const Json& j) {
  std::vector<FbcElement> out;
  for (const auto& s : j) out.push_back(ctx.parse(s.get<std::string>()));
  return out;
}

inline Json gog_to_json(const GraphOfGroups& g) {
  const auto& ctx = g.context();
  Json j;
  j["context"] = context_to_json(ctx);
  j["base"] = g.base();
  Json vs = Json::array();
  for (const auto& v : g.vertices()) {
    vs.push_back({{"id", v.id}, {"group", descriptor_to_json(v.desc)}, {"generators", elements_to_json(ctx, v.group.generators())}});
  }
  j["vertices"] = vs;
  Json es = Json::array();
  for (const auto& e : g.edges()) {
    Json je{{"id", e.id},
            {"from", g.vertices()[static_cast<std::size_t>(e.from)].id},
            {"to", g.vertices()[static_cast<std::size_t>(e.to)].id},
            {"group", descriptor_to_json(e.desc)},
            {"incl_from", elements_to_json(ctx, e.incl_from)},
            {"incl_to", elements_to_json(ctx, e.incl_to)}};
    je["letter"] = e.letter ? Json(ctx.render(*e.letter)) : Json(nullptr);
    if (!e.letter_name.empty()) je["letter_name"] = e.letter_name;
    es.push_back(je);
  }
  j["edges"] = es;
  Json rs = Json::array();
  for (const auto& r : g.routes()) {
    Json steps = Json::array();
    for (const auto& s : r) {
      if (s.is_edge) steps.push_back({{"cross", g.edges()[static_cast<std::size_t>(s.edge)].id}, {"dir", s.dir}});
      else steps.push_back({{"at", g.vertices()[static_cast<std::size_t>(s.vertex)].id}, {"elem", ctx.render(s.elem)}});
    }
    rs.push_back(steps);
  }
  j["routes"] = rs;
  return j;
}

/// Reads a graph of groups; declared descriptors must match the computed ones.
inline GraphOfGroups gog_from_json(const Json& j) {
  auto ctx = context_from_json(j.at("context"));
  GraphOfGroups g(ctx);
  for (const auto& v : j.at("vertices")) {
    int idx = g.add_vertex(v.at("id").get<std::string>(), elements_from_json(*ctx, v.at("generators")));
    if (v.contains("group")) {
      GroupDescriptor want = descriptor_from_json(v.at("group"));
      const auto& got = g.vertices()[static_cast<std::size_t>(idx)].desc;
      if (!(want == got)) throw Error("vertex " + v.at("id").get<std::string>() + " declared " + want.str() + " but is " + got.str());
    }
  }
  auto vertex_ref = [&](const Json& r) { return r.is_number() ? r.get<int>() : g.vertex_index(r.get<std::string>()); };
  for (const auto& e : j.at("edges")) {
    std::optional<FbcElement> letter;
    if (e.contains("letter") && !e.at("letter").is_null()) letter = ctx->parse(e.at("letter").get<std::string>());
    std::optional<std::vector<FbcElement>> incl_to;
    if (e.contains("incl_to")) incl_to = elements_from_json(*ctx, e.at("incl_to"));
    int idx = g.add_edge(e.at("id").get<std::string>(), vertex_ref(e.at("from")), vertex_ref(e.at("to")),
                         elements_from_json(*ctx, e.at("incl_from")), letter, e.value("letter_name", std::string()), incl_to);
    if (e.contains("group")) {
      GroupDescriptor want = descriptor_from_json(e.at("group"));
      const auto& got = g.edges()[static_cast<std::size_t>(idx)].desc;
      if (!(want == got)) throw Error("edge " + e.at("id").get<std::string>() + " declared " + want.str() + " but is " + got.str());
    }
  }
  if (j.contains("base")) {
    const Json& b = j.at("base");
    g.set_base(b.is_number() ? b.get<int>() : g.vertex_index(b.get<std::string>()));
  }
  if (j.contains("routes")) {
    const auto& rs = j.at("routes");
    if (rs.size() != static_cast<std::size_t>(ctx->rank() + 1)) throw Error("routes must list one path per ambient generator");
    for (std::size_t i = 0; i < rs.size(); ++i) {
      Route route;
      for (const auto& s : rs[i]) {
        if (s.contains("cross")) {
          const Json& e = s.at("cross");
          route.push_back(RouteStep::cross(e.is_number() ? e.get<int>() : g.edge_index(e.get<std::string>()), s.value("dir", 1)));
        } else {
          route.push_back(RouteStep::at(vertex_ref(s.at("at")), ctx->parse(s.at("elem").get<std::string>())));
        }
      }
      if (!route.empty()) g.set_route(static_cast<int>(i), std::move(route));
    }
  }
  g.default_routes();
  g.require_valid();
  return g;
}

// ---------------------------------------------------------------- Dehn twist input

/// {"rank", "images", "vertices": [[gens]], "edges": [{"from","to","generator","letter"?,"twistor"?}]}
inline DehnTwistData dehn_twist_from_json(const Json& j) {
  const Basis basis(j.at("rank").get<int>());
  DehnTwistData dt{FreeAut::parse(basis, j.at("images").get<std::vector<std::string>>()), {}, {}, {}};
  for (const auto& v : j.at("vertices")) {
    std::vector<Word> gens;
    for (const auto& s : v) gens.push_back(basis.parse(s.get<std::string>()));
    dt.vertex_generators.push_back(std::move(gens));
  }
  for (const auto& e : j.at("edges")) {
    DehnTwistEdge de;
    de.from = e.at("from").get<int>();
    de.to = e.at("to").get<int>();
    de.generator = basis.parse(e.at("generator").get<std::string>());
    if (e.contains("letter") && !e.at("letter").is_null()) de.letter = basis.parse(e.at("letter").get<std::string>());
    if (e.contains("twistor") && !e.at("twistor").is_null()) de.twistor = e.at("twistor").get<long long>();
    dt.edges.push_back(de);
  }
  return dt;
}

// ---------------------------------------------------------------- subgroup graphs

inline Json subgroup_graph_to_json(const SubgroupGraph& g) {
  const Basis basis(g.basis_rank());
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back(Json::array({e.src, basis.letter_name(e.label), e.dst}));
  Json gens = Json::array();
  for (const auto& w : g.generators()) gens.push_back(basis.render(w));
  Json j{{"vertices", g.vertex_count()}, {"base", 0}, {"edges", edges}, {"rank", g.rank()}, {"generators", gens}};
  auto idx = g.index();
  j["index"] = idx ? Json(*idx) : Json(nullptr);
  return j;
}

// ---------------------------------------------------------------- GBS

inline GbsGraph gbs_from_json(const Json& j) {
  GbsGraph g;
  for (const auto& v : j.at("vertices")) g.vertices.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  auto ref = [&](const Json& r) {
    std::string id = r.is_string() ? r.get<std::string>() : r.dump();
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
      if (g.vertices[i] == id) return static_cast<int>(i);
    }
    throw Error("unknown GBS vertex " + id);
  };
  for (const auto& e : j.at("edges")) {
    g.edges.push_back({ref(e.at("from")), ref(e.at("to")), e.at("label_from").get<long long>(), e.at("label_to").get<long long>()});
  }
  g.validate();
  return g;
}

inline Json gbs_to_json(const GbsGraph& g) {
  Json es = Json::array();
  for (const auto& e : g.edges) {
    es.push_back({{"from", g.vertices[static_cast<std::size_t>(e.from)]},
                  {"to", g.vertices[static_cast<std::size_t>(e.to)]},
                  {"label_from", e.label_from},
                  {"label_to", e.label_to}});
  }
  return {{"vertices", g.vertices}, {"edges", es}};
}

inline Json tau_to_json(const TauMap& t) {
  Json values = Json::object();
  for (std::size_t i = 0; i < t.names.size(); ++i) values[t.names[i]] = t.values[i].str();
  return {{"values", values}, {"n", t.n}, {"m", t.m}, {"N", t.lcm}};
}

inline Json presentation_to_json(const Presentation& p) { return {{"generators", p.generators}, {"relators", p.relators}}; }

// ---------------------------------------------------------------- search results

inline Json search_to_json(const Basis& basis, const SearchResult& r) {
  if (const auto* f = std::get_if<Found>(&r)) return {{"status", "found"}, {"witness", basis.render(f->witness)}};
  if (const auto* o = std::get_if<Obstructed>(&r)) return {{"status", "obstructed"}, {"reason", o->reason}};
  return {{"status", "not-found"}, {"bound", std::get<NotFoundUpTo>(r).bound}};
}

// ---------------------------------------------------------------- cylinders

inline Json cylinder_summary_to_json(const GraphOfGroups& g, const CylinderSummary& s) {
  const auto& ctx = g.context();
  Json j{{"family", to_string(s.family)}, {"bound", s.bound}, {"determined", s.determined}, {"bounded", s.bounded}, {"reason", s.reason}};
  Json ends = Json::array();
  for (const auto& e : s.ends) {
    ends.push_back({{"edge", g.edges()[static_cast<std::size_t>(e.edge)].id},
                    {"side", e.side == 0 ? "from" : "to"},
                    {"vertex", g.vertices()[static_cast<std::size_t>(e.vertex)].id},
                    {"node", e.node},
                    {"conjugator", ctx.render(e.conjugator)}});
  }
  j["ends"] = ends;
  Json nodes = Json::array();
  for (const auto& n : s.nodes) {
    nodes.push_back({{"vertex", g.vertices()[static_cast<std::size_t>(n.vertex)].id},
                     {"ends", n.ends},
                     {"index_one", n.normalizer.index_one},
                     {"normal", n.normalizer.normal},
                     {"normalizer", elements_to_json(ctx, n.normalizer.generators)},
                     {"certificate", n.normalizer.certificate},
                     {"bounded", n.normalizer.bounded}});
  }
  j["nodes"] = nodes;
  Json cyls = Json::array();
  for (const auto& c : s.cylinders) {
    Json edges = Json::array();
    for (int e : c.edges) edges.push_back(g.edges()[static_cast<std::size_t>(e)].id);
    Json jc{{"shape", to_string(c.shape)},
            {"edges", edges},
            {"nodes", c.nodes},
            {"stabilizer", elements_to_json(ctx, c.stabilizer)},
            {"stabilizer_group", descriptor_to_json(c.stabilizer_desc)},
            {"bounded", c.bounded}};
    if (c.shape == CylinderShape::Star) {
      jc["center"] = c.center;
      jc["center_interior"] = c.center_interior;
    }
    if (c.shape == CylinderShape::Line) jc["translation"] = ctx.render(c.translation);
    cyls.push_back(jc);
  }
  j["cylinders"] = cyls;
  j["certificates"] = s.certificates;
  return j;
}

// ---------------------------------------------------------------- quadratic splittings

inline Json twisted_centralizer_to_json(const TwistedCentralizer& c) {
  Json gens = Json::array();
  for (const auto& w : c.generators) gens.push_back(quad_basis().render(w));
  return {{"generators", gens}, {"rank", c.graph.rank()}, {"bound", c.bound}, {"complete", c.complete}, {"reason", c.reason}};
}

inline Json splitting_report_to_json(const SplittingReport& r) {
  auto nf = [](const QuadNormalForm& q) {
    return Json{{"k", q.k}, {"h", quad_basis().render(q.h)}, {"g", quad_basis().render(q.g)}};
  };
  Json j{{"input", nf(r.input)},
         {"normalized", nf(r.normalized)},
         {"swapped", r.swapped},
         {"bound", r.bound},
         {"case", r.case_tag},
         {"determined", r.determined},
         {"bounded", r.bounded},
         {"reason", r.reason},
         {"conjugacy", search_to_json(quad_basis(), r.conjugacy)},
         {"centralizer_h", twisted_centralizer_to_json(r.centralizer_h)},
         {"centralizer_g", twisted_centralizer_to_json(r.centralizer_g)}};
  if (r.t0) j["t0"] = gog_to_json(*r.t0);
  if (r.t0 && !r.summary.cylinders.empty()) j["cylinders"] = cylinder_summary_to_json(*r.t0, r.summary);
  j["splitting"] = r.splitting ? gog_to_json(*r.splitting) : Json(nullptr);
  return j;
}

// ---------------------------------------------------------------- reports

inline Json report_entry_to_json(const ReportEntry& e) {
  return {{"subject", e.subject}, {"descriptor", e.descriptor}, {"verdict", e.verdict}, {"rule", e.rule},
          {"generators", e.generators}, {"bounded", e.bounded}};
}

inline Json filtration_report_to_json(const GraphOfGroups& g, const FiltrationReport& r) {
  auto layer = [](const std::vector<ReportEntry>& es) {
    Json out = Json::array();
    for (const auto& e : es) out.push_back(report_entry_to_json(e));
    return out;
  };
  Json rules = Json::object();
  for (const auto& rule : report_rules()) rules[rule.id] = rule.statement;
  return {{"gog", gog_to_json(g)},
          {"bound", r.bound},
          {"automorphisms", r.automorphism_count},
          {"layer1", report_entry_to_json(r.layer1)},
          {"layer2", layer(r.layer2)},
          {"layer3", layer(r.layer3)},
          {"layer4", layer(r.layer4)},
          {"layer5", layer(r.layer5)},
          {"overall", r.overall},
          {"rules", rules}};
}

}  // namespace fbc
