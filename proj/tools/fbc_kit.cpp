// fbc-kit: batch front end. Every subcommand prints a human-readable
// rendering on stdout and, with --out, writes a JSON artifact that embeds the
// inputs, bounds, seed, tool version and certificates.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "fbc/fbc.hpp"

namespace {

using fbc::Json;

struct Globals {
  bool strict = false;
  bool json_stdout = false;
  std::string out;
  std::uint64_t seed = 1;
};

/// Raised when an outcome is undetermined and --strict is set.
struct Undetermined : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fbc::Error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw fbc::Error(path + ": " + e.what());
  }
}

void emit(const Globals& g, const std::string& command, Json inputs, Json bounds, Json result, const std::string& text, bool determined) {
  Json artifact{{"tool", "fbc-kit"},
                {"version", fbc::kVersion},
                {"command", command},
                {"seed", g.seed},
                {"inputs", std::move(inputs)},
                {"bounds", std::move(bounds)},
                {"determined", determined},
                {"result", std::move(result)}};
  const std::string dumped = artifact.dump(2) + "\n";
  if (!g.out.empty()) {
    std::ofstream f(g.out);
    if (!f) throw fbc::Error("cannot write " + g.out);
    f << dumped;
  }
  std::cout << (g.json_stdout ? dumped : text);
  if (!determined && g.strict) throw Undetermined(command + ": outcome undetermined");
}

fbc::FreeAut parse_aut(int rank, const std::string& images) {
  auto ims = split_list(images);
  if (rank == 0) rank = static_cast<int>(ims.size());
  if (static_cast<int>(ims.size()) != rank) throw fbc::Error("expected " + std::to_string(rank) + " images");
  return fbc::FreeAut::parse(fbc::Basis(rank), ims);
}

Json aut_json(const fbc::FreeAut& f) { return {{"rank", f.rank()}, {"images", f.rendered_images()}, {"inverse_images", [&] {
                                                  std::vector<std::string> v;
                                                  for (const auto& w : f.inverse_images()) v.push_back(f.basis().render(w));
                                                  return v;
                                                }()}}; }

fbc::GraphOfGroups load_gog(const std::string& input, const std::string& catalog) {
  if (!catalog.empty()) return fbc::catalog_entry(catalog).build();
  if (input.empty()) throw fbc::Error("give --input or --catalog");
  Json j = read_json(input);
  return fbc::gog_from_json(j.contains("gog") ? j.at("gog") : j);
}

std::string render_gog(const fbc::GraphOfGroups& g) {
  std::ostringstream os;
  const auto& ctx = g.context();
  for (const auto& v : g.vertices()) {
    os << "  vertex " << v.id << ": " << v.desc.str() << " <";
    auto gens = v.group.generators();
    for (std::size_t i = 0; i < gens.size(); ++i) os << (i ? ", " : "") << ctx.render(gens[i]);
    os << ">\n";
  }
  for (const auto& e : g.edges()) {
    os << "  edge " << e.id << ": " << g.vertices()[static_cast<std::size_t>(e.from)].id << " -> "
       << g.vertices()[static_cast<std::size_t>(e.to)].id << "  " << e.desc.str() << " <";
    for (std::size_t i = 0; i < e.incl_from.size(); ++i) os << (i ? ", " : "") << ctx.render(e.incl_from[i]);
    os << ">";
    if (e.letter) os << "  letter " << ctx.render(*e.letter);
    os << "\n";
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fbc-kit: computations in free-by-cyclic groups"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--strict", g.strict, "exit with status 2 when an outcome is undetermined");
  app.add_flag("--json", g.json_stdout, "print the JSON artifact on stdout instead of the text rendering");
  app.add_option("--out", g.out, "write the JSON artifact to this file");
  app.add_option("--seed", g.seed, "seed for sampled inputs");

  // words
  auto* words = app.add_subcommand("words", "reduce and analyse a word of F_n");
  int w_rank = 2;
  std::string w_word, w_other;
  int w_random = -1;
  words->add_option("--rank", w_rank, "rank of the free group")->check(CLI::Range(1, 26));
  words->add_option("--word", w_word, "word in a..z / A..Z");
  words->add_option("--other", w_other, "second word for the conjugacy test");
  words->add_option("--random", w_random, "sample a reduced word of this length from the seed");

  // fold
  auto* fold = app.add_subcommand("fold", "folded core graph of a subgroup");
  int f_rank = 2;
  std::string f_gens, f_contains;
  fold->add_option("--rank", f_rank)->check(CLI::Range(1, 26));
  fold->add_option("--gens", f_gens, "comma-separated generators")->required();
  fold->add_option("--contains", f_contains, "membership query");

  // aut classify
  auto* aut = app.add_subcommand("aut", "automorphisms of F_n");
  aut->require_subcommand(1);
  auto* classify = aut->add_subcommand("classify", "growth, UPG and fixed-subgroup data");
  std::string a_images;
  int a_rank = 0, a_iters = 24, a_bound = 8;
  classify->add_option("--images", a_images, "comma-separated images of a, b, ...")->required();
  classify->add_option("--rank", a_rank);
  classify->add_option("--iters", a_iters)->check(CLI::PositiveNumber);
  classify->add_option("--bound", a_bound)->check(CLI::PositiveNumber);

  // fbc centre
  auto* fbcg = app.add_subcommand("fbc", "free-by-cyclic group computations");
  fbcg->require_subcommand(1);
  auto* centre = fbcg->add_subcommand("centre", "search for a central element t^k g^{-1}");
  std::string c_images;
  int c_rank = 0, c_max_k = 6, c_bound = 8;
  bool c_quotient = false;
  centre->add_option("--images", c_images)->required();
  centre->add_option("--rank", c_rank);
  centre->add_option("--max-k", c_max_k)->check(CLI::PositiveNumber);
  centre->add_option("--bound", c_bound)->check(CLI::PositiveNumber);
  centre->add_flag("--quotient", c_quotient, "also present G modulo the central element");

  // suspend
  auto* suspend = app.add_subcommand("suspend", "suspension of a Dehn twist given as JSON");
  std::string s_input;
  int s_span = 64;
  suspend->add_option("--input", s_input)->required()->check(CLI::ExistingFile);
  suspend->add_option("--span", s_span)->check(CLI::PositiveNumber);

  // cylinders
  auto* cyl = app.add_subcommand("cylinders", "tree of cylinders and its collapse");
  std::string y_input, y_catalog, y_family;
  int y_bound = 8;
  cyl->add_option("--input", y_input, "graph of groups JSON");
  cyl->add_option("--catalog", y_catalog, "use a shipped example instead");
  cyl->add_option("--family", y_family, "MaximalZxZ or MaximalCyclic (default: catalog family, else MaximalCyclic)");
  cyl->add_option("--bound", y_bound)->check(CLI::PositiveNumber);

  // quad3
  auto* quad = app.add_subcommand("quad3", "canonical splitting in the quadratic normal form");
  quad->set_help_flag("--help", "print this help message and exit");
  long long q_k = 1;
  std::string q_h, q_g;
  int q_bound = 8;
  quad->add_option("--k", q_k)->required();
  quad->add_option("--h", q_h)->required();
  quad->add_option("--g", q_g)->required();
  quad->add_option("--bound", q_bound)->check(CLI::PositiveNumber);

  // gbs tau | rank
  auto* gbs = app.add_subcommand("gbs", "GBS graphs with trivial modulus");
  gbs->require_subcommand(1);
  std::string b_graph;
  auto* tau = gbs->add_subcommand("tau", "tau values and centre exponents");
  tau->add_option("--graph", b_graph)->required()->check(CLI::ExistingFile);
  auto* rank = gbs->add_subcommand("rank", "rank of the free fibre ker tau");
  rank->add_option("--graph", b_graph)->required()->check(CLI::ExistingFile);

  // report
  auto* report = app.add_subcommand("report", "layered finite-generation report");
  std::string r_input, r_catalog;
  int r_bound = 6;
  report->add_option("--input", r_input);
  report->add_option("--catalog", r_catalog);
  report->add_option("--bound", r_bound)->check(CLI::PositiveNumber);

  // catalog
  auto* catalog = app.add_subcommand("catalog", "list or export the shipped examples");
  std::string k_name, k_dir;
  catalog->add_option("--name", k_name);
  catalog->add_option("--export-dir", k_dir, "write <name>.json for each example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (words->parsed()) {
      const fbc::Basis B(w_rank);
      fbc::Word w;
      if (w_random >= 0) {
        std::mt19937_64 rng(g.seed);
        std::uniform_int_distribution<int> pick(1, 2 * w_rank);
        std::vector<fbc::Letter> ls;
        while (static_cast<int>(ls.size()) < w_random) {
          int r = pick(rng);
          fbc::Letter l = r <= w_rank ? r : -(r - w_rank);
          if (!ls.empty() && ls.back() == -l) continue;
          ls.push_back(l);
        }
        w = fbc::Word::from_letters(ls);
      } else {
        w = B.parse(w_word);
      }
      auto cr = fbc::cyclic_reduce(w);
      auto root = fbc::primitive_root(w);
      Json res{{"word", B.render(w)},
               {"length", w.size()},
               {"cyclic_core", B.render(cr.core)},
               {"cyclic_conjugator", B.render(cr.conjugator)},
               {"conjugacy_length", fbc::conjugacy_length(w)},
               {"root", B.render(root.root)},
               {"multiplicity", root.multiplicity},
               {"centralizer", B.render(fbc::centralizer_free(w))}};
      std::ostringstream os;
      os << "word " << B.render(w) << " (length " << w.size() << ")\n"
         << "  cyclic core " << B.render(cr.core) << ", conjugacy length " << fbc::conjugacy_length(w) << "\n"
         << "  root " << B.render(root.root) << " ^ " << root.multiplicity << "\n";
      if (!w_other.empty()) {
        fbc::Word v = B.parse(w_other);
        auto c = fbc::are_conjugate(w, v);
        res["conjugate_to"] = B.render(v);
        res["conjugator"] = c ? Json(B.render(*c)) : Json(nullptr);
        os << "  conjugate to " << B.render(v) << ": " << (c ? "yes, by " + B.render(*c) : std::string("no")) << "\n";
      }
      emit(g, "words", {{"rank", w_rank}, {"word", w_word}, {"random", w_random}}, Json::object(), res, os.str(), true);
    } else if (fold->parsed()) {
      const fbc::Basis B(f_rank);
      std::vector<fbc::Word> gens;
      for (const auto& s : split_list(f_gens)) gens.push_back(B.parse(s));
      auto sg = fbc::SubgroupGraph::from_generators(f_rank, gens);
      Json res = fbc::subgroup_graph_to_json(sg);
      std::ostringstream os;
      os << "core graph: " << sg.vertex_count() << " vertices, " << sg.edge_count() << " edges, rank " << sg.rank();
      if (auto idx = sg.index()) os << ", index " << *idx;
      os << "\n";
      if (!f_contains.empty()) {
        bool in = sg.contains(B.parse(f_contains));
        res["contains"] = {{"word", f_contains}, {"member", in}};
        os << "  " << f_contains << (in ? " is" : " is not") << " in the subgroup\n";
      }
      emit(g, "fold", {{"rank", f_rank}, {"gens", split_list(f_gens)}}, Json::object(), res, os.str(), true);
    } else if (classify->parsed()) {
      auto f = parse_aut(a_rank, a_images);
      fbc::GrowthOptions opt;
      opt.iterations = a_iters;
      auto v = fbc::classify_growth(f, opt);
      auto upg = fbc::upg_power(f, 12);
      auto fix = fbc::fixed_subgroup_bounded(f, a_bound);
      auto inner = fbc::detect_inner(f, a_bound);
      Json evidence = Json::array();
      for (const auto& s : v.evidence) evidence.push_back({{"label", s.label}, {"lengths", s.lengths}});
      Json res{{"growth", {{"kind", fbc::to_string(v.kind)}, {"degree", v.degree}, {"reason", v.reason}, {"evidence", evidence}}},
               {"upg_candidate", fbc::is_upg_candidate(f)},
               {"upg_power", upg ? Json{{"r", upg->r}, {"trivial_mod_3", upg->trivial_mod_3}} : Json(nullptr)},
               {"fixed_subgroup", fbc::subgroup_graph_to_json(fix)},
               {"inner", fbc::search_to_json(f.basis(), inner)}};
      std::ostringstream os;
      os << "growth: " << fbc::to_string(v.kind);
      if (v.kind == fbc::GrowthKind::Polynomial) os << "(" << v.degree << ")";
      os << "  [" << v.reason << "]\n"
         << "UPG candidate: " << (fbc::is_upg_candidate(f) ? "yes" : "no") << "\n"
         << "fixed subgroup (words up to " << a_bound << "): rank " << fix.rank() << "\n";
      emit(g, "aut classify", aut_json(f), {{"iterations", a_iters}, {"L", a_bound}}, res, os.str(),
           v.kind != fbc::GrowthKind::Undetermined);
    } else if (centre->parsed()) {
      fbc::FbcContext ctx(parse_aut(c_rank, c_images));
      auto c = fbc::central_element_search(ctx, c_max_k, c_bound);
      Json res{{"found", c.has_value()}};
      std::ostringstream os;
      if (c) {
        res["k"] = c->k;
        res["g"] = ctx.basis().render(c->g);
        res["element"] = ctx.render(c->element());
        res["check"] = ctx.phi().pow(c->k) == fbc::FreeAut::inner(ctx.basis(), c->g);
        os << "central element " << ctx.render(c->element()) << " (phi^" << c->k << " = Ad(" << ctx.basis().render(c->g) << "))\n";
        if (c_quotient) {
          auto p = fbc::central_quotient_presentation(ctx, *c);
          res["quotient"] = fbc::presentation_to_json(p);
          os << "quotient: <";
          for (std::size_t i = 0; i < p.generators.size(); ++i) os << (i ? "," : "") << p.generators[i];
          os << " |";
          for (std::size_t i = 0; i < p.relators.size(); ++i) os << (i ? ", " : " ") << p.relators[i];
          os << ">\n";
        }
      } else {
        os << "no central element with k <= " << c_max_k << " and |g| <= " << c_bound << "\n";
      }
      emit(g, "fbc centre", fbc::context_to_json(ctx), {{"max_k", c_max_k}, {"L", c_bound}}, res, os.str(), c.has_value());
    } else if (suspend->parsed()) {
      Json in = read_json(s_input);
      auto dt = fbc::dehn_twist_from_json(in);
      auto s = fbc::suspension_of_dehn_twist(dt, 't', s_span);
      const fbc::Basis& B = dt.phi.basis();
      Json conj = Json::array();
      for (const auto& u : s.vertex_conjugators) conj.push_back(B.render(u));
      Json res{{"gog", fbc::gog_to_json(s.gog)}, {"vertex_conjugators", conj}, {"twistors", s.twistors}};
      emit(g, "suspend", in, {{"span", s_span}}, res, "suspension:\n" + render_gog(s.gog), true);
    } else if (cyl->parsed()) {
      auto gog = load_gog(y_input, y_catalog);
      fbc::EdgeFamily fam = fbc::EdgeFamily::MaximalCyclic;
      if (!y_family.empty()) fam = fbc::parse_edge_family(y_family);
      else if (!y_catalog.empty()) fam = fbc::catalog_entry(y_catalog).family;
      fbc::CylinderOptions opt{y_bound};
      auto summary = fbc::analyze_cylinders(gog, fam, opt);
      Json res{{"summary", fbc::cylinder_summary_to_json(gog, summary)}};
      std::ostringstream os;
      os << "input:\n" << render_gog(gog);
      if (summary.determined) {
        auto tc = fbc::tree_of_cylinders(gog, summary);
        auto star = fbc::collapse(tc, fam);
        auto idem = fbc::idempotence_check(gog, fam, opt);
        res["tree_of_cylinders"] = fbc::gog_to_json(tc);
        res["collapsed"] = fbc::gog_to_json(star);
        res["idempotent"] = {{"determined", idem.determined}, {"holds", idem.holds}, {"reason", idem.reason}};
        for (const auto& c : summary.cylinders) os << "cylinder: " << fbc::to_string(c.shape) << ", stabilizer " << c.stabilizer_desc.str() << "\n";
        os << "collapsed tree of cylinders:\n" << render_gog(star) << "idempotent: " << (idem.holds ? "yes" : "no") << "\n";
      } else {
        os << "undetermined: " << summary.reason << "\n";
      }
      emit(g, "cylinders", {{"input", y_input}, {"catalog", y_catalog}, {"family", fbc::to_string(fam)}, {"gog", fbc::gog_to_json(gog)}},
           {{"L", y_bound}}, res, os.str(), summary.determined);
    } else if (quad->parsed()) {
      auto nf = fbc::parse_quad(q_k, q_h, q_g);
      auto r = fbc::canonical_splitting(nf, q_bound);
      std::ostringstream os;
      os << "case: " << r.case_tag << (r.swapped ? " (h and g swapped)" : "") << "\n" << r.reason << "\n";
      if (r.splitting) os << "splitting:\n" << render_gog(*r.splitting);
      emit(g, "quad3", {{"k", q_k}, {"h", q_h}, {"g", q_g}}, {{"L", q_bound}}, fbc::splitting_report_to_json(r), os.str(), r.determined);
    } else if (tau->parsed() || rank->parsed()) {
      Json in = read_json(b_graph);
      auto graph = fbc::gbs_from_json(in);
      if (!fbc::modulus_is_trivial(graph)) throw fbc::Error("GBS graph has nontrivial modulus");
      auto t = fbc::tau_values(graph);
      Json res = fbc::tau_to_json(t);
      std::ostringstream os;
      if (rank->parsed()) {
        long long r = fbc::fiber_rank(graph);
        res["fiber_rank"] = r;
        os << r << "\n";
      } else {
        for (std::size_t i = 0; i < t.names.size(); ++i) os << "tau(" << t.names[i] << ") = " << t.values[i].str() << "\n";
      }
      emit(g, rank->parsed() ? "gbs rank" : "gbs tau", fbc::gbs_to_json(graph), Json::object(), res, os.str(), true);
    } else if (report->parsed()) {
      auto gog = load_gog(r_input, r_catalog);
      fbc::ReportOptions opt;
      opt.bound = r_bound;
      auto rep = fbc::filtration_report(gog, opt);
      emit(g, "report", {{"input", r_input}, {"catalog", r_catalog}}, {{"L", r_bound}}, fbc::filtration_report_to_json(gog, rep),
           fbc::render_report(rep), rep.overall == fbc::kFinitelyGenerated);
    } else if (catalog->parsed()) {
      Json list = Json::array();
      std::ostringstream os;
      for (const auto& e : fbc::example_catalog()) {
        if (!k_name.empty() && e.name != k_name) continue;
        auto gog = e.build();
        Json j{{"name", e.name}, {"scenario", e.scenario}, {"description", e.description}, {"family", fbc::to_string(e.family)},
               {"gog", fbc::gog_to_json(gog)}};
        if (!k_dir.empty()) {
          std::filesystem::create_directories(k_dir);
          std::ofstream f(std::filesystem::path(k_dir) / (e.name + ".json"));
          f << j.dump(2) << "\n";
        }
        list.push_back(j);
        os << e.name << "  [" << e.scenario << ", " << fbc::to_string(e.family) << "]  " << e.description << "\n";
      }
      if (!k_name.empty() && list.empty()) throw fbc::Error("no catalog example named '" + k_name + "'");
      emit(g, "catalog", {{"name", k_name}}, Json::object(), list, os.str(), true);
    }
  } catch (const Undetermined& e) {
    std::cerr << "fbc-kit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fbc-kit: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
