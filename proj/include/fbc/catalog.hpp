#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fbc/cylinders.hpp"
#include "fbc/quad3.hpp"

namespace fbc {

struct CatalogEntry {
  std::string name;
  std::string scenario;  // "linear" or "quadratic"
  std::string description;
  EdgeFamily family;
  std::function<GraphOfGroups()> build;
};

inline GraphOfGroups linear_f2_example() {
  const Basis B(2);
  DehnTwistData dt{FreeAut::parse(B, {"a", "ba"}), {{B.parse("a"), B.parse("baB")}}, {{0, 0, B.parse("b"), B.parse("baB"), std::nullopt}}, {}};
  return suspension_of_dehn_twist(dt).gog;
}

inline GraphOfGroups linear_f3_example() {
  const Basis B(3);
  DehnTwistData dt{FreeAut::parse(B, {"a", "b", "ca"}), {{B.parse("a"), B.parse("b"), B.parse("caC")}}, {{0, 0, B.parse("c"), B.parse("caC"), std::nullopt}}, {}};
  return suspension_of_dehn_twist(dt).gog;
}

/// F_3 = <a, b> *_<b> <b, c> twisted by conjugation with b on the second
/// factor.
inline GraphOfGroups linear_amalgam_example() {
  const Basis B(3);
  Route c_route{RouteStep::cross(0, 1), RouteStep::at(1, {0, B.parse("c")}), RouteStep::cross(0, -1)};
  DehnTwistData dt{FreeAut::parse(B, {"a", "b", "Bcb"}), {{B.parse("a"), B.parse("b")}, {B.parse("b"), B.parse("c")}}, {{0, 1, std::nullopt, B.parse("b"), std::nullopt}}, {{}, {}, c_route}};
  return suspension_of_dehn_twist(dt).gog;
}

inline GraphOfGroups quad_example(long long k, const std::string& h, const std::string& g) {
  auto nf = parse_quad(k, h, g);
  return quad_t0(quad_context(nf), nf);
}

inline const std::vector<CatalogEntry>& example_catalog() {
  static const std::vector<CatalogEntry> entries{
      {"linear-f2", "linear", "suspension of b -> ba on F(a, b) split over <a>", EdgeFamily::MaximalZxZ, linear_f2_example},
      {"linear-f3", "linear", "suspension of c -> ca on F(a, b, c) with one loop edge", EdgeFamily::MaximalZxZ, linear_f3_example},
      {"linear-amalgam", "linear", "suspension of c -> Bcb over <a, b> *_<b> <b, c>", EdgeFamily::MaximalZxZ, linear_amalgam_example},
      {"quad-line", "quadratic", "T_0 for k = 1, h = g = b", EdgeFamily::MaximalCyclic, [] { return quad_example(1, "b", "b"); }},
      {"quad-line-k2", "quadratic", "T_0 for k = 2, h = g = b", EdgeFamily::MaximalCyclic, [] { return quad_example(2, "b", "b"); }},
      {"quad-subdivision", "quadratic", "T_0 for k = 1, h = b, g = b^2", EdgeFamily::MaximalCyclic, [] { return quad_example(1, "b", "bb"); }},
      {"quad-collapsed", "quadratic", "T_0 for k = 1, h = 1, g = b", EdgeFamily::MaximalCyclic, [] { return quad_example(1, "", "b"); }},
  };
  return entries;
}

inline const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : example_catalog()) {
    if (e.name == name) return e;
  }
  throw Error("no catalog example named '" + name + "'");
}

}  // namespace fbc
