#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "meso/decomposition.hpp"
#include "meso/exponent.hpp"
#include "meso/localization.hpp"
#include "meso/posets.hpp"
#include "meso/presentation.hpp"
#include "meso/witnesses.hpp"

namespace meso {

using Json = nlohmann::ordered_json;

inline std::string fnv1a(std::string const& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string presentation_hash(CongruencePresentation const& p) { return fnv1a(serialize(p)); }

inline Json exponent_json(Exponent const& e) { return Json(e.coords()); }

inline Json lattice_json(UnitLattice const& l) {
  Json rows = Json::array();
  for (auto const& b : l.basis()) rows.push_back(exponent_json(b));
  return rows;
}

inline Json prime_json(MonoidPrime const& p, std::vector<std::string> const& names) {
  Json out = Json::array();
  for (auto i : p.support) out.push_back(names[i]);
  return out;
}

inline Json prime_congruence_json(PrimeCongruence const& pc, std::vector<std::string> const& names) {
  Json units = Json::array();
  for (auto i : pc.prime.complement(pc.n)) units.push_back(names[i]);
  return Json{{"prime", prime_json(pc.prime, names)}, {"units", units}, {"lattice", lattice_json(pc.lattice)}};
}

inline Json presentation_json(CongruencePresentation const& p) {
  Json pairs = Json::array(), nils = Json::array();
  for (auto const& [a, b] : p.pairs) pairs.push_back({format_monomial(a, p.names), format_monomial(b, p.names)});
  for (auto const& m : p.nils) nils.push_back(format_monomial(m, p.names));
  return Json{{"vars", p.names}, {"pairs", pairs}, {"nils", nils}};
}

inline MonoidPrime prime_from_names(std::vector<std::string> const& wanted, std::vector<std::string> const& names) {
  std::vector<std::size_t> s;
  for (auto const& w : wanted) {
    auto it = std::find(names.begin(), names.end(), w);
    if (it == names.end()) throw ParseError("unknown variable '" + w + "' in prime");
    s.push_back(static_cast<std::size_t>(it - names.begin()));
  }
  return MonoidPrime(std::move(s));
}

// Accepts either presentation text or {vars, pairs, nils} with monomial strings.
inline CongruencePresentation presentation_from_json(Json const& j, std::vector<std::string> const& fallback = {}) {
  if (j.is_string()) return parse_presentation(j.get<std::string>());
  std::vector<std::string> vars = j.contains("vars") ? j.at("vars").get<std::vector<std::string>>() : fallback;
  std::ostringstream text;
  text << "vars ";
  for (std::size_t i = 0; i < vars.size(); ++i) text << (i ? ", " : "") << vars[i];
  text << ";\n";
  for (auto const& pr : j.value("pairs", Json::array())) {
    text << pr.at(0).get<std::string>() << " - " << pr.at(1).get<std::string>() << ";\n";
  }
  for (auto const& m : j.value("nils", Json::array())) text << m.get<std::string>() << ";\n";
  return parse_presentation(text.str());
}

inline Exponent monomial_from_string(std::string const& s, std::vector<std::string> const& names) {
  CongruencePresentation p(names);
  std::ostringstream text;
  text << "vars ";
  for (std::size_t i = 0; i < names.size(); ++i) text << (i ? ", " : "") << names[i];
  text << ";\n" << s << ";\n";
  auto q = parse_presentation(text.str());
  if (q.nils.size() != 1) throw ParseError("expected a monomial, got '" + s + "'");
  return q.nils.front();
}

inline Json witness_record_json(WitnessRecord const& r, std::vector<std::string> const& names,
                                WitnessAnalysis const& wa) {
  Json cls = Json::array();
  for (auto const& e : r.green_class) cls.push_back(format_monomial(e, names));
  Json aides = Json::array();
  for (auto const& a : r.key_aides) aides.push_back(a ? Json(format_monomial(*a, names)) : Json("NIL"));
  Json testimony = Json::array();
  for (auto const& pc : r.testimony) testimony.push_back(lattice_json(pc.lattice));
  return Json{{"element", format_monomial(r.element, names)},
              {"exponent", exponent_json(r.element)},
              {"green_class", cls},
              {"witness", r.is_witness},
              {"key", r.is_key},
              {"cogenerator", r.is_cogenerator},
              {"maximal", r.is_maximal},
              {"suspicious", r.suspicious},
              {"true", r.is_true},
              {"reason", to_string(wa.true_witness_equiv_check(r.element))},
              {"key_aides", aides},
              {"lattice", lattice_json(r.prime_congruence.lattice)},
              {"testimony", testimony}};
}

inline Json witness_analysis_json(WitnessAnalysis const& wa, std::vector<std::string> const& names) {
  Json rows = Json::array();
  for (auto const& c : wa.classes()) {
    if (c.is_witness) rows.push_back(witness_record_json(c, names, wa));
  }
  Json region{{"box", exponent_json(wa.region().box)}, {"certified", wa.region().certified}};
  return Json{{"prime", prime_json(wa.prime(), names)}, {"region", region}, {"witnesses", rows}};
}

inline Json verification_json(Verification const& v, std::vector<std::string> const& names) {
  Json out{{"status", to_string(v.status)}};
  if (v.box) out["box"] = exponent_json(*v.box);
  if (v.a) {
    out["pair"] = {format_monomial(*v.a, names), v.b ? Json(format_monomial(*v.b, names)) : Json("NIL")};
  }
  return out;
}

inline Json component_json(Component const& c, std::vector<std::string> const& names) {
  Json cogens = Json::array();
  for (auto const& w : c.cogenerators) cogens.push_back(format_monomial(w, names));
  return Json{{"cogenerator", cogens.empty() ? Json(nullptr) : cogens.front()},
              {"cogenerators", cogens},
              {"prime", prime_json(c.prime, names)},
              {"presentation", presentation_json(c.presentation)},
              {"associated", prime_congruence_json(c.associated, names)}};
}

inline Json decomposition_json(MesoprimaryDecomposition const& d) {
  auto const& names = d.target.names;
  Json comps = Json::array();
  for (auto const& c : d.components) comps.push_back(component_json(c, names));
  return Json{{"target", {{"hash", presentation_hash(d.target)}, {"vars", names}}},
              {"tier", d.tier},
              {"flags", {{"induced", d.induced}, {"key", d.key}, {"true_tier", d.true_tier}}},
              {"components", comps}};
}

// Components of a decomposition file. Missing associated lattices are taken
// from the ambient congruence at the first cogenerator.
inline MesoprimaryDecomposition decomposition_from_json(Json const& j, NormalFormSystem const& sys) {
  MesoprimaryDecomposition d;
  d.target = sys.presentation();
  auto const& names = d.target.names;
  d.tier = j.value("tier", std::string("supplied"));
  auto flags = j.value("flags", Json::object());
  d.induced = flags.value("induced", false);
  d.key = flags.value("key", false);
  d.true_tier = flags.value("true_tier", false);
  for (auto const& cj : j.at("components")) {
    Component c;
    c.presentation = presentation_from_json(cj.at("presentation"), names);
    if (c.presentation.names != names) throw ParseError("component variables differ from the target");
    auto primes = cj.at("prime").get<std::vector<std::string>>();
    c.prime = prime_from_names(primes, names);
    if (cj.contains("cogenerators")) {
      for (auto const& w : cj.at("cogenerators")) c.cogenerators.push_back(monomial_from_string(w, names));
    } else if (cj.contains("cogenerator") && !cj.at("cogenerator").is_null()) {
      c.cogenerators.push_back(monomial_from_string(cj.at("cogenerator"), names));
    } else {
      c.cogenerators = component_cogenerators(c.presentation, c.prime);
    }
    UnitLattice k(c.prime.complement(sys.n()).size());
    if (cj.contains("associated")) {
      std::vector<Exponent> rows;
      for (auto const& r : cj.at("associated").at("lattice")) rows.emplace_back(r.get<std::vector<std::int64_t>>());
      k = UnitLattice(k.dim(), rows);
    } else if (!c.cogenerators.empty()) {
      k = LocalizedContext(sys, c.prime).stabilizer(c.cogenerators.front());
    }
    c.associated = PrimeCongruence{c.prime, k, sys.n()};
    d.components.push_back(std::move(c));
  }
  return d;
}

inline Json poset_json(FinitePoset const& p) {
  Json covers = Json::array();
  for (auto [a, b] : p.covers()) covers.push_back({a, b});
  return Json{{"elements", p.labels()}, {"covers", covers}};
}

inline FinitePoset poset_from_json(Json const& j) {
  auto labels = j.at("elements").get<std::vector<std::string>>();
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (auto const& c : j.value("covers", Json::array())) {
    auto idx = [&](Json const& v) -> std::size_t {
      if (v.is_number_integer()) return v.get<std::size_t>();
      auto it = std::find(labels.begin(), labels.end(), v.get<std::string>());
      if (it == labels.end()) throw ParseError("unknown poset element " + v.dump());
      return static_cast<std::size_t>(it - labels.begin());
    };
    rel.emplace_back(idx(c.at(0)), idx(c.at(1)));
  }
  return FinitePoset(std::move(labels), rel);
}

inline std::string dot_escape(std::string const& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

inline std::string poset_dot(FinitePoset const& p, std::string const& name = "poset") {
  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=BT;\n  node [shape=box];\n";
  for (std::size_t i = 0; i < p.size(); ++i) os << "  n" << i << " [label=\"" << dot_escape(p.labels()[i]) << "\"];\n";
  for (auto [a, b] : p.covers()) os << "  n" << a << " -> n" << b << ";\n";
  os << "}\n";
  return os.str();
}

inline Json recipe_json(RealizationRecipe const& r) {
  auto const& labels = r.poset.labels();
  Json vars = Json::object(), embedding = Json::object(), exps = Json::object();
  for (std::size_t k = 0; k < r.elements.size(); ++k) vars["x" + std::to_string(k + 1)] = labels[r.elements[k]];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    embedding[labels[i]] = r.subsets[i];
    exps[labels[i]] = r.exponents[i];
  }
  return Json{{"kind", to_string(r.kind)},
              {"convention", to_string(r.convention)},
              {"poset", poset_json(r.poset)},
              {"minimum", labels[r.bottom]},
              {"variables", vars},
              {"embedding", embedding},
              {"primes", r.primes},
              {"extra_prime", r.extra_prime ? Json(*r.extra_prime) : Json(nullptr)},
              {"exponents", exps},
              {"global", r.global}};
}

}  // namespace meso
