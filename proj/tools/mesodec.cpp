#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "meso/meso.hpp"

namespace {

using meso::Json;

struct Config {
  std::string input;
  std::string second;
  std::vector<std::string> prime;
  std::vector<std::int64_t> box;
  std::string order = "grlex";
  std::size_t bounds = 20000;
  std::string format;
  std::string convention = "working";
  std::string tier = "true";
  std::string kind;
  std::string check;
  std::string output;
  std::vector<std::string> project;
  bool strict = false;
};

std::string slurp(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw meso::ParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(std::string const& path) {
  try {
    return Json::parse(slurp(path));
  } catch (nlohmann::json::exception const& e) {
    throw meso::ParseError(path + ": " + e.what());
  }
}

meso::CompletionOptions completion(Config const& c) {
  meso::CompletionOptions o;
  o.max_rules = c.bounds;
  return o;
}

meso::NormalFormSystem load_system(Config const& c) {
  auto pres = meso::parse_presentation(slurp(c.input));
  auto order = meso::MonomialOrder::standard(pres.n, meso::order_kind_from_string(c.order));
  return meso::NormalFormSystem::complete(std::move(pres), order, completion(c));
}

std::optional<meso::Exponent> box_of(Config const& c) {
  if (c.box.empty()) return std::nullopt;
  return meso::Exponent(c.box);
}

meso::WitnessOptions witness_options(Config const& c) {
  meso::WitnessOptions o;
  o.box = box_of(c);
  o.require_certified = c.strict;
  return o;
}

void emit(Config const& c, std::string const& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw meso::PreconditionError("cannot write " + c.output);
  out << text;
}

std::string dump(Json const& j) { return j.dump(2) + "\n"; }

std::string flag(bool b) { return b ? "yes" : "-"; }

int cmd_witnesses(Config const& c) {
  auto sys = load_system(c);
  auto const& names = sys.presentation().names;
  std::vector<meso::WitnessAnalysis> analyses;
  if (!c.prime.empty()) {
    analyses.push_back(meso::analyze_witnesses(sys, meso::prime_from_names(c.prime, names), witness_options(c)));
  } else {
    if (!c.box.empty()) throw meso::PreconditionError("--box needs --prime");
    meso::CongruenceWitnesses cw(sys, witness_options(c));
    analyses = cw.analyses();
  }
  if (c.format == "json") {
    Json out = Json::array();
    for (auto const& wa : analyses) out.push_back(meso::witness_analysis_json(wa, names));
    emit(c, dump(Json{{"input", c.input}, {"primes", out}}));
    return 0;
  }
  std::ostringstream os;
  for (auto const& wa : analyses) {
    os << "prime " << wa.prime().to_string(names) << (wa.region().certified ? "" : " (uncertified region)")
       << "\n";
    os << "  element      key  cogen  maximal  suspicious  true  lattice\n";
    for (auto const& r : wa.classes()) {
      if (!r.is_witness) continue;
      auto e = meso::format_monomial(r.element, names);
      os << "  " << e << std::string(e.size() < 12 ? 12 - e.size() : 1, ' ') << " " << flag(r.is_key)
         << std::string(5 - flag(r.is_key).size(), ' ') << flag(r.is_cogenerator)
         << std::string(7 - flag(r.is_cogenerator).size(), ' ') << flag(r.is_maximal)
         << std::string(9 - flag(r.is_maximal).size(), ' ') << flag(r.suspicious)
         << std::string(12 - flag(r.suspicious).size(), ' ') << flag(r.is_true)
         << std::string(6 - flag(r.is_true).size(), ' ') << r.prime_congruence.lattice.to_string() << "\n";
    }
  }
  emit(c, os.str());
  return 0;
}

Json report(meso::NormalFormSystem const& sys, meso::MesoprimaryDecomposition const& d, Config const& c) {
  auto opts = completion(c);
  meso::DecompositionOptions dopts;
  dopts.witness = witness_options(c);
  dopts.completion = opts;
  auto comps = meso::presentations(d.components);
  auto v = meso::verify_decomposition(sys, comps, opts, box_of(c));
  auto j = meso::decomposition_json(d);
  j["verification"] = meso::verification_json(v, sys.presentation().names);
  Json checks = Json::object();
  if (v.ok()) {
    checks["redundant"] = meso::find_redundant(sys, comps, opts);
  }
  Json per = Json::array();
  for (auto const& comp : d.components) per.push_back(meso::check_induced(sys, comp, dopts));
  bool induced = true;
  for (auto const& b : per) induced = induced && b.get<bool>();
  checks["induced"] = induced;
  checks["induced_components"] = per;
  Json viol = Json::array();
  for (auto const& x : meso::check_cogenerator_consistency(sys, d.components, opts)) {
    viol.push_back({{"component", x.component},
                    {"cogenerator", meso::format_monomial(x.cogenerator, sys.presentation().names)},
                    {"reason", x.reason}});
  }
  checks["cogenerator_consistency"] = viol;
  j["checks"] = checks;
  j["flags"]["induced"] = induced;
  return j;
}

int cmd_decompose(Config const& c) {
  auto sys = load_system(c);
  meso::MesoprimaryDecomposition d;
  if (!c.check.empty()) {
    d = meso::decomposition_from_json(read_json(c.check), sys);
  } else {
    meso::DecompositionOptions o;
    o.witness = witness_options(c);
    o.completion = completion(c);
    if (c.tier == "irredundant") {
      d = meso::irredundant_decomposition(sys, o);
    } else {
      d = meso::decompose(sys, meso::tier_from_string(c.tier), o);
    }
  }
  auto j = report(sys, d, c);
  if (c.format == "text") {
    std::ostringstream os;
    os << "tier " << d.tier << ", " << d.components.size() << " components, "
       << j["verification"]["status"].get<std::string>() << "\n";
    for (auto const& comp : d.components) {
      os << "component prime " << comp.prime.to_string(sys.presentation().names) << " lattice "
         << comp.associated.lattice.to_string() << "\n";
      os << meso::serialize(comp.presentation);
    }
    emit(c, os.str());
  } else {
    emit(c, dump(j));
  }
  return 0;
}

int cmd_verify(Config c) {
  if (c.second.empty()) throw meso::PreconditionError("verify needs a decomposition file");
  c.check = c.second;
  return cmd_decompose(c);
}

int cmd_poset(Config const& c) {
  auto sys = load_system(c);
  meso::FinitePoset p;
  std::string kind = c.kind.empty() ? "mesoass" : c.kind;
  if (kind == "mesoass") {
    p = meso::mesoass_poset(sys, witness_options(c));
  } else if (kind == "omega") {
    auto const& names = sys.presentation().names;
    meso::MonoidPrime prime;
    if (!c.prime.empty()) {
      prime = meso::prime_from_names(c.prime, names);
    } else {
      prime = meso::nilpotent_prime(sys);
    }
    p = meso::omega_poset(sys, prime, witness_options(c)).poset;
  } else {
    throw meso::ParseError("unknown poset kind '" + kind + "'");
  }
  if (c.format == "dot") {
    emit(c, meso::poset_dot(p, kind));
  } else {
    emit(c, dump(meso::poset_json(p)));
  }
  return 0;
}

int cmd_realize(Config const& c) {
  auto p = meso::poset_from_json(read_json(c.input));
  std::string kind = c.kind.empty() ? "flat" : c.kind;
  if (kind != "flat" && kind != "graded") throw meso::ParseError("unknown realization kind '" + kind + "'");
  auto r = meso::realize(p, kind == "flat" ? meso::RealizationKind::flat : meso::RealizationKind::graded,
                         meso::convention_from_string(c.convention));
  auto text = meso::serialize(r.presentation);
  auto recipe = meso::recipe_json(r.recipe);
  if (!c.output.empty()) {
    std::ofstream pres(c.output + ".cong");
    std::ofstream side(c.output + ".recipe.json");
    if (!pres || !side) throw meso::PreconditionError("cannot write " + c.output);
    pres << text;
    side << dump(recipe);
    return 0;
  }
  if (c.format == "json") {
    std::cout << dump(Json{{"presentation", text}, {"recipe", recipe}});
  } else {
    std::cout << text;
  }
  return 0;
}

int cmd_draw(Config const& c) {
  auto sys = load_system(c);
  auto const& names = sys.presentation().names;
  std::vector<std::size_t> axes;
  auto proj = c.project.empty() ? std::vector<std::string>(names.begin(), names.begin() + std::min<std::size_t>(2, names.size()))
                                : c.project;
  for (auto const& v : proj) axes.push_back(meso::prime_from_names({v}, names).support.front());
  meso::Exponent box(axes.size());
  for (std::size_t i = 0; i < axes.size(); ++i) box[i] = c.box.empty() ? 5 : c.box.at(i);
  if (!c.box.empty() && c.box.size() != axes.size()) throw meso::PreconditionError("--box needs one bound per axis");
  std::map<meso::Exponent, std::size_t> label;
  std::vector<std::vector<meso::Exponent>> classes;
  std::vector<std::pair<meso::Exponent, std::optional<std::size_t>>> cells;
  for (auto const& q : meso::box_points(box)) {
    auto full = meso::embed(q, axes, sys.n());
    auto nf = sys.normal_form(full);
    if (!nf) {
      cells.emplace_back(q, std::nullopt);
      continue;
    }
    auto [it, fresh] = label.emplace(*nf, classes.size());
    if (fresh) classes.emplace_back();
    classes[it->second].push_back(q);
    cells.emplace_back(q, it->second);
  }
  static char const* palette[] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33",
                                  "#a65628", "#f781bf", "#66c2a5", "#fc8d62", "#8da0cb", "#e78ac3"};
  if (c.format == "text") {
    std::ostringstream os;
    if (axes.size() != 2) throw meso::PreconditionError("text drawing needs two axes");
    for (std::int64_t y = box[1]; y >= 0; --y) {
      for (std::int64_t x = 0; x <= box[0]; ++x) {
        meso::Exponent q{x, y};
        auto it = std::find_if(cells.begin(), cells.end(), [&](auto const& cell) { return cell.first == q; });
        std::string s = it->second ? std::to_string(*it->second) : "*";
        os << std::string(4 - std::min<std::size_t>(3, s.size()), ' ') << s;
      }
      os << "\n";
    }
    emit(c, os.str());
    return 0;
  }
  std::ostringstream os;
  os << "graph classes {\n  layout=neato;\n  node [shape=circle, style=filled, fixedsize=true, width=0.4, "
        "fontsize=9];\n";
  auto id = [](meso::Exponent const& q) {
    std::string s = "p";
    for (auto v : q) s += "_" + std::to_string(v);
    return s;
  };
  for (auto const& [q, cls] : cells) {
    os << "  " << id(q) << " [pos=\"" << q[0] << "," << (q.size() > 1 ? q[1] : 0) << "!\"";
    if (cls) {
      os << ", label=\"" << *cls << "\", fillcolor=\"" << palette[*cls % 12] << "\"";
    } else {
      os << ", label=\"nil\", shape=square, fillcolor=\"#333333\", fontcolor=white";
    }
    os << ", tooltip=\"" << meso::format_monomial(meso::embed(q, axes, sys.n()), names) << "\"];\n";
  }
  for (std::size_t k = 0; k < classes.size(); ++k) {
    for (std::size_t i = 1; i < classes[k].size(); ++i) {
      os << "  " << id(classes[k][i - 1]) << " -- " << id(classes[k][i]) << " [color=\"" << palette[k % 12]
         << "\", penwidth=2];\n";
    }
  }
  os << "}\n";
  emit(c, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mesoprimary decomposition of monoid congruences"};
  app.require_subcommand(1);
  Config c;
  app.add_option("--box", c.box, "Box bounds, comma separated")->delimiter(',');
  app.add_option("--order", c.order, "Monomial order")->check(CLI::IsMember({"grlex", "grevlex", "lex"}));
  app.add_option("--bounds", c.bounds, "Maximum number of rules during completion");
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json", "dot"}));
  app.add_option("--convention", c.convention, "Realization exponent convention")
      ->check(CLI::IsMember({"paper", "working"}));
  app.add_option("-o,--output", c.output, "Output path (prefix for realize)");

  auto* w = app.add_subcommand("witnesses", "Witness taxonomy per prime");
  w->add_option("input", c.input, "Presentation file")->required();
  w->add_option("--prime", c.prime, "Prime as variable names")->delimiter(',');
  w->add_flag("--strict", c.strict, "Fail on uncertified regions");

  auto* d = app.add_subcommand("decompose", "Coprincipal decomposition");
  d->add_option("input", c.input, "Presentation file")->required();
  d->add_option("--tier", c.tier, "Witness tier")->check(CLI::IsMember({"key", "true", "irredundant"}));
  d->add_option("--check", c.check, "Check a supplied decomposition file instead");
  d->add_flag("--strict", c.strict, "Fail on uncertified regions");

  auto* v = app.add_subcommand("verify", "Verify a decomposition file");
  v->add_option("input", c.input, "Presentation file")->required();
  v->add_option("decomposition", c.second, "Decomposition file")->required();

  auto* p = app.add_subcommand("poset", "MesoAss or prime congruence poset");
  p->add_option("input", c.input, "Presentation file")->required();
  p->add_option("--kind", c.kind, "mesoass or omega")->check(CLI::IsMember({"mesoass", "omega"}));
  p->add_option("--prime", c.prime, "Prime for omega")->delimiter(',');

  auto* r = app.add_subcommand("realize", "Realize a poset");
  r->add_option("input", c.input, "Poset file")->required();
  r->add_option("--kind", c.kind, "flat or graded")->check(CLI::IsMember({"flat", "graded"}));

  auto* g = app.add_subcommand("draw", "Class diagram of a box projection");
  g->add_option("input", c.input, "Presentation file")->required();
  g->add_option("--project", c.project, "Projection axes")->delimiter(',');

  for (auto* sub : {w, d, v, p, r, g}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*w) {
      if (c.format.empty()) c.format = "text";
      return cmd_witnesses(c);
    }
    if (c.format.empty()) c.format = *g ? "dot" : (*r ? "text" : "json");
    if (*d) return cmd_decompose(c);
    if (*v) return cmd_verify(c);
    if (*p) return cmd_poset(c);
    if (*r) return cmd_realize(c);
    if (*g) return cmd_draw(c);
  } catch (meso::ParseError const& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (meso::CertificationError const& e) {
    std::cerr << "certification error: " << e.what() << "\n";
    return 3;
  } catch (meso::PreconditionError const& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
