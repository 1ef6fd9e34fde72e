#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "mrs/format.hpp"
#include "mrs/gett.hpp"
#include "mrs/irreducibles.hpp"
#include "mrs/presentation.hpp"
#include "mrs/tietze.hpp"
#include "report.hpp"

using namespace mrs;
using report::json;

namespace {

constexpr int kUsage = 3;

struct Globals {
  std::size_t bound = Bounds{}.size;
  std::size_t steps = Bounds{}.steps;
  bool as_json = false;

  Bounds bounds() const {
    Bounds b;
    b.size = bound;
    b.steps = steps;
    return b;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

// Output collected by a command: text for humans, json for --json.
struct Out {
  std::string text;
  json j = json::object();
  int code = 0;

  void line(const std::string& s) { text += s + "\n"; }
};

std::vector<std::string> printed(const Mrs& s, const std::vector<Element>& es) {
  std::vector<std::string> out;
  for (const auto& e : es) out.push_back(s.print(e));
  return out;
}

std::string joined(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : " ") + x;
  return s;
}

json table_json(const FiniteMonoid& m) {
  json rows = json::array();
  for (std::size_t x = 0; x < m.order(); ++x) {
    json row = json::array();
    for (std::size_t y = 0; y < m.order(); ++y) row.push_back(m.name(m.mul(x, y)));
    rows.push_back(row);
  }
  return {{"elements", m.names()}, {"identity", m.name(m.identity())}, {"table", rows}};
}

// ---- commands --------------------------------------------------------------

Out cmd_check(const Globals& g, const std::string& file) {
  const Mrs s = parse_mrs(slurp(file));
  const Certification c = certify(s, g.bounds());
  Out o;
  o.line("noetherian: " + report::verdict_text(s, c.noetherian));
  o.line("confluent: " + report::verdict_text(s, c.confluent));
  o.j = {{"noetherian", report::verdict_json(s, c.noetherian)},
         {"confluent", report::verdict_json(s, c.confluent)}};
  o.code = std::max(report::exit_code(c.noetherian), report::exit_code(c.confluent));
  if (c.noetherian.refuted() || c.confluent.refuted()) o.code = 1;
  return o;
}

Out cmd_nf(const Globals& g, const std::string& file, const std::string& element) {
  const Mrs s = parse_mrs(slurp(file));
  const Element a = s.backend().parse(element);
  Out o;
  try {
    const NormalForm n = normal_form(s, a, g.bounds());
    o.line(s.print(n.value));
    if (!n.trace.steps.empty()) o.line(print_trace(s, n.trace));
    if (!n.certain) {
      o.line("irreducibility of the result is open within the bound");
      o.code = 2;
    }
    o.j = {{"normal_form", s.print(n.value)}, {"certain", n.certain},
           {"trace", report::trace_json(s, n.trace)}};
  } catch (const BudgetExceeded& e) {
    o.line(std::string("step budget exhausted: ") + e.what());
    o.line(print_trace(s, e.partial()));
    o.j = {{"error", e.what()}, {"partial", report::trace_json(s, e.partial())}};
    o.code = 2;
  }
  return o;
}

Out cmd_irr(const Globals& g, const std::string& file) {
  const Mrs s = parse_mrs(slurp(file));
  const IrreducibleSet irr = irreducible_elements(s, g.bounds());
  Out o;
  const auto names = printed(s, irr.elements);
  o.line(joined(names));
  if (!irr.complete)
    o.line("listed up to size " + std::to_string(g.bound) + (irr.truncated ? ", some tests inconclusive" : ""));
  o.j = {{"irreducibles", names}, {"complete", irr.complete}, {"truncated", irr.truncated},
         {"bound", g.bound}};
  o.code = irr.truncated ? 2 : 0;
  return o;
}

Out cmd_quotient(const Globals& g, const std::string& file) {
  const Mrs s = parse_mrs(slurp(file));
  const QuotientMonoid q = quotient_monoid(s, g.bounds());
  Out o;
  json classes = json::array();
  for (std::size_t i = 0; i < q.classes.size(); ++i) {
    o.line("[" + q.table.name(i) + "] = { " + joined(printed(s, q.classes[i])) + " }");
    classes.push_back(printed(s, q.classes[i]));
  }
  o.text += print_table(q.table);
  o.j = {{"classes", classes}, {"monoid", table_json(q.table)}};
  return o;
}

Out cmd_present(const std::string& file, bool script) {
  const FiniteMonoid m = parse_table(slurp(file));
  Out o;
  if (script) {
    const GettScript sc = presentation_script(m);
    o.text = print_script(sc);
    o.j = {{"script", o.text}, {"moves", sc.moves.size()}};
  } else {
    const CanonicalPresentation p = g_of_monoid(m);
    o.text = print_mrs(p.mrs);
    o.j = {{"system", o.text}};
  }
  return o;
}

Out cmd_counit(const Globals& g, const std::string& file) {
  const Mrs a = parse_mrs(slurp(file));
  const IrreducibleMonoid ia = monoid_of_irreducibles(a, g.bounds());
  const CanonicalPresentation gia = g_of_monoid(ia.table);
  const MrsHom eps = counit(a, ia, gia);
  const HomCheck hc = check_mrs_hom(eps, g.bounds());
  Out o;
  json images = json::object();
  for (std::size_t l = 0; l < gia.free().letters().size(); ++l) {
    const Element w = gia.free().letter(l);
    o.line(gia.mrs.print(w) + " |-> " + a.print(eps(w)));
    images[gia.mrs.print(w)] = a.print(eps(w));
  }
  o.line("MRS homomorphism: " + report::verdict_text(gia.mrs, hc.verdict));
  o.j = {{"images", images}, {"homomorphism", report::verdict_json(gia.mrs, hc.verdict)}};
  o.code = report::exit_code(hc.verdict);
  return o;
}

Out cmd_adjoint(const Globals& g, const std::string& table, const std::string& system,
                std::size_t words) {
  const FiniteMonoid m = parse_table(slurp(table));
  Out o;
  std::string why;
  const bool unit = check_unit_identity(m, &why);
  o.line(std::string("I(G(M)) = M: ") + (unit ? "pass" : "fail " + why));
  o.j["unit_identity"] = unit;
  bool ok = unit;
  if (!system.empty()) {
    const Mrs a = parse_mrs(slurp(system));
    const TriangleReport t = check_triangles(a, m, words, g.bounds());
    o.line(std::string("first triangle: ") + (t.first ? "pass" : "fail"));
    o.line(std::string("second triangle: ") + (t.second ? "pass" : "fail") +
           (t.detail.empty() ? "" : " (" + t.detail + ")"));
    o.j["triangles"] = {{"first", t.first}, {"second", t.second}, {"detail", t.detail}};
    ok = ok && t.ok();
    try {
      const HomEquivalenceReport h = check_hom_equivalence(m, a, g.bounds());
      o.line(std::string("hom equivalence: ") + (h.bijective ? "pass" : "fail") + " (" +
             std::to_string(h.mrs_homs) + " MRS homs G(M) -> A in " + std::to_string(h.classes) +
             " classes, " + std::to_string(h.monoid_homs) + " monoid homs M -> I(A))");
      o.j["hom_equivalence"] = {{"monoid_homs", h.monoid_homs}, {"mrs_homs", h.mrs_homs},
                                {"classes", h.classes}, {"bijective", h.bijective}};
      ok = ok && h.bijective;
    } catch (const Refused& e) {
      o.line(std::string("hom equivalence: skipped (") + e.what() + ")");
      o.j["hom_equivalence"] = {{"skipped", e.what()}};
    }
  }
  o.code = ok ? 0 : 1;
  return o;
}

Out cmd_gett(const Globals& g, const std::string& file, const std::string& script, bool apply,
             const std::string& out_file, const std::string& emit_file) {
  const Mrs s = parse_mrs(slurp(file));
  const GettScript sc = parse_script(slurp(script));
  ReplayOptions opts;
  opts.search_missing = apply;
  const ReplayResult r = replay_script(s, sc, g.bounds(), opts);
  Out o;
  o.j = {{"moves", sc.moves.size()}, {"verdict", report::verdict_json(r.final_system, r.verdict)}};
  if (r.failed_at) {
    o.line("invalid at move " + std::to_string(*r.failed_at + 1) + ": " + describe(r.verdict));
    o.j["failed_at"] = *r.failed_at + 1;
  } else {
    o.line("valid: " + std::to_string(sc.moves.size()) + " moves, " + describe(r.verdict));
  }
  if (apply && !r.failed_at) {
    const std::string sys = print_mrs(r.final_system);
    if (out_file.empty()) o.text += sys;
    else spit(out_file, sys);
    if (!emit_file.empty()) spit(emit_file, print_script(r.completed));
    o.j["system"] = sys;
  }
  o.code = report::exit_code(r.verdict);
  return o;
}

Out cmd_tietze(const Globals& g, const std::string& fa, const std::string& fb,
               const std::string& identify, const std::string& out_file) {
  const Mrs a = parse_mrs(slurp(fa));
  const Mrs b = parse_mrs(slurp(fb));
  std::optional<MonoidMap> ident;
  if (!identify.empty()) {
    const IrreducibleMonoid ia = monoid_of_irreducibles(a, g.bounds());
    const IrreducibleMonoid ib = monoid_of_irreducibles(b, g.bounds());
    ident = parse_map(slurp(identify), ia.table, ib.table);
  }
  const PipelineReport rep = tietze_path(a, b, ident, g.bounds());
  Out o;
  json stages = json::array();
  for (const auto& st : rep.stages) {
    std::string pres = st.preserves_irreducibles ? (*st.preserves_irreducibles ? "yes" : "no") : "not tabulated";
    o.line("stage " + st.name + ": " + std::to_string(st.moves) + " moves, I preserved: " + pres);
    stages.push_back({{"name", st.name}, {"moves", st.moves}, {"first_move", st.first_move + 1},
                      {"preserves_irreducibles", st.preserves_irreducibles ? json(*st.preserves_irreducibles) : json()}});
  }
  o.line("replay: " + describe(rep.replay));
  o.line(std::string("final system: ") + rep.detail);
  const std::string text = print_script(rep.script);
  if (out_file.empty()) o.text += text;
  else spit(out_file, text);
  o.j = {{"stages", stages}, {"replay", report::verdict_json(a, rep.replay)},
         {"final_matches", rep.final_matches}, {"moves", rep.script.moves.size()}};
  o.code = report::exit_code(rep.replay);
  if (o.code == 0 && !rep.final_matches) o.code = 1;
  return o;
}

Out cmd_gen(const std::string& kind, const std::string& file) {
  const Mrs s = kind == "closure" ? gen_closure_rules(parse_topology(slurp(file)))
                                  : gen_horn_rules(parse_horn(slurp(file)));
  Out o;
  o.text = print_mrs(s);
  o.j = {{"system", o.text}};
  return o;
}

MrsHom hom_from_file(const Mrs& src, const Mrs& dst, const std::string& text) {
  const auto pairs = parse_map_lines(text);
  const Backend& m = src.backend();
  std::map<std::string, Element> img;
  for (const auto& [x, y] : pairs)
    if (!img.emplace(x, dst.backend().parse(y)).second) throw UsageError("'" + x + "' mapped twice");
  const auto image = [&](const std::string& x) {
    auto it = img.find(x);
    if (it == img.end()) throw UsageError("no image for '" + x + "'");
    return it->second;
  };
  if (auto* f = dynamic_cast<const FreeBackend*>(&m)) {
    std::vector<Element> images;
    for (const auto& l : f->letters()) images.push_back(image(l));
    return MrsHom::from_letters(src, dst, images);
  }
  if (m.kind() == BackendKind::Naturals) return MrsHom::from_naturals(src, dst, image("1"));
  if (auto* p = dynamic_cast<const PowersetBackend*>(&m)) {
    std::vector<Element> images;
    for (const auto& a : p->base()) images.push_back(img.count(a) ? image(a) : image("{" + a + "}"));
    return MrsHom::from_atoms(src, dst, images);
  }
  if (m.finite()) {
    std::map<Element, Element> images;
    for (const auto& e : m.enumerate(0)) images.emplace(e, image(m.print(e)));
    return MrsHom::from_table(src, dst, images);
  }
  throw UsageError("hom files support free, naturals, powerset and finite sources");
}

Out cmd_hom(const Globals& g, const std::string& fa, const std::string& fb, const std::string& fmap) {
  const Mrs a = parse_mrs(slurp(fa));
  const Mrs b = parse_mrs(slurp(fb));
  const MrsHom phi = hom_from_file(a, b, slurp(fmap));
  const HomCheck hc = check_mrs_hom(phi, g.bounds());
  Out o;
  o.line("MRS homomorphism: " + report::verdict_text(a, hc.verdict));
  json traces = json::array();
  for (std::size_t i = 0; i < hc.rule_traces.size(); ++i) {
    o.line("rule " + a.print(a.rules().at(i)) + ":\n" + print_trace(b, hc.rule_traces[i]));
    traces.push_back(report::trace_json(b, hc.rule_traces[i]));
  }
  o.j = {{"verdict", report::verdict_json(a, hc.verdict)}, {"rule_traces", traces}};
  o.code = report::exit_code(hc.verdict);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monoidal rewriting systems workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--bound", g.bound, "element size bound for exhaustive checks");
  app.add_option("--steps", g.steps, "derivation step budget");
  app.add_flag("--json", g.as_json, "structured output");

  std::function<Out()> run;
  std::string file, file2, arg, out_file, emit_file, identify, system;
  bool script = false;
  std::size_t words = 4;

  auto* check = app.add_subcommand("check", "Noetherian and confluence verdicts");
  check->add_option("system", file)->required();
  check->callback([&] { run = [&] { return cmd_check(g, file); }; });

  auto* nf = app.add_subcommand("nf", "normal form with its derivation");
  nf->add_option("system", file)->required();
  nf->add_option("element", arg)->required();
  nf->callback([&] { run = [&] { return cmd_nf(g, file, arg); }; });

  auto* irr = app.add_subcommand("irr", "irreducible elements");
  irr->add_option("system", file)->required();
  irr->callback([&] { run = [&] { return cmd_irr(g, file); }; });

  auto* quo = app.add_subcommand("quotient", "quotient monoid of a finite carrier");
  quo->add_option("system", file)->required();
  quo->callback([&] { run = [&] { return cmd_quotient(g, file); }; });

  auto* present = app.add_subcommand("present", "canonical presentation G(M) of a table");
  present->add_option("table", file)->required();
  present->add_flag("--script", script, "emit the GETT script from (M, {}) instead");
  present->callback([&] { run = [&] { return cmd_present(file, script); }; });

  auto* cu = app.add_subcommand("counit", "counit G(I(A)) -> A");
  cu->add_option("system", file)->required();
  cu->callback([&] { run = [&] { return cmd_counit(g, file); }; });

  auto* adj = app.add_subcommand("adjoint-check", "unit identity, triangles and hom equivalence");
  adj->add_option("table", file)->required();
  adj->add_option("--system", system, "system A for the triangles and the hom comparison");
  adj->add_option("--words", words, "word length for the second triangle");
  adj->callback([&] { run = [&] { return cmd_adjoint(g, file, system, words); }; });

  auto* gett = app.add_subcommand("gett", "GETT scripts");
  gett->require_subcommand(1);
  auto* apply = gett->add_subcommand("apply", "replay, searching for missing certificates");
  apply->add_option("system", file)->required();
  apply->add_option("script", file2)->required();
  apply->add_option("-o,--output", out_file, "write the final system here");
  apply->add_option("--emit", emit_file, "write the script with all certificates filled in");
  apply->callback([&] { run = [&] { return cmd_gett(g, file, file2, true, out_file, emit_file); }; });
  auto* validate = gett->add_subcommand("validate", "replay, revalidating every certificate");
  validate->add_option("system", file)->required();
  validate->add_option("script", file2)->required();
  validate->callback([&] { run = [&] { return cmd_gett(g, file, file2, false, "", ""); }; });

  auto* tz = app.add_subcommand("tietze", "GETT path between two presentations");
  tz->add_option("A", file)->required();
  tz->add_option("B", file2)->required();
  tz->add_option("--identify", identify, "map file I(A) -> I(B)");
  tz->add_option("-o,--output", out_file, "write the script here");
  tz->callback([&] { run = [&] { return cmd_tietze(g, file, file2, identify, out_file); }; });

  auto* gen = app.add_subcommand("gen", "rule generators");
  gen->require_subcommand(1);
  auto* clo = gen->add_subcommand("closure-rules", "U -> cl(U) for a finite space");
  clo->add_option("topology", file)->required();
  clo->callback([&] { run = [&] { return cmd_gen("closure", file); }; });
  auto* horn = gen->add_subcommand("horn-rules", "(G, G u D) for a Horn theory");
  horn->add_option("theory", file)->required();
  horn->callback([&] { run = [&] { return cmd_gen("horn", file); }; });

  auto* hom = app.add_subcommand("hom", "MRS homomorphisms");
  hom->require_subcommand(1);
  auto* hc = hom->add_subcommand("check", "check a map given on generators");
  hc->add_option("A", file)->required();
  hc->add_option("B", file2)->required();
  hc->add_option("map", arg)->required();
  hc->callback([&] { run = [&] { return cmd_hom(g, file, file2, arg); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    const Out o = run();
    if (g.as_json) {
      json j = o.j;
      j["exit_code"] = o.code;
      j["bound"] = g.bound;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << o.text;
    }
    return o.code;
  } catch (const ParseError& e) {
    std::cerr << "parse error";
    if (e.line()) std::cerr << " at line " << e.line() << ", column " << e.column();
    std::cerr << ": " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Refused& e) {
    std::cerr << "refused" << (e.unknown() ? " (unknown within bound)" : "") << ": " << e.what() << "\n";
    return e.unknown() ? 2 : 1;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 2;
  }
}
