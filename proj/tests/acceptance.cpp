// Acceptance suite: one PASS/FAIL line per criterion. Every comparison is
// exact; the only tolerances are the pinned search bounds noted per line.

#include <cstdio>
#include <exception>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "mrs/tietze.hpp"
#include "properties.hpp"

using namespace mrs;
using props::load;
using props::slurp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::set<std::string> printed(const Mrs& s, const std::vector<Element>& xs) {
  std::set<std::string> out;
  for (const auto& x : xs) out.insert(s.print(x));
  return out;
}

std::string join(const std::set<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : ", ") + x;
  return "{" + out + "}";
}

Outcome naturals_mod_two() {
  const Mrs a = load("naturals_mod2.mrs");
  Bounds b;
  b.size = 100;
  const auto irr = irreducible_elements(a, b);
  const auto im = monoid_of_irreducibles(a, b);
  bool nf_ok = true;
  for (int n = 0; n <= 100; ++n)
    nf_ok &= a.print(normal_form(a, a.parse(std::to_string(n))).value) == std::to_string(n % 2);
  const auto names = printed(a, irr.elements);
  const bool iso = find_isomorphism(im.table, cyclic_group(2)).has_value();
  return {names == std::set<std::string>{"0", "1"} && iso && nf_ok,
          "irreducibles " + join(names) + ", I(A) ~ Z/2: " + (iso ? "yes" : "no") +
              ", nf(n) = n mod 2 for n <= 100: " + (nf_ok ? "yes" : "no")};
}

Outcome powerset_example() {
  const Mrs a = load("powerset.mrs");
  const auto names = printed(a, irreducible_elements(a).elements);
  const auto noe = check_noetherian(a), con = check_confluent(a);
  const auto im = monoid_of_irreducibles(a);
  const auto q = quotient_monoid(a);
  const bool iso = find_isomorphism(im.table, q.table).has_value();
  const std::set<std::string> want{"{}", "{b}", "{c}", "{a,c}", "{a,b,c}"};
  const bool exhaustive = noe.ok() && con.ok() && !noe.bounded && !con.bounded;
  return {names == want && exhaustive && iso,
          "irreducibles " + join(names) + ", noetherian " + describe(noe) + ", confluent " +
              describe(con) + ", quotient ~ I(A): " + (iso ? "yes" : "no")};
}

Outcome bicyclic_collapse() {
  const Mrs a = load("cancel.mrs");
  const std::vector<Rule> j{a.rules()[0]};
  const auto c = collapse(a, j);
  std::set<std::string> rj;
  for (const auto& r : c.mrs.rules()) rj.insert(c.mrs.print(r));
  const auto v = check_coherent(a, j);
  std::set<std::string> irr, want{"_"};
  for (const auto& e : c.mrs.backend().enumerate(8))
    if (is_irreducible(c.mrs, e) == Tri::True) irr.insert(c.mrs.print(e));
  for (int k = 1; k <= 8; ++k) {
    want.insert(std::string(k, 'a'));
    want.insert(std::string(k, 'b'));
  }
  const bool ok = rj == std::set<std::string>{"ba -> _"} && v.ok() && v.bound == 8 && irr == want;
  return {ok, "R_J = " + join(rj) + ", coherent " + describe(v) + ", " + std::to_string(irr.size()) +
                  " irreducibles up to length 8 (expected " + std::to_string(want.size()) + ")"};
}

Outcome non_coherent() {
  const Mrs a = load("four_letter.mrs");
  Bounds b;
  b.size = 3;
  b.context = 2;
  const auto c = collapse(a, {a.rules()[0]}, b);
  const auto v = check_coherent(a, {a.rules()[0]}, b);
  if (!v.refuted() || !v.witness || v.witness->kind != WitnessKind::Cycle || v.witness->traces.empty())
    return {false, "expected a refuted verdict with a cycle, got " + describe(v)};
  const auto& t = v.witness->traces[0];
  std::string path = c.mrs.print(t.from);
  for (const auto& s : t.steps) path += " -> " + c.mrs.print(s.after);
  const bool ok = t.steps.size() <= 3 && t.from == t.to && path == "a -> aBb -> a" &&
                  !validate_trace(c.mrs, t);
  return {ok, "refuted, cycle " + path + " (" + std::to_string(t.steps.size()) + " steps, limit 3)"};
}

Outcome canonical_z2() {
  const auto g = g_of_monoid(cyclic_group(2));
  std::set<std::string> rules;
  for (const auto& r : g.mrs.rules()) rules.insert(g.mrs.print(r));
  const Mrs a = load("naturals_mod2.mrs");
  const auto ia = monoid_of_irreducibles(a);
  const auto gia = g_of_monoid(ia.table);
  const auto eps = counit(a, ia, gia);
  const auto e2 = a.print(eps(gia.mrs.parse("11"))), e4 = a.print(eps(gia.mrs.parse("1111")));
  const bool r2 = reaches(a, a.parse("2"), a.parse("0")).trace.has_value();
  const bool r4 = reaches(a, a.parse("4"), a.parse("0")).trace.has_value();
  const bool ok = rules == std::set<std::string>{"_ -> _", "1 -> 1", "11 -> _"} && e2 == "2" &&
                  e4 == "4" && r2 && r4;
  return {ok, "G(Z/2) rules " + join(rules) + ", eps(11) = " + e2 + ", eps(1111) = " + e4 +
                  ", 2 ->* 0: " + (r2 ? "yes" : "no") + ", 4 ->* 0: " + (r4 ? "yes" : "no")};
}

Outcome unit_identity() {
  std::size_t checked = 0;
  std::string why;
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& m : enumerate_monoids(n)) {
      ++checked;
      if (!check_unit_identity(m, &why)) return {false, "order " + std::to_string(n) + ": " + why};
    }
  std::vector<FiniteMonoid> extra{cyclic_group(2), cyclic_group(3),
                                  monoid_of_irreducibles(load("powerset.mrs")).table};
  for (const auto& m : extra) {
    ++checked;
    if (!check_unit_identity(m, &why)) return {false, why};
  }
  return {true, std::to_string(checked - 3) + " tables of order <= 3, Z/2, Z/3 and the 5-element powerset monoid"};
}

Outcome triangles() {
  const Mrs n2 = load("naturals_mod2.mrs");
  const auto t1 = check_triangles(n2, cyclic_group(2), 6);
  const Mrs pw = load("powerset.mrs");
  const auto pm = monoid_of_irreducibles(pw).table;
  const auto t2 = check_triangles(pw, pm, 4);
  const auto he = check_hom_equivalence(cyclic_group(2), Mrs(make_table(cyclic_group(2)), {}));
  const bool ok = t1.ok() && t2.ok() && he.classes == 2 && he.monoid_homs == 2 && he.bijective;
  return {ok, std::string("naturals/Z2 (words <= 6): ") + (t1.ok() ? "ok" : t1.detail) +
                  ", powerset (words <= 4): " + (t2.ok() ? "ok" : t2.detail) + ", " +
                  std::to_string(he.classes) + " two-cell classes <-> " + std::to_string(he.monoid_homs) +
                  " monoid homs"};
}

Outcome tietze() {
  const auto z2 = cyclic_group(2);
  const auto sc = presentation_script(z2);
  const auto r = replay_script(Mrs(make_table(z2), {}), sc);
  std::string why;
  const bool same = r.verdict.ok() && same_up_to_renaming(r.final_system, g_of_monoid(z2).mrs, &why);
  const auto p = tietze_path(g_of_monoid(z2).mrs, Mrs(make_table(z2), {}));
  const bool ok = same && p.replay.ok() && p.final_matches;
  return {ok, "presentation script: " + std::to_string(sc.moves.size()) + " moves, replay " +
                  describe(r.verdict) + (same ? ", ends at G(Z/2)" : ", " + why) + "; path G(Z/2) -> Z/2: " +
                  std::to_string(p.script.moves.size()) + " moves, replay " + describe(p.replay) +
                  (p.final_matches ? "" : ", final system differs")};
}

Outcome properties() {
  bool ok = true;
  std::string detail;
  for (const auto& r : props::all(20261016, 1000)) {
    ok &= r.ok(1000);
    if (!detail.empty()) detail += "; ";
    detail += r.name + " " + std::to_string(r.failures) + "/" + std::to_string(r.cases);
    if (r.failures) detail += " (" + r.first_failure + ")";
  }
  return {ok, "failures/cases: " + detail};
}

// Components of the one-step graph, built from the table of the carrier
// without going through the engine.
std::vector<std::size_t> brute_components(const Mrs& s, const std::vector<Element>& xs) {
  std::map<Element, std::size_t> idx;
  for (std::size_t i = 0; i < xs.size(); ++i) idx.emplace(xs[i], i);
  std::vector<std::size_t> parent(xs.size());
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  const Backend& m = s.backend();
  for (const auto& x : xs)
    for (const auto& y : xs)
      for (const auto& r : s.rules())
        parent[find(idx.at(m.op3(x, r.lhs, y)))] = find(idx.at(m.op3(x, r.rhs, y)));
  std::vector<std::size_t> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = find(i);
  return out;
}

Outcome oracle_agreement() {
  std::vector<Mrs> finite{load("powerset.mrs"), load("z2.mrs"),
                          gen_horn_rules(parse_horn(slurp("fixtures/chain.horn"))),
                          gen_closure_rules(parse_topology(slurp("fixtures/sierpinski.top"))),
                          gen_closure_rules(parse_topology(slurp("fixtures/discrete.top"))),
                          Mrs(make_table(parse_table(slurp("fixtures/nilpotent3.table"))), {})};
  std::size_t pairs = 0;
  for (const auto& s : finite) {
    const auto xs = s.backend().enumerate(0);
    const auto comp = brute_components(s, xs);
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t k = 0; k < xs.size(); ++k) {
        ++pairs;
        const Tri want = comp[i] == comp[k] ? Tri::True : Tri::False;
        if (equivalent(s, xs[i], xs[k]).status != want)
          return {false, s.print(xs[i]) + " ~ " + s.print(xs[k]) + " disagrees over " + s.backend().header()};
      }
  }
  const auto z2 = cyclic_group(2);
  const auto naive = monoid_of_irreducibles(naive_g(z2), presentation_bounds(z2));
  const bool iso = find_isomorphism(naive.table, z2).has_value();
  return {naive.table.order() == 3 && !iso,
          std::to_string(pairs) + " pairs agree on " + std::to_string(finite.size()) +
              " finite fixtures; naive G(Z/2) gives " + std::to_string(naive.table.order()) +
              " irreducibles, ~ Z/2: " + (iso ? "yes" : "no")};
}

Outcome horn_chain() {
  const auto spec = parse_horn(slurp("fixtures/chain.horn"));
  const Mrs h = gen_horn_rules(spec);
  const auto cl = [&](std::uint64_t u) {
    return PowersetBackend::mask(normal_form(h, PowersetBackend::set(u)).value);
  };
  const std::string p = h.print(cl(1) ? PowersetBackend::set(cl(1)) : Element{});
  bool laws = true;
  for (std::uint64_t u = 0; u < 8; ++u) {
    laws &= (u & cl(u)) == u && cl(cl(u)) == cl(u);
    for (std::uint64_t v = 0; v < 8; ++v)
      if ((u & v) == u) laws &= (cl(u) & cl(v)) == cl(u);
  }
  return {p == "{p,q,r}" && laws,
          "nf({p}) = " + p + ", extensive/monotone/idempotent over 8 subsets: " + (laws ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"naturals modulo 2", naturals_mod_two},
      {"powerset example", powerset_example},
      {"collapse to the bicyclic monoid", bicyclic_collapse},
      {"non-coherent subset", non_coherent},
      {"G(Z/2) and the counit", canonical_z2},
      {"unit identity", unit_identity},
      {"triangles and hom equivalence", triangles},
      {"presentation script and Tietze path", tietze},
      {"randomized properties", properties},
      {"oracle agreement", oracle_agreement},
      {"Horn closure", horn_chain},
  };
  int failed = 0, n = 0;
  for (const auto& c : criteria) {
    ++n;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", n, c.name, o.detail.c_str());
  }
  std::printf("%d/%d criteria pass\n", n - failed, n);
  return failed ? 1 : 0;
}
