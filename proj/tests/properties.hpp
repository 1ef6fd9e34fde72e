#pragma once

// Randomized property checks shared by test_properties and the acceptance
// binary. Every check draws from a seeded mt19937 and counts only the draws
// where the property applies.

#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mrs/collapse.hpp"
#include "mrs/format.hpp"
#include "mrs/irreducibles.hpp"
#include "mrs/presentation.hpp"

namespace props {

using namespace mrs;

struct Result {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void fail(const std::string& why) {
    if (!failures++) first_failure = why;
  }
  bool ok(std::size_t min_cases) const { return failures == 0 && cases >= min_cases; }
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Mrs load(const std::string& name) { return parse_mrs(slurp("fixtures/" + name)); }

/// Certified systems from the fixture corpus.
inline std::vector<Mrs> certified_corpus() {
  return {load("naturals_mod2.mrs"),
          load("powerset.mrs"),
          load("cancel.mrs"),
          load("g_z2.mrs"),
          load("z2.mrs"),
          gen_horn_rules(parse_horn(slurp("fixtures/chain.horn"))),
          gen_closure_rules(parse_topology(slurp("fixtures/sierpinski.top")))};
}

/// Elements to draw from: the whole carrier when finite, else a size-bounded slice.
inline std::vector<Element> pool(const Backend& m, std::size_t size = 6) {
  if (m.finite()) return m.enumerate(0);
  Bounds b;
  b.size = size;
  return m.enumerate(fit_bounds(m, b, 2000).size);
}

template <class T>
const T& pick(std::mt19937& rng, const std::vector<T>& xs) {
  return xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
}

// u ->* a and v ->* b splice to uv ->* ab.
inline Result splice_products(std::mt19937& rng, std::size_t n) {
  Result r{"splice of two derivations"};
  const auto corpus = certified_corpus();
  while (r.cases < n) {
    const Mrs& s = pick(rng, corpus);
    const auto elems = pool(s.backend());
    const Element u = pick(rng, elems), v = pick(rng, elems);
    const auto tu = normal_form(s, u).trace, tv = normal_form(s, v).trace;
    const auto t = splice_product(s.backend(), tu, tv);
    ++r.cases;
    if (auto why = validate_trace(s, t)) r.fail(s.print(u) + " * " + s.print(v) + ": " + *why);
    else if (t.from != s.backend().op(u, v) || t.to != s.backend().op(tu.to, tv.to))
      r.fail("endpoints of the splice for " + s.print(u) + " * " + s.print(v));
  }
  return r;
}

// u ->* a gives xuy ->* xay.
inline Result congruence_splices(std::mt19937& rng, std::size_t n) {
  Result r{"derivation in context"};
  const auto corpus = certified_corpus();
  while (r.cases < n) {
    const Mrs& s = pick(rng, corpus);
    const auto elems = pool(s.backend(), 4);
    const Element u = pick(rng, elems), x = pick(rng, elems), y = pick(rng, elems);
    const auto tu = normal_form(s, u).trace;
    const auto t = in_context(s.backend(), tu, x, y);
    ++r.cases;
    if (auto why = validate_trace(s, t)) r.fail(s.print(u) + " in context: " + *why);
    else if (t.from != s.backend().op3(x, u, y) || t.to != s.backend().op3(x, tu.to, y))
      r.fail("endpoints in context for " + s.print(u));
  }
  return r;
}

inline Result nf_of_products(std::mt19937& rng, std::size_t n) {
  Result r{"nf(uv) = nf(nf(u) nf(v))"};
  const auto corpus = certified_corpus();
  while (r.cases < n) {
    const Mrs& s = pick(rng, corpus);
    const Backend& m = s.backend();
    const auto elems = pool(m);
    const Element u = pick(rng, elems), v = pick(rng, elems);
    const auto nf = [&](const Element& e) { return normal_form(s, e).value; };
    ++r.cases;
    if (nf(m.op(u, v)) != nf(m.op(nf(u), nf(v))))
      r.fail(s.print(u) + " * " + s.print(v) + " in " + m.header());
  }
  return r;
}

/// MRS homomorphisms between corpus systems: counits, naturals -> Z/2 and identities.
inline std::vector<MrsHom> corpus_homs() {
  std::vector<MrsHom> out;
  for (const auto& s : certified_corpus()) {
    out.push_back(MrsHom::identity(s));
    try {
      const auto is = monoid_of_irreducibles(s);
      const auto g = g_of_monoid(is.table);
      out.push_back(counit(s, is, g));
    } catch (const Refused&) {
    }
  }
  const Mrs n2 = load("naturals_mod2.mrs"), z2 = load("z2.mrs");
  out.push_back(MrsHom::from_naturals(n2, z2, z2.backend().parse("1")));
  return out;
}

inline Result nf_through_homs(std::mt19937& rng, std::size_t n) {
  Result r{"nf(phi(u)) = nf(phi(nf(u)))"};
  const auto homs = corpus_homs();
  while (r.cases < n) {
    const MrsHom& phi = pick(rng, homs);
    const Mrs& a = phi.source();
    const Mrs& b = phi.target();
    const Element u = pick(rng, pool(a.backend()));
    const auto nfb = [&](const Element& e) { return normal_form(b, e).value; };
    ++r.cases;
    if (nfb(phi(u)) != nfb(phi(normal_form(a, u).value)))
      r.fail(phi.description() + " at " + a.print(u));
  }
  return r;
}

/// A random MRS homomorphism s -> t, or nullopt when the draw is not one.
inline std::optional<MrsHom> random_hom(std::mt19937& rng, const Mrs& s, const Mrs& t) {
  const Backend& m = s.backend();
  const auto targets = pool(t.backend(), 3);
  std::optional<MrsHom> phi;
  if (auto* f = dynamic_cast<const FreeBackend*>(&m)) {
    std::vector<Element> images;
    for (std::size_t i = 0; i < f->letters().size(); ++i) images.push_back(pick(rng, targets));
    phi = MrsHom::from_letters(s, t, images);
  } else if (m.kind() == BackendKind::Naturals) {
    phi = MrsHom::from_naturals(s, t, pick(rng, targets));
  } else if (auto* p = dynamic_cast<const PowersetBackend*>(&m)) {
    std::vector<Element> images;
    for (std::size_t i = 0; i < p->base().size(); ++i) images.push_back(pick(rng, targets));
    phi = MrsHom::from_atoms(s, t, images);
  } else if (auto* tb = dynamic_cast<const TableBackend*>(&m)) {
    auto* tt = dynamic_cast<const TableBackend*>(&t.backend());
    if (!tt) return std::nullopt;
    const auto all = enumerate_homomorphisms(tb->monoid(), tt->monoid());
    if (all.empty()) return std::nullopt;
    const auto& f = pick(rng, all);
    std::map<Element, Element> images;
    for (std::size_t i = 0; i < f.size(); ++i) images.emplace(TableBackend::at(i), TableBackend::at(f[i]));
    phi = MrsHom::from_table(s, t, images);
  }
  if (!phi || !check_mrs_hom(*phi).verdict.ok()) return std::nullopt;
  return phi;
}

// (psi o phi)^# = psi^# o phi^#
inline Result induced_composition(std::mt19937& rng, std::size_t n) {
  Result r{"induced maps compose"};
  std::vector<Mrs> systems;
  std::vector<IrreducibleMonoid> irr;
  for (const auto& s : certified_corpus()) {
    try {
      irr.push_back(monoid_of_irreducibles(s));
      systems.push_back(s);
    } catch (const Refused&) {
    }
  }
  for (const auto& m : enumerate_monoids(2)) {
    systems.push_back(Mrs(make_table(m), {}));
    irr.push_back(monoid_of_irreducibles(systems.back()));
  }
  std::uniform_int_distribution<std::size_t> idx(0, systems.size() - 1);
  std::size_t draws = 0;
  while (r.cases < n && draws++ < 200 * n) {
    const std::size_t i = idx(rng), j = idx(rng), k = idx(rng);
    const auto phi = random_hom(rng, systems[i], systems[j]);
    if (!phi) continue;
    const auto psi = random_hom(rng, systems[j], systems[k]);
    if (!psi) continue;
    const MonoidMap f = induced_hom(*phi, irr[i], irr[j]);
    const MonoidMap g = induced_hom(*psi, irr[j], irr[k]);
    const MonoidMap h = induced_hom(MrsHom::compose(*psi, *phi), irr[i], irr[k]);
    ++r.cases;
    for (std::size_t x = 0; x < f.size(); ++x)
      if (h[x] != g[f[x]]) {
        r.fail(psi->description() + " after " + phi->description() + " at " + irr[i].table.name(x));
        break;
      }
  }
  return r;
}

struct CollapseFixture {
  Mrs system;
  std::vector<Rule> j;
  Bounds bounds;
};

inline std::vector<CollapseFixture> coherent_fixtures() {
  std::vector<CollapseFixture> out;
  const Mrs cancel = load("cancel.mrs");
  out.push_back({cancel, {cancel.rules()[0]}, {}});
  const Mrs pw = load("powerset.mrs");
  out.push_back({pw, {pw.rules()[0]}, {}});
  out.push_back({pw, {pw.rules()[1]}, {}});
  out.push_back({pw, pw.rules(), {}});
  const Mrs horn = gen_horn_rules(parse_horn(slurp("fixtures/chain.horn")));
  out.push_back({horn, {horn.rules()[0]}, {}});
  out.push_back({horn, {horn.rules()[1]}, {}});
  const Mrs n2 = load("naturals_mod2.mrs");
  out.push_back({n2, n2.rules(), {}});
  return out;
}

// a ->_R b gives nf_J(a) ->* nf_J(b) in A_J.
inline Result steps_project(std::mt19937& rng, std::size_t n) {
  Result r{"R-steps project to R_J-derivations"};
  std::vector<std::pair<CollapseFixture, CollapsedSystem>> fx;
  for (auto& f : coherent_fixtures()) {
    if (!check_coherent(f.system, f.j, f.bounds).ok()) {
      r.fail("fixture subset is not coherent over " + f.system.backend().header());
      continue;
    }
    fx.emplace_back(f, collapse(f.system, f.j, f.bounds));
  }
  if (fx.empty()) return r;
  while (r.cases < n) {
    const auto& [f, c] = pick(rng, fx);
    const Mrs& s = f.system;
    const Element a = pick(rng, pool(s.backend(), 5));
    const auto succ = proper_successors(s, a, f.bounds);
    if (succ.elements.empty()) continue;
    const Element b = pick(rng, succ.elements);
    ++r.cases;
    const auto reach = reaches(c.mrs, c.projection(a), c.projection(b), f.bounds);
    if (!reach.trace) r.fail(s.print(a) + " -> " + s.print(b) + " does not project");
    else if (auto why = validate_trace(c.mrs, *reach.trace)) r.fail("projected trace: " + *why);
  }
  return r;
}

// Irreducible in A_J implies irreducible in A.
inline Result irreducibles_lift(std::mt19937& rng, std::size_t n) {
  Result r{"irreducibles of A_J are irreducible in A"};
  std::vector<std::pair<CollapseFixture, CollapsedSystem>> fx;
  for (auto& f : coherent_fixtures()) fx.emplace_back(f, collapse(f.system, f.j, f.bounds));
  std::size_t applicable = 0, draws = 0;
  while (r.cases < n && draws++ < 100 * n) {
    const auto& [f, c] = pick(rng, fx);
    const Mrs& s = f.system;
    const Mrs jsys(s.backend_ptr(), f.j);
    const Element x = pick(rng, pool(s.backend(), 5));
    if (is_irreducible(jsys, x, f.bounds) != Tri::True) continue;
    ++r.cases;
    if (is_irreducible(c.mrs, c.projection(x), f.bounds) != Tri::True) continue;
    ++applicable;
    if (is_irreducible(s, x, f.bounds) != Tri::True) r.fail(s.print(x) + " over " + s.backend().header());
  }
  if (!applicable) r.fail("no draw was irreducible in A_J");
  return r;
}

inline std::vector<Result> all(std::uint32_t seed, std::size_t n) {
  std::mt19937 rng(seed);
  return {splice_products(rng, n),  congruence_splices(rng, n), nf_of_products(rng, n),
          nf_through_homs(rng, n),  induced_composition(rng, n), steps_project(rng, n),
          irreducibles_lift(rng, n)};
}

}  // namespace props
