#include "mrs/presentation.hpp"

#include <algorithm>
#include <map>

namespace mrs {

namespace {

std::vector<std::string> alphabet_for(const std::vector<std::string>& names, const char* prefix) {
  const bool usable =
      std::all_of(names.begin(), names.end(), [](const std::string& s) { return valid_letter(s); }) &&
      prefix_free(names);
  if (usable) return names;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < names.size(); ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

}  // namespace

Element CanonicalPresentation::nu(std::size_t m) const {
  if (!letter_of.at(m)) return {};
  return free().letter(*letter_of[m]);
}

std::size_t CanonicalPresentation::eval(const Element& word) const {
  std::size_t acc = monoid.identity();
  for (auto l : word.v) acc = monoid.mul(acc, element_of.at(static_cast<std::size_t>(l)));
  return acc;
}

CanonicalPresentation g_of_monoid(const FiniteMonoid& m) {
  CanonicalPresentation g;
  g.monoid = m;
  g.letter_of.assign(m.order(), std::nullopt);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m.order(); ++i) {
    if (i == m.identity()) continue;
    g.letter_of[i] = g.element_of.size();
    g.element_of.push_back(i);
    names.push_back(m.name(i));
  }
  auto free = make_free(alphabet_for(names, "g"));
  const auto word = [&](std::size_t x) {
    return g.letter_of[x] ? Element({static_cast<std::int64_t>(*g.letter_of[x])}) : Element{};
  };
  std::vector<Rule> rules;
  for (std::size_t a = 0; a < m.order(); ++a)
    for (std::size_t b = 0; b < m.order(); ++b)
      rules.push_back({free->op(word(a), word(b)), word(m.mul(a, b))});
  g.mrs = Mrs(free, std::move(rules));
  return g;
}

Mrs naive_g(const FiniteMonoid& m) {
  auto free = make_free(alphabet_for(m.names(), "g"));
  std::vector<Rule> rules;
  const auto letter = [](std::size_t x) { return Element({static_cast<std::int64_t>(x)}); };
  for (std::size_t a = 0; a < m.order(); ++a)
    for (std::size_t b = 0; b < m.order(); ++b)
      rules.push_back({free->op(letter(a), letter(b)), letter(m.mul(a, b))});
  return Mrs(free, std::move(rules));
}

MrsHom g_of_hom(const CanonicalPresentation& source, const CanonicalPresentation& target,
                const MonoidMap& phi) {
  if (!is_homomorphism(source.monoid, target.monoid, phi))
    throw Refused("map is not a monoid homomorphism");
  std::vector<Element> images;
  for (std::size_t l = 0; l < source.element_of.size(); ++l)
    images.push_back(target.nu(phi[source.element_of[l]]));
  return MrsHom::from_letters(source.mrs, target.mrs, std::move(images));
}

MrsHom counit(const Mrs& a, const IrreducibleMonoid& ia, const CanonicalPresentation& gia) {
  if (gia.monoid.order() != ia.elements.size()) throw UsageError("presentation does not match I(A)");
  std::vector<Element> images;
  for (std::size_t l = 0; l < gia.element_of.size(); ++l)
    images.push_back(ia.elements.at(gia.element_of[l]));
  return MrsHom::from_letters(gia.mrs, a, std::move(images));
}

Bounds presentation_bounds(const FiniteMonoid& m) {
  Bounds b;
  const std::size_t k = m.order() > 0 ? m.order() - 1 : 0;
  std::size_t len = 3, count = 0, layer = 1;
  for (std::size_t l = 0; l <= 6; ++l) {
    count += layer;
    if (count > 20000) break;
    len = std::max<std::size_t>(3, l);
    layer *= std::max<std::size_t>(k, 1);
  }
  b.size = len;
  return b;
}

bool check_unit_identity(const FiniteMonoid& m, std::string* why) {
  const auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  const CanonicalPresentation g = g_of_monoid(m);
  IrreducibleMonoid igm;
  try {
    igm = monoid_of_irreducibles(g.mrs, presentation_bounds(m));
  } catch (const Refused& e) {
    return fail(std::string("I(G(M)) not materialized: ") + e.what());
  }
  if (igm.elements.size() != m.order()) return fail("I(G(M)) has the wrong order");
  MonoidMap f;
  for (const auto& w : igm.elements) {
    const std::size_t x = g.eval(w);
    if (g.nu(x) != w) return fail("irreducible " + g.mrs.print(w) + " is not nu of an element");
    f.push_back(x);
  }
  if (f[igm.table.identity()] != m.identity()) return fail("identity is not preserved");
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < f.size(); ++j)
      if (f[igm.table.mul(i, j)] != m.mul(f[i], f[j]))
        return fail("tables differ at (" + igm.table.name(i) + ", " + igm.table.name(j) + ")");
  return true;
}

TriangleReport check_triangles(const Mrs& a, const FiniteMonoid& m, std::size_t word_bound,
                               const Bounds& bounds) {
  TriangleReport r;

  const IrreducibleMonoid ia = monoid_of_irreducibles(a, bounds);
  const CanonicalPresentation gia = g_of_monoid(ia.table);
  const MrsHom eps_a = counit(a, ia, gia);
  r.first = true;
  for (std::size_t u = 0; u < ia.elements.size(); ++u) {
    const Element back = normal_form(a, eps_a(gia.nu(u)), bounds).value;
    if (back != ia.elements[u]) {
      r.first = false;
      r.detail += "I(eps_A) o eta moves " + a.print(ia.elements[u]) + " to " + a.print(back) + "; ";
    }
  }

  const CanonicalPresentation gm = g_of_monoid(m);
  const IrreducibleMonoid igm = monoid_of_irreducibles(gm.mrs, presentation_bounds(m));
  MonoidMap eta;
  for (std::size_t x = 0; x < m.order(); ++x) {
    auto idx = igm.index(gm.nu(x));
    if (!idx) {
      r.detail += "nu(" + m.name(x) + ") is not irreducible in G(M); ";
      return r;
    }
    eta.push_back(*idx);
  }
  const CanonicalPresentation gigm = g_of_monoid(igm.table);
  const MrsHom g_eta = g_of_hom(gm, gigm, eta);
  const MrsHom eps_gm = counit(gm.mrs, igm, gigm);
  const MrsHom composite = MrsHom::compose(eps_gm, g_eta);
  r.second = true;
  for (const auto& w : gm.mrs.backend().enumerate(word_bound))
    if (composite(w) != w) {
      r.second = false;
      r.detail += "eps o G(eta) moves " + gm.mrs.print(w) + "; ";
      break;
    }
  return r;
}

HomEquivalenceReport check_hom_equivalence(const FiniteMonoid& m, const Mrs& a,
                                           const Bounds& bounds, HomEquivalenceLimits limits) {
  const Backend& ab = a.backend();
  if (!ab.finite()) throw Refused("hom-equivalence check needs a finite target carrier");
  const std::vector<Element> carrier = ab.enumerate(0);
  if (m.order() > limits.max_monoid || carrier.size() > limits.max_target)
    throw Refused("hom-equivalence search exceeds the configured size limits");

  HomEquivalenceReport rep;
  const IrreducibleMonoid ia = monoid_of_irreducibles(a, bounds);
  const Certification cert = certify(a, bounds);
  const std::vector<MonoidMap> homs = enumerate_homomorphisms(m, ia.table);
  rep.monoid_homs = homs.size();

  const CanonicalPresentation gm = g_of_monoid(m);
  const std::size_t k = gm.element_of.size();
  std::vector<MrsHom> reps;
  std::vector<MonoidMap> rep_maps;
  std::vector<std::size_t> digits(k, 0);
  while (true) {
    std::vector<Element> images;
    for (auto d : digits) images.push_back(carrier[d]);
    MrsHom f = MrsHom::from_letters(gm.mrs, a, images);
    if (check_mrs_hom(f, bounds).verdict.ok()) {
      ++rep.mrs_homs;
      bool placed = false;
      for (const auto& r : reps)
        if (two_cell_exists(f, r, bounds, &cert) == Tri::True) {
          placed = true;
          break;
        }
      if (!placed) {
        MonoidMap fm;
        for (std::size_t x = 0; x < m.order(); ++x) {
          auto idx = ia.index(normal_form(a, f(gm.nu(x)), bounds).value);
          fm.push_back(idx ? *idx : ia.elements.size());
        }
        reps.push_back(std::move(f));
        rep_maps.push_back(std::move(fm));
      }
    }
    std::size_t pos = 0;
    while (pos < k && ++digits[pos] == carrier.size()) digits[pos++] = 0;
    if (pos == k) break;
  }
  rep.classes = reps.size();

  std::vector<MonoidMap> sorted_maps = rep_maps, sorted_homs = homs;
  std::sort(sorted_maps.begin(), sorted_maps.end());
  std::sort(sorted_homs.begin(), sorted_homs.end());
  const bool injective =
      std::adjacent_find(sorted_maps.begin(), sorted_maps.end()) == sorted_maps.end();
  rep.bijective = injective && sorted_maps == sorted_homs;
  rep.detail = std::to_string(rep.mrs_homs) + " MRS-homomorphisms G(M) -> A in " +
               std::to_string(rep.classes) + " classes; " + std::to_string(rep.monoid_homs) +
               " monoid homomorphisms M -> I(A)";
  return rep;
}

bool counit_naturality(const MrsHom& phi, const Bounds& bounds) {
  const IrreducibleMonoid ia = monoid_of_irreducibles(phi.source(), bounds);
  const IrreducibleMonoid ib = monoid_of_irreducibles(phi.target(), bounds);
  const CanonicalPresentation gia = g_of_monoid(ia.table), gib = g_of_monoid(ib.table);
  const MrsHom eps_a = counit(phi.source(), ia, gia);
  const MrsHom eps_b = counit(phi.target(), ib, gib);
  const MonoidMap sharp = induced_hom(phi, ia, ib, bounds);
  const MrsHom gi_phi = g_of_hom(gia, gib, sharp);
  const Certification cert = certify(phi.target(), bounds);
  return two_cell_exists(MrsHom::compose(phi, eps_a), MrsHom::compose(eps_b, gi_phi), bounds,
                         &cert) == Tri::True;
}

}  // namespace mrs
