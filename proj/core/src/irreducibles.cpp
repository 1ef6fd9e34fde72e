#include "mrs/irreducibles.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace mrs {

IrreducibleSet irreducible_elements(const Mrs& mrs, const Bounds& bounds) {
  IrreducibleSet out;
  for (const auto& e : mrs.backend().enumerate(bounds.size)) {
    switch (is_irreducible(mrs, e, bounds)) {
      case Tri::True: out.elements.push_back(e); break;
      case Tri::Unknown: out.truncated = true; break;
      case Tri::False: break;
    }
  }
  out.complete = mrs.backend().finite() && !out.truncated;
  return out;
}

std::optional<std::size_t> IrreducibleMonoid::index(const Element& e) const {
  auto it = std::find(elements.begin(), elements.end(), e);
  if (it == elements.end()) return std::nullopt;
  return static_cast<std::size_t>(it - elements.begin());
}

namespace {

// Smallest k such that every element of size k + 1 is reducible, searched up
// to the size bound. On a graded carrier this bounds the size of irreducibles.
std::optional<std::size_t> irreducible_size_cap(const Mrs& mrs, const Bounds& bounds,
                                                std::optional<std::size_t> hint) {
  const Backend& m = mrs.backend();
  const auto level_reducible = [&](std::size_t level) {
    for (const auto& e : m.enumerate(level))
      if (m.size(e) == level && is_irreducible(mrs, e, bounds) != Tri::False) return false;
    return true;
  };
  if (hint) {
    if (level_reducible(*hint + 1)) return hint;
    return std::nullopt;
  }
  for (std::size_t k = 0; k < bounds.size; ++k)
    if (level_reducible(k + 1)) return k;
  return std::nullopt;
}

}  // namespace

IrreducibleMonoid monoid_of_irreducibles(const Mrs& mrs, const Bounds& bounds,
                                         std::optional<std::size_t> completeness_bound) {
  const Backend& m = mrs.backend();
  const Certification cert = certify(mrs, bounds);
  if (!cert.ok()) {
    const bool unknown = !cert.noetherian.refuted() && !cert.confluent.refuted();
    throw Refused("system is not certified Noetherian and confluent: noetherian " +
                      describe(cert.noetherian) + "; confluent " + describe(cert.confluent),
                  unknown);
  }

  IrreducibleMonoid out;
  if (m.finite()) {
    IrreducibleSet irr = irreducible_elements(mrs, bounds);
    if (!irr.complete) throw Refused("irreducible set is truncated", true);
    out.elements = std::move(irr.elements);
  } else {
    if (!cert.noetherian.ok() || cert.noetherian.bounded)
      throw Refused("infinite carrier without a global termination certificate", true);
    if (!m.graded())
      throw Refused("irreducibles of this carrier cannot be shown finite", true);
    auto cap = irreducible_size_cap(mrs, bounds, completeness_bound);
    if (!cap) throw Refused("irreducibles are not bounded in size within the bound", true);
    Bounds b = bounds;
    b.size = *cap;
    IrreducibleSet irr = irreducible_elements(mrs, b);
    if (irr.truncated) throw Refused("irreducible set is truncated", true);
    out.elements = std::move(irr.elements);
    out.bounded = cert.confluent.bounded;
    out.bound = cert.confluent.bound;
  }

  const std::size_t n = out.elements.size();
  std::unordered_map<Element, std::size_t, ElementHash> index;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    index.emplace(out.elements[i], i);
    names.push_back(m.print(out.elements[i]));
  }
  const auto lookup = [&](const Element& e) {
    const Element nf = normal_form(mrs, e, bounds).value;
    auto it = index.find(nf);
    if (it == index.end())
      throw Refused("normal form " + m.print(nf) + " lies outside the enumerated irreducibles");
    return it->second;
  };
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i][j] = lookup(m.op(out.elements[i], out.elements[j]));
  out.table = FiniteMonoid(std::move(names), lookup(m.identity()), std::move(table));
  return out;
}

std::optional<std::size_t> QuotientMonoid::class_of(const Element& e) const {
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (std::find(classes[i].begin(), classes[i].end(), e) != classes[i].end()) return i;
  return std::nullopt;
}

QuotientMonoid quotient_monoid(const Mrs& mrs, const Bounds& bounds) {
  const Backend& m = mrs.backend();
  if (!m.finite()) throw Refused("quotient needs a finite carrier");
  const std::vector<Element> all = m.enumerate(0);
  std::unordered_map<Element, std::size_t, ElementHash> index;
  for (std::size_t i = 0; i < all.size(); ++i) index.emplace(all[i], i);

  std::vector<std::size_t> parent(all.size());
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < all.size(); ++i) {
    Successors s = one_step(mrs, all[i], bounds);
    if (s.truncated) throw Refused("one-step graph is truncated", true);
    for (const auto& e : s.elements) {
      std::size_t a = find(i), b = find(index.at(e));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }

  QuotientMonoid q;
  std::vector<std::size_t> class_index(all.size());
  std::unordered_map<std::size_t, std::size_t> root_class;
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto [it, fresh] = root_class.emplace(find(i), q.classes.size());
    if (fresh) q.classes.emplace_back();
    q.classes[it->second].push_back(all[i]);
    class_index[i] = it->second;
  }
  const std::size_t n = q.classes.size();
  std::vector<std::string> names;
  for (const auto& c : q.classes) names.push_back(m.print(c.front()));
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      table[i][j] = class_index[index.at(m.op(q.classes[i].front(), q.classes[j].front()))];
  q.table = FiniteMonoid(std::move(names), class_index[index.at(m.identity())], std::move(table));
  return q;
}

std::vector<Element> generators(const Backend& m) {
  std::vector<Element> out;
  switch (m.kind()) {
    case BackendKind::Free: {
      const auto& f = static_cast<const FreeBackend&>(m);
      for (std::size_t i = 0; i < f.letters().size(); ++i) out.push_back(f.letter(i));
      break;
    }
    case BackendKind::Naturals: out.push_back(NaturalsBackend::value(1)); break;
    case BackendKind::Powerset: {
      const auto& p = static_cast<const PowersetBackend&>(m);
      for (std::size_t i = 0; i < p.base().size(); ++i) out.push_back(PowersetBackend::set(1ULL << i));
      break;
    }
    case BackendKind::Table: {
      const auto& t = static_cast<const TableBackend&>(m);
      for (auto g : generating_set(t.monoid())) out.push_back(TableBackend::at(g));
      break;
    }
    case BackendKind::Bicyclic:
      out = {BicyclicBackend::pair(0, 1), BicyclicBackend::pair(1, 0)};
      break;
    case BackendKind::FreeProduct: {
      const auto& fp = static_cast<const FreeProductBackend&>(m);
      for (const auto& g : generators(*fp.component())) out.push_back(fp.embed(g));
      for (std::size_t i = 0; i < fp.letters().size(); ++i) out.push_back(fp.letter(i));
      break;
    }
    case BackendKind::Collapse:
      out = m.enumerate(1);
      break;
  }
  return out;
}

// ---- homomorphisms ---------------------------------------------------------

MrsHom::MrsHom(Mrs source, Mrs target, Fn fn, std::string description, bool by_construction)
    : source_(std::move(source)),
      target_(std::move(target)),
      fn_(std::move(fn)),
      description_(std::move(description)),
      by_construction_(by_construction) {}

MrsHom MrsHom::identity(const Mrs& m) {
  return MrsHom(m, m, [](const Element& a) { return a; }, "identity", true);
}

MrsHom MrsHom::from_letters(const Mrs& source, const Mrs& target, std::vector<Element> images) {
  if (source.backend().kind() != BackendKind::Free)
    throw UsageError("letter images need a free source monoid");
  const auto& f = static_cast<const FreeBackend&>(source.backend());
  if (images.size() != f.letters().size()) throw UsageError("one image per letter is required");
  for (const auto& im : images)
    if (!target.backend().contains(im)) throw UsageError("letter image outside the target");
  BackendPtr tb = target.backend_ptr();
  return MrsHom(
      source, target,
      [tb, images = std::move(images)](const Element& w) {
        Element acc = tb->identity();
        for (auto l : w.v) acc = tb->op(acc, images.at(static_cast<std::size_t>(l)));
        return acc;
      },
      "letterwise", true);
}

MrsHom MrsHom::from_naturals(const Mrs& source, const Mrs& target, Element image_of_one) {
  if (source.backend().kind() != BackendKind::Naturals)
    throw UsageError("this constructor needs the naturals as source");
  BackendPtr tb = target.backend_ptr();
  return MrsHom(
      source, target,
      [tb, g = std::move(image_of_one)](const Element& n) {
        Element acc = tb->identity();
        for (std::int64_t i = 0; i < n.v.at(0); ++i) acc = tb->op(acc, g);
        return acc;
      },
      "1 |-> " + target.print(image_of_one), true);
}

MrsHom MrsHom::from_atoms(const Mrs& source, const Mrs& target, std::vector<Element> images) {
  if (source.backend().kind() != BackendKind::Powerset)
    throw UsageError("atom images need a powerset source");
  BackendPtr tb = target.backend_ptr();
  return MrsHom(
      source, target,
      [tb, images = std::move(images)](const Element& s) {
        Element acc = tb->identity();
        const auto mask = PowersetBackend::mask(s);
        for (std::size_t i = 0; i < images.size(); ++i)
          if (mask >> i & 1) acc = tb->op(acc, images[i]);
        return acc;
      },
      "atomwise", false);
}

MrsHom MrsHom::from_table(const Mrs& source, const Mrs& target, std::map<Element, Element> images) {
  if (!source.backend().finite()) throw UsageError("explicit maps need a finite source");
  for (const auto& e : source.backend().enumerate(0))
    if (!images.count(e)) throw UsageError("map is undefined at " + source.print(e));
  return MrsHom(
      source, target, [images = std::move(images)](const Element& a) { return images.at(a); },
      "explicit", false);
}

MrsHom MrsHom::compose(const MrsHom& second, const MrsHom& first) {
  if (!same_backend(first.target().backend(), second.source().backend()))
    throw UsageError("homomorphisms are not composable");
  Fn f = first.fn_, g = second.fn_;
  return MrsHom(first.source(), second.target(), [f, g](const Element& a) { return g(f(a)); },
                "(" + second.description() + ") o (" + first.description() + ")",
                first.by_construction_ && second.by_construction_);
}

HomCheck check_mrs_hom(const MrsHom& phi, const Bounds& bounds) {
  HomCheck out;
  const Backend& src = phi.source().backend();
  const Backend& dst = phi.target().backend();
  bool bounded = false;

  if (phi(src.identity()) != dst.identity()) {
    Witness w{WitnessKind::Element, {src.identity()}, {}, "identity is not preserved"};
    out.verdict = CheckVerdict::refuted(std::move(w), "identity is not preserved");
    return out;
  }
  if (!phi.homomorphic_by_construction()) {
    bounded = !src.finite();
    const auto elems = src.enumerate(std::min<std::size_t>(bounds.size, 4));
    for (const auto& x : elems)
      for (const auto& y : elems)
        if (phi(src.op(x, y)) != dst.op(phi(x), phi(y))) {
          Witness w{WitnessKind::Element, {x, y}, {}, "phi(x*y) != phi(x)*phi(y)"};
          out.verdict = CheckVerdict::refuted(
              std::move(w), "not multiplicative at (" + src.print(x) + ", " + src.print(y) + ")");
          return out;
        }
  }

  const auto& rules = phi.source().rules();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const Element u = phi(rules[i].lhs), v = phi(rules[i].rhs);
    Reach r = reaches(phi.target(), u, v, bounds);
    const std::string name = "rule " + std::to_string(i + 1) + " (" + phi.source().print(rules[i]) + ")";
    if (r.trace) {
      out.rule_traces.push_back(std::move(*r.trace));
      continue;
    }
    if (r.definitive) {
      Witness w{WitnessKind::Rule, {rules[i].lhs, rules[i].rhs, u, v}, {},
                name + ": image of the left side does not rewrite to the image of the right side"};
      out.verdict = CheckVerdict::refuted(std::move(w), name + " is not preserved");
    } else {
      out.verdict = CheckVerdict::unknown(bounds.size, name + ": reachability undecided");
    }
    return out;
  }
  out.verdict = bounded ? CheckVerdict::verified_up_to(std::min<std::size_t>(bounds.size, 4),
                                                        "multiplicativity checked up to the bound")
                        : CheckVerdict::verified();
  return out;
}

MonoidMap induced_hom(const MrsHom& phi, const IrreducibleMonoid& source,
                      const IrreducibleMonoid& target, const Bounds& bounds) {
  MonoidMap f;
  for (const auto& u : source.elements) {
    const Element nf = normal_form(phi.target(), phi(u), bounds).value;
    auto idx = target.index(nf);
    if (!idx) throw std::logic_error("normal form outside the target irreducibles");
    f.push_back(*idx);
  }
  if (!is_homomorphism(source.table, target.table, f))
    throw std::logic_error("induced map is not a monoid homomorphism");
  return f;
}

Tri two_cell_exists(const MrsHom& f, const MrsHom& g, const Bounds& bounds,
                    const Certification* target_cert) {
  if (!same_backend(f.source().backend(), g.source().backend()) ||
      !same_backend(f.target().backend(), g.target().backend()))
    throw UsageError("2-cells need parallel homomorphisms");
  Tri result = Tri::True;
  for (const auto& a : generators(f.source().backend())) {
    const Element fa = f(a), ga = g(a);
    if (fa == ga) continue;
    switch (equivalent(f.target(), fa, ga, bounds, target_cert).status) {
      case Tri::False: return Tri::False;
      case Tri::Unknown: result = Tri::Unknown; break;
      case Tri::True: break;
    }
  }
  return result;
}

}  // namespace mrs
