#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mrs/engine.hpp"
#include "mrs/finite_monoid.hpp"

namespace mrs {

struct IrreducibleSet {
  std::vector<Element> elements;  // enumeration order
  bool complete = false;          // every irreducible of the carrier is listed
  bool truncated = false;         // some irreducibility test was inconclusive
};

IrreducibleSet irreducible_elements(const Mrs& mrs, const Bounds& bounds = {});

/// The monoid of irreducibles as an explicit table. Element i of the table is
/// elements[i]; names are the printed elements.
struct IrreducibleMonoid {
  FiniteMonoid table;
  std::vector<Element> elements;
  bool bounded = false;  // certification holds only up to a size bound
  std::size_t bound = 0;

  std::optional<std::size_t> index(const Element& e) const;
};

/// Refuses unless the system is certified and its irreducibles are exactly
/// enumerable: finite carriers, or an infinite carrier with a size certificate
/// together with `completeness_bound` (all irreducibles have size at most that).
IrreducibleMonoid monoid_of_irreducibles(const Mrs& mrs, const Bounds& bounds = {},
                                         std::optional<std::size_t> completeness_bound = {});

/// Lazy variant for systems whose irreducibles cannot be tabulated.
struct NormalFormOracle {
  Mrs mrs;
  Bounds bounds;
  Element operator()(const Element& a) const { return normal_form(mrs, a, bounds).value; }
  Element mul(const Element& x, const Element& y) const {
    return (*this)(mrs.backend().op(x, y));
  }
};

struct QuotientMonoid {
  FiniteMonoid table;
  std::vector<std::vector<Element>> classes;  // class i, members in enumeration order
  std::optional<std::size_t> class_of(const Element& e) const;
};

/// Connected components of the undirected one-step graph. Finite carriers only.
QuotientMonoid quotient_monoid(const Mrs& mrs, const Bounds& bounds = {});

/// Generators of a backend: single letters, 1, singletons, a table generating set.
std::vector<Element> generators(const Backend& m);

/// A monoid map between the carriers of two systems. Generator-defined maps
/// are homomorphisms by construction; explicit tables and functions are
/// checked by check_mrs_hom.
class MrsHom {
 public:
  using Fn = std::function<Element(const Element&)>;

  MrsHom(Mrs source, Mrs target, Fn fn, std::string description, bool homomorphic_by_construction);

  static MrsHom identity(const Mrs& m);
  /// Free source: letter i goes to images[i].
  static MrsHom from_letters(const Mrs& source, const Mrs& target, std::vector<Element> images);
  /// Naturals source: n goes to image^n.
  static MrsHom from_naturals(const Mrs& source, const Mrs& target, Element image_of_one);
  /// Powerset source: a set goes to the product of the images of its atoms.
  static MrsHom from_atoms(const Mrs& source, const Mrs& target, std::vector<Element> images);
  /// Finite source: explicit image of every element.
  static MrsHom from_table(const Mrs& source, const Mrs& target,
                           std::map<Element, Element> images);
  /// second after first.
  static MrsHom compose(const MrsHom& second, const MrsHom& first);

  Element operator()(const Element& a) const { return fn_(a); }
  const Mrs& source() const { return source_; }
  const Mrs& target() const { return target_; }
  const std::string& description() const { return description_; }
  bool homomorphic_by_construction() const { return by_construction_; }

 private:
  Mrs source_, target_;
  Fn fn_;
  std::string description_;
  bool by_construction_;
};

struct HomCheck {
  CheckVerdict verdict;
  std::vector<DerivationTrace> rule_traces;  // phi(u) ->* phi(v), one per source rule
};

HomCheck check_mrs_hom(const MrsHom& phi, const Bounds& bounds = {});

/// phi^#: u goes to the target normal form of phi(u). Throws std::logic_error if
/// the result is not a monoid homomorphism.
MonoidMap induced_hom(const MrsHom& phi, const IrreducibleMonoid& source,
                      const IrreducibleMonoid& target, const Bounds& bounds = {});

/// f(a) <->* g(a) for every a, checked on generators of the source.
Tri two_cell_exists(const MrsHom& f, const MrsHom& g, const Bounds& bounds = {},
                    const Certification* target_cert = nullptr);

}  // namespace mrs
