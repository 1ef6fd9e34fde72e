#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mrs/irreducibles.hpp"

namespace mrs {

/// G(M): the free monoid on M minus its identity, with rules ab -> (a*b) for
/// every pair, degenerate pairs included. The encoding nu between table
/// elements and words is explicit.
struct CanonicalPresentation {
  FiniteMonoid monoid;
  Mrs mrs;
  std::vector<std::optional<std::size_t>> letter_of;  // element -> letter; none for the identity
  std::vector<std::size_t> element_of;                // letter -> element

  Element nu(std::size_t m) const;
  /// Product in M of the letters of a word.
  std::size_t eval(const Element& word) const;
  const FreeBackend& free() const { return static_cast<const FreeBackend&>(mrs.backend()); }
};

/// Letters are the element names when those form a valid prefix-free
/// alphabet, otherwise g1, g2, ...
CanonicalPresentation g_of_monoid(const FiniteMonoid& m);

/// Test-only variant with the full carrier as alphabet (identity kept as a letter).
Mrs naive_g(const FiniteMonoid& m);

/// G(phi): letterwise image with identity images deleted. Refuses when phi is
/// not a homomorphism.
MrsHom g_of_hom(const CanonicalPresentation& source, const CanonicalPresentation& target,
                const MonoidMap& phi);

/// eps_A: G(I(A)) -> A, a1 ... an |-> a1 * ... * an.
MrsHom counit(const Mrs& a, const IrreducibleMonoid& ia, const CanonicalPresentation& gia);

/// Bounds that certify G(M) quickly: a few letters deep.
Bounds presentation_bounds(const FiniteMonoid& m);

/// I(G(M)) = M under nu.
bool check_unit_identity(const FiniteMonoid& m, std::string* why = nullptr);

struct TriangleReport {
  bool first = false;   // I(eps_A) o eta_{I(A)} = 1
  bool second = false;  // eps_{G(M)} o G(eta_M) = 1 on words up to the bound
  std::string detail;
  bool ok() const { return first && second; }
};

TriangleReport check_triangles(const Mrs& a, const FiniteMonoid& m, std::size_t word_bound,
                               const Bounds& bounds = {});

struct HomEquivalenceReport {
  std::size_t monoid_homs = 0;
  std::size_t mrs_homs = 0;
  std::size_t classes = 0;
  bool bijective = false;
  std::string detail;
};

struct HomEquivalenceLimits {
  std::size_t max_monoid = 4;
  std::size_t max_target = 8;
};

/// Brute-force comparison of hom(G(M), A) up to 2-cells with hom(M, I(A)).
HomEquivalenceReport check_hom_equivalence(const FiniteMonoid& m, const Mrs& a,
                                           const Bounds& bounds = {},
                                           HomEquivalenceLimits limits = {});

/// phi o eps_A and eps_B o G I(phi) are related by a 2-cell.
bool counit_naturality(const MrsHom& phi, const Bounds& bounds = {});

}  // namespace mrs
