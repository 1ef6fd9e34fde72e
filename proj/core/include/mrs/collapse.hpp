#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "mrs/engine.hpp"

namespace mrs {

enum class CollapseStrategy {
  Unchanged,           // J empty
  Bicyclic,            // free monoid on {p, q} with J = {(pq, _)}
  LetterSubstitution,  // M * F_V with every component syllable m sent to its own letter
  Table,               // finitely many J-irreducibles, tabulated
  Lazy,                // J-irreducibles of an infinite carrier, computed on demand
};

std::string to_string(CollapseStrategy s);

/// Carrier of J-irreducibles of an infinite base with x*y = nf_J(x y).
/// Factorizations range over J-irreducibles of size at most the context
/// bound fixed at construction and are always reported as truncated.
class CollapseBackend final : public Backend {
 public:
  CollapseBackend(Mrs j_system, Bounds bounds);

  BackendKind kind() const override { return BackendKind::Collapse; }
  Element identity() const override { return identity_; }
  Element op(const Element& x, const Element& y) const override;
  std::size_t size(const Element& x) const override { return base().size(x); }
  FactorResult factorizations(const Element& a, const Element& s,
                              const FactorBudget& budget) const override;
  std::vector<Element> enumerate(std::size_t size_bound) const override;
  bool finite() const override { return false; }
  bool contains(const Element& x) const override;
  std::string print(const Element& x) const override { return base().print(x); }
  Element parse(std::string_view text) const override;
  std::string header() const override;
  std::vector<std::string> body() const override { return base().body(); }

  const Backend& base() const { return j_.backend(); }
  const Mrs& j_system() const { return j_; }
  Element normalize(const Element& x) const;

 private:
  Mrs j_;
  Bounds bounds_;
  Element identity_;
  std::vector<Element> contexts_;
  mutable std::mutex mu_;
  mutable std::unordered_map<Element, Element, ElementHash> nf_;
};

/// A_J = (M_J, *_J, R_J) together with the projection nf_J: A -> M_J.
struct CollapsedSystem {
  Mrs mrs;
  std::function<Element(const Element&)> projection;
  CollapseStrategy strategy = CollapseStrategy::Unchanged;
  std::vector<Rule> subset;
};

/// Shrinks bounds.size until the carrier has at most `max_elements` elements
/// of that size. Finite carriers are left alone.
Bounds fit_bounds(const Backend& m, Bounds bounds, std::size_t max_elements = 20000);

/// Confluence of (M, *, J). Throws UsageError unless J is a subset of R.
CheckVerdict check_confluent_subset(const Mrs& mrs, const std::vector<Rule>& j,
                                    const Bounds& bounds = {});

/// Refuses when J is not confluent or its irreducibles admit no strategy.
/// `check_subset = false` skips the confluence check for callers that ran it.
CollapsedSystem collapse(const Mrs& mrs, const std::vector<Rule>& j, const Bounds& bounds = {},
                         bool check_subset = true);

/// J confluent and A_J Noetherian and confluent. A refutation carries the
/// witness from whichever stage failed.
CheckVerdict check_coherent(const Mrs& mrs, const std::vector<Rule>& j, const Bounds& bounds = {});

}  // namespace mrs
