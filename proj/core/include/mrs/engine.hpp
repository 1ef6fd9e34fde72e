#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrs/backend.hpp"

namespace mrs {

struct Rule {
  Element lhs;
  Element rhs;
  friend bool operator==(const Rule&, const Rule&) = default;
};

/// The triple (M, *, R). Rules keep their declared order and are deduplicated.
class Mrs {
 public:
  Mrs() = default;
  Mrs(BackendPtr backend, std::vector<Rule> rules);

  const Backend& backend() const { return *backend_; }
  const BackendPtr& backend_ptr() const { return backend_; }
  const std::vector<Rule>& rules() const { return rules_; }
  std::optional<std::size_t> rule_index(const Rule& r) const;
  bool has_rule(const Rule& r) const { return rule_index(r).has_value(); }

  Mrs with_rule(const Rule& r) const;
  Mrs without_rule(const Rule& r) const;
  Mrs with_rules(std::vector<Rule> rules) const { return Mrs(backend_, std::move(rules)); }

  Element parse(std::string_view text) const { return backend_->parse(text); }
  std::string print(const Element& e) const { return backend_->print(e); }
  std::string print(const Rule& r) const { return print(r.lhs) + " -> " + print(r.rhs); }

  // Largest size among rule sides; used as the factorization probe size.
  std::size_t max_side_size() const { return max_side_; }

  friend bool operator==(const Mrs& a, const Mrs& b) {
    return same_backend(*a.backend_, *b.backend_) && a.rules_ == b.rules_;
  }

 private:
  BackendPtr backend_;
  std::vector<Rule> rules_;
  std::size_t max_side_ = 0;
};

enum class Direction { Forward, Backward };

/// Forward: before = x*lhs*y, after = x*rhs*y. Backward swaps the sides.
struct Step {
  Element before;
  std::size_t rule = 0;
  FactorPair ctx;
  Direction dir = Direction::Forward;
  Element after;
};

struct DerivationTrace {
  Element from;
  Element to;
  std::vector<Step> steps;

  static DerivationTrace empty(const Element& a) { return {a, a, {}}; }
  bool forward_only() const;
};

struct Bounds {
  std::size_t size = 8;         // element size cap for exhaustive checks
  std::size_t steps = 10000;    // normal-form derivation budget
  std::size_t nodes = 200000;   // search budget (visited elements)
  std::size_t context = 4;      // context size on infinite-context backends
  std::size_t max_pairs = 1u << 16;
};

enum class Verdict { Verified, Refuted, Unknown };
enum class Tri { True, False, Unknown };

enum class WitnessKind { Cycle, Peak, Rule, Element, Note };

struct Witness {
  WitnessKind kind = WitnessKind::Note;
  std::vector<Element> elements;
  std::vector<DerivationTrace> traces;
  std::string note;
};

/// Verified with bounded = true means: holds for every element of size at most
/// `bound` (the check is a proof restricted to that set).
struct CheckVerdict {
  Verdict status = Verdict::Unknown;
  bool bounded = false;
  std::size_t bound = 0;
  std::optional<Witness> witness;
  std::string reason;

  static CheckVerdict verified(std::string why = {});
  static CheckVerdict verified_up_to(std::size_t bound, std::string why = {});
  static CheckVerdict refuted(Witness w, std::string why = {});
  static CheckVerdict unknown(std::size_t bound, std::string why = {});

  bool ok() const { return status == Verdict::Verified; }
  bool refuted() const { return status == Verdict::Refuted; }
};

std::string to_string(Verdict v);
std::string describe(const CheckVerdict& v);

struct Successors {
  std::vector<Element> elements;  // deduplicated, canonical order
  std::vector<Step> steps;        // steps[i] produces elements[i]
  bool truncated = false;
};

/// All one-step results, proper and improper.
Successors one_step(const Mrs& mrs, const Element& a, const Bounds& bounds = {});
/// One-step results different from a.
Successors proper_successors(const Mrs& mrs, const Element& a, const Bounds& bounds = {});
/// Elements b with b -> a, as backward steps starting at a; b != a.
Successors proper_predecessors(const Mrs& mrs, const Element& a, const Bounds& bounds = {});

struct NormalForm {
  Element value;
  DerivationTrace trace;
  bool certain = true;  // false when a truncated factorization left irreducibility open
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& msg, DerivationTrace partial)
      : std::runtime_error(msg), partial_(std::move(partial)) {}
  const DerivationTrace& partial() const { return partial_; }

 private:
  DerivationTrace partial_;
};

/// First proper step in rule order, then factorization order, until irreducible.
NormalForm normal_form(const Mrs& mrs, const Element& a, const Bounds& bounds = {});

Tri is_irreducible(const Mrs& mrs, const Element& a, const Bounds& bounds = {});

/// True when every non-degenerate rule strictly decreases an additive size.
bool size_certificate(const Mrs& mrs);

CheckVerdict check_noetherian(const Mrs& mrs, const Bounds& bounds = {});
CheckVerdict check_confluent(const Mrs& mrs, const Bounds& bounds = {});

struct Certification {
  CheckVerdict noetherian;
  CheckVerdict confluent;
  bool ok() const { return noetherian.ok() && confluent.ok(); }
  bool global() const { return ok() && !noetherian.bounded && !confluent.bounded; }
  std::size_t bound() const;
};

Certification certify(const Mrs& mrs, const Bounds& bounds = {});

struct Reach {
  std::optional<DerivationTrace> trace;
  bool definitive = false;  // absence is definitive (search space exhausted)
};

Reach reaches(const Mrs& mrs, const Element& a, const Element& b, const Bounds& bounds = {});

struct Equivalence {
  Tri status = Tri::Unknown;
  std::optional<DerivationTrace> trace;
};

/// With a certification, decides via normal forms and splices a valley-shaped
/// trace; otherwise runs a bidirectional search over both step directions.
Equivalence equivalent(const Mrs& mrs, const Element& a, const Element& b,
                       const Bounds& bounds = {}, const Certification* cert = nullptr);

// ---- trace utilities -------------------------------------------------------

/// nullopt when every step re-verifies by multiplication; otherwise a diagnostic.
std::optional<std::string> validate_trace(const Mrs& mrs, const DerivationTrace& t);

DerivationTrace concat(const DerivationTrace& a, const DerivationTrace& b);
DerivationTrace reverse(const DerivationTrace& t);
/// x*t*y: every element and context multiplied on both sides.
DerivationTrace in_context(const Backend& m, const DerivationTrace& t, const Element& x,
                           const Element& y);
/// u ->* a and v ->* b give u*v ->* a*b.
DerivationTrace splice_product(const Backend& m, const DerivationTrace& tu,
                               const DerivationTrace& tv);

/// Appends a step applying rule `rule` at context (x, y) to the current endpoint.
void push_step(const Mrs& mrs, DerivationTrace& t, std::size_t rule, const Element& x,
               const Element& y, Direction dir);

std::string print_trace(const Mrs& mrs, const DerivationTrace& t);

}  // namespace mrs
