#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrs/element.hpp"
#include "mrs/finite_monoid.hpp"

namespace mrs {

enum class BackendKind { Free, Table, Naturals, Powerset, FreeProduct, Bicyclic, Collapse };

/// Ambient monoid. Implementations are immutable after construction.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual BackendKind kind() const = 0;
  virtual Element identity() const = 0;
  virtual Element op(const Element& x, const Element& y) const = 0;
  virtual std::size_t size(const Element& x) const = 0;
  virtual FactorResult factorizations(const Element& a, const Element& s,
                                      const FactorBudget& budget) const = 0;
  // Finite carriers ignore the bound.
  virtual std::vector<Element> enumerate(std::size_t size_bound) const = 0;
  virtual bool finite() const = 0;
  // size(x*y) = size(x) + size(y) for all x, y.
  virtual bool additive_size() const { return false; }
  // Cancellative, and every element of size > k has a factor of size exactly k.
  virtual bool graded() const { return false; }
  virtual bool contains(const Element& x) const = 0;
  // Whether (x, y) with x*s*y = a counts as an occurrence of s in a. Only the
  // syllable-aligned free product restricts this.
  virtual bool admissible(const Element& a, const Element& s, const FactorPair& p) const;

  virtual std::string print(const Element& x) const = 0;
  virtual Element parse(std::string_view text) const = 0;
  // The `monoid` header without the keyword, plus any body lines.
  virtual std::string header() const = 0;
  virtual std::vector<std::string> body() const { return {}; }

  std::string signature() const;
  Element op3(const Element& x, const Element& y, const Element& z) const {
    return op(op(x, y), z);
  }
};

using BackendPtr = std::shared_ptr<const Backend>;

bool same_backend(const Backend& a, const Backend& b);

/// Letter names may not contain whitespace, '.', '^', ';', '#', '*', '=', "->",
/// and may not be "_". A set of letters must be prefix-free.
bool valid_letter(std::string_view name);
bool prefix_free(const std::vector<std::string>& letters);

class FreeBackend final : public Backend {
 public:
  explicit FreeBackend(std::vector<std::string> letters);

  BackendKind kind() const override { return BackendKind::Free; }
  Element identity() const override { return {}; }
  Element op(const Element& x, const Element& y) const override;
  std::size_t size(const Element& x) const override { return x.v.size(); }
  FactorResult factorizations(const Element& a, const Element& s,
                              const FactorBudget& budget) const override;
  std::vector<Element> enumerate(std::size_t size_bound) const override;
  bool finite() const override { return letters_.empty(); }
  bool additive_size() const override { return true; }
  bool graded() const override { return !letters_.empty(); }
  bool contains(const Element& x) const override;
  std::string print(const Element& x) const override;
  Element parse(std::string_view text) const override;
  std::string header() const override;

  const std::vector<std::string>& letters() const { return letters_; }
  Element letter(std::size_t i) const { return Element({static_cast<std::int64_t>(i)}); }
  std::optional<std::size_t> letter_index(std::string_view name) const;

 private:
  std::vector<std::string> letters_;
};

class TableBackend final : public Backend {
 public:
  explicit TableBackend(FiniteMonoid m) : m_(std::move(m)) {}

  BackendKind kind() const override { return BackendKind::Table; }
  Element identity() const override { return at(m_.identity()); }
  Element op(const Element& x, const Element& y) const override;
  std::size_t size(const Element&) const override { return 1; }
  FactorResult factorizations(const Element& a, const Element& s,
                              const FactorBudget& budget) const override;
  std::vector<Element> enumerate(std::size_t size_bound) const override;
  bool finite() const override { return true; }
  bool contains(const Element& x) const override;
  std::string print(const Element& x) const override;
  Element parse(std::string_view text) const override;
  std::string header() const override;
  std::vector<std::string> body() const override;

  const FiniteMonoid& monoid() const { return m_; }
  static Element at(std::size_t i) { return Element({static_cast<std::int64_t>(i)}); }
  static std::size_t index(const Element& e) { return static_cast<std::size_t>(e.v.at(0)); }

 private:
  FiniteMonoid m_;
};

class NaturalsBackend final : public Backend {
 public:
  BackendKind kind() const override { return BackendKind::Naturals; }
  Element identity() const override { return value(0); }
  Element op(const Element& x, const Element& y) const override;
  std::size_t size(const Element& x) const override { return static_cast<std::size_t>(x.v.at(0)); }
  FactorResult factorizations(const Element& a, const Element& s,
                              const FactorBudget& budget) const override;
  std::vector<Element> enumerate(std::size_t size_bound) const override;
  bool finite() const override { return false; }
  bool additive_size() const override { return true; }
  bool graded() const override { return true; }
  bool contains(const Element& x) const override { return x.v.size() == 1 && x.v[0] >= 0; }
  std::string print(const Element& x) const override;
  Element parse(std::string_view text) const override;
  std::string header() const override { return "naturals"; }

  static Element value(std::int64_t n) { return Element({n}); }
};

class PowersetBackend final : public Backend {
 public:
  explicit PowersetBackend(std::vector<std::string> base);

  BackendKind kind() const override { return BackendKind::Powerset; }
  Element identity() const override { return set(0); }
  Element op(const Element& x, const Element& y) const override;
  std::size_t size(const Element& x) const override;
  FactorResult factorizations(const Element& a, const Element& s,
                              const FactorBudget& budget) const override;
  std::vector<Element> enumerate(std::size_t size_bound) const override;
  bool finite() const override { return true; }
  bool contains(const Element& x) const override;
  std::string print(const Element& x) const override;
  Element parse(std::string_view text) const override;
  std::string header() const override;

  const std::vector<std::string>& base() const { return base_; }
  static Element set(std::uint64_t mask) { return Element({static_cast<std::int64_t>(mask)}); }
  static std::uint64_t mask(const Element& e) { return static_cast<std::uint64_t>(e.v.at(0)); }

 private:
  std::vector<std::string> base_;
};

/// How rule sides are matched inside a free product.
enum class ProductMatching {
  // Syllable-aligned: component syllables of the rule side match whole
  // syllables of the subject, letter powers may be split.
  Aligned,
  // Every (x, y) with x*s*y = a, including splits of component syllables.
  Exact,
};

/// M * F_V: normal forms are alternating sequences of non-identity component
/// syllables and letter powers.
class FreeProductBackend final : public Backend {
 public:
  struct Syllable {
    std::int64_t letter = -1;  // -1 for a component syllable
    std::int64_t exp = 0;
    Element comp;
    friend bool operator==(const Syllable&, const Syllable&) = default;
  };

  FreeProductBackend(BackendPtr component, std::vector<std::string> letters,
                     ProductMatching matching = ProductMatching::Aligned);

  BackendKind kind() const override { return BackendKind::FreeProduct; }
  Element identity() const override { return {}; }
  Element op(const Element& x, const Element& y) const override;
  std::size_t size(const Element& x) const override;
  FactorResult factorizations(const Element& a, const Element& s,
                              const FactorBudget& budget) const override;
  std::vector<Element> enumerate(std::size_t size_bound) const override;
  bool finite() const override { return letters_.empty() && component_->finite(); }
  bool contains(const Element& x) const override;
  bool admissible(const Element& a, const Element& s, const FactorPair& p) const override;
  std::string print(const Element& x) const override;
  Element parse(std::string_view text) const override;
  std::string header() const override;
  std::vector<std::string> body() const override { return component_->body(); }

  const BackendPtr& component() const { return component_; }
  const std::vector<std::string>& letters() const { return letters_; }
  ProductMatching matching() const { return matching_; }
  std::optional<std::size_t> letter_index(std::string_view name) const;

  std::vector<Syllable> decode(const Element& x) const;
  Element encode(const std::vector<Syllable>& syllables) const;  // normalizes
  Element embed(const Element& component_element) const;
  Element letter(std::size_t i, std::int64_t exp = 1) const;

  // All (p, q) with p*q = a; exact mode only.
  FactorResult splits(const Element& a, const FactorBudget& budget) const;

 private:
  FactorResult aligned_factorizations(const Element& a, const Element& s) const;
  FactorResult exact_factorizations(const Element& a, const Element& s,
                                    const FactorBudget& budget) const;

  BackendPtr component_;
  std::vector<std::string> letters_;
  ProductMatching matching_;
};

/// The bicyclic monoid <p, q | pq = 1>; elements q^m p^n.
class BicyclicBackend final : public Backend {
 public:
  BicyclicBackend(std::string p, std::string q);

  BackendKind kind() const override { return BackendKind::Bicyclic; }
  Element identity() const override { return pair(0, 0); }
  Element op(const Element& x, const Element& y) const override;
  std::size_t size(const Element& x) const override;
  // Returns every factor pair up to shifting a common p^k / q^k through the
  // context; the omitted pairs give the same product with any element of size
  // at most max(size(s), budget.probe_size). Never truncated.
  FactorResult factorizations(const Element& a, const Element& s,
                              const FactorBudget& budget) const override;
  std::vector<Element> enumerate(std::size_t size_bound) const override;
  bool finite() const override { return false; }
  bool contains(const Element& x) const override;
  std::string print(const Element& x) const override;
  Element parse(std::string_view text) const override;
  std::string header() const override;

  const std::string& p() const { return p_; }
  const std::string& q() const { return q_; }
  static Element pair(std::int64_t m, std::int64_t n) { return Element({m, n}); }

 private:
  std::string p_, q_;
};

BackendPtr make_free(std::vector<std::string> letters);
BackendPtr make_table(FiniteMonoid m);
BackendPtr make_naturals();
BackendPtr make_powerset(std::vector<std::string> base);
BackendPtr make_bicyclic(std::string p, std::string q);

/// M * F_V. Adjoining to a free monoid extends its alphabet, adjoining to a
/// free product extends its letter set, and adjoining to a trivial monoid gives
/// F_V. Throws UsageError on a collision.
BackendPtr free_product_adjoin(const BackendPtr& base, const std::vector<std::string>& fresh,
                               ProductMatching matching = ProductMatching::Aligned);

/// True when `name` can serve as a fresh letter over `base`.
bool is_fresh_letter(const Backend& base, const std::string& name);

}  // namespace mrs
