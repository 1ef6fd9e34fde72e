#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrs {

/// Backend-relative value. The payload layout is private to the backend that
/// produced it; backends keep payloads canonical so that equality is
/// structural.
struct Element {
  std::vector<std::int64_t> v;

  Element() = default;
  explicit Element(std::vector<std::int64_t> payload) : v(std::move(payload)) {}

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL ^ e.v.size();
    for (auto x : e.v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// (x, y) with x * s * y = a for a factorization of a around s.
struct FactorPair {
  Element left;
  Element right;
  friend bool operator==(const FactorPair&, const FactorPair&) = default;
};

struct FactorBudget {
  std::size_t max_pairs = 1u << 16;
  // Infinite-context backends enumerate contexts up to this size.
  std::size_t context_size = 8;
  // Largest size of an element that will be substituted for s. Backends that
  // drop context-shifted duplicates use it to decide what is redundant.
  std::size_t probe_size = 0;
};

struct FactorResult {
  std::vector<FactorPair> pairs;
  bool truncated = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of a construction does not hold. `unknown` marks refusals
/// caused by an exhausted bound rather than a definite failure.
class Refused : public std::runtime_error {
 public:
  explicit Refused(const std::string& msg, bool unknown = false)
      : std::runtime_error(msg), unknown_(unknown) {}
  bool unknown() const { return unknown_; }

 private:
  bool unknown_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(msg), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace mrs
