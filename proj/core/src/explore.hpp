#pragma once

#include <deque>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mrs/engine.hpp"

namespace mrs::detail {

/// Lazily built proper-step graph. Node indices follow insertion order.
class Explorer {
 public:
  using Edge = std::pair<std::size_t, Step>;

  Explorer(const Mrs& mrs, const Bounds& bounds) : mrs_(mrs), bounds_(bounds) {}

  std::size_t add(const Element& e);
  std::size_t size() const { return nodes_.size(); }
  const Element& node(std::size_t i) const { return nodes_[i]; }
  std::optional<std::size_t> find(const Element& e) const;

  const std::vector<Edge>& successors(std::size_t i);
  bool expanded(std::size_t i) const { return i < succ_.size() && succ_[i].has_value(); }
  void expand_all(std::size_t count);
  // Expands until every node is expanded; false when the node limit is hit.
  bool close(std::size_t node_limit);
  bool truncated() const { return truncated_; }

  const Step& step(std::size_t u, std::size_t v) const;

  // Among cycles through expanded nodes: smallest maximal element size, then
  // fewest steps, then earliest start node.
  std::optional<std::vector<std::size_t>> minimal_cycle() const;

  // Follows first proper successors; the graph must be terminating from i.
  std::size_t normal_form(std::size_t i);
  // One step a -> b followed by the normal-form path from b.
  DerivationTrace nf_trace(std::size_t a, std::size_t b);

  struct Reachable {
    std::unordered_set<std::size_t> nodes;
    bool complete = false;
  };
  Reachable reachable(std::size_t from, std::size_t limit);

 private:
  std::vector<std::vector<std::size_t>> sccs(const std::vector<char>& in) const;
  std::optional<std::vector<std::size_t>> shortest_cycle(const std::vector<char>& in,
                                                         std::size_t start) const;

  const Mrs& mrs_;
  Bounds bounds_;
  std::vector<Element> nodes_;
  std::unordered_map<Element, std::size_t, ElementHash> index_;
  // deque keeps references to expanded lists valid while the graph grows
  std::deque<std::optional<std::vector<Edge>>> succ_;
  std::vector<char> trunc_;
  std::unordered_map<std::size_t, std::size_t> nf_;
  bool truncated_ = false;
};

}  // namespace mrs::detail
