#include "explore.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace mrs::detail {

std::size_t Explorer::add(const Element& e) {
  auto [it, fresh] = index_.emplace(e, nodes_.size());
  if (fresh) nodes_.push_back(e);
  return it->second;
}

std::optional<std::size_t> Explorer::find(const Element& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<Explorer::Edge>& Explorer::successors(std::size_t i) {
  if (succ_.size() <= i) succ_.resize(i + 1);
  if (!succ_[i]) {
    Successors s = proper_successors(mrs_, nodes_[i], bounds_);
    truncated_ = truncated_ || s.truncated;
    if (trunc_.size() <= i) trunc_.resize(i + 1, 0);
    trunc_[i] = s.truncated;
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < s.elements.size(); ++k)
      edges.emplace_back(add(s.elements[k]), std::move(s.steps[k]));
    if (succ_.size() <= i) succ_.resize(i + 1);
    succ_[i] = std::move(edges);
  }
  return *succ_[i];
}

void Explorer::expand_all(std::size_t count) {
  for (std::size_t i = 0; i < count && i < nodes_.size(); ++i) successors(i);
}

bool Explorer::close(std::size_t node_limit) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_.size() > node_limit) return false;
    successors(i);
  }
  return nodes_.size() <= node_limit;
}

const Step& Explorer::step(std::size_t u, std::size_t v) const {
  for (const auto& [w, s] : *succ_.at(u))
    if (w == v) return s;
  throw std::logic_error("no edge between explored nodes");
}

std::vector<std::vector<std::size_t>> Explorer::sccs(const std::vector<char>& in) const {
  // Iterative Tarjan restricted to nodes with in[i] set.
  const std::size_t n = in.size();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> idx(n, none), low(n, 0), stack;
  std::vector<char> on(n, 0);
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (!in[root] || idx[root] != none) continue;
    std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
    idx[root] = low[root] = counter++;
    stack.push_back(root);
    on[root] = 1;
    while (!call.empty()) {
      auto& [v, k] = call.back();
      const auto& edges = *succ_[v];
      if (k < edges.size()) {
        const std::size_t w = edges[k++].first;
        if (w >= n || !in[w]) continue;
        if (idx[w] == none) {
          idx[w] = low[w] = counter++;
          stack.push_back(w);
          on[w] = 1;
          call.emplace_back(w, 0);
        } else if (on[w]) {
          low[v] = std::min(low[v], idx[w]);
        }
        continue;
      }
      if (low[v] == idx[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on[w] = 0;
          comp.push_back(w);
        } while (w != v);
        out.push_back(std::move(comp));
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return out;
}

std::optional<std::vector<std::size_t>> Explorer::shortest_cycle(const std::vector<char>& in,
                                                                 std::size_t start) const {
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::unordered_map<std::size_t, std::size_t> parent{{start, none}};
  std::deque<std::size_t> queue{start};
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (const auto& [w, s] : *succ_[v]) {
      if (w >= in.size() || !in[w]) continue;
      if (w == start) {
        std::vector<std::size_t> cyc;
        for (std::size_t c = v; c != none; c = parent[c]) cyc.push_back(c);
        std::reverse(cyc.begin(), cyc.end());
        return cyc;
      }
      if (parent.emplace(w, v).second) queue.push_back(w);
    }
  }
  return std::nullopt;
}

std::optional<std::vector<std::size_t>> Explorer::minimal_cycle() const {
  const std::size_t n = std::min(nodes_.size(), succ_.size());
  std::vector<char> in(n, 0);
  for (std::size_t i = 0; i < n; ++i) in[i] = succ_[i].has_value();

  std::vector<char> cyclic(n, 0);
  bool any = false;
  for (const auto& c : sccs(in))
    if (c.size() > 1) {
      any = true;
      for (auto v : c) cyclic[v] = 1;
    }
  if (!any) return std::nullopt;

  const Backend& m = mrs_.backend();
  std::set<std::size_t> sizes;
  for (std::size_t i = 0; i < n; ++i)
    if (cyclic[i]) sizes.insert(m.size(nodes_[i]));
  for (std::size_t t : sizes) {
    std::vector<char> sub(n, 0);
    for (std::size_t i = 0; i < n; ++i) sub[i] = cyclic[i] && m.size(nodes_[i]) <= t;
    std::vector<char> hot(n, 0);
    bool found = false;
    for (const auto& c : sccs(sub))
      if (c.size() > 1) {
        found = true;
        for (auto v : c) hot[v] = 1;
      }
    if (!found) continue;
    std::optional<std::vector<std::size_t>> best;
    for (std::size_t i = 0; i < n; ++i) {
      if (!hot[i]) continue;
      auto cyc = shortest_cycle(sub, i);
      if (cyc && (!best || cyc->size() < best->size())) best = std::move(cyc);
      if (best && best->size() == 2) break;
    }
    return best;
  }
  return std::nullopt;
}

std::size_t Explorer::normal_form(std::size_t i) {
  std::vector<std::size_t> path;
  std::size_t cur = i;
  while (true) {
    auto it = nf_.find(cur);
    if (it != nf_.end()) {
      cur = it->second;
      break;
    }
    if (path.size() > bounds_.steps)
      throw BudgetExceeded("normal form not reached within " + std::to_string(bounds_.steps) +
                               " steps",
                           DerivationTrace::empty(nodes_[i]));
    path.push_back(cur);
    const auto& s = successors(cur);
    if (s.empty()) break;
    cur = s.front().first;
  }
  for (auto p : path) nf_[p] = cur;
  return cur;
}

DerivationTrace Explorer::nf_trace(std::size_t a, std::size_t b) {
  DerivationTrace t{nodes_[a], nodes_[a], {}};
  t.steps.push_back(step(a, b));
  for (std::size_t cur = b;;) {
    const auto& s = successors(cur);
    if (s.empty()) break;
    t.steps.push_back(s.front().second);
    cur = s.front().first;
  }
  t.to = t.steps.back().after;
  return t;
}

Explorer::Reachable Explorer::reachable(std::size_t from, std::size_t limit) {
  Reachable r;
  std::deque<std::size_t> queue{from};
  r.nodes.insert(from);
  bool truncated = false;
  while (!queue.empty()) {
    if (r.nodes.size() > limit) return r;
    const std::size_t v = queue.front();
    queue.pop_front();
    const auto& edges = successors(v);
    truncated = truncated || trunc_[v];
    for (const auto& e : edges)
      if (r.nodes.insert(e.first).second) queue.push_back(e.first);
  }
  r.complete = !truncated;
  return r;
}

}  // namespace mrs::detail
