#include "mrs/engine.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "explore.hpp"

namespace mrs {

Mrs::Mrs(BackendPtr backend, std::vector<Rule> rules) : backend_(std::move(backend)) {
  if (!backend_) throw UsageError("MRS without a monoid");
  for (auto& r : rules) {
    if (!backend_->contains(r.lhs) || !backend_->contains(r.rhs))
      throw UsageError("rule side does not belong to the monoid");
    if (std::find(rules_.begin(), rules_.end(), r) != rules_.end()) continue;
    max_side_ = std::max({max_side_, backend_->size(r.lhs), backend_->size(r.rhs)});
    rules_.push_back(std::move(r));
  }
}

std::optional<std::size_t> Mrs::rule_index(const Rule& r) const {
  auto it = std::find(rules_.begin(), rules_.end(), r);
  if (it == rules_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - rules_.begin());
}

Mrs Mrs::with_rule(const Rule& r) const {
  auto rules = rules_;
  rules.push_back(r);
  return Mrs(backend_, std::move(rules));
}

Mrs Mrs::without_rule(const Rule& r) const {
  auto rules = rules_;
  rules.erase(std::remove(rules.begin(), rules.end(), r), rules.end());
  return Mrs(backend_, std::move(rules));
}

bool DerivationTrace::forward_only() const {
  return std::all_of(steps.begin(), steps.end(),
                     [](const Step& s) { return s.dir == Direction::Forward; });
}

// ---- verdicts --------------------------------------------------------------

CheckVerdict CheckVerdict::verified(std::string why) {
  CheckVerdict v;
  v.status = Verdict::Verified;
  v.reason = std::move(why);
  return v;
}

CheckVerdict CheckVerdict::verified_up_to(std::size_t bound, std::string why) {
  CheckVerdict v = verified(std::move(why));
  v.bounded = true;
  v.bound = bound;
  return v;
}

CheckVerdict CheckVerdict::refuted(Witness w, std::string why) {
  CheckVerdict v;
  v.status = Verdict::Refuted;
  v.witness = std::move(w);
  v.reason = std::move(why);
  return v;
}

CheckVerdict CheckVerdict::unknown(std::size_t bound, std::string why) {
  CheckVerdict v;
  v.status = Verdict::Unknown;
  v.bounded = true;
  v.bound = bound;
  v.reason = std::move(why);
  return v;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "verified";
    case Verdict::Refuted: return "refuted";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

std::string describe(const CheckVerdict& v) {
  std::string s;
  switch (v.status) {
    case Verdict::Verified:
      s = v.bounded ? "verified up to size " + std::to_string(v.bound) : "verified";
      break;
    case Verdict::Refuted: s = "refuted"; break;
    case Verdict::Unknown: s = "unknown up to size " + std::to_string(v.bound); break;
  }
  if (!v.reason.empty()) s += " (" + v.reason + ")";
  return s;
}

// ---- one-step rewriting ----------------------------------------------------

namespace {

FactorBudget budget_for(const Mrs& mrs, const Bounds& bounds) {
  FactorBudget b;
  b.max_pairs = bounds.max_pairs;
  b.context_size = bounds.context;
  b.probe_size = mrs.max_side_size();
  return b;
}

Successors collect(const Mrs& mrs, const Element& a, const Bounds& bounds, Direction dir,
                   bool proper) {
  const Backend& m = mrs.backend();
  const FactorBudget budget = budget_for(mrs, bounds);
  Successors out;
  std::unordered_set<Element, ElementHash> seen;
  for (std::size_t i = 0; i < mrs.rules().size(); ++i) {
    const Rule& r = mrs.rules()[i];
    const Element& from = dir == Direction::Forward ? r.lhs : r.rhs;
    const Element& to = dir == Direction::Forward ? r.rhs : r.lhs;
    if (proper && from == to) continue;
    FactorResult fr = m.factorizations(a, from, budget);
    out.truncated = out.truncated || fr.truncated;
    for (auto& p : fr.pairs) {
      Element b = m.op3(p.left, to, p.right);
      if (proper && b == a) continue;
      if (dir == Direction::Backward && !m.admissible(b, r.lhs, p)) continue;
      if (!seen.insert(b).second) continue;
      out.elements.push_back(b);
      out.steps.push_back(Step{a, i, std::move(p), dir, std::move(b)});
    }
  }
  return out;
}

}  // namespace

Successors one_step(const Mrs& mrs, const Element& a, const Bounds& bounds) {
  return collect(mrs, a, bounds, Direction::Forward, false);
}

Successors proper_successors(const Mrs& mrs, const Element& a, const Bounds& bounds) {
  return collect(mrs, a, bounds, Direction::Forward, true);
}

Successors proper_predecessors(const Mrs& mrs, const Element& a, const Bounds& bounds) {
  return collect(mrs, a, bounds, Direction::Backward, true);
}

// ---- normal forms ----------------------------------------------------------

NormalForm normal_form(const Mrs& mrs, const Element& a, const Bounds& bounds) {
  const Backend& m = mrs.backend();
  const FactorBudget budget = budget_for(mrs, bounds);
  NormalForm nf{a, DerivationTrace::empty(a), true};
  while (true) {
    bool stepped = false, truncated = false;
    for (std::size_t i = 0; i < mrs.rules().size() && !stepped; ++i) {
      const Rule& r = mrs.rules()[i];
      if (r.lhs == r.rhs) continue;
      FactorResult fr = m.factorizations(nf.value, r.lhs, budget);
      truncated = truncated || fr.truncated;
      for (auto& p : fr.pairs) {
        Element b = m.op3(p.left, r.rhs, p.right);
        if (b == nf.value) continue;
        if (nf.trace.steps.size() >= bounds.steps)
          throw BudgetExceeded("normal form not reached within " + std::to_string(bounds.steps) +
                                   " steps",
                               nf.trace);
        nf.trace.steps.push_back(Step{nf.value, i, std::move(p), Direction::Forward, b});
        nf.value = std::move(b);
        nf.trace.to = nf.value;
        stepped = true;
        break;
      }
    }
    if (!stepped) {
      nf.certain = !truncated;
      return nf;
    }
  }
}

Tri is_irreducible(const Mrs& mrs, const Element& a, const Bounds& bounds) {
  Successors s = proper_successors(mrs, a, bounds);
  if (!s.elements.empty()) return Tri::False;
  return s.truncated ? Tri::Unknown : Tri::True;
}

bool size_certificate(const Mrs& mrs) {
  const Backend& m = mrs.backend();
  if (!m.additive_size()) return false;
  return std::all_of(mrs.rules().begin(), mrs.rules().end(), [&](const Rule& r) {
    return r.lhs == r.rhs || m.size(r.rhs) < m.size(r.lhs);
  });
}

// ---- termination -----------------------------------------------------------

namespace {

bool trivial_rules(const Mrs& mrs) {
  return std::all_of(mrs.rules().begin(), mrs.rules().end(),
                     [](const Rule& r) { return r.lhs == r.rhs; });
}

CheckVerdict cycle_verdict(const detail::Explorer& ex, const std::vector<std::size_t>& cycle) {
  Witness w;
  w.kind = WitnessKind::Cycle;
  DerivationTrace t = DerivationTrace::empty(ex.node(cycle.front()));
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    const std::size_t u = cycle[k], v = cycle[(k + 1) % cycle.size()];
    w.elements.push_back(ex.node(u));
    t.steps.push_back(ex.step(u, v));
  }
  t.to = t.from;
  w.traces.push_back(std::move(t));
  w.note = "cycle of length " + std::to_string(cycle.size());
  return CheckVerdict::refuted(std::move(w), "proper steps form a cycle");
}

}  // namespace

CheckVerdict check_noetherian(const Mrs& mrs, const Bounds& bounds) {
  if (trivial_rules(mrs)) return CheckVerdict::verified("no proper steps");
  const Backend& m = mrs.backend();
  if (!m.finite() && size_certificate(mrs))
    return CheckVerdict::verified("every proper step decreases the size");

  detail::Explorer ex(mrs, bounds);
  const std::vector<Element> seeds = m.enumerate(bounds.size);
  for (const auto& e : seeds) ex.add(e);
  ex.expand_all(seeds.size());
  if (auto cyc = ex.minimal_cycle()) return cycle_verdict(ex, *cyc);

  if (m.finite()) {
    if (ex.truncated()) return CheckVerdict::unknown(bounds.size, "factorization truncated");
    return CheckVerdict::verified("proper-step graph is acyclic");
  }
  // Close the seed set under proper steps; a finite acyclic closure proves
  // termination from every seed.
  const bool closed = ex.close(bounds.nodes);
  if (auto cyc = ex.minimal_cycle()) return cycle_verdict(ex, *cyc);
  if (!closed) return CheckVerdict::unknown(bounds.size, "search budget exhausted");
  if (ex.truncated()) return CheckVerdict::unknown(bounds.size, "factorization truncated");
  return CheckVerdict::verified_up_to(bounds.size, "acyclic closure of " +
                                                       std::to_string(ex.size()) + " elements");
}

// ---- confluence ------------------------------------------------------------

namespace {

CheckVerdict peak_verdict(detail::Explorer& ex, std::size_t a, std::size_t b, std::size_t c,
                          std::size_t nb, std::size_t nc) {
  Witness w;
  w.kind = WitnessKind::Peak;
  w.elements = {ex.node(a), ex.node(b), ex.node(c), ex.node(nb), ex.node(nc)};
  w.traces.push_back(ex.nf_trace(a, b));
  w.traces.push_back(ex.nf_trace(a, c));
  w.note = "peak with distinct normal forms";
  return CheckVerdict::refuted(std::move(w), "non-joinable peak");
}

}  // namespace

CheckVerdict check_confluent(const Mrs& mrs, const Bounds& bounds) {
  if (trivial_rules(mrs)) return CheckVerdict::verified("no proper steps");
  const Backend& m = mrs.backend();
  const CheckVerdict term = check_noetherian(mrs, bounds);

  // Critical pairs of a string rewriting system live in words of length at
  // most 2L - 1, L the longest left side; with global termination, local
  // confluence there is confluence everywhere.
  std::size_t overlap = 1;
  for (const auto& r : mrs.rules())
    if (r.lhs != r.rhs) overlap = std::max(overlap, 2 * m.size(r.lhs) - (m.size(r.lhs) ? 1 : 0));
  const bool by_overlaps = m.kind() == BackendKind::Free && term.ok() && !term.bounded;
  Bounds seed_bounds = bounds;
  if (by_overlaps) seed_bounds.size = overlap;

  detail::Explorer ex(mrs, bounds);
  const std::vector<Element> seeds = m.enumerate(seed_bounds.size);
  for (const auto& e : seeds) ex.add(e);

  if (term.ok()) {
    // Newman: local confluence on a set closed under proper steps.
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const auto& succ = ex.successors(i);
      if (succ.size() < 2) continue;
      const std::size_t first = ex.normal_form(succ.front().first);
      for (std::size_t k = 1; k < succ.size(); ++k) {
        const std::size_t other = ex.normal_form(succ[k].first);
        if (other != first)
          return peak_verdict(ex, i, succ.front().first, succ[k].first, first, other);
      }
    }
    if (ex.truncated()) return CheckVerdict::unknown(bounds.size, "factorization truncated");
    if (m.finite() && !term.bounded) return CheckVerdict::verified("locally confluent and terminating");
    if (by_overlaps) return CheckVerdict::verified("critical pairs joinable and terminating");
    return CheckVerdict::verified_up_to(bounds.size, "locally confluent on a terminating closed set");
  }

  // Without termination only a refutation can be definitive: a peak whose two
  // reachable sets are exhausted and disjoint.
  const std::size_t limit = std::max<std::size_t>(64, bounds.nodes / std::max<std::size_t>(1, seeds.size()));
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto succ = ex.successors(i);
    for (std::size_t k = 1; k < succ.size(); ++k) {
      auto left = ex.reachable(succ.front().first, limit);
      auto right = ex.reachable(succ[k].first, limit);
      if (!left.complete || !right.complete) continue;
      bool meet = false;
      for (auto x : left.nodes)
        if (right.nodes.count(x)) {
          meet = true;
          break;
        }
      if (!meet) {
        Witness w;
        w.kind = WitnessKind::Peak;
        w.elements = {ex.node(i), ex.node(succ.front().first), ex.node(succ[k].first)};
        w.note = "reducts have disjoint reachable sets";
        return CheckVerdict::refuted(std::move(w), "non-joinable peak");
      }
    }
  }
  return CheckVerdict::unknown(bounds.size, "termination not established: " + describe(term));
}

std::size_t Certification::bound() const {
  return std::max(noetherian.bounded ? noetherian.bound : 0,
                  confluent.bounded ? confluent.bound : 0);
}

Certification certify(const Mrs& mrs, const Bounds& bounds) {
  return {check_noetherian(mrs, bounds), check_confluent(mrs, bounds)};
}

// ---- reachability and equivalence ------------------------------------------

namespace {

struct Parent {
  std::size_t from;
  Step step;
};

DerivationTrace path_to(const std::vector<Element>& nodes,
                        const std::vector<std::optional<Parent>>& parent, std::size_t target) {
  DerivationTrace t;
  t.to = nodes[target];
  std::vector<Step> rev;
  for (std::size_t cur = target; parent[cur]; cur = parent[cur]->from) rev.push_back(parent[cur]->step);
  t.steps.assign(rev.rbegin(), rev.rend());
  t.from = t.steps.empty() ? t.to : t.steps.front().before;
  return t;
}

struct SearchResult {
  std::optional<DerivationTrace> trace;
  bool exhausted = false;
};

SearchResult bfs(const Mrs& mrs, const Element& a, const Element& b, const Bounds& bounds,
                 bool undirected) {
  SearchResult res;
  if (a == b) {
    res.trace = DerivationTrace::empty(a);
    return res;
  }
  const Backend& m = mrs.backend();
  const std::size_t cap = std::max({bounds.size, m.size(a), m.size(b)});
  std::vector<Element> nodes{a};
  std::vector<std::optional<Parent>> parent{std::nullopt};
  std::unordered_map<Element, std::size_t, ElementHash> index{{a, 0}};
  bool incomplete = false;
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    if (undirected && !m.finite() && m.size(nodes[head]) > cap) {
      incomplete = true;
      continue;
    }
    std::vector<Successors> layers{proper_successors(mrs, nodes[head], bounds)};
    if (undirected) layers.push_back(proper_predecessors(mrs, nodes[head], bounds));
    for (auto& layer : layers) {
      incomplete = incomplete || layer.truncated;
      for (std::size_t k = 0; k < layer.elements.size(); ++k) {
        const Element& e = layer.elements[k];
        if (index.count(e)) continue;
        if (nodes.size() >= bounds.nodes) return res;
        index.emplace(e, nodes.size());
        nodes.push_back(e);
        parent.push_back(Parent{head, layer.steps[k]});
        if (e == b) {
          res.trace = path_to(nodes, parent, nodes.size() - 1);
          return res;
        }
      }
    }
  }
  res.exhausted = !incomplete;
  return res;
}

}  // namespace

Reach reaches(const Mrs& mrs, const Element& a, const Element& b, const Bounds& bounds) {
  SearchResult r = bfs(mrs, a, b, bounds, false);
  return {std::move(r.trace), r.exhausted};
}

Equivalence equivalent(const Mrs& mrs, const Element& a, const Element& b, const Bounds& bounds,
                       const Certification* cert) {
  if (a == b) return {Tri::True, DerivationTrace::empty(a)};
  const Backend& m = mrs.backend();
  const bool use_nf = cert && cert->ok() &&
                      (cert->global() || std::max(m.size(a), m.size(b)) <= cert->bound());
  if (use_nf) {
    NormalForm na = normal_form(mrs, a, bounds);
    NormalForm nb = normal_form(mrs, b, bounds);
    if (na.certain && nb.certain) {
      if (na.value != nb.value) return {Tri::False, std::nullopt};
      return {Tri::True, concat(na.trace, reverse(nb.trace))};
    }
  }
  SearchResult r = bfs(mrs, a, b, bounds, true);
  if (r.trace) return {Tri::True, std::move(r.trace)};
  return {r.exhausted ? Tri::False : Tri::Unknown, std::nullopt};
}

// ---- traces ----------------------------------------------------------------

std::optional<std::string> validate_trace(const Mrs& mrs, const DerivationTrace& t) {
  const Backend& m = mrs.backend();
  if (t.steps.empty()) {
    if (t.from != t.to) return "empty trace with distinct endpoints";
    return std::nullopt;
  }
  if (t.steps.front().before != t.from) return "first step does not start at the source";
  if (t.steps.back().after != t.to) return "last step does not end at the target";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& s = t.steps[i];
    const std::string at = "step " + std::to_string(i + 1) + ": ";
    if (i > 0 && t.steps[i - 1].after != s.before) return at + "does not chain";
    if (s.rule >= mrs.rules().size()) return at + "unknown rule index " + std::to_string(s.rule);
    if (!m.contains(s.ctx.left) || !m.contains(s.ctx.right)) return at + "context outside the monoid";
    const Rule& r = mrs.rules()[s.rule];
    const bool fwd = s.dir == Direction::Forward;
    const Element& src = fwd ? s.before : s.after;
    const Element& dst = fwd ? s.after : s.before;
    if (m.op3(s.ctx.left, r.lhs, s.ctx.right) != src)
      return at + "x*" + m.print(r.lhs) + "*y does not give " + m.print(src);
    if (m.op3(s.ctx.left, r.rhs, s.ctx.right) != dst)
      return at + "x*" + m.print(r.rhs) + "*y does not give " + m.print(dst);
    if (!m.admissible(src, r.lhs, s.ctx)) return at + "context is not an occurrence of the rule";
  }
  return std::nullopt;
}

DerivationTrace concat(const DerivationTrace& a, const DerivationTrace& b) {
  if (a.to != b.from) throw UsageError("cannot concatenate traces with mismatched endpoints");
  DerivationTrace t = a;
  t.steps.insert(t.steps.end(), b.steps.begin(), b.steps.end());
  t.to = b.to;
  return t;
}

DerivationTrace reverse(const DerivationTrace& t) {
  DerivationTrace r{t.to, t.from, {}};
  for (auto it = t.steps.rbegin(); it != t.steps.rend(); ++it) {
    Step s = *it;
    std::swap(s.before, s.after);
    s.dir = s.dir == Direction::Forward ? Direction::Backward : Direction::Forward;
    r.steps.push_back(std::move(s));
  }
  return r;
}

DerivationTrace in_context(const Backend& m, const DerivationTrace& t, const Element& x,
                           const Element& y) {
  DerivationTrace r{m.op3(x, t.from, y), m.op3(x, t.to, y), {}};
  for (const auto& s : t.steps)
    r.steps.push_back(Step{m.op3(x, s.before, y), s.rule,
                           {m.op(x, s.ctx.left), m.op(s.ctx.right, y)}, s.dir,
                           m.op3(x, s.after, y)});
  return r;
}

DerivationTrace splice_product(const Backend& m, const DerivationTrace& tu,
                               const DerivationTrace& tv) {
  return concat(in_context(m, tu, m.identity(), tv.from), in_context(m, tv, tu.to, m.identity()));
}

void push_step(const Mrs& mrs, DerivationTrace& t, std::size_t rule, const Element& x,
               const Element& y, Direction dir) {
  const Backend& m = mrs.backend();
  const Rule& r = mrs.rules().at(rule);
  const Element& to = dir == Direction::Forward ? r.rhs : r.lhs;
  Step s{t.to, rule, {x, y}, dir, m.op3(x, to, y)};
  t.to = s.after;
  t.steps.push_back(std::move(s));
}

std::string print_trace(const Mrs& mrs, const DerivationTrace& t) {
  std::string out = mrs.print(t.from);
  for (const auto& s : t.steps) {
    const Rule& r = mrs.rules().at(s.rule);
    out += s.dir == Direction::Forward ? "\n  -> " : "\n  <- ";
    out += mrs.print(s.after) + "   [" + mrs.print(r) + " at (" + mrs.print(s.ctx.left) + ", " +
           mrs.print(s.ctx.right) + ")]";
  }
  return out;
}

}  // namespace mrs
