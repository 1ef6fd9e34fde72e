#include "mrs/gett.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "mrs/irreducibles.hpp"

namespace mrs {

std::string to_string(MoveType t) {
  switch (t) {
    case MoveType::Add: return "add";
    case MoveType::Remove: return "remove";
    case MoveType::Adjoin: return "adjoin";
    case MoveType::Collapse: return "collapse";
  }
  return "?";
}

namespace {

using Map = std::function<Element(const Element&)>;

CheckVerdict invalid(const std::string& why) {
  Witness w;
  w.kind = WitnessKind::Note;
  w.note = why;
  return CheckVerdict::refuted(std::move(w), why);
}

Equivalence search_equivalence(const Mrs& mrs, const Element& a, const Element& b,
                               const Bounds& bounds) {
  Equivalence e = equivalent(mrs, a, b, bounds);
  if (e.status != Tri::Unknown) return e;
  const Certification cert = certify(mrs, bounds);
  if (cert.ok()) return equivalent(mrs, a, b, bounds, &cert);
  return e;
}

// i: A -> A * F_v on payloads.
Map embedding(const BackendPtr& old_backend, const BackendPtr& new_backend) {
  if (new_backend->kind() == old_backend->kind()) return [](const Element& x) { return x; };
  if (new_backend->kind() == BackendKind::Free) {
    // Adjoining to a trivial monoid.
    return [](const Element&) { return Element{}; };
  }
  auto fp = std::static_pointer_cast<const FreeProductBackend>(new_backend);
  return [fp](const Element& x) { return fp->embed(x); };
}

Element letter_element(const Backend& b, const std::string& v) {
  if (auto* f = dynamic_cast<const FreeBackend*>(&b)) return f->letter(*f->letter_index(v));
  auto& fp = dynamic_cast<const FreeProductBackend&>(b);
  return fp.letter(*fp.letter_index(v));
}

// h: A * F_v -> A with h(v) = a and h o i = 1.
Map retraction(const BackendPtr& old_backend, const BackendPtr& new_backend,
               const std::string& v, const Element& a) {
  if (auto* nf = dynamic_cast<const FreeBackend*>(new_backend.get())) {
    const auto vi = static_cast<std::int64_t>(*nf->letter_index(v));
    return [old_backend, vi, a](const Element& w) {
      Element acc = old_backend->identity();
      for (auto l : w.v)
        acc = old_backend->op(acc, l == vi ? a
                                           : (old_backend->kind() == BackendKind::Free
                                                  ? Element({l})
                                                  : old_backend->identity()));
      return acc;
    };
  }
  auto np = std::static_pointer_cast<const FreeProductBackend>(new_backend);
  const auto vi = static_cast<std::int64_t>(*np->letter_index(v));
  auto op = std::dynamic_pointer_cast<const FreeProductBackend>(old_backend);
  return [old_backend, np, op, vi, a](const Element& x) {
    Element acc = old_backend->identity();
    for (const auto& s : np->decode(x)) {
      Element piece;
      if (s.letter < 0) {
        piece = op ? op->embed(s.comp) : s.comp;
      } else if (s.letter == vi) {
        piece = old_backend->identity();
        for (std::int64_t k = 0; k < s.exp; ++k) piece = old_backend->op(piece, a);
      } else {
        piece = op->letter(static_cast<std::size_t>(s.letter), s.exp);
      }
      acc = old_backend->op(acc, piece);
    }
    return acc;
  };
}

std::optional<Element> parse_in(const Mrs& mrs, const std::string& text, std::string& why) {
  try {
    return mrs.parse(text);
  } catch (const std::exception& e) {
    why = "cannot read '" + text + "': " + e.what();
    return std::nullopt;
  }
}

std::string positive_reason(const CheckVerdict& v) { return v.reason.empty() ? describe(v) : v.reason; }

}  // namespace

std::vector<CertificateStep> to_certificate(const Mrs& mrs, const DerivationTrace& t) {
  std::vector<CertificateStep> out;
  for (const auto& s : t.steps)
    out.push_back({s.dir, s.rule, mrs.print(s.ctx.left), mrs.print(s.ctx.right)});
  return out;
}

std::optional<DerivationTrace> certificate_trace(const Mrs& mrs, const Element& from,
                                                 const std::vector<CertificateStep>& cert,
                                                 std::string* why) {
  const auto fail = [&](std::string msg) -> std::optional<DerivationTrace> {
    if (why) *why = std::move(msg);
    return std::nullopt;
  };
  DerivationTrace t = DerivationTrace::empty(from);
  for (std::size_t i = 0; i < cert.size(); ++i) {
    const auto& c = cert[i];
    if (c.rule >= mrs.rules().size())
      return fail("step " + std::to_string(i + 1) + " names rule " + std::to_string(c.rule + 1) +
                  " of " + std::to_string(mrs.rules().size()));
    std::string err;
    auto x = parse_in(mrs, c.left, err);
    auto y = x ? parse_in(mrs, c.right, err) : std::nullopt;
    if (!x || !y) return fail("step " + std::to_string(i + 1) + ": " + err);
    push_step(mrs, t, c.rule, *x, *y, c.dir);
  }
  if (auto diag = validate_trace(mrs, t)) return fail(*diag);
  return t;
}

Mrs adjoin_letter(const Mrs& mrs, const std::string& v, const Element& a) {
  if (!is_fresh_letter(mrs.backend(), v)) throw Refused("letter '" + v + "' is not fresh");
  if (!mrs.backend().contains(a)) throw Refused("target is not an element of the carrier");
  BackendPtr nb = free_product_adjoin(mrs.backend_ptr(), {v});
  const Map i = embedding(mrs.backend_ptr(), nb);
  std::vector<Rule> rules;
  for (const auto& r : mrs.rules()) rules.push_back({i(r.lhs), i(r.rhs)});
  rules.push_back({letter_element(*nb, v), i(a)});
  return Mrs(nb, std::move(rules));
}

MoveResult apply_type1(const Mrs& mrs, const Element& a, const Element& b, const Bounds& bounds) {
  const Equivalence e = search_equivalence(mrs, a, b, bounds);
  if (e.status == Tri::False)
    throw Refused(mrs.print(a) + " and " + mrs.print(b) + " are not equivalent");
  if (e.status == Tri::Unknown || !e.trace)
    throw Refused("equivalence of " + mrs.print(a) + " and " + mrs.print(b) +
                      " is unknown within the bound",
                  true);
  GettMove m;
  m.type = MoveType::Add;
  m.lhs = mrs.print(a);
  m.rhs = mrs.print(b);
  m.certificate = to_certificate(mrs, *e.trace);
  return {mrs.with_rule({a, b}), std::move(m)};
}

MoveResult apply_type2(const Mrs& mrs, const Rule& rule, const Bounds& bounds) {
  if (!mrs.has_rule(rule)) throw Refused("rule " + mrs.print(rule) + " is not in R");
  const Mrs rest = mrs.without_rule(rule);
  const Equivalence e = search_equivalence(rest, rule.lhs, rule.rhs, bounds);
  if (e.status == Tri::False)
    throw Refused("rule " + mrs.print(rule) + " is not derivable from the remaining rules");
  if (e.status == Tri::Unknown || !e.trace)
    throw Refused("derivability of " + mrs.print(rule) + " without it is unknown within the bound",
                  true);
  GettMove m;
  m.type = MoveType::Remove;
  m.lhs = mrs.print(rule.lhs);
  m.rhs = mrs.print(rule.rhs);
  m.certificate = to_certificate(rest, *e.trace);
  return {rest, std::move(m)};
}

MoveResult apply_type3(const Mrs& mrs, const std::string& v, const Element& a) {
  GettMove m;
  m.type = MoveType::Adjoin;
  m.lhs = v;
  m.rhs = mrs.print(a);
  return {adjoin_letter(mrs, v, a), std::move(m)};
}

MoveResult apply_type4(const Mrs& mrs, const std::vector<Rule>& j, const Bounds& bounds) {
  const CheckVerdict v = check_coherent(mrs, j, bounds);
  if (!v.ok()) throw Refused("J is not coherent: " + describe(v), !v.refuted());
  GettMove m;
  m.type = MoveType::Collapse;
  for (const auto& r : j) m.subset.emplace_back(mrs.print(r.lhs), mrs.print(r.rhs));
  m.evidence = describe(v);
  return {collapse(mrs, j, bounds, false).mrs, std::move(m)};
}

MoveCheck apply_move(const Mrs& before, const GettMove& move, const Bounds& bounds,
                     bool search_missing) {
  MoveCheck out;
  out.completed = move;
  std::string why;

  if (move.type == MoveType::Add || move.type == MoveType::Remove) {
    auto a = parse_in(before, move.lhs, why);
    auto b = a ? parse_in(before, move.rhs, why) : std::nullopt;
    if (!a || !b) {
      out.verdict = invalid(why);
      return out;
    }
    const Rule rule{*a, *b};
    const bool add = move.type == MoveType::Add;
    if (!add && !before.has_rule(rule)) {
      out.verdict = invalid("rule " + before.print(rule) + " is not in R");
      return out;
    }
    const Mrs system = add ? before : before.without_rule(rule);
    if (!move.certificate) {
      if (!search_missing) {
        out.verdict = invalid("missing certificate");
        return out;
      }
      try {
        MoveResult r = add ? apply_type1(before, *a, *b, bounds) : apply_type2(before, rule, bounds);
        out.completed.certificate = r.move.certificate;
      } catch (const Refused& e) {
        out.verdict = e.unknown() ? CheckVerdict::unknown(bounds.size, e.what()) : invalid(e.what());
        return out;
      }
    }
    auto t = certificate_trace(system, *a, *out.completed.certificate, &why);
    if (!t) {
      out.verdict = invalid("certificate does not replay: " + why);
      return out;
    }
    if (t->to != *b) {
      out.verdict = invalid("certificate ends at " + system.print(t->to) + ", not " +
                            system.print(*b));
      return out;
    }
    out.verdict = CheckVerdict::verified("derivation of " + std::to_string(t->steps.size()) +
                                         " steps replays");
    out.after = add ? before.with_rule(rule) : system;
    return out;
  }

  if (move.type == MoveType::Adjoin) {
    auto a = parse_in(before, move.rhs, why);
    if (!a) {
      out.verdict = invalid(why);
      return out;
    }
    try {
      out.after = adjoin_letter(before, move.lhs, *a);
    } catch (const std::exception& e) {
      out.verdict = invalid(e.what());
      return out;
    }
    out.verdict = CheckVerdict::verified("letter " + move.lhs + " is fresh");
    return out;
  }

  std::vector<Rule> j;
  for (const auto& [l, r] : move.subset) {
    auto a = parse_in(before, l, why);
    auto b = a ? parse_in(before, r, why) : std::nullopt;
    if (!a || !b) {
      out.verdict = invalid(why);
      return out;
    }
    if (!before.has_rule({*a, *b})) {
      out.verdict = invalid("rule " + l + " -> " + r + " is not in R");
      return out;
    }
    j.push_back({*a, *b});
  }
  out.verdict = check_coherent(before, j, bounds);
  out.completed.evidence = describe(out.verdict);
  if (!out.verdict.ok()) return out;
  try {
    out.after = collapse(before, j, bounds, false).mrs;
  } catch (const Refused& e) {
    out.verdict = e.unknown() ? CheckVerdict::unknown(bounds.size, e.what()) : invalid(e.what());
    out.after.reset();
  }
  return out;
}

ReplayResult replay_script(const Mrs& initial, const GettScript& script, const Bounds& bounds,
                           ReplayOptions options) {
  ReplayResult res;
  res.final_system = initial;
  std::size_t bound = 0;
  for (std::size_t i = 0; i < script.moves.size(); ++i) {
    MoveCheck mc = apply_move(res.final_system, script.moves[i], bounds, options.search_missing);
    if (!mc.verdict.ok()) {
      res.failed_at = i;
      res.verdict = mc.verdict;
      res.verdict.reason = "move " + std::to_string(i + 1) + " (" +
                           to_string(script.moves[i].type) + "): " + positive_reason(mc.verdict);
      return res;
    }
    if (mc.verdict.bounded) bound = bound ? std::min(bound, mc.verdict.bound) : mc.verdict.bound;
    res.final_system = std::move(*mc.after);
    res.completed.moves.push_back(std::move(mc.completed));
    if (options.keep_trail) res.trail.push_back(res.final_system);
  }
  const std::string why = std::to_string(script.moves.size()) + " moves revalidated";
  res.verdict = bound ? CheckVerdict::verified_up_to(bound, why) : CheckVerdict::verified(why);
  return res;
}

// ---- preservation ----------------------------------------------------------

namespace {

// Compares the congruences of x and y on a sample of x's carrier mapped by f,
// using normal forms. Both systems must be certified.
CheckVerdict compare_by_normal_forms(const Mrs& x, const Mrs& y, const Map& f,
                                     const Bounds& bounds, std::size_t word_bound) {
  const Certification cx = certify(x, bounds), cy = certify(y, bounds);
  if (!cx.ok() || !cy.ok())
    return CheckVerdict::unknown(bounds.size, "normal forms are not certified on both sides");
  const Bounds fb = fit_bounds(x.backend(), [&] {
    Bounds b = bounds;
    b.size = std::min(word_bound, bounds.size);
    return b;
  }());
  std::map<Element, Element> fwd, back;
  for (const auto& w : x.backend().enumerate(fb.size)) {
    const Element kx = normal_form(x, w, bounds).value;
    const Element ky = normal_form(y, f(w), bounds).value;
    auto [i, fresh_x] = fwd.emplace(kx, ky);
    auto [j, fresh_y] = back.emplace(ky, kx);
    if (i->second != ky || j->second != kx) {
      Witness wit;
      wit.kind = WitnessKind::Element;
      wit.elements = {w};
      wit.note = "normal forms disagree at " + x.print(w);
      return CheckVerdict::refuted(std::move(wit), wit.note);
    }
  }
  return CheckVerdict::verified_up_to(fb.size, "normal-form classes agree on the sample");
}

CheckVerdict compare_irreducible_monoids(const Mrs& x, const Mrs& y, const Map& f,
                                         const Bounds& bounds) {
  try {
    const IrreducibleMonoid ix = monoid_of_irreducibles(x, bounds);
    const IrreducibleMonoid iy = monoid_of_irreducibles(y, bounds);
    if (!find_isomorphism(ix.table, iy.table)) {
      Witness w;
      w.note = "monoids of irreducibles have orders " + std::to_string(ix.table.order()) + " and " +
               std::to_string(iy.table.order()) + " and are not isomorphic";
      return CheckVerdict::refuted(std::move(w), w.note);
    }
    const std::size_t b = std::max(ix.bounded ? ix.bound : 0, iy.bounded ? iy.bound : 0);
    return b ? CheckVerdict::verified_up_to(b, "irreducible monoids isomorphic")
             : CheckVerdict::verified("irreducible monoids isomorphic");
  } catch (const Refused&) {
    return compare_by_normal_forms(x, y, f, bounds, 6);
  }
}

}  // namespace

CheckVerdict check_preservation(const Mrs& before, const GettMove& move, const Mrs& after,
                                const Bounds& bounds) {
  const Map identity = [](const Element& e) { return e; };
  switch (move.type) {
    case MoveType::Add:
    case MoveType::Remove: {
      if (before.backend().finite() && after.backend().finite()) {
        const QuotientMonoid qa = quotient_monoid(before, bounds);
        const QuotientMonoid qb = quotient_monoid(after, bounds);
        auto sorted = [](std::vector<std::vector<Element>> c) {
          for (auto& k : c) std::sort(k.begin(), k.end());
          std::sort(c.begin(), c.end());
          return c;
        };
        if (sorted(qa.classes) == sorted(qb.classes)) return CheckVerdict::verified("quotients coincide");
        Witness w;
        w.note = "quotient classes differ";
        return CheckVerdict::refuted(std::move(w), w.note);
      }
      return compare_irreducible_monoids(before, after, identity, bounds);
    }
    case MoveType::Adjoin: {
      Element a;
      try {
        a = before.parse(move.rhs);
      } catch (const std::exception& e) {
        return invalid(e.what());
      }
      const Map i = embedding(before.backend_ptr(), after.backend_ptr());
      const Map h = retraction(before.backend_ptr(), after.backend_ptr(), move.lhs, a);
      Bounds sb = bounds;
      sb.size = std::min<std::size_t>(bounds.size, 4);
      sb = fit_bounds(after.backend(), sb, 2000);
      for (const auto& x : before.backend().enumerate(sb.size))
        if (h(i(x)) != x) return invalid("h o i moves " + before.print(x));
      const auto sample = after.backend().enumerate(sb.size);
      for (const auto& x : sample)
        for (const auto& y : sample)
          if (h(after.backend().op(x, y)) != before.backend().op(h(x), h(y)))
            return invalid("retraction is not multiplicative at " + after.print(x) + ", " +
                           after.print(y));
      for (const auto& r : after.rules())
        if (equivalent(before, h(r.lhs), h(r.rhs), bounds).status != Tri::True)
          return CheckVerdict::unknown(sb.size, "image of rule " + after.print(r) + " not derived");
      for (const auto& x : sample) {
        const auto e = equivalent(after, x, i(h(x)), bounds);
        if (e.status == Tri::False) return invalid(after.print(x) + " is not equivalent to i(h(x))");
        if (e.status == Tri::Unknown)
          return CheckVerdict::unknown(sb.size, "no derivation " + after.print(x) + " <->* i(h(x))");
      }
      return CheckVerdict::verified_up_to(sb.size, "retraction induces the quotient isomorphism");
    }
    case MoveType::Collapse: {
      std::vector<Rule> j;
      for (const auto& [l, r] : move.subset) j.push_back({before.parse(l), before.parse(r)});
      const CollapsedSystem c = collapse(before, j, bounds, false);
      return compare_irreducible_monoids(before, after, c.projection, bounds);
    }
  }
  return CheckVerdict::unknown(0, "unknown move");
}

}  // namespace mrs
