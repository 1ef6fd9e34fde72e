#include "report.hpp"

namespace mrs::report {

namespace {

std::string kind_name(WitnessKind k) {
  switch (k) {
    case WitnessKind::Cycle: return "cycle";
    case WitnessKind::Peak: return "peak";
    case WitnessKind::Rule: return "rule";
    case WitnessKind::Element: return "element";
    case WitnessKind::Note: return "note";
  }
  return "note";
}

std::string indent(const std::string& s, const std::string& pad) {
  std::string out = pad;
  for (char c : s) {
    out += c;
    if (c == '\n') out += pad;
  }
  return out;
}

}  // namespace

json trace_json(const Mrs& mrs, const DerivationTrace& t) {
  json steps = json::array();
  for (const auto& s : t.steps) {
    steps.push_back({{"rule", s.rule + 1},
                     {"rule_text", mrs.print(mrs.rules().at(s.rule))},
                     {"direction", s.dir == Direction::Forward ? "->" : "<-"},
                     {"left", mrs.print(s.ctx.left)},
                     {"right", mrs.print(s.ctx.right)},
                     {"before", mrs.print(s.before)},
                     {"after", mrs.print(s.after)}});
  }
  return {{"from", mrs.print(t.from)}, {"to", mrs.print(t.to)}, {"steps", steps}};
}

json verdict_json(const Mrs& mrs, const CheckVerdict& v) {
  json j = {{"status", to_string(v.status)}, {"bounded", v.bounded}, {"reason", v.reason}};
  if (v.bounded || v.status == Verdict::Unknown) j["bound"] = v.bound;
  if (v.witness) {
    json w = {{"kind", kind_name(v.witness->kind)}, {"note", v.witness->note}};
    w["elements"] = json::array();
    for (const auto& e : v.witness->elements) w["elements"].push_back(mrs.print(e));
    w["traces"] = json::array();
    for (const auto& t : v.witness->traces) w["traces"].push_back(trace_json(mrs, t));
    j["witness"] = std::move(w);
  }
  return j;
}

std::string verdict_text(const Mrs& mrs, const CheckVerdict& v) {
  std::string out = describe(v);
  if (!v.witness) return out;
  out += "\n  witness (" + kind_name(v.witness->kind) + ")";
  if (!v.witness->note.empty()) out += ": " + v.witness->note;
  if (!v.witness->elements.empty()) {
    out += "\n  elements:";
    for (const auto& e : v.witness->elements) out += " " + mrs.print(e);
  }
  for (const auto& t : v.witness->traces) out += "\n" + indent(print_trace(mrs, t), "    ");
  return out;
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Verified: return 0;
    case Verdict::Refuted: return 1;
    case Verdict::Unknown: return 2;
  }
  return 2;
}

int exit_code(const CheckVerdict& v) { return exit_code(v.status); }

}  // namespace mrs::report
