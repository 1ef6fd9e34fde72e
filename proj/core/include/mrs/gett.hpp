#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mrs/collapse.hpp"
#include "mrs/engine.hpp"

namespace mrs {

enum class MoveType { Add = 1, Remove = 2, Adjoin = 3, Collapse = 4 };

std::string to_string(MoveType t);

/// One rewrite of a derivation certificate. `rule` is a 0-based index into the
/// rules of the system the derivation lives in; contexts are element texts.
struct CertificateStep {
  Direction dir = Direction::Forward;
  std::size_t rule = 0;
  std::string left;
  std::string right;
  friend bool operator==(const CertificateStep&, const CertificateStep&) = default;
};

/// Moves are stored as text because every move is read in the system that the
/// previous moves produced.
///
///   Add      lhs -> rhs, certificate derives lhs <->* rhs in the system before.
///   Remove   lhs -> rhs, certificate derives lhs <->* rhs without the rule.
///   Adjoin   lhs is the fresh letter, rhs its target in the old carrier.
///   Collapse subset J; `evidence` records the coherence verdict, which is
///            recomputed on replay.
struct GettMove {
  MoveType type = MoveType::Add;
  std::string lhs;
  std::string rhs;
  std::vector<std::pair<std::string, std::string>> subset;
  std::optional<std::vector<CertificateStep>> certificate;
  std::string evidence;
  friend bool operator==(const GettMove&, const GettMove&) = default;
};

struct GettScript {
  std::vector<GettMove> moves;
  friend bool operator==(const GettScript&, const GettScript&) = default;
};

struct MoveResult {
  Mrs after;
  GettMove move;  // with its certificate filled in
};

/// Each throws Refused (unknown() set when the bound ran out) when the move is
/// not justified.
MoveResult apply_type1(const Mrs& mrs, const Element& a, const Element& b,
                       const Bounds& bounds = {});
MoveResult apply_type2(const Mrs& mrs, const Rule& rule, const Bounds& bounds = {});
MoveResult apply_type3(const Mrs& mrs, const std::string& v, const Element& a);
MoveResult apply_type4(const Mrs& mrs, const std::vector<Rule>& j, const Bounds& bounds = {});

/// The system after adjoining `v` with target `a`, old rules embedded.
Mrs adjoin_letter(const Mrs& mrs, const std::string& v, const Element& a);

/// Certificate of a derivation, and back. `certificate_trace` returns nullopt
/// with a diagnostic when the steps do not replay.
std::vector<CertificateStep> to_certificate(const Mrs& mrs, const DerivationTrace& t);
std::optional<DerivationTrace> certificate_trace(const Mrs& mrs, const Element& from,
                                                 const std::vector<CertificateStep>& cert,
                                                 std::string* why = nullptr);

struct MoveCheck {
  CheckVerdict verdict;
  std::optional<Mrs> after;
  GettMove completed;
};

/// Revalidates one move from scratch. Missing certificates are searched for
/// only when `search_missing` is set; otherwise the move is refuted.
MoveCheck apply_move(const Mrs& before, const GettMove& move, const Bounds& bounds = {},
                     bool search_missing = false);

struct ReplayOptions {
  bool search_missing = false;
  bool keep_trail = false;
};

struct ReplayResult {
  Mrs final_system;
  CheckVerdict verdict;
  std::optional<std::size_t> failed_at;  // 0-based move index
  GettScript completed;                  // moves accepted so far, certificates filled in
  std::vector<Mrs> trail;                // systems after each move, when requested
};

ReplayResult replay_script(const Mrs& initial, const GettScript& script, const Bounds& bounds = {},
                           ReplayOptions options = {});

/// Types 1-2: quotient monoids agree. Type 3: every element of the new carrier
/// is equivalent to the image of its retraction, and the old congruence is
/// reflected. Type 4: monoids of irreducibles agree. Falls back to bounded
/// normal-form comparison when a table cannot be materialized.
CheckVerdict check_preservation(const Mrs& before, const GettMove& move, const Mrs& after,
                                const Bounds& bounds = {});

/// Text form, one move per line with indented certificate lines:
///
///   add 11 -> _
///     step -> 3 _ _
///   adjoin v -> 1
///   collapse { 1 -> v ; 0 -> _ }
GettScript parse_script(std::string_view text);
std::string print_script(const GettScript& script);

}  // namespace mrs
