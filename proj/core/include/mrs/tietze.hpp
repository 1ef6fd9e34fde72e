#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mrs/gett.hpp"
#include "mrs/irreducibles.hpp"

namespace mrs {

/// Script from (M, *, {}) to a copy of G(M): one letter m' per non-identity
/// element with rule (m', m), the pair rules m'n' -> (mn)', the rules
/// m -> m', removal of m' -> m, and a collapse by {m -> m'}.
GettScript presentation_script(const FiniteMonoid& m);

struct PipelineStage {
  std::string name;
  std::size_t first_move = 0;  // index into the script
  std::size_t moves = 0;
  Mrs system;                  // system after the stage
  std::optional<bool> preserves_irreducibles;  // nullopt when I(stage) cannot be tabulated
};

struct PipelineReport {
  GettScript script;
  std::vector<PipelineStage> stages;
  MonoidMap identification;  // I(A) index -> I(B) index
  CheckVerdict replay;       // full revalidation of the script from A
  bool final_matches = false;
  std::string detail;
};

/// Five-stage path from A to B. Both systems must be certified with tabulated
/// monoids of irreducibles and B must have a finite carrier. Without an
/// identification, elements with equal names are matched when that is an
/// isomorphism, otherwise the first isomorphism found is used.
PipelineReport tietze_path(const Mrs& a, const Mrs& b,
                           std::optional<MonoidMap> identification = std::nullopt,
                           const Bounds& bounds = {});

/// Free monoids compared up to a bijection of letters; tables up to an
/// isomorphism. Rule sets are compared as sets.
bool same_up_to_renaming(const Mrs& x, const Mrs& y, std::string* why = nullptr);

}  // namespace mrs
