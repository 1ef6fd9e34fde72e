#pragma once

#include <string>

#include "json.hpp"
#include "mrs/engine.hpp"

namespace mrs::report {

using nlohmann::json;

json trace_json(const Mrs& mrs, const DerivationTrace& t);
json verdict_json(const Mrs& mrs, const CheckVerdict& v);

/// Verdict line, then the witness and its traces indented below it.
std::string verdict_text(const Mrs& mrs, const CheckVerdict& v);

/// 0 verified, 1 refuted, 2 unknown.
int exit_code(const CheckVerdict& v);
int exit_code(Verdict v);

}  // namespace mrs::report
