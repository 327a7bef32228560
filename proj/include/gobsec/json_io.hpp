#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "gobsec/diagnostic.hpp"
#include "gobsec/eval.hpp"
#include "gobsec/prni.hpp"

namespace gobsec {

using Json = nlohmann::ordered_json;

Json to_json(const Diagnostic& d);
Json to_json(const std::vector<Diagnostic>& ds);
Json to_json(const Outcome& o);
Json to_json(const Verdict& v);

/// Compact single-line rendering with a trailing newline.
std::string dump_line(const Json& j);

}  // namespace gobsec
