#pragma once

#include <string>

#include <json.hpp>

#include "nlss/system_model.hpp"

namespace nlss {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "nls-solitons/1";

// keys keep insertion order; doubles printed with %.17g, non-finite as null
std::string dump_json(const Json& j, int indent = 2);

Json to_json(const CPair& w);  // [[re, im], [re, im]]
Json to_json(const Mat2& M);
Json params_json(FormTag tag, const FormParams& q);  // only the parameters the tag uses
Json system_json(const SystemSpec& s);

FormParams params_from_json(FormTag tag, const Json& j);
// {"standard_form": "NLS3", "params": {...}, "d": 1} or {"lambdas": [12 numbers], "d": 1, "p": 4, "n": [1, 1]}
SystemSpec system_from_json(const Json& j);
SystemSpec load_system(const std::string& path);

}  // namespace nlss
