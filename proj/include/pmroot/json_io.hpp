#pragma once

#include <string>

#include <json.hpp>

#include "pmroot/conditions.hpp"
#include "pmroot/engines.hpp"
#include "pmroot/pm_function.hpp"
#include "pmroot/verify.hpp"

namespace pmroot {

using json = nlohmann::ordered_json;

/// Input format: { "domain": [a, b], "xs": [...], "ys": [...] }.
/// Throws ParseError on malformed input; validation errors propagate.
PMFunction pm_function_from_json(const json& j);
PMFunction load_pm_function(const std::string& path);

json to_json(const PMFunction& F);
json to_json(const HeightReport& h);
json analysis_to_json(const PMFunction& F, int height_cap = 32,
                      std::size_t breakpoint_budget = 1000000);
json to_json(const ConditionReport& rep);
json to_json(const FortPattern& pat);
json to_json(const ReversingReport& rep);
json to_json(const Table1Verdict& verdict);
json to_json(const VerificationReport& rep);

/// Recipe: everything needed to re-instantiate a root evaluator against the
/// same input map (guarded by a content hash).
json recipe_to_json(const RootFunction& f, const PMFunction& outer);
RootFunction root_from_recipe(const PMFunction& outer, const json& recipe);

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace pmroot
