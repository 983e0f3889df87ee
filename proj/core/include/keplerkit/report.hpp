#pragma once

#include <string>

#include <json.hpp>

#include "keplerkit/criteria.hpp"
#include "keplerkit/quad.hpp"

namespace keplerkit::report {

using json = nlohmann::ordered_json;

/// Serialize with every float printed at 17 significant digits, so identical
/// inputs produce byte-identical reports.
std::string dump_17g(const json& j, int indent = 2);

json to_json(const quad::Functionals& fn);
json to_json(const criteria::CriteriaReport& rep);
json to_json(const quad::SelfTestReport& rep);

std::string format_double(double v); // %.17g

void write_text_file(const std::string& path, const std::string& content);

} // namespace keplerkit::report
