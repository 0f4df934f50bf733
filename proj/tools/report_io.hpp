#pragma once

#include <string>

#include "json.hpp"

#include "lbharm/report.hpp"

namespace lbharm::cli {

nlohmann::json to_json(const InequalityReport& report);

/// One row per entry of doc["reports"], one column per flattened field.
std::string reports_to_csv(const nlohmann::json& doc);

/// Copy of a document with every "runtime_ms" member removed.
nlohmann::json strip_runtime(const nlohmann::json& doc);

}  // namespace lbharm::cli
