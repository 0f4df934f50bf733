#include "report_io.hpp"

#include <map>
#include <set>
#include <sstream>

namespace lbharm::cli {

using nlohmann::json;

json to_json(const InequalityReport& r) {
  json params = r.params;
  for (const auto& [k, v] : r.labels) params[k] = v;
  return {{"name", r.name},
          {"kind", to_string(r.kind)},
          {"params", params},
          {"lhs", r.lhs},
          {"rhs_paper", r.rhs_paper},
          {"rhs_oracle", r.rhs_oracle ? json(*r.rhs_oracle) : json(nullptr)},
          {"ratio_paper", r.ratio_paper},
          {"ratio_oracle", r.ratio_oracle ? json(*r.ratio_oracle) : json(nullptr)},
          {"strict", r.strict},
          {"satisfied", r.satisfied()},
          {"grid_error_estimate", r.grid_error_estimate},
          {"grid", r.grid},
          {"values", r.values},
          {"runtime_ms", r.runtime_ms}};
}

namespace {

void flatten(const json& value, const std::string& prefix, std::map<std::string, std::string>& out) {
  if (value.is_object()) {
    for (const auto& [k, v] : value.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    return;
  }
  if (value.is_null()) {
    out[prefix] = "";
  } else if (value.is_string()) {
    out[prefix] = value.get<std::string>();
  } else {
    out[prefix] = value.dump();
  }
}

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string reports_to_csv(const json& doc) {
  std::vector<std::map<std::string, std::string>> rows;
  std::set<std::string> columns;
  if (doc.contains("reports")) {
    for (const auto& rep : doc["reports"]) {
      std::map<std::string, std::string> row;
      flatten(rep, "", row);
      for (const auto& [k, _] : row) columns.insert(k);
      rows.push_back(std::move(row));
    }
  }
  std::ostringstream out;
  bool first = true;
  for (const auto& c : columns) {
    out << (first ? "" : ",") << quote(c);
    first = false;
  }
  out << '\n';
  for (const auto& row : rows) {
    first = true;
    for (const auto& c : columns) {
      const auto it = row.find(c);
      out << (first ? "" : ",") << (it == row.end() ? "" : quote(it->second));
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

json strip_runtime(const json& doc) {
  if (doc.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : doc.items()) {
      if (k != "runtime_ms") out[k] = strip_runtime(v);
    }
    return out;
  }
  if (doc.is_array()) {
    json out = json::array();
    for (const auto& v : doc) out.push_back(strip_runtime(v));
    return out;
  }
  return doc;
}

}  // namespace lbharm::cli
