#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ssg/action.hpp"
#include "ssg/algebra.hpp"
#include "ssg/kgraph.hpp"

namespace ssg {

inline constexpr const char* kModelSchema = "ssgraph/1";
inline constexpr const char* kReportSchema = "ssgraph-report/1";

struct ModelDocument {
  std::shared_ptr<const KGraph> graph;
  std::vector<GeneratorTable> tables;
  nlohmann::json metadata = nlohmann::json::object();
};

// Structural parse; throws ParseError with a JSON pointer to the offending node.
ModelDocument parse_document(const nlohmann::json& doc);
ModelDocument parse_document(std::string_view text);
inline ModelDocument parse_document(const std::string& text) { return parse_document(std::string_view(text)); }
inline ModelDocument parse_document(const char* text) { return parse_document(std::string_view(text)); }

// Graph checks, table checks and, when the tables are usable, the law checks
// of the built action.
ValidationReport validate_document(const ModelDocument& doc, ActionCaps caps = {});

// Parse, validate and build; throws ParseError or ValidationError.
ActionSystem parse_model(std::string_view text, ActionCaps caps = {});
ActionSystem build_model(const ModelDocument& doc, ActionCaps caps = {});

nlohmann::json emit_model(const ActionSystem& sys, const nlohmann::json& metadata = nlohmann::json::object());
// Serialization with fixed key order and indentation.
std::string dump_canonical(const nlohmann::json& j);

nlohmann::json path_to_json(const KGraph& g, const Path& p);
Path path_from_json(const KGraph& g, const nlohmann::json& j);

nlohmann::json element_to_json(const ActionSystem& sys, const ComplexElement& a);
ComplexElement element_from_json(ActionSystem& sys, const nlohmann::json& j);

}  // namespace ssg
