#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "multicat/instance.hpp"
#include "multicat/query.hpp"
#include "multicat/typecheck.hpp"
#include "multicat/value.hpp"

namespace multicat {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct XmlDoc {
  std::string text;
};

struct GraphView {
  struct Vertex {
    std::string id;
    std::vector<std::pair<std::string, std::string>> props;
  };
  std::vector<Vertex> vertices;  // first-occurrence order of the result
  std::vector<std::pair<std::string, std::string>> edges;  // ascending

  GraphSemantics semantics() const;
};

struct GraphTermText {
  std::string text;
};

struct RenderedResult {
  OutputModel model;
  std::variant<Table, XmlDoc, GraphView, GraphTermText> payload;
};

// Each renderer takes the result list and its element type; the type only
// matters for column headers of empty results. All throw
// Error(Unrenderable) for values outside their domain.
Table render_relational(const Value& v, const QueryType& elem, const InstanceStore& store);
XmlDoc render_xml(const Value& v, const QueryType& elem, const InstanceStore& store);
GraphView render_graph(const Value& v, const QueryType& elem, const InstanceStore& store);
GraphTermText render_graph_term(const Value& v, const QueryType& elem, const InstanceStore& store);
RenderedResult render(OutputModel model, const Value& v, const QueryType& elem, const InstanceStore& store);

/// RFC-4180, CRLF line endings, header row first.
std::string to_csv(const Table& t);
/// Column-aligned plain text for terminals.
std::string to_text(const Table& t);
nlohmann::json to_json(const Table& t);
nlohmann::json to_json(const GraphView& g);
std::string to_dot(const GraphView& g);

}  // namespace multicat
