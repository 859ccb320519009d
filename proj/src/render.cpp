#include "multicat/render.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "multicat/csv.hpp"

namespace multicat {

namespace {

using Kind = QueryType::Kind;

[[noreturn]] void unrenderable(OutputModel model, const std::string& reason) {
  throw Error(ErrorKind::Unrenderable, "cannot render as " + std::string(to_string(model)) + ": " + reason);
}

bool flat(const QueryType& t) { return t.kind == Kind::Prim || t.kind == Kind::Entity; }

/// Rejects element types the tabular and tree renderers cannot express.
void require_rows(const QueryType& elem, OutputModel model) {
  if (elem.kind == Kind::Var || flat(elem)) return;
  if (elem.kind == Kind::Tuple) {
    for (const auto& c : elem.args)
      if (!flat(c)) unrenderable(model, "tuple component of type " + c.str() + " is not a primitive or entity");
    return;
  }
  unrenderable(model, "elements of type " + elem.str() + " are not rows");
}

std::string id_column(const std::string& object) {
  std::string out = object;
  if (!out.empty()) out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
  return out + "Id";
}

std::vector<const Morphism*> attributes(const InstanceStore& store, const std::string& object) {
  return store.schema().attributes_of(object);
}

std::string col(std::size_t k) { return "col" + std::to_string(k); }

std::vector<Value> items_of(const Value& v) { return v.as_list().to_vector(); }

// -- XML ----------------------------------------------------------------------

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

class XmlWriter {
 public:
  void leaf(int depth, const std::string& tag, const std::string& text) {
    indent(depth);
    out_ += "<" + tag + ">" + xml_escape(text) + "</" + tag + ">\n";
  }
  void open(int depth, const std::string& tag) {
    indent(depth);
    out_ += "<" + tag + ">\n";
  }
  void close(int depth, const std::string& tag) {
    indent(depth);
    out_ += "</" + tag + ">\n";
  }
  std::string take() { return std::move(out_); }

 private:
  void indent(int depth) { out_.append(static_cast<std::size_t>(depth) * 2, ' '); }
  std::string out_;
};

void xml_attribute(XmlWriter& w, int depth, const std::string& tag, const Value& v) {
  if (v.is_list()) {
    for (const auto& x : v.as_list()) w.leaf(depth, tag, display(x));
  } else {
    w.leaf(depth, tag, display(v));
  }
}

void xml_entity_fields(XmlWriter& w, int depth, const Entity& e, const InstanceStore& store) {
  w.leaf(depth, id_column(e.object), e.id);
  for (const auto* m : attributes(store, e.object)) xml_attribute(w, depth, m->id, store.apply(m->id, e.id));
}

}  // namespace

GraphSemantics GraphView::semantics() const {
  GraphSemantics s;
  for (const auto& v : vertices) s.vertices.insert(v.id);
  s.edges.insert(edges.begin(), edges.end());
  return s;
}

Table render_relational(const Value& v, const QueryType& elem, const InstanceStore& store) {
  require_rows(elem, OutputModel::Relational);
  Table t;
  auto entity_columns = [&](const std::string& object, const std::string& prefix) {
    if (prefix.empty()) {
      t.columns.push_back(id_column(object));
      for (const auto* m : attributes(store, object)) t.columns.push_back(m->id);
    } else {
      t.columns.push_back(prefix);
      for (const auto* m : attributes(store, object)) t.columns.push_back(prefix + "." + m->id);
    }
  };
  switch (elem.kind) {
    case Kind::Entity: entity_columns(elem.entity, ""); break;
    case Kind::Tuple:
      for (std::size_t k = 0; k < elem.args.size(); ++k) {
        if (elem.args[k].kind == Kind::Entity) {
          entity_columns(elem.args[k].entity, col(k + 1));
        } else {
          t.columns.push_back(col(k + 1));
        }
      }
      break;
    default: t.columns.push_back(col(1));
  }

  auto entity_cells = [&](const Entity& e, std::vector<std::string>& row) {
    row.push_back(e.id);
    for (const auto* m : attributes(store, e.object)) row.push_back(display(store.apply(m->id, e.id)));
  };
  for (const auto& item : v.as_list()) {
    std::vector<std::string> row;
    row.reserve(t.columns.size());
    if (item.is_entity()) {
      entity_cells(item.as_entity(), row);
    } else if (item.is_tuple()) {
      for (const auto& c : item.as_tuple().items) {
        if (c.is_entity()) {
          entity_cells(c.as_entity(), row);
        } else {
          row.push_back(display(c));
        }
      }
    } else {
      row.push_back(display(item));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

XmlDoc render_xml(const Value& v, const QueryType& elem, const InstanceStore& store) {
  require_rows(elem, OutputModel::Xml);
  if (v.as_list().empty()) return {"<result/>\n"};
  XmlWriter w;
  w.open(0, "result");
  for (const auto& item : v.as_list()) {
    if (item.is_entity()) {
      w.open(1, "item");
      xml_entity_fields(w, 2, item.as_entity(), store);
      w.close(1, "item");
    } else if (item.is_tuple()) {
      w.open(1, "item");
      const auto& items = item.as_tuple().items;
      for (std::size_t k = 0; k < items.size(); ++k) {
        if (items[k].is_entity()) {
          w.open(2, col(k + 1));
          xml_entity_fields(w, 3, items[k].as_entity(), store);
          w.close(2, col(k + 1));
        } else {
          w.leaf(2, col(k + 1), display(items[k]));
        }
      }
      w.close(1, "item");
    } else {
      w.leaf(1, "item", display(item));
    }
  }
  w.close(0, "result");
  return {w.take()};
}

GraphView render_graph(const Value& v, const QueryType& elem, const InstanceStore& store) {
  GraphView g;
  if (elem.kind == Kind::Var) return g;
  const bool entity_first = elem.kind == Kind::Entity || (elem.kind == Kind::Tuple && elem.args[0].kind == Kind::Entity);
  if (elem.kind == Kind::Tuple) {
    for (const auto& c : elem.args)
      if (!flat(c)) unrenderable(OutputModel::Graph, "tuple component of type " + c.str() + " cannot be a property");
  } else if (!flat(elem)) {
    unrenderable(OutputModel::Graph, "elements of type " + elem.str() + " are not vertices");
  }

  const auto items = items_of(v);
  if (!entity_first) {
    // No entity to anchor on: one synthetic vertex per element.
    for (std::size_t i = 0; i < items.size(); ++i) {
      GraphView::Vertex vx{"n" + std::to_string(i + 1), {}};
      if (items[i].is_tuple()) {
        const auto& comps = items[i].as_tuple().items;
        for (std::size_t k = 0; k < comps.size(); ++k) vx.props.emplace_back(col(k + 1), display(comps[k]));
      } else {
        vx.props.emplace_back(col(1), display(items[i]));
      }
      g.vertices.push_back(std::move(vx));
    }
    return g;
  }

  const std::string& object = elem.kind == Kind::Entity ? elem.entity : elem.args[0].entity;
  std::map<std::string, std::size_t> seen;
  for (const auto& item : items) {
    const Entity& e = item.is_entity() ? item.as_entity() : item.as_tuple().items[0].as_entity();
    if (seen.count(e.id)) continue;
    seen.emplace(e.id, g.vertices.size());
    GraphView::Vertex vx{e.id, {}};
    for (const auto* m : attributes(store, e.object)) vx.props.emplace_back(m->id, display(store.apply(m->id, e.id)));
    if (item.is_tuple()) {
      const auto& comps = item.as_tuple().items;
      for (std::size_t k = 1; k < comps.size(); ++k) vx.props.emplace_back(col(k + 1), display(comps[k]));
    }
    g.vertices.push_back(std::move(vx));
  }
  const auto* c = store.collection_for(object);
  if (c && c->model == DataModel::Graph) {
    std::set<std::string> keep;
    for (const auto& [id, idx] : seen) keep.insert(id);
    const auto s = multicat::semantics(induced_subgraph(c->graph, keep));
    g.edges.assign(s.edges.begin(), s.edges.end());
  }
  return g;
}

GraphTermText render_graph_term(const Value& v, const QueryType& elem, const InstanceStore& store) {
  try {
    return {to_term_text(canonical_term(render_graph(v, elem, store).semantics()))};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Unrenderable) throw;
    std::string msg = e.what();
    msg.replace(0, msg.find(':'), "cannot render as algebraic graph");
    throw Error(ErrorKind::Unrenderable, msg);
  }
}

RenderedResult render(OutputModel model, const Value& v, const QueryType& elem, const InstanceStore& store) {
  switch (model) {
    case OutputModel::Relational: return {model, render_relational(v, elem, store)};
    case OutputModel::Xml: return {model, render_xml(v, elem, store)};
    case OutputModel::Graph: return {model, render_graph(v, elem, store)};
    case OutputModel::AlgebraicGraph: return {model, render_graph_term(v, elem, store)};
  }
  unrenderable(model, "unknown model");
}

std::string to_csv(const Table& t) {
  std::string out = csv::format_row(t.columns);
  for (const auto& r : t.rows) out += csv::format_row(r);
  return out;
}

std::string to_text(const Table& t) {
  std::vector<std::size_t> width(t.columns.size());
  for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
  for (const auto& r : t.rows)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += " | ";
      out += cells[i];
      if (i + 1 < cells.size()) out.append(width[i] - cells[i].size(), ' ');
    }
    return out + "\n";
  };
  std::string out = line(t.columns);
  for (std::size_t i = 0; i < width.size(); ++i) {
    if (i) out += "-+-";
    out.append(width[i], '-');
  }
  out += "\n";
  for (const auto& r : t.rows) out += line(r);
  return out;
}

nlohmann::json to_json(const Table& t) { return {{"columns", t.columns}, {"rows", t.rows}}; }

nlohmann::json to_json(const GraphView& g) {
  using nlohmann::json;
  json vertices = json::array();
  for (const auto& v : g.vertices) {
    json props = json::object();
    for (const auto& [k, val] : v.props) props[k] = val;
    vertices.push_back({{"id", v.id}, {"props", props}});
  }
  json edges = json::array();
  for (const auto& [a, b] : g.edges) edges.push_back({a, b});
  return {{"vertices", vertices}, {"edges", edges}};
}

std::string to_dot(const GraphView& g) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::string out = "digraph result {\n";
  for (const auto& v : g.vertices) {
    out += "  " + quote(v.id);
    if (!v.props.empty()) {
      out += " [";
      for (std::size_t i = 0; i < v.props.size(); ++i)
        out += (i ? ", " : "") + quote(v.props[i].first) + "=" + quote(v.props[i].second);
      out += "]";
    }
    out += ";\n";
  }
  for (const auto& [a, b] : g.edges) out += "  " + quote(a) + " -> " + quote(b) + ";\n";
  return out + "}\n";
}

}  // namespace multicat
