#include "multicat/instance.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

#include "multicat/csv.hpp"
#include "multicat/error.hpp"

namespace multicat {

namespace fs = std::filesystem;
using nlohmann::json;
namespace pt = boost::property_tree;

std::string_view to_string(DataModel m) {
  switch (m) {
    case DataModel::Relational: return "relational";
    case DataModel::Xml: return "xml";
    case DataModel::Graph: return "graph";
    case DataModel::KeyValue: return "keyvalue";
  }
  return "?";
}

std::optional<DataModel> data_model_from_string(std::string_view s) {
  if (s == "relational") return DataModel::Relational;
  if (s == "xml") return DataModel::Xml;
  if (s == "graph") return DataModel::Graph;
  if (s == "keyvalue") return DataModel::KeyValue;
  return std::nullopt;
}

InstanceStore::InstanceStore(std::string name, SchemaCategory schema, std::vector<Collection> collections,
                             std::map<std::string, MorphismEvaluator> evaluators, bool uses_key_value)
    : name_(std::move(name)),
      schema_(std::move(schema)),
      collections_(std::move(collections)),
      evaluators_(std::move(evaluators)),
      uses_key_value_(uses_key_value) {
  for (std::size_t i = 0; i < collections_.size(); ++i) {
    by_name_.emplace(collections_[i].name, i);
    by_object_.emplace(collections_[i].object, i);
  }
  for (const auto& c : collections_) {
    const auto id = identity_id(c.object);
    if (evaluators_.count(id)) continue;
    MorphismEvaluator ev{id, {}};
    for (const auto& e : c.elements) ev.table.emplace(e, Value::entity(c.object, e));
    evaluators_.emplace(id, std::move(ev));
  }
  for (const auto& [key, result] : schema_.composites()) {
    const auto* g = schema_.find_morphism(key.first);
    const auto* f = schema_.find_morphism(key.second);
    if (!g || !f || g->identity || f->identity) continue;
    decompositions_.emplace(result, key);
  }
}

const Collection* InstanceStore::find_collection(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &collections_[it->second];
}

const Collection* InstanceStore::collection_for(std::string_view object) const {
  auto it = by_object_.find(object);
  return it == by_object_.end() ? nullptr : &collections_[it->second];
}

const std::vector<std::string>& InstanceStore::elements(std::string_view collection) const {
  const auto* c = find_collection(collection);
  if (!c) throw Error(ErrorKind::UnknownCollection, "unknown collection " + std::string(collection));
  return c->elements;
}

Value InstanceStore::apply(std::string_view morphism, std::string_view entity) const {
  const auto* m = schema_.find_morphism(morphism);
  if (!m) throw Error(ErrorKind::UnknownMorphism, "unknown morphism " + std::string(morphism));
  return apply_checked(*m, entity, 0);
}

namespace {

const std::string& entity_id(const Value& v, const Morphism& next) {
  if (!v.is_entity())
    throw Error(ErrorKind::TypeMismatch, show(v) + " is not an entity and cannot be passed to " + next.id);
  return v.as_entity().id;
}

}  // namespace

Value InstanceStore::apply_checked(const Morphism& m, std::string_view entity, int depth) const {
  const auto* dom = collection_for(m.domain);
  if (!dom || !dom->contains(entity)) {
    throw Error(ErrorKind::UnknownEntity,
                "entity " + std::string(entity) + " is not in the domain " + m.domain + " of " + m.id);
  }
  if (auto it = evaluators_.find(m.id); it != evaluators_.end()) {
    auto entry = it->second.table.find(std::string(entity));
    if (entry == it->second.table.end())
      throw Error(ErrorKind::UnknownEntity, "evaluator " + m.id + " has no entry for " + std::string(entity));
    return entry->second;
  }
  auto dec = decompositions_.find(m.id);
  if (dec == decompositions_.end() || depth > 64)
    throw Error(ErrorKind::UnknownMorphism, "morphism " + m.id + " has no evaluator");
  const auto* outer = schema_.find_morphism(dec->second.first);
  const auto* inner = schema_.find_morphism(dec->second.second);
  Value mid = apply_checked(*inner, entity, depth + 1);
  auto step = [&](const Value& v) { return apply_checked(*outer, entity_id(v, *outer), depth + 1); };
  if (!mid.is_list()) return step(mid);
  std::vector<Value> out;
  for (const auto& v : mid.as_list()) {
    Value r = step(v);
    if (r.is_list()) {
      for (const auto& x : r.as_list()) out.push_back(x);
    } else {
      out.push_back(std::move(r));
    }
  }
  return Value::list(out);
}

std::vector<DataModel> InstanceStore::models() const {
  std::vector<DataModel> out;
  for (auto m : {DataModel::Relational, DataModel::Xml, DataModel::Graph}) {
    if (std::any_of(collections_.begin(), collections_.end(), [&](const Collection& c) { return c.model == m; }))
      out.push_back(m);
  }
  if (uses_key_value_) out.push_back(DataModel::KeyValue);
  return out;
}

InstanceStore InstanceStore::with_entry(const std::string& morphism, const std::string& entity,
                                        std::optional<Value> value) const {
  InstanceStore copy = *this;
  auto it = copy.evaluators_.find(morphism);
  if (it == copy.evaluators_.end()) {
    const auto* m = schema_.find_morphism(morphism);
    if (!m) throw Error(ErrorKind::UnknownMorphism, "unknown morphism " + morphism);
    const auto* dom = collection_for(m->domain);
    if (!dom) throw Error(ErrorKind::UnknownCollection, "no collection for " + m->domain);
    MorphismEvaluator ev{morphism, {}};
    for (const auto& e : dom->elements) ev.table.emplace(e, apply(morphism, e));
    it = copy.evaluators_.emplace(morphism, std::move(ev)).first;
  }
  if (value) {
    it->second.table[entity] = std::move(*value);
  } else {
    it->second.table.erase(entity);
  }
  return copy;
}

namespace {

bool inhabits(const Value& v, const SchemaObject& obj, const InstanceStore& store) {
  if (obj.kind == ObjectKind::Entity) {
    if (!v.is_entity() || v.as_entity().object != obj.id) return false;
    const auto* c = store.collection_for(obj.id);
    return c && c->contains(v.as_entity().id);
  }
  switch (*obj.primitive) {
    case PrimitiveType::String: return v.is_string();
    case PrimitiveType::Int: return v.is_int();
    case PrimitiveType::Double: return v.is_double();
    case PrimitiveType::Bool: return v.is_bool();
  }
  return false;
}

}  // namespace

LawReport InstanceStore::check_functor_laws() const {
  LawReport report;
  auto add = [&](LawKind kind, std::string msg) { report.push_back({kind, std::move(msg)}); };

  for (const auto& c : collections_) {
    const auto id = identity_id(c.object);
    auto it = evaluators_.find(id);
    if (it == evaluators_.end()) {
      add(LawKind::Identity, "no identity table for " + c.object);
      continue;
    }
    for (const auto& e : c.elements) {
      auto entry = it->second.table.find(e);
      if (entry == it->second.table.end()) {
        add(LawKind::Identity, id + " has no entry for " + e);
      } else if (!(entry->second == Value::entity(c.object, e))) {
        add(LawKind::Identity, id + " maps " + e + " to " + show(entry->second));
      }
    }
  }

  for (const auto& [mid, ev] : evaluators_) {
    const auto* m = schema_.find_morphism(mid);
    if (!m) {
      add(LawKind::Typing, "evaluator for unknown morphism " + mid);
      continue;
    }
    const auto* dom = collection_for(m->domain);
    const auto* cod = schema_.find_object(m->codomain);
    if (!dom || !cod) {
      add(LawKind::Typing, "evaluator " + mid + " has no domain collection");
      continue;
    }
    for (const auto& e : dom->elements)
      if (!ev.table.count(e)) add(LawKind::Totality, mid + " has no entry for " + e);
    for (const auto& [key, v] : ev.table) {
      if (!dom->contains(key)) add(LawKind::Totality, mid + " has an entry for foreign entity " + key);
      bool ok = true;
      if (m->cardinality == Cardinality::Many) {
        ok = v.is_list();
        if (ok)
          for (const auto& x : v.as_list()) ok = ok && inhabits(x, *cod, *this);
      } else {
        ok = inhabits(v, *cod, *this);
      }
      if (!ok) add(LawKind::Codomain, mid + "(" + key + ") = " + show(v) + " does not inhabit " + m->codomain);
    }
  }

  for (const auto& [key, result] : schema_.composites()) {
    const auto* g = schema_.find_morphism(key.first);
    const auto* f = schema_.find_morphism(key.second);
    const auto* h = schema_.find_morphism(result);
    if (!g || !f || !h) continue;  // reported by the category checker
    const auto* dom = collection_for(f->domain);
    if (!dom) continue;
    for (const auto& e : dom->elements) {
      std::string expected_text, actual_text;
      bool equal = false;
      try {
        Value direct = apply_checked(*h, e, 0);
        Value mid = apply_checked(*f, e, 0);
        std::vector<Value> chained;
        bool many = mid.is_list();
        auto step = [&](const Value& v) {
          Value r = apply_checked(*g, entity_id(v, *g), 0);
          if (r.is_list()) {
            many = true;
            for (const auto& x : r.as_list()) chained.push_back(x);
          } else {
            chained.push_back(std::move(r));
          }
        };
        const auto* mid_obj = schema_.find_object(f->codomain);
        Value via_chain;
        if (mid_obj && mid_obj->kind == ObjectKind::Primitive) {
          // Only identities compose after an attribute.
          if (!g->identity) continue;
          via_chain = mid;
        } else {
          if (mid.is_list()) {
            for (const auto& v : mid.as_list()) step(v);
          } else {
            step(mid);
          }
          via_chain = many ? Value::list(chained) : chained.front();
        }
        equal = direct == via_chain;
        expected_text = show(via_chain);
        actual_text = show(direct);
      } catch (const Error& err) {
        add(LawKind::Composition, result + " = " + key.first + " . " + key.second + " cannot be evaluated on " +
                                      e + ": " + err.what());
        continue;
      }
      if (!equal)
        add(LawKind::Composition, result + "(" + e + ") = " + actual_text + " but " + key.first + "(" +
                                      key.second + "(" + e + ")) = " + expected_text);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Package loader

namespace {

[[noreturn]] void violation(const std::string& msg) { throw Error(ErrorKind::SchemaViolation, msg); }

[[noreturn]] void dangling(const std::string& msg) { throw Error(ErrorKind::DanglingReference, msg); }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, "missing file " + p.filename().string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) {
  const auto text = read_file(p);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + upto, '\n'));
    Error err(ErrorKind::ParseError, p.filename().string() + ":" + std::to_string(line) + ": " + e.what(),
              SourceLoc{line, 0});
    err.file = p.filename().string();
    throw err;
  }
}

std::optional<Value> parse_primitive(const std::string& text, PrimitiveType t) {
  switch (t) {
    case PrimitiveType::String: return Value(text);
    case PrimitiveType::Int: {
      std::int64_t v{};
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc{} || p != text.data() + text.size() || text.empty()) return std::nullopt;
      return Value(v);
    }
    case PrimitiveType::Double: {
      double v{};
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc{} || p != text.data() + text.size() || text.empty()) return std::nullopt;
      return Value(v);
    }
    case PrimitiveType::Bool:
      if (text == "true") return Value(true);
      if (text == "false") return Value(false);
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Value> json_primitive(const json& j, PrimitiveType t) {
  switch (t) {
    case PrimitiveType::String:
      if (j.is_string()) return Value(j.get<std::string>());
      break;
    case PrimitiveType::Int:
      if (j.is_number_integer()) return Value(j.get<std::int64_t>());
      break;
    case PrimitiveType::Double:
      if (j.is_number()) return Value(j.get<double>());
      break;
    case PrimitiveType::Bool:
      if (j.is_boolean()) return Value(j.get<bool>());
      break;
  }
  return std::nullopt;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

struct RawRelational {
  std::vector<std::string> header;
  std::vector<csv::Record> rows;
};

struct RawXmlElement {
  std::string id;
  pt::ptree node;
};

struct RawVertex {
  std::string id;
  json props;
};

/// Loader state for one package: collections first, then evaluators.
class PackageLoader {
 public:
  PackageLoader(fs::path dir, SchemaCategory schema) : dir_(std::move(dir)), schema_(std::move(schema)) {}

  void load_collection(const json& decl) {
    Collection c;
    c.name = decl.at("name").get<std::string>();
    c.object = decl.at("object").get<std::string>();
    const auto model = data_model_from_string(decl.at("model").get<std::string>());
    if (!model || *model == DataModel::KeyValue)
      violation("collection " + c.name + " has unsupported model " + decl.at("model").dump());
    c.model = *model;
    const auto* obj = schema_.find_object(c.object);
    if (!obj || obj->kind != ObjectKind::Entity) violation("collection " + c.name + " is not over an entity object");
    for (const auto& other : collections_)
      if (other.object == c.object || other.name == c.name)
        violation("collection " + c.name + " duplicates an existing collection or object");
    const auto file = decl.at("file").get<std::string>();
    const auto id_field = decl.value("id", std::string("id"));

    auto add_member = [&](const std::string& id, const std::string& where) {
      if (id.empty()) violation(where + ": empty entity id in collection " + c.name);
      if (!c.members.insert(id).second) violation(where + ": duplicate entity id " + id + " in " + c.name);
      c.elements.push_back(id);
    };

    switch (c.model) {
      case DataModel::Relational: {
        RawRelational raw;
        auto records = csv::parse(read_file(dir_ / file), file);
        if (records.empty()) violation(file + ": missing header row");
        raw.header = records.front().fields;
        auto idcol = std::find(raw.header.begin(), raw.header.end(), id_field);
        if (idcol == raw.header.end()) violation(file + ": no id column '" + id_field + "'");
        const auto idx = static_cast<std::size_t>(idcol - raw.header.begin());
        for (std::size_t i = 1; i < records.size(); ++i) {
          auto& r = records[i];
          if (r.fields.size() != raw.header.size()) {
            Error err(ErrorKind::ParseError,
                      file + ":" + std::to_string(r.line) + ": expected " + std::to_string(raw.header.size()) +
                          " fields, found " + std::to_string(r.fields.size()),
                      SourceLoc{r.line, 0});
            err.file = file;
            throw err;
          }
          add_member(r.fields[idx], file + ":" + std::to_string(r.line));
          raw.rows.push_back(std::move(r));
        }
        relational_[c.object] = std::move(raw);
        break;
      }
      case DataModel::Xml: {
        const auto& tree = xml_document(file);
        const auto path = split(decl.value("element", std::string()), '/');
        if (path.empty()) violation("collection " + c.name + " needs an element path");
        std::vector<const pt::ptree*> level;
        for (const auto& [name, root] : tree) {
          if (name == "<xmlcomment>") continue;
          level.push_back(&root);
        }
        for (const auto& step : path) {
          std::vector<const pt::ptree*> next;
          for (const auto* node : level)
            for (const auto& [name, child] : *node)
              if (name == step) next.push_back(&child);
          level = std::move(next);
        }
        auto& raw = xml_[c.object];
        for (const auto* node : level) {
          auto id = node->get<std::string>("<xmlattr>." + id_field, "");
          add_member(id, file);
          raw.push_back({id, *node});
        }
        break;
      }
      case DataModel::Graph: {
        const auto doc = read_json(dir_ / file);
        std::vector<GraphTerm> vertices, edges;
        auto& raw = graph_[c.object];
        for (const auto& v : doc.value("vertices", json::array())) {
          if (!v.is_object() || !v.contains(id_field) || !v.at(id_field).is_string())
            violation(file + ": vertex without string '" + id_field + "'");
          const auto id = v.at(id_field).get<std::string>();
          if (!c.members.insert(id).second) violation(file + ": duplicate vertex " + id);
          vertices.push_back(GraphTerm::vertex(id));
          raw.push_back({id, v});
        }
        for (const auto& e : doc.value("edges", json::array())) {
          if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            violation(file + ": edges must be [src, dst] string pairs");
          const auto src = e[0].get<std::string>();
          const auto dst = e[1].get<std::string>();
          if (!c.members.count(src) || !c.members.count(dst))
            dangling(file + ": edge " + src + " -> " + dst + " references an unknown vertex");
          edges.push_back(GraphTerm::connect(GraphTerm::vertex(src), GraphTerm::vertex(dst)));
        }
        c.graph = GraphTerm::overlay(GraphTerm::overlays(std::move(vertices)), GraphTerm::overlays(std::move(edges)));
        const auto sem = semantics(c.graph);
        c.elements.assign(sem.vertices.begin(), sem.vertices.end());
        break;
      }
      case DataModel::KeyValue: break;
    }
    collections_.push_back(std::move(c));
  }

  void load_evaluator(const json& decl) {
    const auto mid = decl.at("morphism").get<std::string>();
    const auto* m = schema_.find_morphism(mid);
    if (!m || m->identity) violation("evaluator for unknown morphism " + mid);
    if (evaluators_.count(mid)) violation("duplicate evaluator for " + mid);
    const auto source = decl.at("source").get<std::string>();
    const auto field = decl.value("field", mid);
    const auto* dom = find(m->domain);
    if (!dom) violation("morphism " + mid + " has no domain collection");
    const auto* cod = schema_.find_object(m->codomain);
    const bool many = m->cardinality == Cardinality::Many;

    MorphismEvaluator ev{mid, {}};
    // Converts one textual datum into a codomain value.
    auto from_text = [&](const std::string& text, const std::string& where) -> Value {
      if (cod->kind == ObjectKind::Entity) {
        const auto* target = find(cod->id);
        if (!target || !target->contains(text))
          dangling(where + ": " + mid + " references unknown " + cod->id + " '" + text + "'");
        return Value::entity(cod->id, text);
      }
      auto v = parse_primitive(text, *cod->primitive);
      if (!v)
        violation(where + ": value '" + text + "' of " + mid + " is not of type " +
                  std::string(to_string(*cod->primitive)));
      return *v;
    };

    if (source == "column") {
      auto it = relational_.find(dom->object);
      if (it == relational_.end()) violation("column evaluator " + mid + " needs a relational domain");
      const auto& raw = it->second;
      auto col = std::find(raw.header.begin(), raw.header.end(), field);
      if (col == raw.header.end()) violation("no column '" + field + "' for " + mid);
      const auto idx = static_cast<std::size_t>(col - raw.header.begin());
      const auto id_idx = static_cast<std::size_t>(
          std::find(raw.header.begin(), raw.header.end(), id_fields_.at(dom->object)) - raw.header.begin());
      for (const auto& r : raw.rows) {
        const auto where = dom->name + " line " + std::to_string(r.line);
        const auto& cell = r.fields[idx];
        if (many) {
          std::vector<Value> items;
          for (const auto& part : split(cell, ';')) items.push_back(from_text(part, where));
          ev.table.emplace(r.fields[id_idx], Value::list(items));
        } else {
          ev.table.emplace(r.fields[id_idx], from_text(cell, where));
        }
      }
    } else if (source == "xmlpath") {
      auto it = xml_.find(dom->object);
      if (it == xml_.end()) violation("xmlpath evaluator " + mid + " needs an xml domain");
      for (const auto& el : it->second) {
        const auto where = dom->name + " element " + el.id;
        std::vector<Value> items;
        if (!field.empty() && field.front() == '@') {
          auto attr = el.node.get_optional<std::string>("<xmlattr>." + field.substr(1));
          if (attr) items.push_back(from_text(*attr, where));
        } else {
          for (const auto& [name, child] : el.node) {
            if (name != field) continue;
            std::string text = child.data();
            if (cod->kind == ObjectKind::Entity) text = child.get<std::string>("<xmlattr>.id", text);
            items.push_back(from_text(text, where));
          }
        }
        if (many) {
          ev.table.emplace(el.id, Value::list(items));
        } else {
          if (items.size() != 1)
            violation(where + ": expected exactly one '" + field + "' for " + mid + ", found " +
                      std::to_string(items.size()));
          ev.table.emplace(el.id, items.front());
        }
      }
    } else if (source == "vertexprop") {
      auto it = graph_.find(dom->object);
      if (it == graph_.end()) violation("vertexprop evaluator " + mid + " needs a graph domain");
      for (const auto& v : it->second) {
        const auto where = dom->name + " vertex " + v.id;
        if (!v.props.contains(field)) violation(where + ": missing property '" + field + "'");
        const auto& prop = v.props.at(field);
        auto convert = [&](const json& j) -> Value {
          if (cod->kind == ObjectKind::Entity) {
            if (!j.is_string()) violation(where + ": " + mid + " must be an entity id");
            return from_text(j.get<std::string>(), where);
          }
          auto val = json_primitive(j, *cod->primitive);
          if (!val) violation(where + ": property '" + field + "' is not of type " +
                              std::string(to_string(*cod->primitive)));
          return *val;
        };
        if (many) {
          if (!prop.is_array()) violation(where + ": property '" + field + "' must be an array");
          std::vector<Value> items;
          for (const auto& x : prop) items.push_back(convert(x));
          ev.table.emplace(v.id, Value::list(items));
        } else {
          ev.table.emplace(v.id, convert(prop));
        }
      }
    } else if (source == "kvfile") {
      const auto file = decl.value("file", mid + ".csv");
      uses_key_value_ = true;
      auto records = csv::parse(read_file(dir_ / file), file);
      std::map<std::string, std::vector<Value>> grouped;
      for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (i == 0 && r.fields == std::vector<std::string>{"key", "value"}) continue;
        const auto where = file + ":" + std::to_string(r.line);
        if (r.fields.size() != 2) {
          Error err(ErrorKind::ParseError, where + ": expected key,value", SourceLoc{r.line, 0});
          err.file = file;
          throw err;
        }
        if (!dom->contains(r.fields[0]))
          dangling(where + ": key '" + r.fields[0] + "' is not a " + dom->object + " in " + dom->name);
        auto& slot = grouped[r.fields[0]];
        if (!many && !slot.empty()) violation(where + ": duplicate key '" + r.fields[0] + "' for " + mid);
        slot.push_back(from_text(r.fields[1], where));
      }
      for (auto& [k, vs] : grouped) ev.table.emplace(k, many ? Value::list(vs) : vs.front());
      if (many)
        for (const auto& e : dom->elements) ev.table.emplace(e, Value::list({}));
    } else {
      violation("evaluator " + mid + " has unknown source '" + source + "'");
    }

    for (const auto& e : dom->elements)
      if (!ev.table.count(e)) violation(mid + " is not total: no value for " + e);
    evaluators_.emplace(mid, std::move(ev));
  }

  void remember_id_field(const json& decl) {
    id_fields_[decl.at("object").get<std::string>()] = decl.value("id", std::string("id"));
  }

  InstanceStore finish(std::string name) {
    // Every non-identity morphism out of an entity needs a table or a
    // composite decomposition.
    std::set<std::string> composite_results;
    for (const auto& [key, result] : schema_.composites()) {
      const auto* g = schema_.find_morphism(key.first);
      const auto* f = schema_.find_morphism(key.second);
      if (g && f && !g->identity && !f->identity) composite_results.insert(result);
    }
    for (const auto& m : schema_.morphisms()) {
      if (m.identity) continue;
      const auto* dom = schema_.find_object(m.domain);
      if (!dom || dom->kind != ObjectKind::Entity) continue;
      if (!find(m.domain)) violation("entity " + m.domain + " has no collection");
      if (!evaluators_.count(m.id) && !composite_results.count(m.id))
        violation("morphism " + m.id + " has no evaluator");
    }
    return InstanceStore(std::move(name), schema_, std::move(collections_), std::move(evaluators_),
                         uses_key_value_);
  }

 private:
  const Collection* find(const std::string& object) const {
    for (const auto& c : collections_)
      if (c.object == object) return &c;
    return nullptr;
  }

  const pt::ptree& xml_document(const std::string& file) {
    auto it = xml_docs_.find(file);
    if (it != xml_docs_.end()) return it->second;
    const auto text = read_file(dir_ / file);
    std::istringstream in(text);
    pt::ptree tree;
    try {
      pt::read_xml(in, tree, pt::xml_parser::trim_whitespace | pt::xml_parser::no_comments);
    } catch (const pt::xml_parser_error& e) {
      const int line = static_cast<int>(e.line());
      Error err(ErrorKind::ParseError, file + ":" + std::to_string(line) + ": " + e.message(), SourceLoc{line, 0});
      err.file = file;
      throw err;
    }
    return xml_docs_.emplace(file, std::move(tree)).first->second;
  }

  fs::path dir_;
  SchemaCategory schema_;
  std::vector<Collection> collections_;
  std::map<std::string, MorphismEvaluator> evaluators_;
  std::map<std::string, RawRelational> relational_;
  std::map<std::string, std::vector<RawXmlElement>> xml_;
  std::map<std::string, std::vector<RawVertex>> graph_;
  std::map<std::string, pt::ptree> xml_docs_;
  std::map<std::string, std::string> id_fields_;
  bool uses_key_value_ = false;
};

std::string describe(const LawReport& report) {
  std::string out;
  for (const auto& v : report) out += "\n  " + std::string(to_string(v.kind)) + ": " + v.message;
  return out;
}

}  // namespace

InstanceStore InstanceStore::load(const fs::path& package_dir, const LoadOptions& opts) {
  if (!fs::is_directory(package_dir))
    throw Error(ErrorKind::MissingFile, "missing dataset directory " + package_dir.string());
  const auto manifest = read_json(package_dir / "manifest.json");
  auto schema = SchemaCategory::load(package_dir / "schema.json");
  if (opts.verify_laws) {
    auto report = check_category_laws(schema);
    if (!report.empty()) violation("schema.json is not a category:" + describe(report));
  }
  PackageLoader loader(package_dir, schema);
  try {
    for (const auto& c : manifest.value("collections", json::array())) loader.remember_id_field(c);
    for (const auto& c : manifest.value("collections", json::array())) loader.load_collection(c);
    for (const auto& e : manifest.value("evaluators", json::array())) loader.load_evaluator(e);
  } catch (const json::exception& e) {
    violation(std::string("manifest.json: ") + e.what());
  }
  auto store = loader.finish(manifest.value("name", package_dir.filename().string()));
  if (opts.verify_laws) {
    auto report = store.check_functor_laws();
    if (!report.empty()) violation("instance violates the functor laws:" + describe(report));
  }
  return store;
}

InstanceStore load_dataset(const fs::path& package_dir, const LoadOptions& opts) {
  return InstanceStore::load(package_dir, opts);
}

Value apply_morphism(const InstanceStore& store, std::string_view morphism, std::string_view entity) {
  return store.apply(morphism, entity);
}

LawReport check_functor_laws(const InstanceStore& store) { return store.check_functor_laws(); }

const std::vector<std::string>& collection_elements(const InstanceStore& store, std::string_view name) {
  return store.elements(name);
}

}  // namespace multicat
