#include "multicat/category.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "multicat/error.hpp"

namespace multicat {

using nlohmann::json;

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::MissingComposite: return "MissingComposite";
    case ErrorKind::MissingFile: return "MissingFile";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::DanglingReference: return "DanglingReference";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownMorphism: return "UnknownMorphism";
    case ErrorKind::UnknownEntity: return "UnknownEntity";
    case ErrorKind::UnknownCollection: return "UnknownCollection";
    case ErrorKind::UnknownDataset: return "UnknownDataset";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::TypeError: return "TypeError";
    case ErrorKind::RuntimeError: return "RuntimeError";
    case ErrorKind::Unrenderable: return "Unrenderable";
  }
  return "Error";
}

std::string_view to_string(PrimitiveType t) {
  switch (t) {
    case PrimitiveType::String: return "string";
    case PrimitiveType::Int: return "int";
    case PrimitiveType::Double: return "double";
    case PrimitiveType::Bool: return "bool";
  }
  return "?";
}

std::optional<PrimitiveType> primitive_from_string(std::string_view s) {
  if (s == "string") return PrimitiveType::String;
  if (s == "int") return PrimitiveType::Int;
  if (s == "double") return PrimitiveType::Double;
  if (s == "bool") return PrimitiveType::Bool;
  return std::nullopt;
}

std::string_view to_string(LawKind kind) {
  switch (kind) {
    case LawKind::Typing: return "typing";
    case LawKind::Identity: return "identity";
    case LawKind::Closure: return "closure";
    case LawKind::Associativity: return "associativity";
    case LawKind::Composition: return "composition";
    case LawKind::Totality: return "totality";
    case LawKind::Codomain: return "codomain";
  }
  return "?";
}

std::string identity_id(std::string_view object) { return "id_" + std::string(object); }

SchemaCategory::SchemaCategory(std::vector<SchemaObject> objects, std::vector<Morphism> morphisms,
                               CompositeTable composites)
    : objects_(std::move(objects)), morphisms_(std::move(morphisms)), composites_(std::move(composites)) {
  reindex();
}

void SchemaCategory::reindex() {
  object_index_.clear();
  morphism_index_.clear();
  for (std::size_t i = 0; i < objects_.size(); ++i) object_index_.emplace(objects_[i].id, i);
  for (std::size_t i = 0; i < morphisms_.size(); ++i) morphism_index_.emplace(morphisms_[i].id, i);
}

namespace {

[[noreturn]] void schema_error(const std::string& msg) {
  throw Error(ErrorKind::SchemaViolation, "schema: " + msg);
}

std::string required_string(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) schema_error(where + " is missing string field '" + key + "'");
  return it->get<std::string>();
}

}  // namespace

SchemaCategory SchemaCategory::from_json(const json& doc) {
  if (!doc.is_object()) schema_error("top level must be an object");
  std::vector<SchemaObject> objects;
  std::vector<Morphism> morphisms;
  CompositeTable composites;
  std::set<std::string> seen;

  for (const auto& o : doc.value("objects", json::array())) {
    SchemaObject obj;
    obj.id = required_string(o, "id", "object");
    const auto kind = required_string(o, "kind", "object " + obj.id);
    if (kind == "primitive") {
      obj.kind = ObjectKind::Primitive;
      obj.primitive = primitive_from_string(required_string(o, "primitiveType", "object " + obj.id));
      if (!obj.primitive) schema_error("object " + obj.id + " has an unknown primitiveType");
    } else if (kind == "entity") {
      obj.kind = ObjectKind::Entity;
      if (o.contains("primitiveType")) schema_error("entity " + obj.id + " must not declare primitiveType");
    } else {
      schema_error("object " + obj.id + " has unknown kind '" + kind + "'");
    }
    if (!seen.insert(obj.id).second) schema_error("duplicate object id " + obj.id);
    objects.push_back(std::move(obj));
  }

  auto object_kind = [&](const std::string& id) -> std::optional<ObjectKind> {
    for (const auto& o : objects)
      if (o.id == id) return o.kind;
    return std::nullopt;
  };

  seen.clear();
  for (const auto& m : doc.value("morphisms", json::array())) {
    Morphism mor;
    mor.id = required_string(m, "id", "morphism");
    if (mor.id.rfind("id_", 0) == 0) schema_error("identity morphism " + mor.id + " must not be listed");
    mor.domain = required_string(m, "domain", "morphism " + mor.id);
    mor.codomain = required_string(m, "codomain", "morphism " + mor.id);
    const auto dk = object_kind(mor.domain);
    const auto ck = object_kind(mor.codomain);
    if (!dk || !ck) schema_error("morphism " + mor.id + " refers to an unknown object");
    const auto card = m.value("cardinality", std::string("one"));
    if (card == "one") {
      mor.cardinality = Cardinality::One;
    } else if (card == "many") {
      mor.cardinality = Cardinality::Many;
    } else {
      schema_error("morphism " + mor.id + " has unknown cardinality '" + card + "'");
    }
    const bool entity_to_entity = *dk == ObjectKind::Entity && *ck == ObjectKind::Entity;
    mor.composable = m.value("composable", entity_to_entity);
    if (!seen.insert(mor.id).second) schema_error("duplicate morphism id " + mor.id);
    morphisms.push_back(std::move(mor));
  }

  for (const auto& c : doc.value("composites", json::array())) {
    auto outer = required_string(c, "outer", "composite");
    auto inner = required_string(c, "inner", "composite");
    auto result = required_string(c, "result", "composite");
    if (!composites.emplace(std::pair{outer, inner}, result).second)
      schema_error("duplicate composite entry (" + outer + ", " + inner + ")");
  }

  // Identities and their composite entries are implicit in the file.
  for (const auto& o : objects) {
    Morphism id;
    id.id = identity_id(o.id);
    id.domain = id.codomain = o.id;
    id.identity = true;
    id.composable = true;
    morphisms.push_back(id);
  }
  for (const auto& m : morphisms) {
    composites.emplace(std::pair{m.id, identity_id(m.domain)}, m.id);
    composites.emplace(std::pair{identity_id(m.codomain), m.id}, m.id);
  }
  return SchemaCategory(std::move(objects), std::move(morphisms), std::move(composites));
}

SchemaCategory SchemaCategory::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::MissingFile, file.filename().string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    Error err(ErrorKind::ParseError, file.filename().string() + ": " + e.what());
    err.file = file.filename().string();
    throw err;
  }
  return from_json(doc);
}

json SchemaCategory::to_json() const {
  json objects = json::array();
  for (const auto& o : objects_) {
    json j = {{"id", o.id}, {"kind", o.kind == ObjectKind::Primitive ? "primitive" : "entity"}};
    if (o.primitive) j["primitiveType"] = to_string(*o.primitive);
    objects.push_back(std::move(j));
  }
  json morphisms = json::array();
  for (const auto& m : morphisms_) {
    if (m.identity) continue;
    morphisms.push_back({{"id", m.id},
                         {"domain", m.domain},
                         {"codomain", m.codomain},
                         {"cardinality", m.cardinality == Cardinality::Many ? "many" : "one"},
                         {"composable", m.composable}});
  }
  json composites = json::array();
  for (const auto& [key, result] : composites_) {
    const auto* outer = find_morphism(key.first);
    const auto* inner = find_morphism(key.second);
    if ((outer && outer->identity) || (inner && inner->identity)) continue;
    composites.push_back({{"outer", key.first}, {"inner", key.second}, {"result", result}});
  }
  return {{"objects", objects}, {"morphisms", morphisms}, {"composites", composites}};
}

const SchemaObject* SchemaCategory::find_object(std::string_view id) const {
  auto it = object_index_.find(id);
  return it == object_index_.end() ? nullptr : &objects_[it->second];
}

const Morphism* SchemaCategory::find_morphism(std::string_view id) const {
  auto it = morphism_index_.find(id);
  return it == morphism_index_.end() ? nullptr : &morphisms_[it->second];
}

std::optional<std::string> SchemaCategory::composite(std::string_view outer, std::string_view inner) const {
  auto it = composites_.find(std::pair{std::string(outer), std::string(inner)});
  if (it == composites_.end()) return std::nullopt;
  return it->second;
}

std::vector<const Morphism*> SchemaCategory::attributes_of(std::string_view object) const {
  std::vector<const Morphism*> out;
  for (const auto& m : morphisms_) {
    if (m.identity || m.domain != object) continue;
    const auto* cod = find_object(m.codomain);
    if (cod && cod->kind == ObjectKind::Primitive) out.push_back(&m);
  }
  return out;
}

bool SchemaCategory::in_closure(const Morphism& m) const { return m.identity || m.composable; }

SchemaCategory SchemaCategory::without_composite(const std::string& outer, const std::string& inner) const {
  auto copy = composites_;
  copy.erase(std::pair{outer, inner});
  return SchemaCategory(objects_, morphisms_, std::move(copy));
}

SchemaCategory SchemaCategory::with_composite(const std::string& outer, const std::string& inner,
                                              const std::string& result) const {
  auto copy = composites_;
  copy[std::pair{outer, inner}] = result;
  return SchemaCategory(objects_, morphisms_, std::move(copy));
}

SchemaCategory SchemaCategory::without_morphism(const std::string& id) const {
  auto copy = morphisms_;
  std::erase_if(copy, [&](const Morphism& m) { return m.id == id; });
  return SchemaCategory(objects_, std::move(copy), composites_);
}

const Morphism& compose(const Morphism& g, const Morphism& f, const SchemaCategory& cat) {
  if (f.codomain != g.domain) {
    throw Error(ErrorKind::TypeMismatch, "cannot compose " + g.id + " after " + f.id + ": codomain " +
                                             f.codomain + " of " + f.id + " is not domain " + g.domain +
                                             " of " + g.id);
  }
  auto result = cat.composite(g.id, f.id);
  if (!result) {
    throw Error(ErrorKind::MissingComposite, "no composite registered for " + g.id + " after " + f.id);
  }
  const auto* m = cat.find_morphism(*result);
  if (!m) {
    throw Error(ErrorKind::MissingComposite,
                "composite of " + g.id + " after " + f.id + " names unknown morphism " + *result);
  }
  return *m;
}

const Morphism& compose_path(const std::vector<std::string>& path, const SchemaCategory& cat) {
  if (path.empty()) throw Error(ErrorKind::TypeMismatch, "empty morphism path");
  auto resolve = [&](const std::string& id) -> const Morphism& {
    const auto* m = cat.find_morphism(id);
    if (!m) throw Error(ErrorKind::UnknownMorphism, "unknown morphism " + id);
    return *m;
  };
  const Morphism* acc = &resolve(path.front());
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Morphism& next = resolve(path[i]);
    try {
      acc = &compose(next, *acc, cat);
    } catch (Error& e) {
      if (e.kind() == ErrorKind::TypeMismatch) e.index = i - 1;
      throw;
    }
  }
  return *acc;
}

LawReport check_category_laws(const SchemaCategory& cat) {
  LawReport report;
  auto add = [&](LawKind kind, std::string msg) { report.push_back({kind, std::move(msg)}); };

  for (const auto& m : cat.morphisms()) {
    if (!cat.find_object(m.domain) || !cat.find_object(m.codomain))
      add(LawKind::Typing, "morphism " + m.id + " refers to a missing object");
    if (m.identity && (m.domain != m.codomain || m.id != identity_id(m.domain)))
      add(LawKind::Typing, "identity " + m.id + " is not an endomorphism of its object");
  }

  // Every table entry must be a well-typed composite.
  for (const auto& [key, result] : cat.composites()) {
    const auto& [outer_id, inner_id] = key;
    const auto* g = cat.find_morphism(outer_id);
    const auto* f = cat.find_morphism(inner_id);
    const auto* h = cat.find_morphism(result);
    const std::string pair = "(" + outer_id + ", " + inner_id + ")";
    if (!g || !f) {
      add(LawKind::Closure, "composite entry " + pair + " refers to an unknown morphism");
      continue;
    }
    if (f->codomain != g->domain) {
      add(LawKind::Closure, "composite entry " + pair + " pairs non-composable morphisms");
      continue;
    }
    if (!h) {
      add(LawKind::Closure, "composite " + pair + " names unknown morphism " + result);
    } else if (h->domain != f->domain || h->codomain != g->codomain) {
      add(LawKind::Closure, "composite " + pair + " = " + result + " has type " + h->domain + " -> " +
                                h->codomain + ", expected " + f->domain + " -> " + g->codomain);
    }
  }

  for (const auto& o : cat.objects()) {
    const auto* id = cat.find_morphism(identity_id(o.id));
    if (!id || !id->identity) add(LawKind::Identity, "object " + o.id + " has no identity morphism");
  }

  for (const auto& f : cat.morphisms()) {
    const auto id_dom = identity_id(f.domain);
    const auto id_cod = identity_id(f.codomain);
    if (cat.find_morphism(id_dom)) {
      auto r = cat.composite(f.id, id_dom);
      if (r != f.id)
        add(LawKind::Identity, f.id + " after " + id_dom + " is " + (r ? *r : std::string("undefined")) +
                                   ", expected " + f.id);
    }
    if (cat.find_morphism(id_cod)) {
      auto r = cat.composite(id_cod, f.id);
      if (r != f.id)
        add(LawKind::Identity, id_cod + " after " + f.id + " is " + (r ? *r : std::string("undefined")) +
                                   ", expected " + f.id);
    }
  }

  // Closure over composable non-identity pairs (identity pairs are covered
  // above).
  std::vector<const Morphism*> closable;
  for (const auto& m : cat.morphisms())
    if (cat.in_closure(m) && !m.identity) closable.push_back(&m);
  for (const auto* f : closable) {
    for (const auto* g : closable) {
      if (f->codomain != g->domain) continue;
      if (!cat.composite(g->id, f->id))
        add(LawKind::Closure, "missing composite for pair (" + g->id + ", " + f->id + ")");
    }
  }

  // Associativity over every composable triple where both sides are defined.
  for (const auto& f : cat.morphisms()) {
    for (const auto& g : cat.morphisms()) {
      if (f.codomain != g.domain) continue;
      auto gf = cat.composite(g.id, f.id);
      if (!gf) continue;
      for (const auto& h : cat.morphisms()) {
        if (g.codomain != h.domain) continue;
        auto hg = cat.composite(h.id, g.id);
        if (!hg) continue;
        auto left = cat.composite(h.id, *gf);
        auto right = cat.composite(*hg, f.id);
        if (!left || !right) continue;
        if (*left != *right)
          add(LawKind::Associativity, "(" + h.id + " . " + g.id + ") . " + f.id + " = " + *right + " but " +
                                          h.id + " . (" + g.id + " . " + f.id + ") = " + *left);
      }
    }
  }
  return report;
}

}  // namespace multicat
