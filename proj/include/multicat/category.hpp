#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace multicat {

enum class ObjectKind { Primitive, Entity };
enum class PrimitiveType { String, Int, Double, Bool };
enum class Cardinality { One, Many };

std::string_view to_string(PrimitiveType t);
std::optional<PrimitiveType> primitive_from_string(std::string_view s);

struct SchemaObject {
  std::string id;
  ObjectKind kind = ObjectKind::Entity;
  std::optional<PrimitiveType> primitive;  // set iff kind == Primitive

  friend bool operator==(const SchemaObject&, const SchemaObject&) = default;
};

struct Morphism {
  std::string id;
  std::string domain;
  std::string codomain;
  Cardinality cardinality = Cardinality::One;
  bool composable = true;
  bool identity = false;

  friend bool operator==(const Morphism&, const Morphism&) = default;
};

/// Reserved id of the identity morphism on `object`.
std::string identity_id(std::string_view object);

/// (outer, inner) -> result, i.e. the entry for outer ∘ inner.
using CompositeTable = std::map<std::pair<std::string, std::string>, std::string>;

/// A finite category of data types and typed morphisms.
///
/// Composition is stored extensionally. Objects and morphisms keep their
/// declaration order, which downstream rendering relies on for column order.
/// The category is immutable; the `with*` / `without*` helpers return
/// modified copies and exist mainly to build counterexamples for the law
/// checker.
class SchemaCategory {
 public:
  SchemaCategory() = default;

  /// Raw construction; nothing is added implicitly.
  SchemaCategory(std::vector<SchemaObject> objects, std::vector<Morphism> morphisms,
                 CompositeTable composites);

  /// Builds a category from the schema file layout. Identity morphisms and
  /// the identity entries of the composite table are generated here; they
  /// must not appear in the input.
  static SchemaCategory from_json(const nlohmann::json& doc);
  static SchemaCategory load(const std::filesystem::path& file);

  nlohmann::json to_json() const;

  const std::vector<SchemaObject>& objects() const { return objects_; }
  const std::vector<Morphism>& morphisms() const { return morphisms_; }
  const CompositeTable& composites() const { return composites_; }

  const SchemaObject* find_object(std::string_view id) const;
  const Morphism* find_morphism(std::string_view id) const;
  std::optional<std::string> composite(std::string_view outer, std::string_view inner) const;

  /// Non-identity morphisms out of `object` whose codomain is primitive, in
  /// declaration order.
  std::vector<const Morphism*> attributes_of(std::string_view object) const;

  /// Morphisms that take part in the closure requirement.
  bool in_closure(const Morphism& m) const;

  SchemaCategory without_composite(const std::string& outer, const std::string& inner) const;
  SchemaCategory with_composite(const std::string& outer, const std::string& inner,
                                const std::string& result) const;
  SchemaCategory without_morphism(const std::string& id) const;

 private:
  void reindex();

  std::vector<SchemaObject> objects_;
  std::vector<Morphism> morphisms_;
  CompositeTable composites_;
  std::map<std::string, std::size_t, std::less<>> object_index_;
  std::map<std::string, std::size_t, std::less<>> morphism_index_;
};

/// g ∘ f. Throws TypeMismatch when codomain(f) != domain(g) and
/// MissingComposite when the table has no entry for the pair.
const Morphism& compose(const Morphism& g, const Morphism& f, const SchemaCategory& cat);

/// Composes a path given in diagrammatic order: the output of path[i] feeds
/// path[i + 1]. On TypeMismatch, Error::index is the index of the first
/// morphism of the offending pair.
const Morphism& compose_path(const std::vector<std::string>& path, const SchemaCategory& cat);

enum class LawKind { Typing, Identity, Closure, Associativity, Composition, Totality, Codomain };
std::string_view to_string(LawKind kind);

struct LawViolation {
  LawKind kind;
  std::string message;
};

using LawReport = std::vector<LawViolation>;

/// Enumerates every object, composable pair and composable triple. An empty
/// report means the table describes a category.
LawReport check_category_laws(const SchemaCategory& cat);

}  // namespace multicat
