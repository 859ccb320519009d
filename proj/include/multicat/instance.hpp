#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "multicat/category.hpp"
#include "multicat/graph.hpp"
#include "multicat/value.hpp"

namespace multicat {

enum class DataModel { Relational, Xml, Graph, KeyValue };

std::string_view to_string(DataModel m);
std::optional<DataModel> data_model_from_string(std::string_view s);

/// The image of one entity object under the instance functor.
struct Collection {
  std::string name;
  std::string object;
  DataModel model = DataModel::Relational;
  /// Fold order: file order (relational), document order (xml), ascending
  /// vertex id (graph).
  std::vector<std::string> elements;
  std::unordered_set<std::string> members;
  /// Only meaningful for model == Graph; vertex ids are the entity ids.
  GraphTerm graph;

  bool contains(std::string_view id) const { return members.count(std::string(id)) > 0; }
};

/// Materialized function table realizing one schema morphism. Values are
/// lists for cardinality-many morphisms.
struct MorphismEvaluator {
  std::string morphism;
  std::map<std::string, Value> table;
};

struct LoadOptions {
  /// Reject packages whose schema or instance violates the category/functor
  /// laws. `check` turns this off so it can report violations instead.
  bool verify_laws = true;
};

/// Immutable multi-model dataset together with the instance functor.
///
/// Identity tables are always materialized. Registered composites without a
/// table of their own are evaluated by chained lookup.
class InstanceStore {
 public:
  InstanceStore() = default;
  InstanceStore(std::string name, SchemaCategory schema, std::vector<Collection> collections,
                std::map<std::string, MorphismEvaluator> evaluators, bool uses_key_value = false);

  static InstanceStore load(const std::filesystem::path& package_dir, const LoadOptions& opts = {});

  const std::string& name() const { return name_; }
  const SchemaCategory& schema() const { return schema_; }
  const std::vector<Collection>& collections() const { return collections_; }
  const std::map<std::string, MorphismEvaluator>& evaluators() const { return evaluators_; }

  const Collection* find_collection(std::string_view name) const;
  const Collection* collection_for(std::string_view object) const;

  /// Throws UnknownCollection.
  const std::vector<std::string>& elements(std::string_view collection) const;

  /// Throws UnknownMorphism / UnknownEntity.
  Value apply(std::string_view morphism, std::string_view entity) const;

  /// Models present in the package, in the order relational, xml, graph,
  /// keyvalue.
  std::vector<DataModel> models() const;

  /// Copy with one evaluator entry replaced (or erased when `value` is
  /// empty). The morphism's table is materialized first if needed.
  InstanceStore with_entry(const std::string& morphism, const std::string& entity,
                           std::optional<Value> value) const;

  LawReport check_functor_laws() const;

 private:
  Value apply_checked(const Morphism& m, std::string_view entity, int depth) const;

  std::string name_;
  SchemaCategory schema_;
  std::vector<Collection> collections_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
  std::map<std::string, std::size_t, std::less<>> by_object_;
  std::map<std::string, MorphismEvaluator> evaluators_;
  /// Non-identity composite decomposition used when no table exists.
  std::map<std::string, std::pair<std::string, std::string>, std::less<>> decompositions_;
  bool uses_key_value_ = false;
};

InstanceStore load_dataset(const std::filesystem::path& package_dir, const LoadOptions& opts = {});
Value apply_morphism(const InstanceStore& store, std::string_view morphism, std::string_view entity);
LawReport check_functor_laws(const InstanceStore& store);
const std::vector<std::string>& collection_elements(const InstanceStore& store, std::string_view name);

}  // namespace multicat
