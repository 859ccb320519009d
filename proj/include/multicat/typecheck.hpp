#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "multicat/category.hpp"
#include "multicat/query.hpp"

namespace multicat {

class InstanceStore;

/// Type universe of the query language. `Var` only survives type inference
/// when nothing constrains it (e.g. the element type of a result that can
/// only ever be empty).
struct QueryType {
  enum class Kind { Prim, Entity, Tuple, List, Graph, Fun, Var };

  Kind kind = Kind::Var;
  PrimitiveType prim = PrimitiveType::Int;
  std::string entity;
  std::vector<QueryType> args;  // tuple items; list/graph element; fun (arg, result)
  int var = -1;

  static QueryType primitive(PrimitiveType p);
  static QueryType entity_of(std::string object);
  static QueryType tuple(std::vector<QueryType> items);
  static QueryType list(QueryType elem);
  static QueryType graph(QueryType elem);
  static QueryType fun(QueryType arg, QueryType result);
  static QueryType variable(int id);

  bool is_prim(PrimitiveType p) const { return kind == Kind::Prim && prim == p; }
  bool is_numeric() const { return is_prim(PrimitiveType::Int) || is_prim(PrimitiveType::Double); }
  const QueryType& elem() const { return args.at(0); }

  std::string str() const;
  friend bool operator==(const QueryType&, const QueryType&) = default;
};

enum class SourceKind { Collection, Binding };

struct BlockInfo {
  SourceKind source_kind = SourceKind::Collection;
  QueryType element;         // type bound to the first lambda parameter
  QueryType result_element;  // element type of the block's result list
};

/// A query annotated with a type for every expression node.
struct TypedQuery {
  QueryPtr ast;
  std::unordered_map<const Expr*, QueryType> types;
  std::unordered_map<const Block*, BlockInfo> blocks;
  /// Cons/Nil nodes in accumulator position of single-parameter lambdas.
  std::unordered_set<const Expr*> accumulator_nodes;
  /// Morphism applications whose trailing argument is a collection
  /// annotation.
  std::unordered_set<const Expr*> annotated_apps;
  QueryType result;  // always a list type
  OutputModel model = OutputModel::Relational;

  const QueryType& type_of(const Expr& e) const { return types.at(&e); }
};

/// Builtin function names of the expression language.
const std::vector<std::string>& builtin_names();
bool is_builtin(std::string_view name);

/// Collection name -> list-of-entity type for every collection of `store`.
std::map<std::string, QueryType> source_types(const InstanceStore& store);

/// Throws Error with kind UnknownCollection, UnknownMorphism (with hint) or
/// TypeError, each carrying the source location.
TypedQuery typecheck(const QueryPtr& ast, const SchemaCategory& schema,
                     const std::map<std::string, QueryType>& sources);

std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace multicat
