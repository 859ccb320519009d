#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "multicat/error.hpp"

namespace multicat {

// ---------------------------------------------------------------------------
// Expressions

enum class BinaryOp { Add, Sub, Mul, Div, Gt, Lt, Ge, Le, Eq, Ne, And, Or };

std::string_view to_string(BinaryOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct IfExpr {
  ExprPtr cond, then_branch, else_branch;
};
/// Application of a builtin or schema morphism to one or more arguments.
struct AppExpr {
  std::string head;
  std::vector<ExprPtr> args;
};
struct VarExpr {
  std::string name;
};
struct IntLit {
  std::int64_t value;
};
struct DoubleLit {
  double value;
};
struct StringLit {
  std::string value;
};
struct BoolLit {
  bool value;
};
struct TupleExpr {
  std::vector<ExprPtr> items;  // at least two
};
struct BinExpr {
  BinaryOp op;
  ExprPtr lhs, rhs;
};
/// `cons item` or `cons item rest`.
struct ConsExpr {
  ExprPtr item;
  ExprPtr rest;  // null when omitted
};
struct NilExpr {};
/// Single-parameter lambda passed to map/any/all.
struct LamExpr {
  std::string param;
  ExprPtr body;
};

struct Expr {
  using Node = std::variant<IfExpr, AppExpr, VarExpr, IntLit, DoubleLit, StringLit, BoolLit, TupleExpr, BinExpr,
                            ConsExpr, NilExpr, LamExpr>;
  Node node;
  SourceLoc loc;
};

template <class T>
ExprPtr make_expr(T node, SourceLoc loc = {}) {
  return std::make_shared<const Expr>(Expr{std::move(node), loc});
}

/// Location-insensitive structural equality.
bool same_expr(const Expr& a, const Expr& b);

// ---------------------------------------------------------------------------
// Queries

enum class OutputModel { Graph, AlgebraicGraph, Relational, Xml };

std::string_view to_string(OutputModel m);
std::optional<OutputModel> output_model_from_string(std::string_view s);

struct Lambda {
  std::vector<std::string> params;  // one or two
  ExprPtr body;
  SourceLoc loc;
};

struct Query;
using QueryPtr = std::shared_ptr<const Query>;

struct Block {
  Lambda lambda;
  std::string source;
  SourceLoc source_loc;
  /// `TO graph/xml/relational` lists alternatives; the first one selects
  /// the rendering.
  std::vector<OutputModel> models;
  SourceLoc model_loc;

  OutputModel model() const { return models.front(); }
};

struct Let {
  std::string var;
  QueryPtr bound;
  QueryPtr body;
};

struct Query {
  std::variant<Block, Let> node;
  SourceLoc loc;
};

bool same_query(const Query& a, const Query& b);

/// The block whose TO clause decides the output model.
const Block& result_block(const Query& q);

// ---------------------------------------------------------------------------
// Front end

/// Throws Error(SyntaxError) with location and the expected-token set.
QueryPtr parse_query(std::string_view text);

std::string pretty_print(const Query& q);
std::string pretty_print(const Expr& e);
std::string pretty_print(const Lambda& l);

/// Identifiers reserved by the grammar.
bool is_keyword(std::string_view word);

}  // namespace multicat
