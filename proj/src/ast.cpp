#include <cmath>

#include "multicat/query.hpp"
#include "multicat/value.hpp"

namespace multicat {

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "/=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

std::string_view to_string(OutputModel m) {
  switch (m) {
    case OutputModel::Graph: return "graph";
    case OutputModel::AlgebraicGraph: return "algebraic graph";
    case OutputModel::Relational: return "relational";
    case OutputModel::Xml: return "xml";
  }
  return "?";
}

std::optional<OutputModel> output_model_from_string(std::string_view s) {
  if (s == "graph") return OutputModel::Graph;
  if (s == "algebraic graph" || s == "algebraic_graph") return OutputModel::AlgebraicGraph;
  if (s == "relational") return OutputModel::Relational;
  if (s == "xml") return OutputModel::Xml;
  return std::nullopt;
}

namespace {

bool same_ptr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return same_expr(*a, *b);
}

bool same_list(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_ptr(a[i], b[i])) return false;
  return true;
}

}  // namespace

bool same_expr(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, IfExpr>) {
          return same_ptr(x.cond, y.cond) && same_ptr(x.then_branch, y.then_branch) &&
                 same_ptr(x.else_branch, y.else_branch);
        } else if constexpr (std::is_same_v<T, AppExpr>) {
          return x.head == y.head && same_list(x.args, y.args);
        } else if constexpr (std::is_same_v<T, VarExpr>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, IntLit> || std::is_same_v<T, DoubleLit> ||
                             std::is_same_v<T, StringLit> || std::is_same_v<T, BoolLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, TupleExpr>) {
          return same_list(x.items, y.items);
        } else if constexpr (std::is_same_v<T, BinExpr>) {
          return x.op == y.op && same_ptr(x.lhs, y.lhs) && same_ptr(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, ConsExpr>) {
          return same_ptr(x.item, y.item) && same_ptr(x.rest, y.rest);
        } else if constexpr (std::is_same_v<T, NilExpr>) {
          return true;
        } else {
          return x.param == y.param && same_ptr(x.body, y.body);
        }
      },
      a.node);
}

bool same_query(const Query& a, const Query& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* x = std::get_if<Block>(&a.node)) {
    const auto& y = std::get<Block>(b.node);
    return x->lambda.params == y.lambda.params && same_ptr(x->lambda.body, y.lambda.body) &&
           x->source == y.source && x->models == y.models;
  }
  const auto& x = std::get<Let>(a.node);
  const auto& y = std::get<Let>(b.node);
  return x.var == y.var && same_query(*x.bound, *y.bound) && same_query(*x.body, *y.body);
}

const Block& result_block(const Query& q) {
  const Query* cur = &q;
  while (const auto* let = std::get_if<Let>(&cur->node)) cur = let->body.get();
  return std::get<Block>(cur->node);
}

// ---------------------------------------------------------------------------
// Pretty printer. Precedence levels, loosest first:
//   0 if, 1 ||, 2 &&, 3 comparison, 4 additive, 5 multiplicative,
//   6 application / cons, 7 atom.

namespace {

int op_level(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 4;
    case BinaryOp::Mul:
    case BinaryOp::Div: return 5;
    default: return 3;
  }
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string print(const Expr& e, int required);

std::string print_at(const ExprPtr& e, int required) { return print(*e, required); }

std::string print(const Expr& e, int required) {
  int level = 7;
  std::string text = std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IfExpr>) {
          level = 0;
          return "if " + print_at(n.cond, 0) + " then " + print_at(n.then_branch, 0) + " else " +
                 print_at(n.else_branch, 0);
        } else if constexpr (std::is_same_v<T, AppExpr>) {
          level = 6;
          std::string out = n.head;
          for (const auto& a : n.args) out += " " + print_at(a, 7);
          return out;
        } else if constexpr (std::is_same_v<T, VarExpr>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, IntLit>) {
          if (n.value < 0) return "(" + std::to_string(n.value) + ")";
          return std::to_string(n.value);
        } else if constexpr (std::is_same_v<T, DoubleLit>) {
          auto s = format_double(n.value);
          return n.value < 0 || (n.value == 0 && std::signbit(n.value)) ? "(" + s + ")" : s;
        } else if constexpr (std::is_same_v<T, StringLit>) {
          return quote(n.value);
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          return n.value ? "True" : "False";
        } else if constexpr (std::is_same_v<T, TupleExpr>) {
          std::string out = "(";
          for (std::size_t i = 0; i < n.items.size(); ++i) out += (i ? ", " : "") + print_at(n.items[i], 0);
          return out + ")";
        } else if constexpr (std::is_same_v<T, BinExpr>) {
          level = op_level(n.op);
          const bool chains = level != 3;
          return print_at(n.lhs, chains ? level : level + 1) + " " + std::string(to_string(n.op)) + " " +
                 print_at(n.rhs, level + 1);
        } else if constexpr (std::is_same_v<T, ConsExpr>) {
          level = 6;
          std::string out = "cons " + print_at(n.item, 7);
          if (n.rest) out += " " + print_at(n.rest, 7);
          return out;
        } else if constexpr (std::is_same_v<T, NilExpr>) {
          return "nil";
        } else {
          return "(\\" + n.param + " -> " + print_at(n.body, 0) + ")";
        }
      },
      e.node);
  return level < required ? "(" + text + ")" : text;
}

}  // namespace

std::string pretty_print(const Expr& e) { return print(e, 0); }

std::string pretty_print(const Lambda& l) {
  std::string out = "\\";
  for (std::size_t i = 0; i < l.params.size(); ++i) out += (i ? " " : "") + l.params[i];
  return out + " -> " + pretty_print(*l.body);
}

std::string pretty_print(const Query& q) {
  if (const auto* b = std::get_if<Block>(&q.node)) {
    std::string out = "QUERY (" + pretty_print(b->lambda) + ")\nFROM " + b->source + "\nTO ";
    for (std::size_t i = 0; i < b->models.size(); ++i) out += (i ? "/" : "") + std::string(to_string(b->models[i]));
    return out;
  }
  const auto& let = std::get<Let>(q.node);
  return "LET " + let.var + " BE\n" + pretty_print(*let.bound) + "\nIN\n" + pretty_print(*let.body);
}

}  // namespace multicat
