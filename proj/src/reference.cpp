// Naive interpreter kept independent of the fold compiler on purpose: it
// walks the AST directly, recurses over lists, and implements every builtin
// on its own.

#include <cstdint>
#include <map>

#include "multicat/eval.hpp"

namespace multicat {

namespace {

using Env = std::map<std::string, Value>;

class Interpreter {
 public:
  explicit Interpreter(const InstanceStore& store) : store_(store) {}

  Value query(const Query& q, const Env& env) {
    if (const auto* let = std::get_if<Let>(&q.node)) {
      Env inner = env;
      inner[let->var] = query(*let->bound, env);
      return query(*let->body, inner);
    }
    const auto& b = std::get<Block>(q.node);
    auto it = env.find(b.source);
    const List source = it != env.end() ? it->second.as_list() : collection(b.source);
    return fold(b.lambda, source, env);
  }

 private:
  List collection(const std::string& name) {
    List out;
    const auto& ids = store_.elements(name);
    const auto& object = store_.find_collection(name)->object;
    for (auto i = ids.size(); i-- > 0;) out = out.prepend(Value::entity(object, ids[i]));
    return out;
  }

  // foldr: the combiner sees the last element first.
  Value fold(const Lambda& l, const List& items, const Env& env) {
    if (items.empty()) return Value(List{});
    Value acc = fold(l, items.tail(), env);
    Env inner = env;
    inner[l.params[0]] = items.front();
    if (l.params.size() == 2) {
      inner[l.params[1]] = acc;
      return eval(*l.body, inner);
    }
    return eval_acc(*l.body, inner, acc.as_list());
  }

  // Single-parameter lambda body: `nil` keeps the accumulator and a
  // rest-less `cons e` pushes onto it.
  Value eval_acc(const Expr& e, const Env& env, const List& acc) {
    if (const auto* i = std::get_if<IfExpr>(&e.node)) {
      return eval(*i->cond, env).as_bool() ? eval_acc(*i->then_branch, env, acc)
                                           : eval_acc(*i->else_branch, env, acc);
    }
    if (std::holds_alternative<NilExpr>(e.node)) return Value(acc);
    if (const auto* c = std::get_if<ConsExpr>(&e.node)) {
      Value head = eval(*c->item, env);
      Value rest = c->rest ? eval_acc(*c->rest, env, acc) : Value(acc);
      return Value(rest.as_list().prepend(head));
    }
    return eval(e, env);
  }

  static bool same(const Value& a, const Value& b) {
    if (a.is_int() && b.is_double()) return static_cast<double>(a.as_int()) == b.as_double();
    if (a.is_double() && b.is_int()) return a.as_double() == static_cast<double>(b.as_int());
    return a == b;
  }

  static bool less(const Value& a, const Value& b) {
    if (a.is_string()) return a.as_string() < b.as_string();
    if (a.is_int() && b.is_int()) return a.as_int() < b.as_int();
    return a.as_number() < b.as_number();
  }

  static Value binary(const BinExpr& n, const Value& a, const Value& b, SourceLoc loc) {
    switch (n.op) {
      case BinaryOp::Eq: return same(a, b);
      case BinaryOp::Ne: return !same(a, b);
      case BinaryOp::Lt: return less(a, b);
      case BinaryOp::Gt: return less(b, a);
      case BinaryOp::Le: return !less(b, a);
      case BinaryOp::Ge: return !less(a, b);
      default: break;
    }
    if (a.is_int() && b.is_int()) {
      const std::int64_t x = a.as_int();
      const std::int64_t y = b.as_int();
      const std::uint64_t ux = static_cast<std::uint64_t>(x);
      const std::uint64_t uy = static_cast<std::uint64_t>(y);
      if (n.op == BinaryOp::Add) return static_cast<std::int64_t>(ux + uy);
      if (n.op == BinaryOp::Sub) return static_cast<std::int64_t>(ux - uy);
      if (n.op == BinaryOp::Mul) return static_cast<std::int64_t>(ux * uy);
      if (y == 0) {
        throw Error(ErrorKind::RuntimeError,
                    "division by zero at " + std::to_string(loc.line) + ":" + std::to_string(loc.column), loc);
      }
      if (x == INT64_MIN && y == -1) return x;
      return x / y;
    }
    const double x = a.as_number();
    const double y = b.as_number();
    if (n.op == BinaryOp::Add) return x + y;
    if (n.op == BinaryOp::Sub) return x - y;
    if (n.op == BinaryOp::Mul) return x * y;
    if (y == 0.0) {
      throw Error(ErrorKind::RuntimeError,
                  "division by zero at " + std::to_string(loc.line) + ":" + std::to_string(loc.column), loc);
    }
    return x / y;
  }

  Value call(const Expr& f, const Value& arg, const Env& env) {
    if (const auto* lam = std::get_if<LamExpr>(&f.node)) {
      Env inner = env;
      inner[lam->param] = arg;
      return eval(*lam->body, inner);
    }
    const auto& name = std::get<VarExpr>(f.node).name;
    return apply_named(name, arg);
  }

  Value apply_named(const std::string& name, const Value& arg) {
    if (name == "not") return !arg.as_bool();
    if (name == "fst") return arg.as_tuple().items.at(0);
    if (name == "snd") return arg.as_tuple().items.at(1);
    if (name == "length") return count(arg.as_list());
    return store_.apply(name, arg.as_entity().id);
  }

  static std::int64_t count(const List& xs) { return xs.empty() ? 0 : 1 + count(xs.tail()); }

  bool member(const Value& v, const List& xs) {
    if (xs.empty()) return false;
    return same(v, xs.front()) || member(v, xs.tail());
  }

  List map_list(const Expr& f, const List& xs, const Env& env) {
    if (xs.empty()) return {};
    Value head = call(f, xs.front(), env);
    return map_list(f, xs.tail(), env).prepend(head);
  }

  bool exists(const Expr& f, const List& xs, const Env& env) {
    if (xs.empty()) return false;
    return call(f, xs.front(), env).as_bool() || exists(f, xs.tail(), env);
  }

  bool forall(const Expr& f, const List& xs, const Env& env) {
    if (xs.empty()) return true;
    return call(f, xs.front(), env).as_bool() && forall(f, xs.tail(), env);
  }

  Value eval(const Expr& e, const Env& env) {
    if (const auto* n = std::get_if<IntLit>(&e.node)) return n->value;
    if (const auto* n = std::get_if<DoubleLit>(&e.node)) return n->value;
    if (const auto* n = std::get_if<StringLit>(&e.node)) return n->value;
    if (const auto* n = std::get_if<BoolLit>(&e.node)) return n->value;
    if (std::holds_alternative<NilExpr>(e.node)) return List{};
    if (const auto* n = std::get_if<VarExpr>(&e.node)) {
      auto it = env.find(n->name);
      return it != env.end() ? it->second : Value(collection(n->name));
    }
    if (const auto* n = std::get_if<IfExpr>(&e.node)) {
      return eval(*n->cond, env).as_bool() ? eval(*n->then_branch, env) : eval(*n->else_branch, env);
    }
    if (const auto* n = std::get_if<TupleExpr>(&e.node)) {
      std::vector<Value> items;
      for (const auto& i : n->items) items.push_back(eval(*i, env));
      return Value::tuple(std::move(items));
    }
    if (const auto* n = std::get_if<ConsExpr>(&e.node)) {
      Value head = eval(*n->item, env);
      return eval(*n->rest, env).as_list().prepend(head);
    }
    if (const auto* n = std::get_if<BinExpr>(&e.node)) {
      if (n->op == BinaryOp::And) return eval(*n->lhs, env).as_bool() ? eval(*n->rhs, env) : Value(false);
      if (n->op == BinaryOp::Or) return eval(*n->lhs, env).as_bool() ? Value(true) : eval(*n->rhs, env);
      Value a = eval(*n->lhs, env);
      Value b = eval(*n->rhs, env);
      return binary(*n, a, b, e.loc);
    }
    const auto& app = std::get<AppExpr>(e.node);
    const auto& h = app.head;
    if (h == "elem") {
      Value v = eval(*app.args[0], env);
      return member(v, eval(*app.args[1], env).as_list());
    }
    if (h == "map") return map_list(*app.args[0], eval(*app.args[1], env).as_list(), env);
    if (h == "any") return exists(*app.args[0], eval(*app.args[1], env).as_list(), env);
    if (h == "all") return forall(*app.args[0], eval(*app.args[1], env).as_list(), env);
    return apply_named(h, eval(*app.args[0], env));
  }

  const InstanceStore& store_;
};

}  // namespace

Value reference_interpret(const TypedQuery& typed, const InstanceStore& store) {
  return Interpreter(store).query(*typed.ast, {});
}

}  // namespace multicat
