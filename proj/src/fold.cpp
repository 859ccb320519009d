#include <cstdint>
#include <functional>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "multicat/eval.hpp"

namespace multicat {

namespace detail {

struct Frame {
  const InstanceStore* store = nullptr;
  const std::vector<Value>* stage_results = nullptr;
  std::map<std::string, Value, std::less<>>* collections = nullptr;
  std::vector<Value> slots;
};

using Code = std::function<Value(Frame&)>;
using Fn = std::function<Value(Frame&, const Value&)>;

struct StageCode {
  Code body;
  std::size_t slot_count = 2;
  std::optional<std::size_t> source_stage;
};

}  // namespace detail

namespace {

using detail::Code;
using detail::Fn;
using detail::Frame;

// -- normalization ------------------------------------------------------------

void collect_names(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IfExpr>) {
          collect_names(*n.cond, out);
          collect_names(*n.then_branch, out);
          collect_names(*n.else_branch, out);
        } else if constexpr (std::is_same_v<T, AppExpr>) {
          out.insert(n.head);
          for (const auto& a : n.args) collect_names(*a, out);
        } else if constexpr (std::is_same_v<T, VarExpr>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<T, TupleExpr>) {
          for (const auto& i : n.items) collect_names(*i, out);
        } else if constexpr (std::is_same_v<T, BinExpr>) {
          collect_names(*n.lhs, out);
          collect_names(*n.rhs, out);
        } else if constexpr (std::is_same_v<T, ConsExpr>) {
          collect_names(*n.item, out);
          if (n.rest) collect_names(*n.rest, out);
        } else if constexpr (std::is_same_v<T, LamExpr>) {
          out.insert(n.param);
          collect_names(*n.body, out);
        }
      },
      e.node);
}

ExprPtr rewrite_acc(const ExprPtr& e, const TypedQuery& typed, const std::string& acc) {
  if (const auto* i = std::get_if<IfExpr>(&e->node)) {
    return make_expr(IfExpr{i->cond, rewrite_acc(i->then_branch, typed, acc), rewrite_acc(i->else_branch, typed, acc)},
                     e->loc);
  }
  if (!typed.accumulator_nodes.count(e.get())) return e;
  if (std::holds_alternative<NilExpr>(e->node)) return make_expr(VarExpr{acc}, e->loc);
  const auto& c = std::get<ConsExpr>(e->node);
  auto rest = c.rest ? rewrite_acc(c.rest, typed, acc) : make_expr(VarExpr{acc}, e->loc);
  return make_expr(ConsExpr{c.item, rest}, e->loc);
}

// -- arithmetic ---------------------------------------------------------------

std::string at(SourceLoc loc) { return std::to_string(loc.line) + ":" + std::to_string(loc.column); }

std::int64_t wrap(std::uint64_t v) { return static_cast<std::int64_t>(v); }

Value arith(BinaryOp op, const Value& a, const Value& b, SourceLoc loc) {
  if (a.is_int() && b.is_int()) {
    const auto x = a.as_int();
    const auto y = b.as_int();
    const auto ux = static_cast<std::uint64_t>(x);
    const auto uy = static_cast<std::uint64_t>(y);
    switch (op) {
      case BinaryOp::Add: return wrap(ux + uy);
      case BinaryOp::Sub: return wrap(ux - uy);
      case BinaryOp::Mul: return wrap(ux * uy);
      default:
        if (y == 0) throw Error(ErrorKind::RuntimeError, "division by zero at " + at(loc), loc);
        if (y == -1) return wrap(0 - ux);
        return x / y;
    }
  }
  const double x = a.as_number();
  const double y = b.as_number();
  switch (op) {
    case BinaryOp::Add: return x + y;
    case BinaryOp::Sub: return x - y;
    case BinaryOp::Mul: return x * y;
    default:
      if (y == 0) throw Error(ErrorKind::RuntimeError, "division by zero at " + at(loc), loc);
      return x / y;
  }
}

int order(const Value& a, const Value& b) {
  if (a.is_int() && b.is_int()) return a.as_int() < b.as_int() ? -1 : (a.as_int() > b.as_int() ? 1 : 0);
  if (a.is_numeric()) {
    const double x = a.as_number();
    const double y = b.as_number();
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  return a.as_string().compare(b.as_string()) < 0 ? -1 : (a.as_string() == b.as_string() ? 0 : 1);
}

bool equal(const Value& a, const Value& b) {
  if (a.is_numeric() && b.is_numeric() && a.is_int() != b.is_int()) return a.as_number() == b.as_number();
  return a == b;
}

// -- closure compiler ---------------------------------------------------------

class Compiler {
 public:
  explicit Compiler(const std::vector<std::pair<std::string, std::size_t>>& stages) : stages_(stages) {}

  std::size_t slot_count() const { return max_slots_; }

  Code lambda_body(const Lambda& l) {
    names_ = {{l.params[0], 0}, {l.params[1], 1}};
    max_slots_ = 2;
    return expr(*l.body);
  }

 private:
  Code expr(const Expr& e) {
    return std::visit([&](const auto& n) { return node(n, e); }, e.node);
  }

  Code node(const IntLit& n, const Expr&) {
    Value v(n.value);
    return [v](Frame&) { return v; };
  }
  Code node(const DoubleLit& n, const Expr&) {
    Value v(n.value);
    return [v](Frame&) { return v; };
  }
  Code node(const StringLit& n, const Expr&) {
    Value v(n.value);
    return [v](Frame&) { return v; };
  }
  Code node(const BoolLit& n, const Expr&) {
    Value v(n.value);
    return [v](Frame&) { return v; };
  }
  Code node(const NilExpr&, const Expr&) {
    return [](Frame&) { return Value(List{}); };
  }
  Code node(const LamExpr&, const Expr&) { throw Error(ErrorKind::RuntimeError, "unexpected lambda"); }

  Code node(const IfExpr& n, const Expr&) {
    return [c = expr(*n.cond), t = expr(*n.then_branch), f = expr(*n.else_branch)](Frame& fr) {
      return c(fr).as_bool() ? t(fr) : f(fr);
    };
  }

  Code node(const TupleExpr& n, const Expr&) {
    std::vector<Code> items;
    for (const auto& i : n.items) items.push_back(expr(*i));
    return [items](Frame& fr) {
      std::vector<Value> out;
      out.reserve(items.size());
      for (const auto& i : items) out.push_back(i(fr));
      return Value::tuple(std::move(out));
    };
  }

  Code node(const ConsExpr& n, const Expr&) {
    return [item = expr(*n.item), rest = expr(*n.rest)](Frame& fr) {
      auto v = item(fr);
      return Value(rest(fr).as_list().prepend(std::move(v)));
    };
  }

  Code node(const VarExpr& n, const Expr&) {
    for (auto it = names_.rbegin(); it != names_.rend(); ++it) {
      if (it->first == n.name) {
        return [slot = it->second](Frame& fr) { return fr.slots[slot]; };
      }
    }
    for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
      if (it->first == n.name) {
        return [idx = it->second](Frame& fr) { return (*fr.stage_results)[idx]; };
      }
    }
    return [name = n.name](Frame& fr) {
      auto it = fr.collections->find(name);
      if (it == fr.collections->end()) {
        const auto* c = fr.store->find_collection(name);
        if (!c) throw Error(ErrorKind::UnknownCollection, "unknown collection " + name);
        std::vector<Value> items;
        items.reserve(c->elements.size());
        for (const auto& id : c->elements) items.push_back(Value::entity(c->object, id));
        it = fr.collections->emplace(name, Value::list(items)).first;
      }
      return it->second;
    };
  }

  Code node(const BinExpr& n, const Expr& e) {
    auto l = expr(*n.lhs);
    auto r = expr(*n.rhs);
    const auto loc = e.loc;
    switch (n.op) {
      case BinaryOp::And:
        return [l, r](Frame& fr) { return Value(l(fr).as_bool() && r(fr).as_bool()); };
      case BinaryOp::Or:
        return [l, r](Frame& fr) { return Value(l(fr).as_bool() || r(fr).as_bool()); };
      case BinaryOp::Add:
      case BinaryOp::Sub:
      case BinaryOp::Mul:
      case BinaryOp::Div:
        return [l, r, op = n.op, loc](Frame& fr) {
          auto a = l(fr);
          return arith(op, a, r(fr), loc);
        };
      case BinaryOp::Eq:
        return [l, r](Frame& fr) {
          auto a = l(fr);
          return Value(equal(a, r(fr)));
        };
      case BinaryOp::Ne:
        return [l, r](Frame& fr) {
          auto a = l(fr);
          return Value(!equal(a, r(fr)));
        };
      case BinaryOp::Gt:
        return [l, r](Frame& fr) {
          auto a = l(fr);
          return Value(order(a, r(fr)) > 0);
        };
      case BinaryOp::Lt:
        return [l, r](Frame& fr) {
          auto a = l(fr);
          return Value(order(a, r(fr)) < 0);
        };
      case BinaryOp::Ge:
        return [l, r](Frame& fr) {
          auto a = l(fr);
          return Value(order(a, r(fr)) >= 0);
        };
      case BinaryOp::Le:
        return [l, r](Frame& fr) {
          auto a = l(fr);
          return Value(order(a, r(fr)) <= 0);
        };
    }
    throw Error(ErrorKind::RuntimeError, "unknown operator");
  }

  Fn function(const Expr& f) {
    if (const auto* lam = std::get_if<LamExpr>(&f.node)) {
      const std::size_t slot = names_.size();
      names_.emplace_back(lam->param, slot);
      max_slots_ = std::max(max_slots_, slot + 1);
      auto body = expr(*lam->body);
      names_.pop_back();
      return [slot, body](Frame& fr, const Value& v) {
        fr.slots[slot] = v;
        return body(fr);
      };
    }
    const auto& name = std::get<VarExpr>(f.node).name;
    if (name == "not") return [](Frame&, const Value& v) { return Value(!v.as_bool()); };
    if (name == "fst") return [](Frame&, const Value& v) { return v.as_tuple().items[0]; };
    if (name == "snd") return [](Frame&, const Value& v) { return v.as_tuple().items[1]; };
    if (name == "length") {
      return [](Frame&, const Value& v) { return Value(static_cast<std::int64_t>(v.as_list().size())); };
    }
    return [name](Frame& fr, const Value& v) { return fr.store->apply(name, v.as_entity().id); };
  }

  Code node(const AppExpr& n, const Expr&) {
    const auto& h = n.head;
    if (h == "elem") {
      return [item = expr(*n.args[0]), list = expr(*n.args[1])](Frame& fr) {
        auto v = item(fr);
        auto xs = list(fr);
        for (const auto& x : xs.as_list())
          if (equal(v, x)) return Value(true);
        return Value(false);
      };
    }
    if (h == "map") {
      return [f = function(*n.args[0]), list = expr(*n.args[1])](Frame& fr) {
        auto xs = list(fr);
        std::vector<Value> out;
        out.reserve(xs.as_list().size());
        for (const auto& x : xs.as_list()) out.push_back(f(fr, x));
        return Value::list(out);
      };
    }
    if (h == "any" || h == "all") {
      const bool want = h == "any";
      return [f = function(*n.args[0]), list = expr(*n.args[1]), want](Frame& fr) {
        auto xs = list(fr);
        for (const auto& x : xs.as_list())
          if (f(fr, x).as_bool() == want) return Value(want);
        return Value(!want);
      };
    }
    if (h == "not" || h == "fst" || h == "snd" || h == "length") {
      Fn f = function(*make_expr(VarExpr{h}));
      return [f, arg = expr(*n.args[0])](Frame& fr) { return f(fr, arg(fr)); };
    }
    return [h, arg = expr(*n.args[0])](Frame& fr) { return fr.store->apply(h, arg(fr).as_entity().id); };
  }

  const std::vector<std::pair<std::string, std::size_t>>& stages_;
  std::vector<std::pair<std::string, std::size_t>> names_;
  std::size_t max_slots_ = 2;
};

// -- linearization ------------------------------------------------------------

class Linearizer {
 public:
  explicit Linearizer(const TypedQuery& typed) : typed_(typed) {}

  std::size_t emit(const Query& q, std::optional<std::string> binds) {
    if (const auto* let = std::get_if<Let>(&q.node)) {
      const auto idx = emit(*let->bound, let->var);
      scope_.emplace_back(let->var, idx);
      const auto r = emit(*let->body, std::move(binds));
      scope_.pop_back();
      return r;
    }
    const auto& b = std::get<Block>(q.node);
    FoldStage stage;
    stage.source = b.source;
    stage.binds = std::move(binds);
    stage.lambda = b.lambda;
    stage.combiner = normalize_lambda(b.lambda, typed_);
    auto code = std::make_shared<detail::StageCode>();
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == b.source) {
        code->source_stage = it->second;
        stage.source_kind = SourceKind::Binding;
        break;
      }
    }
    Compiler c(scope_);
    code->body = c.lambda_body(stage.combiner);
    code->slot_count = c.slot_count();
    stage.code = std::move(code);
    plan.stages.push_back(std::move(stage));
    return plan.stages.size() - 1;
  }

  FoldPlan plan;

 private:
  const TypedQuery& typed_;
  std::vector<std::pair<std::string, std::size_t>> scope_;
};

}  // namespace

Lambda normalize_lambda(const Lambda& lambda, const TypedQuery& typed) {
  if (lambda.params.size() == 2) return lambda;
  std::set<std::string> used{lambda.params[0]};
  collect_names(*lambda.body, used);
  std::string acc = "acc";
  for (int i = 1; used.count(acc); ++i) acc = "acc" + std::to_string(i);
  Lambda out = lambda;
  out.params.push_back(acc);
  out.body = rewrite_acc(lambda.body, typed, acc);
  return out;
}

FoldPlan compile(const TypedQuery& typed) {
  Linearizer lin(typed);
  lin.emit(*typed.ast, std::nullopt);
  return std::move(lin.plan);
}

Value execute(const FoldPlan& plan, const InstanceStore& store) {
  std::vector<Value> results;
  results.reserve(plan.stages.size());
  std::map<std::string, Value, std::less<>> collections;
  for (const auto& stage : plan.stages) {
    Frame fr;
    fr.store = &store;
    fr.stage_results = &results;
    fr.collections = &collections;
    fr.slots.resize(stage.code->slot_count);

    Value acc = stage.seed;
    if (stage.code->source_stage) {
      const auto items = results[*stage.code->source_stage].as_list().to_vector();
      for (auto it = items.rbegin(); it != items.rend(); ++it) {
        fr.slots[0] = *it;
        fr.slots[1] = std::move(acc);
        acc = stage.code->body(fr);
      }
    } else {
      const auto* c = store.find_collection(stage.source);
      if (!c) throw Error(ErrorKind::UnknownCollection, "unknown collection " + stage.source);
      for (auto it = c->elements.rbegin(); it != c->elements.rend(); ++it) {
        fr.slots[0] = Value::entity(c->object, *it);
        fr.slots[1] = std::move(acc);
        acc = stage.code->body(fr);
      }
    }
    results.push_back(std::move(acc));
  }
  return results.back();
}

nlohmann::json expr_to_json(const Expr& e) {
  using nlohmann::json;
  return std::visit(
      [&](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IfExpr>) {
          return {{"node", "If"},
                  {"cond", expr_to_json(*n.cond)},
                  {"then", expr_to_json(*n.then_branch)},
                  {"else", expr_to_json(*n.else_branch)}};
        } else if constexpr (std::is_same_v<T, AppExpr>) {
          json args = json::array();
          for (const auto& a : n.args) args.push_back(expr_to_json(*a));
          return {{"node", "App"}, {"head", n.head}, {"args", args}};
        } else if constexpr (std::is_same_v<T, VarExpr>) {
          return {{"node", "Var"}, {"name", n.name}};
        } else if constexpr (std::is_same_v<T, IntLit>) {
          return {{"node", "Int"}, {"value", n.value}};
        } else if constexpr (std::is_same_v<T, DoubleLit>) {
          return {{"node", "Double"}, {"value", n.value}};
        } else if constexpr (std::is_same_v<T, StringLit>) {
          return {{"node", "String"}, {"value", n.value}};
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          return {{"node", "Bool"}, {"value", n.value}};
        } else if constexpr (std::is_same_v<T, TupleExpr>) {
          json items = json::array();
          for (const auto& i : n.items) items.push_back(expr_to_json(*i));
          return {{"node", "Tuple"}, {"items", items}};
        } else if constexpr (std::is_same_v<T, BinExpr>) {
          return {{"node", "BinOp"},
                  {"op", std::string(to_string(n.op))},
                  {"lhs", expr_to_json(*n.lhs)},
                  {"rhs", expr_to_json(*n.rhs)}};
        } else if constexpr (std::is_same_v<T, ConsExpr>) {
          json out = {{"node", "Cons"}, {"item", expr_to_json(*n.item)}};
          out["rest"] = n.rest ? expr_to_json(*n.rest) : json(nullptr);
          return out;
        } else if constexpr (std::is_same_v<T, NilExpr>) {
          return {{"node", "Nil"}};
        } else {
          return {{"node", "Lambda"}, {"param", n.param}, {"body", expr_to_json(*n.body)}};
        }
      },
      e.node);
}

nlohmann::json plan_to_json(const FoldPlan& plan) {
  using nlohmann::json;
  json stages = json::array();
  for (const auto& s : plan.stages) {
    json combiner_ast = {{"params", s.combiner.params}, {"body", expr_to_json(*s.combiner.body)}};
    stages.push_back({{"source", s.source},
                      {"sourceKind", s.source_kind == SourceKind::Binding ? "binding" : "collection"},
                      {"binds", s.binds ? json(*s.binds) : json(nullptr)},
                      {"lambda", pretty_print(s.lambda)},
                      {"combiner", pretty_print(s.combiner)},
                      {"combinerAst", combiner_ast}});
  }
  return {{"stages", stages}};
}

}  // namespace multicat
