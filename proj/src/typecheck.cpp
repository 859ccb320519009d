#include "multicat/typecheck.hpp"

#include <algorithm>
#include <functional>

#include "multicat/instance.hpp"

namespace multicat {

QueryType QueryType::primitive(PrimitiveType p) {
  QueryType t;
  t.kind = Kind::Prim;
  t.prim = p;
  return t;
}

QueryType QueryType::entity_of(std::string object) {
  QueryType t;
  t.kind = Kind::Entity;
  t.entity = std::move(object);
  return t;
}

QueryType QueryType::tuple(std::vector<QueryType> items) {
  QueryType t;
  t.kind = Kind::Tuple;
  t.args = std::move(items);
  return t;
}

QueryType QueryType::list(QueryType elem) {
  QueryType t;
  t.kind = Kind::List;
  t.args = {std::move(elem)};
  return t;
}

QueryType QueryType::graph(QueryType elem) {
  QueryType t;
  t.kind = Kind::Graph;
  t.args = {std::move(elem)};
  return t;
}

QueryType QueryType::fun(QueryType arg, QueryType result) {
  QueryType t;
  t.kind = Kind::Fun;
  t.args = {std::move(arg), std::move(result)};
  return t;
}

QueryType QueryType::variable(int id) {
  QueryType t;
  t.kind = Kind::Var;
  t.var = id;
  return t;
}

std::string QueryType::str() const {
  switch (kind) {
    case Kind::Prim:
      switch (prim) {
        case PrimitiveType::String: return "String";
        case PrimitiveType::Int: return "Int";
        case PrimitiveType::Double: return "Double";
        case PrimitiveType::Bool: return "Bool";
      }
      break;
    case Kind::Entity: return entity;
    case Kind::Tuple: {
      std::string out = "(";
      for (std::size_t i = 0; i < args.size(); ++i) out += (i ? ", " : "") + args[i].str();
      return out + ")";
    }
    case Kind::List: return "[" + args[0].str() + "]";
    case Kind::Graph: return "Graph " + args[0].str();
    case Kind::Fun: {
      auto a = args[0].kind == Kind::Fun ? "(" + args[0].str() + ")" : args[0].str();
      return a + " -> " + args[1].str();
    }
    case Kind::Var: return "t" + std::to_string(var);
  }
  return "?";
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"elem", "map", "any", "all", "not", "fst", "snd", "length"};
  return names;
}

bool is_builtin(std::string_view name) {
  const auto& b = builtin_names();
  return std::find(b.begin(), b.end(), name) != b.end();
}

std::map<std::string, QueryType> source_types(const InstanceStore& store) {
  std::map<std::string, QueryType> out;
  for (const auto& c : store.collections()) out.emplace(c.name, QueryType::list(QueryType::entity_of(c.object)));
  return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

using Kind = QueryType::Kind;

std::string at(SourceLoc loc) { return std::to_string(loc.line) + ":" + std::to_string(loc.column); }

[[noreturn]] void type_error(SourceLoc loc, const std::string& msg) {
  throw Error(ErrorKind::TypeError, "type error at " + at(loc) + ": " + msg, loc);
}

class Checker {
 public:
  Checker(const SchemaCategory& schema, const std::map<std::string, QueryType>& sources, TypedQuery& out)
      : schema_(schema), sources_(sources), out_(out) {}

  void run(const Query& q) {
    out_.result = query(q);
    for (const auto& d : deferred_) check_deferred(d);
    for (auto& [node, t] : out_.types) t = resolve(t);
    for (auto& [block, info] : out_.blocks) {
      info.element = resolve(info.element);
      info.result_element = resolve(info.result_element);
    }
    out_.result = resolve(out_.result);
    out_.model = result_block(q).model();
  }

 private:
  enum class Need { Numeric, Ordered, Comparable };
  struct Deferred {
    Need need;
    QueryType type;
    SourceLoc loc;
  };

  QueryType fresh() {
    subst_.emplace_back();
    return QueryType::variable(static_cast<int>(subst_.size() - 1));
  }

  QueryType resolve(const QueryType& t) const {
    if (t.kind == Kind::Var) {
      const auto& s = subst_[static_cast<std::size_t>(t.var)];
      return s ? resolve(*s) : t;
    }
    QueryType out = t;
    for (auto& a : out.args) a = resolve(a);
    return out;
  }

  bool occurs(int var, const QueryType& t) const {
    auto r = resolve(t);
    if (r.kind == Kind::Var) return r.var == var;
    return std::any_of(r.args.begin(), r.args.end(), [&](const QueryType& a) { return occurs(var, a); });
  }

  void unify(const QueryType& expected, const QueryType& found, SourceLoc loc) {
    auto a = resolve(expected);
    auto b = resolve(found);
    if (a.kind == Kind::Var || b.kind == Kind::Var) {
      if (a.kind == Kind::Var && b.kind == Kind::Var && a.var == b.var) return;
      const auto& var = a.kind == Kind::Var ? a : b;
      const auto& other = a.kind == Kind::Var ? b : a;
      if (occurs(var.var, other)) mismatch(a, b, loc);
      subst_[static_cast<std::size_t>(var.var)] = other;
      return;
    }
    if (a.kind != b.kind) mismatch(a, b, loc);
    switch (a.kind) {
      case Kind::Prim:
        if (a.prim != b.prim) mismatch(a, b, loc);
        return;
      case Kind::Entity:
        if (a.entity != b.entity) mismatch(a, b, loc);
        return;
      default:
        if (a.args.size() != b.args.size()) mismatch(a, b, loc);
        for (std::size_t i = 0; i < a.args.size(); ++i) unify(a.args[i], b.args[i], loc);
    }
  }

  [[noreturn]] void mismatch(const QueryType& expected, const QueryType& found, SourceLoc loc) const {
    type_error(loc, "expected " + resolve(expected).str() + ", found " + resolve(found).str());
  }

  void check_deferred(const Deferred& d) const {
    auto t = resolve(d.type);
    if (t.kind == Kind::Var) return;
    switch (d.need) {
      case Need::Numeric:
        if (!t.is_numeric()) type_error(d.loc, "expected Int or Double, found " + t.str());
        return;
      case Need::Ordered:
        if (!t.is_numeric() && !t.is_prim(PrimitiveType::String))
          type_error(d.loc, "expected an ordered type (Int, Double or String), found " + t.str());
        return;
      case Need::Comparable:
        if (!comparable(t)) type_error(d.loc, "values of type " + t.str() + " cannot be compared for equality");
        return;
    }
  }

  static bool comparable(const QueryType& t) {
    switch (t.kind) {
      case Kind::Prim:
      case Kind::Entity:
      case Kind::Var: return true;
      case Kind::Tuple: return std::all_of(t.args.begin(), t.args.end(), comparable);
      default: return false;
    }
  }

  // -- names ----------------------------------------------------------------

  const QueryType* in_scope(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }

  const QueryType* binding(const std::string& name) const {
    for (auto it = lets_.rbegin(); it != lets_.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }

  void check_fresh_name(const std::string& name, SourceLoc loc, const char* what) const {
    std::string clash;
    if (in_scope(name)) clash = "a lambda parameter";
    else if (binding(name)) clash = "a LET variable";
    else if (sources_.count(name)) clash = "a collection";
    else if (schema_.find_morphism(name)) clash = "a morphism";
    else if (is_builtin(name)) clash = "a builtin";
    if (!clash.empty()) type_error(loc, std::string(what) + " '" + name + "' shadows " + clash);
  }

  [[noreturn]] void unknown(const std::string& name, SourceLoc loc, ErrorKind kind) const {
    std::vector<std::string> candidates;
    if (kind == ErrorKind::UnknownCollection) {
      for (const auto& [n, t] : sources_) candidates.push_back(n);
      for (const auto& [n, t] : lets_) candidates.push_back(n);
    } else {
      for (const auto& m : schema_.morphisms())
        if (!m.identity) candidates.push_back(m.id);
      for (const auto& b : builtin_names()) candidates.push_back(b);
      for (const auto& [n, t] : sources_) candidates.push_back(n);
      for (const auto& [n, t] : scope_) candidates.push_back(n);
      for (const auto& [n, t] : lets_) candidates.push_back(n);
    }
    std::string best;
    std::size_t best_d = 3;
    for (const auto& c : candidates) {
      auto d = edit_distance(name, c);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    std::string msg = (kind == ErrorKind::UnknownCollection ? "unknown collection '" : "unknown morphism '") +
                      name + "' at " + at(loc);
    if (!best.empty()) msg += " (did you mean '" + best + "'?)";
    Error err(kind, msg, loc);
    err.hint = best;
    throw err;
  }

  QueryType object_type(const std::string& object) const {
    const auto* o = schema_.find_object(object);
    if (o->kind == ObjectKind::Primitive) return QueryType::primitive(*o->primitive);
    return QueryType::entity_of(object);
  }

  QueryType codomain_type(const Morphism& m) const {
    auto t = object_type(m.codomain);
    return m.cardinality == Cardinality::Many ? QueryType::list(t) : t;
  }

  // -- queries --------------------------------------------------------------

  QueryType query(const Query& q) {
    if (const auto* b = std::get_if<Block>(&q.node)) return block(*b);
    const auto& let = std::get<Let>(q.node);
    check_fresh_name(let.var, q.loc, "LET variable");
    auto bound = query(*let.bound);
    lets_.emplace_back(let.var, bound);
    auto body = query(*let.body);
    lets_.pop_back();
    return body;
  }

  QueryType block(const Block& b) {
    BlockInfo info;
    if (const auto* t = binding(b.source)) {
      info.source_kind = SourceKind::Binding;
      info.element = resolve(*t).elem();
    } else if (auto it = sources_.find(b.source); it != sources_.end()) {
      info.source_kind = SourceKind::Collection;
      info.element = it->second.elem();
    } else {
      unknown(b.source, b.source_loc, ErrorKind::UnknownCollection);
    }
    const auto& params = b.lambda.params;
    if (params.size() == 2 && params[0] == params[1])
      type_error(b.lambda.loc, "lambda parameters must be distinct");
    for (const auto& p : params) check_fresh_name(p, b.lambda.loc, "parameter");

    const auto result_elem = fresh();
    const auto acc = QueryType::list(result_elem);
    info.result_element = result_elem;

    auto saved_acc = acc_type_;
    acc_type_ = acc;
    scope_.emplace_back(params[0], info.element);
    if (params.size() == 2) {
      scope_.emplace_back(params[1], acc);
    } else {
      mark_accumulator(*b.lambda.body);
    }
    const auto body = infer(*b.lambda.body);
    unify(acc, body, b.lambda.body->loc);
    scope_.resize(scope_.size() - params.size());
    acc_type_ = saved_acc;
    out_.blocks[&b] = info;
    return acc;
  }

  void mark_accumulator(const Expr& e) {
    if (const auto* c = std::get_if<ConsExpr>(&e.node)) {
      out_.accumulator_nodes.insert(&e);
      if (c->rest) mark_accumulator(*c->rest);
    } else if (std::holds_alternative<NilExpr>(e.node)) {
      out_.accumulator_nodes.insert(&e);
    } else if (const auto* i = std::get_if<IfExpr>(&e.node)) {
      mark_accumulator(*i->then_branch);
      mark_accumulator(*i->else_branch);
    }
  }

  // -- expressions ----------------------------------------------------------

  QueryType infer(const Expr& e) {
    auto t = std::visit([&](const auto& n) { return infer_node(n, e); }, e.node);
    out_.types[&e] = t;
    return t;
  }

  QueryType infer_node(const IntLit&, const Expr&) { return QueryType::primitive(PrimitiveType::Int); }
  QueryType infer_node(const DoubleLit&, const Expr&) { return QueryType::primitive(PrimitiveType::Double); }
  QueryType infer_node(const StringLit&, const Expr&) { return QueryType::primitive(PrimitiveType::String); }
  QueryType infer_node(const BoolLit&, const Expr&) { return QueryType::primitive(PrimitiveType::Bool); }

  QueryType infer_node(const IfExpr& n, const Expr&) {
    unify(QueryType::primitive(PrimitiveType::Bool), infer(*n.cond), n.cond->loc);
    auto t = infer(*n.then_branch);
    unify(t, infer(*n.else_branch), n.else_branch->loc);
    return t;
  }

  QueryType infer_node(const TupleExpr& n, const Expr&) {
    std::vector<QueryType> items;
    for (const auto& i : n.items) items.push_back(infer(*i));
    return QueryType::tuple(std::move(items));
  }

  QueryType infer_node(const NilExpr&, const Expr& e) {
    if (out_.accumulator_nodes.count(&e)) return *acc_type_;
    return QueryType::list(fresh());
  }

  QueryType infer_node(const ConsExpr& n, const Expr& e) {
    auto item = infer(*n.item);
    if (n.rest) {
      unify(QueryType::list(item), infer(*n.rest), n.rest->loc);
      return QueryType::list(item);
    }
    if (!out_.accumulator_nodes.count(&e))
      type_error(e.loc, "cons needs a list to prepend to; only a single-parameter lambda may omit it");
    unify(*acc_type_, QueryType::list(item), n.item->loc);
    return *acc_type_;
  }

  QueryType infer_node(const LamExpr&, const Expr& e) {
    type_error(e.loc, "a lambda is only allowed as the function argument of map, any or all");
  }

  QueryType infer_node(const VarExpr& n, const Expr& e) {
    if (const auto* t = in_scope(n.name)) return *t;
    if (const auto* t = binding(n.name)) return *t;
    if (auto it = sources_.find(n.name); it != sources_.end()) return it->second;
    if (schema_.find_morphism(n.name) || is_builtin(n.name))
      type_error(e.loc, "'" + n.name + "' is a function and must be applied to an argument");
    unknown(n.name, e.loc, ErrorKind::UnknownMorphism);
  }

  QueryType infer_node(const BinExpr& n, const Expr&) {
    const auto bool_t = QueryType::primitive(PrimitiveType::Bool);
    auto l = infer(*n.lhs);
    auto r = infer(*n.rhs);
    auto rl = resolve(l);
    auto rr = resolve(r);
    switch (n.op) {
      case BinaryOp::And:
      case BinaryOp::Or:
        unify(bool_t, l, n.lhs->loc);
        unify(bool_t, r, n.rhs->loc);
        return bool_t;
      case BinaryOp::Add:
      case BinaryOp::Sub:
      case BinaryOp::Mul:
      case BinaryOp::Div:
        if (rl.is_numeric() && rr.is_numeric()) {
          return rl.is_prim(PrimitiveType::Int) && rr.is_prim(PrimitiveType::Int)
                     ? rl
                     : QueryType::primitive(PrimitiveType::Double);
        }
        if (rl.kind != Kind::Var && !rl.is_numeric())
          type_error(n.lhs->loc, "expected Int or Double, found " + rl.str());
        if (rr.kind != Kind::Var && !rr.is_numeric())
          type_error(n.rhs->loc, "expected " + (rl.is_numeric() ? rl.str() : std::string("Int or Double")) +
                                     ", found " + rr.str());
        unify(l, r, n.rhs->loc);
        deferred_.push_back({Need::Numeric, l, n.lhs->loc});
        return l;
      case BinaryOp::Gt:
      case BinaryOp::Lt:
      case BinaryOp::Ge:
      case BinaryOp::Le:
        if (rl.is_numeric() && rr.is_numeric()) return bool_t;
        if (rl.is_numeric() && rr.kind != Kind::Var) mismatch(rl, rr, n.rhs->loc);
        unify(l, r, n.rhs->loc);
        deferred_.push_back({Need::Ordered, l, n.lhs->loc});
        return bool_t;
      case BinaryOp::Eq:
      case BinaryOp::Ne:
        if (rl.is_numeric() && rr.is_numeric()) return bool_t;
        unify(l, r, n.rhs->loc);
        deferred_.push_back({Need::Comparable, l, n.lhs->loc});
        return bool_t;
    }
    return bool_t;
  }

  void arity(const AppExpr& n, std::size_t want, const Expr& e) {
    if (n.args.size() != want)
      type_error(e.loc, n.head + " expects " + std::to_string(want) + " argument" + (want == 1 ? "" : "s") +
                            ", found " + std::to_string(n.args.size()));
  }

  /// Type of a function-position argument applied to `arg`; returns the
  /// result type.
  QueryType infer_fn(const Expr& f, const QueryType& arg) {
    if (const auto* lam = std::get_if<LamExpr>(&f.node)) {
      check_fresh_name(lam->param, f.loc, "parameter");
      scope_.emplace_back(lam->param, arg);
      auto r = infer(*lam->body);
      scope_.pop_back();
      out_.types[&f] = QueryType::fun(arg, r);
      return r;
    }
    if (const auto* v = std::get_if<VarExpr>(&f.node); v && !in_scope(v->name) && !binding(v->name)) {
      QueryType fn;
      if (const auto* m = schema_.find_morphism(v->name)) {
        fn = QueryType::fun(object_type(m->domain), codomain_type(*m));
      } else if (v->name == "not") {
        const auto b = QueryType::primitive(PrimitiveType::Bool);
        fn = QueryType::fun(b, b);
      } else if (v->name == "fst" || v->name == "snd") {
        auto a = fresh();
        auto b = fresh();
        fn = QueryType::fun(QueryType::tuple({a, b}), v->name == "fst" ? a : b);
      } else if (v->name == "length") {
        fn = QueryType::fun(QueryType::list(fresh()), QueryType::primitive(PrimitiveType::Int));
      } else if (is_builtin(v->name)) {
        type_error(f.loc, "'" + v->name + "' cannot be passed as a function");
      }
      if (fn.kind == Kind::Fun) {
        out_.types[&f] = fn;
        auto r = fresh();
        unify(fn, QueryType::fun(arg, r), f.loc);
        return r;
      }
    }
    auto t = infer(f);
    auto r = fresh();
    unify(QueryType::fun(arg, r), t, f.loc);
    return r;
  }

  QueryType infer_node(const AppExpr& n, const Expr& e) {
    if (in_scope(n.head) || binding(n.head) || sources_.count(n.head))
      type_error(e.loc, "'" + n.head + "' is not a function");
    const auto bool_t = QueryType::primitive(PrimitiveType::Bool);

    if (const auto* m = schema_.find_morphism(n.head)) {
      if (n.args.empty() || n.args.size() > 2)
        type_error(e.loc, n.head + " expects 1 argument (plus an optional codomain collection), found " +
                              std::to_string(n.args.size()));
      unify(object_type(m->domain), infer(*n.args[0]), n.args[0]->loc);
      if (n.args.size() == 2) {
        const auto& ann = *n.args[1];
        const auto* v = std::get_if<VarExpr>(&ann.node);
        auto it = v ? sources_.find(v->name) : sources_.end();
        if (!v || it == sources_.end() || in_scope(v->name) || binding(v->name))
          type_error(ann.loc, "second argument of " + n.head + " must name the collection of " + m->codomain);
        if (it->second.elem() != QueryType::entity_of(m->codomain))
          type_error(ann.loc, "collection " + v->name + " holds " + it->second.elem().str() + ", but " + n.head +
                                  " maps into " + m->codomain);
        out_.types[&ann] = it->second;
        out_.annotated_apps.insert(&e);
      }
      return codomain_type(*m);
    }

    if (n.head == "elem") {
      arity(n, 2, e);
      auto item = infer(*n.args[0]);
      unify(QueryType::list(item), infer(*n.args[1]), n.args[1]->loc);
      deferred_.push_back({Need::Comparable, item, n.args[0]->loc});
      return bool_t;
    }
    if (n.head == "map" || n.head == "any" || n.head == "all") {
      arity(n, 2, e);
      auto elem = fresh();
      unify(QueryType::list(elem), infer(*n.args[1]), n.args[1]->loc);
      auto r = infer_fn(*n.args[0], elem);
      if (n.head == "map") return QueryType::list(r);
      unify(bool_t, r, n.args[0]->loc);
      return bool_t;
    }
    if (n.head == "not") {
      arity(n, 1, e);
      unify(bool_t, infer(*n.args[0]), n.args[0]->loc);
      return bool_t;
    }
    if (n.head == "fst" || n.head == "snd") {
      arity(n, 1, e);
      auto a = fresh();
      auto b = fresh();
      unify(QueryType::tuple({a, b}), infer(*n.args[0]), n.args[0]->loc);
      return n.head == "fst" ? a : b;
    }
    if (n.head == "length") {
      arity(n, 1, e);
      unify(QueryType::list(fresh()), infer(*n.args[0]), n.args[0]->loc);
      return QueryType::primitive(PrimitiveType::Int);
    }
    unknown(n.head, e.loc, ErrorKind::UnknownMorphism);
  }

  const SchemaCategory& schema_;
  const std::map<std::string, QueryType>& sources_;
  TypedQuery& out_;
  std::vector<std::optional<QueryType>> subst_;
  std::vector<std::pair<std::string, QueryType>> scope_;
  std::vector<std::pair<std::string, QueryType>> lets_;
  std::vector<Deferred> deferred_;
  std::optional<QueryType> acc_type_;
};

}  // namespace

TypedQuery typecheck(const QueryPtr& ast, const SchemaCategory& schema,
                     const std::map<std::string, QueryType>& sources) {
  TypedQuery out;
  out.ast = ast;
  Checker(schema, sources, out).run(*ast);
  return out;
}

}  // namespace multicat
