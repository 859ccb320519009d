#include "generators.hpp"

#include <functional>
#include <map>
#include <stdexcept>

#include "multicat/typecheck.hpp"

#ifndef MULTICAT_DATA_DIR
#define MULTICAT_DATA_DIR "data"
#endif

namespace multicat::testing {

std::filesystem::path data_dir() { return MULTICAT_DATA_DIR; }

const InstanceStore& fixture(const std::string& name) {
  static std::map<std::string, InstanceStore> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, InstanceStore::load(data_dir() / name)).first;
  return it->second;
}

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  if (v.empty()) throw std::logic_error("pick from empty vector");
  return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(v.size()) - 1))];
}

}  // namespace

// ---------------------------------------------------------------------------
// Graph terms

GraphTerm random_graph(Rng& rng, int size, int ids) {
  if (size <= 1) {
    if (coin(rng, 0.1)) return GraphTerm::empty();
    return GraphTerm::vertex("v" + std::to_string(uniform(rng, 0, ids - 1)));
  }
  const int left = uniform(rng, 1, size - 1);
  auto l = random_graph(rng, left, ids);
  auto r = random_graph(rng, size - left, ids);
  return coin(rng) ? GraphTerm::overlay(std::move(l), std::move(r)) : GraphTerm::connect(std::move(l), std::move(r));
}

GraphSemantics naive_semantics(const GraphTerm& g) {
  GraphSemantics out;
  const auto& n = g.node();
  if (const auto* v = std::get_if<GraphTerm::Vertex>(&n)) {
    out.vertices.insert(v->id);
  } else if (const auto* o = std::get_if<GraphTerm::Overlay>(&n)) {
    auto l = naive_semantics(o->left);
    auto r = naive_semantics(o->right);
    out.vertices = l.vertices;
    out.vertices.insert(r.vertices.begin(), r.vertices.end());
    out.edges = l.edges;
    out.edges.insert(r.edges.begin(), r.edges.end());
  } else if (const auto* c = std::get_if<GraphTerm::Connect>(&n)) {
    auto l = naive_semantics(c->left);
    auto r = naive_semantics(c->right);
    out.vertices = l.vertices;
    out.vertices.insert(r.vertices.begin(), r.vertices.end());
    out.edges = l.edges;
    out.edges.insert(r.edges.begin(), r.edges.end());
    for (const auto& a : l.vertices)
      for (const auto& b : r.vertices) out.edges.emplace(a, b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Untyped ASTs

namespace {

const std::vector<std::string> kNames = {"a", "b", "x", "xs", "acc", "foo", "y_1", "customerName", "elem", "map", "t2"};
const std::vector<BinaryOp> kOps = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div,
                                    BinaryOp::Gt,  BinaryOp::Lt,  BinaryOp::Ge,  BinaryOp::Le,
                                    BinaryOp::Eq,  BinaryOp::Ne,  BinaryOp::And, BinaryOp::Or};

std::string random_string(Rng& rng) {
  static const std::string alphabet = "abcXYZ 019_-\"\\\n\t!?";
  std::string s;
  for (int i = uniform(rng, 0, 6); i > 0; --i) s += alphabet[static_cast<std::size_t>(uniform(rng, 0, 18))];
  return s;
}

}  // namespace

ExprPtr random_expr(Rng& rng, int depth) {
  const int choice = depth <= 0 ? uniform(rng, 0, 5) : uniform(rng, 0, 12);
  switch (choice) {
    case 0: return make_expr(VarExpr{pick(rng, kNames)});
    case 1: {
      std::int64_t v = uniform(rng, -1000, 1000);
      if (coin(rng, 0.1)) v = coin(rng) ? INT64_MAX : INT64_MIN + 1;
      return make_expr(IntLit{v});
    }
    case 2: return make_expr(DoubleLit{uniform(rng, -4000, 4000) / 8.0});
    case 3: return make_expr(StringLit{random_string(rng)});
    case 4: return make_expr(BoolLit{coin(rng)});
    case 5: return make_expr(NilExpr{});
    case 6:
      return make_expr(IfExpr{random_expr(rng, depth - 1), random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
    case 7: {
      AppExpr app{pick(rng, kNames), {}};
      for (int i = uniform(rng, 1, 3); i > 0; --i) app.args.push_back(random_expr(rng, depth - 1));
      return make_expr(std::move(app));
    }
    case 8: {
      TupleExpr t;
      for (int i = uniform(rng, 2, 3); i > 0; --i) t.items.push_back(random_expr(rng, depth - 1));
      return make_expr(std::move(t));
    }
    case 9:
    case 10:
      return make_expr(BinExpr{pick(rng, kOps), random_expr(rng, depth - 1), random_expr(rng, depth - 1)});
    case 11:
      return make_expr(ConsExpr{random_expr(rng, depth - 1), coin(rng) ? random_expr(rng, depth - 1) : nullptr});
    default: return make_expr(LamExpr{pick(rng, kNames), random_expr(rng, depth - 1)});
  }
}

namespace {

QueryPtr random_block(Rng& rng) {
  Block b;
  b.lambda.params.push_back(pick(rng, kNames));
  if (coin(rng)) {
    std::string second;
    do second = pick(rng, kNames);
    while (second == b.lambda.params.front());
    b.lambda.params.push_back(second);
  }
  b.lambda.body = random_expr(rng, uniform(rng, 0, 4));
  b.source = pick(rng, kNames);
  const std::vector<OutputModel> models = {OutputModel::Graph, OutputModel::AlgebraicGraph, OutputModel::Relational,
                                           OutputModel::Xml};
  for (int i = uniform(rng, 1, 3); i > 0; --i) b.models.push_back(pick(rng, models));
  return std::make_shared<const Query>(Query{std::move(b), {}});
}

}  // namespace

QueryPtr random_ast(Rng& rng) {
  if (coin(rng, 0.7)) return random_block(rng);
  Let let{pick(rng, kNames), random_ast(rng), random_ast(rng)};
  return std::make_shared<const Query>(Query{std::move(let), {}});
}

// ---------------------------------------------------------------------------
// Well-typed queries

namespace {

using T = QueryType;

struct Term {
  ExprPtr expr;
  QueryType type;
  /// Attribute morphism at the head, used to draw literals from the data.
  std::string attribute;
};

ExprPtr var(const std::string& name) { return make_expr(VarExpr{name}); }
ExprPtr app(const std::string& head, std::vector<ExprPtr> args) { return make_expr(AppExpr{head, std::move(args)}); }
ExprPtr bin(BinaryOp op, ExprPtr l, ExprPtr r) { return make_expr(BinExpr{op, std::move(l), std::move(r)}); }

ExprPtr literal(const Value& v) {
  if (v.is_int()) return make_expr(IntLit{v.as_int()});
  if (v.is_double()) return make_expr(DoubleLit{v.as_double()});
  if (v.is_bool()) return make_expr(BoolLit{v.as_bool()});
  if (v.is_string()) return make_expr(StringLit{v.as_string()});
  throw std::logic_error("not a literal value");
}

class QueryGen {
 public:
  QueryGen(Rng& rng, const InstanceStore& store) : rng_(rng), store_(store) {
    for (const auto& c : store.collections()) collections_.push_back(c.name);
  }

  QueryPtr query(int lets) {
    if (lets == 0) return block_query();
    const std::string name = "t" + std::to_string(++let_counter_);
    auto bound = block_query();
    const auto elem = last_elem_;
    bindings_.push_back({name, elem});
    auto body = query(lets - 1);
    return std::make_shared<const Query>(Query{Let{name, bound, body}, {}});
  }

 private:
  struct Binding {
    std::string name;
    QueryType elem;
  };

  // Element types of list-valued names visible in expressions.
  std::vector<std::pair<std::string, QueryType>> list_names() const {
    std::vector<std::pair<std::string, QueryType>> out;
    for (const auto& c : store_.collections()) out.push_back({c.name, T::entity_of(c.object)});
    for (const auto& b : bindings_) out.push_back({b.name, b.elem});
    return out;
  }

  QueryType prim_of(const std::string& object) const {
    const auto* o = store_.schema().find_object(object);
    if (o->kind == ObjectKind::Primitive) return T::primitive(*o->primitive);
    return T::entity_of(object);
  }

  /// Terms reachable from the variables in scope through at most two
  /// morphism steps.
  std::vector<Term> reachable() {
    std::vector<Term> out;
    std::function<void(const Term&, int)> walk = [&](const Term& t, int steps) {
      out.push_back(t);
      if (t.type.kind == T::Kind::Tuple && t.type.args.size() == 2) {
        walk({app("fst", {t.expr}), t.type.args[0], ""}, steps);
        walk({app("snd", {t.expr}), t.type.args[1], ""}, steps);
      }
      if (t.type.kind != T::Kind::Entity || steps == 0) return;
      for (const auto& m : store_.schema().morphisms()) {
        if (m.identity || m.domain != t.type.entity) continue;
        auto cod = prim_of(m.codomain);
        std::vector<ExprPtr> args{t.expr};
        if (cod.kind == T::Kind::Entity && coin(rng_, 0.3))
          if (const auto* c = store_.collection_for(m.codomain)) args.push_back(var(c->name));
        Term next{app(m.id, std::move(args)), m.cardinality == Cardinality::Many ? T::list(cod) : cod,
                  cod.kind == T::Kind::Prim ? m.id : ""};
        if (next.type.kind == T::Kind::List) {
          out.push_back(next);
        } else {
          walk(next, steps - 1);
        }
      }
    };
    for (const auto& [name, type] : scope_) walk({var(name), type, ""}, 2);
    return out;
  }

  std::vector<Term> of_type(const std::vector<Term>& terms, const QueryType& t) {
    std::vector<Term> out;
    for (const auto& x : terms)
      if (x.type == t) out.push_back(x);
    return out;
  }

  Value sample(const std::string& attribute) {
    const auto* m = store_.schema().find_morphism(attribute);
    const auto* c = store_.collection_for(m->domain);
    if (!c || c->elements.empty()) return Value();
    auto v = store_.apply(attribute, pick(rng_, c->elements));
    if (v.is_list()) {
      if (v.as_list().empty()) return Value();
      v = Value(v.as_list().front());
    }
    return v;
  }

  ExprPtr random_literal(PrimitiveType p) {
    switch (p) {
      case PrimitiveType::Int: return make_expr(IntLit{uniform(rng_, -5, 10000)});
      case PrimitiveType::Double: return make_expr(DoubleLit{uniform(rng_, -40, 8000) / 4.0});
      case PrimitiveType::Bool: return make_expr(BoolLit{coin(rng_)});
      case PrimitiveType::String: return make_expr(StringLit{coin(rng_) ? "USA" : "nothing"});
    }
    return make_expr(IntLit{0});
  }

  /// Literal of type `p`, drawn from the values of `attribute` when known.
  ExprPtr literal_for(PrimitiveType p, const std::string& attribute) {
    if (!attribute.empty() && coin(rng_, 0.8)) {
      auto v = sample(attribute);
      if (v.is_int() && p == PrimitiveType::Int) return literal(v);
      if (v.is_double() && p == PrimitiveType::Double) return literal(v);
      if (v.is_string() && p == PrimitiveType::String) return literal(v);
      if (v.is_bool() && p == PrimitiveType::Bool) return literal(v);
    }
    return random_literal(p);
  }

  // Numbers -----------------------------------------------------------------

  ExprPtr number(PrimitiveType p, int depth) {
    auto terms = reachable();
    auto direct = of_type(terms, T::primitive(p));
    const int choice = uniform(rng_, 0, depth > 0 ? 4 : 1);
    if (choice <= 1 && !direct.empty()) return pick(rng_, direct).expr;
    if (choice == 2 && p == PrimitiveType::Int) {
      auto lists = list_exprs(terms);
      if (!lists.empty()) return app("length", {pick(rng_, lists).expr});
    }
    if (choice >= 2 && depth > 0) {
      const auto op = pick(rng_, std::vector<BinaryOp>{BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div});
      auto lhs = number(p, depth - 1);
      ExprPtr rhs;
      if (op == BinaryOp::Div || coin(rng_)) {
        std::int64_t k = uniform(rng_, 1, 9);
        rhs = p == PrimitiveType::Int ? make_expr(IntLit{coin(rng_, 0.2) ? -k : k})
                                      : make_expr(DoubleLit{static_cast<double>(k) / 2.0});
      } else {
        rhs = number(p, depth - 1);
      }
      return bin(op, lhs, rhs);
    }
    if (!direct.empty()) return pick(rng_, direct).expr;
    return random_literal(p);
  }

  // Lists -------------------------------------------------------------------

  std::vector<Term> list_exprs(const std::vector<Term>& terms) {
    std::vector<Term> out;
    for (const auto& t : terms)
      if (t.type.kind == T::Kind::List) out.push_back(t);
    for (const auto& [name, elem] : list_names()) out.push_back({var(name), T::list(elem), ""});
    return out;
  }

  // Predicates ----------------------------------------------------------------

  ExprPtr predicate(int depth) {
    auto terms = reachable();
    for (int attempt = 0; attempt < 20; ++attempt) {
      const int choice = uniform(rng_, 0, depth > 0 ? 9 : 4);
      switch (choice) {
        case 0:
        case 1: {  // numeric comparison against the data
          std::vector<Term> nums;
          for (const auto& t : terms)
            if (t.type.is_numeric()) nums.push_back(t);
          if (nums.empty()) break;
          const auto& t = pick(rng_, nums);
          const auto op = pick(rng_, std::vector<BinaryOp>{BinaryOp::Gt, BinaryOp::Lt, BinaryOp::Ge, BinaryOp::Le,
                                                            BinaryOp::Eq, BinaryOp::Ne});
          auto rhs = coin(rng_, 0.8) ? literal_for(t.type.prim, t.attribute) : number(PrimitiveType::Int, 1);
          return bin(op, coin(rng_, 0.3) ? number(t.type.prim, 1) : t.expr, rhs);
        }
        case 2: {  // string equality
          auto strs = of_type(terms, T::primitive(PrimitiveType::String));
          if (strs.empty()) break;
          const auto& t = pick(rng_, strs);
          return bin(coin(rng_, 0.7) ? BinaryOp::Eq : BinaryOp::Ne, t.expr, literal_for(PrimitiveType::String, t.attribute));
        }
        case 3: {  // boolean attribute
          auto bools = of_type(terms, T::primitive(PrimitiveType::Bool));
          if (bools.empty()) break;
          auto e = pick(rng_, bools).expr;
          return coin(rng_) ? app("not", {e}) : e;
        }
        case 4: {  // entity equality
          std::vector<Term> ents;
          for (const auto& t : terms)
            if (t.type.kind == T::Kind::Entity) ents.push_back(t);
          if (ents.empty()) break;
          const auto& a = pick(rng_, ents);
          auto same = of_type(ents, a.type);
          return bin(coin(rng_, 0.7) ? BinaryOp::Eq : BinaryOp::Ne, a.expr, pick(rng_, same).expr);
        }
        case 5: {  // elem over a list
          auto lists = list_exprs(terms);
          if (lists.empty()) break;
          const auto& l = pick(rng_, lists);
          const auto& elem = l.type.elem();
          if (elem.kind == T::Kind::Entity) {
            // elem <value> (map <attribute> list) or elem <entity> list
            std::vector<const Morphism*> attrs;
            for (const auto* m : store_.schema().attributes_of(elem.entity))
              if (m->cardinality == Cardinality::One) attrs.push_back(m);
            if (!attrs.empty() && coin(rng_, 0.6)) {
              const auto* m = pick(rng_, attrs);
              const auto p = *store_.schema().find_object(m->codomain)->primitive;
              ExprPtr fn = coin(rng_, 0.7) ? var(m->id) : lambda_over(elem, [&](const ExprPtr& y) {
                return app(m->id, {y});
              });
              return app("elem", {literal_for(p, m->id), app("map", {fn, l.expr})});
            }
            auto cands = of_type(terms, elem);
            if (cands.empty()) break;
            return app("elem", {pick(rng_, cands).expr, l.expr});
          }
          if (elem.kind == T::Kind::Prim) {
            auto cands = of_type(terms, elem);
            ExprPtr needle = !cands.empty() && coin(rng_, 0.4) ? pick(rng_, cands).expr : nullptr;
            if (!needle) {
              std::string attr;
              if (const auto* a = std::get_if<AppExpr>(&l.expr->node)) attr = a->head;
              if (!store_.schema().find_morphism(attr)) attr.clear();
              needle = literal_for(elem.prim, attr);
            }
            return app("elem", {needle, l.expr});
          }
          break;
        }
        case 6:
        case 7: {  // any / all with a nested lambda
          auto lists = list_exprs(terms);
          std::vector<Term> ent_lists;
          for (const auto& l : lists)
            if (l.type.elem().kind == T::Kind::Entity) ent_lists.push_back(l);
          if (ent_lists.empty() || depth <= 0) break;
          const auto& l = pick(rng_, ent_lists);
          auto fn = lambda_over(l.type.elem(), [&](const ExprPtr&) { return predicate(depth - 1); });
          return app(choice == 6 ? "any" : "all", {fn, l.expr});
        }
        case 8:
          return bin(coin(rng_) ? BinaryOp::And : BinaryOp::Or, predicate(depth - 1), predicate(depth - 1));
        default: return app("not", {predicate(depth - 1)});
      }
    }
    return make_expr(BoolLit{coin(rng_)});
  }

  /// `(\yN -> body)` with yN of type `param` in scope while building body.
  ExprPtr lambda_over(const QueryType& param, const std::function<ExprPtr(const ExprPtr&)>& body) {
    const std::string name = "y" + std::to_string(++lambda_counter_);
    scope_.push_back({name, param});
    auto b = body(var(name));
    scope_.pop_back();
    return make_expr(LamExpr{name, b});
  }

  // Result elements ---------------------------------------------------------------

  Term element() {
    auto terms = reachable();
    std::vector<Term> scalars;
    for (const auto& t : terms)
      if (t.type.kind != T::Kind::List && t.type.kind != T::Kind::Tuple) scalars.push_back(t);
    const int choice = uniform(rng_, 0, 5);
    if (choice <= 1 || scalars.size() < 2) return terms.front();
    if (choice == 2) return pick(rng_, scalars);
    if (choice == 3) {
      auto p = coin(rng_) ? PrimitiveType::Int : PrimitiveType::Double;
      return {number(p, 2), T::primitive(p), ""};
    }
    std::vector<ExprPtr> items;
    std::vector<QueryType> types;
    for (int i = uniform(rng_, 2, 3); i > 0; --i) {
      const auto& t = pick(rng_, scalars);
      items.push_back(t.expr);
      types.push_back(t.type);
    }
    return {make_expr(TupleExpr{items}), T::tuple(types), ""};
  }

  /// Another expression with exactly the type `t`.
  ExprPtr same_type(const QueryType& t, const Term& fallback) {
    if (t.kind == T::Kind::Prim && t.is_numeric() && coin(rng_)) return number(t.prim, 2);
    auto cands = of_type(reachable(), t);
    if (t.kind == T::Kind::Tuple && (cands.empty() || coin(rng_))) {
      try {
        std::vector<ExprPtr> items;
        for (const auto& a : t.args) items.push_back(same_type(a, {nullptr, a, ""}));
        return make_expr(TupleExpr{items});
      } catch (const std::logic_error&) {
      }
    }
    if (!cands.empty()) return pick(rng_, cands).expr;
    if (fallback.expr) return fallback.expr;
    if (t.kind == T::Kind::Prim) return random_literal(t.prim);
    throw std::logic_error("no term of type " + t.str());
  }

  // Blocks ------------------------------------------------------------------

  QueryPtr block_query() {
    auto sources = list_names();
    const auto& [source, elem] = pick(rng_, sources);
    Block b;
    b.source = source;
    scope_.push_back({"x", elem});
    const int form = uniform(rng_, 0, 5);
    const auto out = form == 0 ? Term{var("x"), elem, ""} : element();
    ExprPtr body;
    switch (form) {
      case 0:  // filter
      case 1:  // filter-map
        b.lambda.params = {"x"};
        body = make_expr(IfExpr{predicate(2), make_expr(ConsExpr{out.expr, nullptr}), make_expr(NilExpr{})});
        break;
      case 2:  // map
        b.lambda.params = {"x"};
        body = make_expr(ConsExpr{out.expr, nullptr});
        break;
      case 3: {  // nested accumulator positions
        b.lambda.params = {"x"};
        auto inner = make_expr(IfExpr{predicate(1), make_expr(ConsExpr{same_type(out.type, out), nullptr}),
                                      make_expr(NilExpr{})});
        body = make_expr(IfExpr{predicate(1), make_expr(ConsExpr{out.expr, nullptr}), inner});
        break;
      }
      case 4: {  // explicit fold
        b.lambda.params = {"x", "xs"};
        body = make_expr(IfExpr{predicate(2), make_expr(ConsExpr{out.expr, var("xs")}), var("xs")});
        break;
      }
      default: {  // explicit fold emitting twice
        b.lambda.params = {"x", "xs"};
        auto rest = make_expr(IfExpr{predicate(1), make_expr(ConsExpr{same_type(out.type, out), var("xs")}), var("xs")});
        body = make_expr(ConsExpr{out.expr, rest});
        break;
      }
    }
    scope_.pop_back();
    b.lambda.body = body;
    const std::vector<OutputModel> models = {OutputModel::Graph, OutputModel::AlgebraicGraph, OutputModel::Relational,
                                             OutputModel::Xml};
    b.models = {pick(rng_, models)};
    last_elem_ = out.type;
    return std::make_shared<const Query>(Query{std::move(b), {}});
  }

  Rng& rng_;
  const InstanceStore& store_;
  std::vector<std::string> collections_;
  std::vector<Binding> bindings_;
  std::vector<std::pair<std::string, QueryType>> scope_;
  QueryType last_elem_;
  int let_counter_ = 0;
  int lambda_counter_ = 0;
};

}  // namespace

QueryPtr random_typed_query(Rng& rng, const InstanceStore& store, int lets) {
  QueryGen gen(rng, store);
  return gen.query(lets);
}

// ---------------------------------------------------------------------------
// Counterexamples

SchemaCategory mutate_schema(Rng& rng, const SchemaCategory& schema, std::string& description) {
  std::vector<const Morphism*> plain;
  for (const auto& m : schema.morphisms())
    if (!m.identity) plain.push_back(&m);
  std::vector<std::pair<std::string, std::string>> composed;
  for (const auto& [key, result] : schema.composites()) {
    const auto* g = schema.find_morphism(key.first);
    const auto* f = schema.find_morphism(key.second);
    if (g && f && !g->identity && !f->identity) composed.push_back(key);
  }
  auto other_than = [&](const std::string& id) {
    std::string r;
    do r = pick(rng, schema.morphisms()).id;
    while (r == id);
    return r;
  };

  const int kind = uniform(rng, 0, composed.empty() ? 1 : 2);
  if (kind == 0) {
    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto& [key, result] : schema.composites()) keys.push_back(key);
    const auto key = pick(rng, keys);
    description = "dropped composite " + key.first + " . " + key.second;
    return schema.without_composite(key.first, key.second);
  }
  if (kind == 1) {
    const auto* f = pick(rng, plain);
    const bool left = coin(rng);
    const auto outer = left ? identity_id(f->codomain) : f->id;
    const auto inner = left ? f->id : identity_id(f->domain);
    const auto result = other_than(f->id);
    description = "broken identity " + outer + " . " + inner + " = " + result;
    return schema.with_composite(outer, inner, result);
  }
  const auto key = pick(rng, composed);
  const auto result = other_than(*schema.composite(key.first, key.second));
  description = "misrouted composite " + key.first + " . " + key.second + " = " + result;
  return schema.with_composite(key.first, key.second, result);
}

namespace {

Value wrong_type(const SchemaCategory& schema, const Morphism& m) {
  if (m.cardinality == Cardinality::Many) return Value(std::int64_t{0});
  const auto* o = schema.find_object(m.codomain);
  if (o->kind == ObjectKind::Entity) return Value(std::int64_t{7});
  switch (*o->primitive) {
    case PrimitiveType::String: return Value(std::int64_t{0});
    case PrimitiveType::Int:
    case PrimitiveType::Double:
    case PrimitiveType::Bool: return Value("corrupt");
  }
  return Value();
}

}  // namespace

InstanceStore corrupt_store(Rng& rng, const InstanceStore& store, std::string& description) {
  const auto& schema = store.schema();
  std::vector<const Collection*> multi;
  for (const auto& c : store.collections())
    if (c.elements.size() >= 2) multi.push_back(&c);
  std::vector<const Morphism*> composites;
  for (const auto& [key, result] : schema.composites()) {
    const auto* g = schema.find_morphism(key.first);
    const auto* f = schema.find_morphism(key.second);
    const auto* h = schema.find_morphism(result);
    if (g && f && h && !g->identity && !f->identity && store.collection_for(h->domain)) composites.push_back(h);
  }
  std::vector<std::string> evaluators;
  for (const auto& [id, ev] : store.evaluators())
    if (!ev.table.empty()) evaluators.push_back(id);

  const int kind = uniform(rng, 0, 3);
  if (kind == 0 && !multi.empty()) {
    const auto* c = pick(rng, multi);
    const auto& e = pick(rng, c->elements);
    std::string other;
    do other = pick(rng, c->elements);
    while (other == e);
    description = "identity of " + c->object + " maps " + e + " to " + other;
    return store.with_entry(identity_id(c->object), e, Value::entity(c->object, other));
  }
  if (kind == 1 && !composites.empty()) {
    const auto* h = pick(rng, composites);
    const auto& e = pick(rng, store.collection_for(h->domain)->elements);
    const auto current = store.apply(h->id, e);
    Value replacement;
    if (const auto* cod = store.collection_for(h->codomain); cod && cod->elements.size() >= 2) {
      std::string other;
      do other = pick(rng, cod->elements);
      while (current.is_entity() && other == current.as_entity().id);
      replacement = Value::entity(h->codomain, other);
    } else if (current.is_int()) {
      replacement = Value(current.as_int() + 1);
    } else if (current.is_double()) {
      replacement = Value(current.as_double() + 1);
    } else if (current.is_string()) {
      replacement = Value(current.as_string() + "x");
    } else {
      replacement = Value(!current.as_bool());
    }
    description = "composite " + h->id + "(" + e + ") remapped to " + show(replacement);
    return store.with_entry(h->id, e, replacement);
  }
  const auto& id = pick(rng, evaluators);
  std::vector<std::string> keys;
  for (const auto& [k, v] : store.evaluators().at(id).table) keys.push_back(k);
  const auto& e = pick(rng, keys);
  if (kind == 3) {
    const auto* m = schema.find_morphism(id);
    if (!m->identity) {
      auto v = wrong_type(schema, *m);
      description = id + "(" + e + ") retyped to " + show(v);
      return store.with_entry(id, e, v);
    }
  }
  description = id + "(" + e + ") deleted";
  return store.with_entry(id, e, std::nullopt);
}

}  // namespace multicat::testing
