#include <doctest.h>

#include <nlohmann/json.hpp>

#include "examples.hpp"
#include "multicat/eval.hpp"

using namespace multicat;

namespace {

const InstanceStore& store() { return testing::fixture("ecommerce"); }

TypedQuery check(const std::string& text, const InstanceStore& s = store()) {
  return typecheck(parse_query(text), s.schema(), source_types(s));
}

Value run(const std::string& text) { return execute(compile(check(text)), store()); }

Value customers(std::initializer_list<const char*> ids) {
  std::vector<Value> out;
  for (const auto* id : ids) out.push_back(Value::entity("Customer", id));
  return Value::list(out);
}

/// `expr` evaluated with x bound to the first order.
Value on_first_order(const std::string& expr) {
  auto v = run("QUERY (\\x -> cons (" + expr + ")) FROM orders TO xml");
  return v.as_list().front();
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("example plans") {
    auto p1 = compile(check(testing::example1()));
    REQUIRE(p1.stages.size() == 1);
    CHECK(p1.stages[0].source == "customers");
    CHECK_FALSE(p1.stages[0].binds);
    auto p2 = compile(check(testing::example2()));
    REQUIRE(p2.stages.size() == 2);
    CHECK(p2.stages[0].source == "orders");
    CHECK(p2.stages[0].binds == std::optional<std::string>("t"));
    CHECK(p2.stages[1].source == "customers");
  }

  TEST_CASE("nested lets compile in dependency order") {
    auto p = compile(check("LET a BE QUERY (\\x -> cons x) FROM orders TO xml IN LET b BE QUERY (\\x -> cons x) FROM "
                           "a TO xml IN QUERY (\\x -> cons x) FROM b TO xml"));
    REQUIRE(p.stages.size() == 3);
    CHECK(p.stages[0].source == "orders");
    CHECK(p.stages[1].source == "a");
    CHECK(p.stages[1].source_kind == SourceKind::Binding);
    CHECK(p.stages[2].source == "b");
  }

  TEST_CASE("example results") {
    CHECK(run(testing::example1()) == customers({"c1", "c4"}));
    CHECK(run(testing::example2()) == Value::list({Value::tuple({"Mary", "Finland"}), Value::tuple({"Alice", "USA"})}));
    CHECK(run("QUERY (\\x -> if False then cons x else nil) FROM customers TO xml") == Value::list({}));
  }

  TEST_CASE("lambda normal form") {
    auto typed = check(testing::example1());
    auto l = normalize_lambda(std::get<Block>(typed.ast->node).lambda, typed);
    CHECK(pretty_print(l) == "\\x acc -> if creditLimit x > 3000 then cons x acc else acc");
  }

  TEST_CASE("builtins") {
    CHECK(on_first_order("elem \"Book\" (map productName (orderProducts x))") == Value(true));
    CHECK(on_first_order("any (\\y -> customerName (orderedBy y) == \"John\") orders") == Value(false));
    CHECK(on_first_order("all (\\y -> price y > 1) (orderProducts x)") == Value(true));
    CHECK(on_first_order("length (orderProducts x)") == Value(2));
    CHECK(on_first_order("fst (\"a\", 1)") == Value("a"));
    CHECK(on_first_order("snd (\"a\", 1)") == Value(1));
    CHECK(on_first_order("not (1 > 2)") == Value(true));
  }

  TEST_CASE("arithmetic") {
    CHECK(on_first_order("7 / 2") == Value(3));
    CHECK(on_first_order("(-7) / 2") == Value(-3));
    CHECK(on_first_order("7 / 2.0") == Value(3.5));
    CHECK(on_first_order("1 + 2 * 3") == Value(7));
    CHECK(on_first_order("9223372036854775807 + 1") == Value(std::numeric_limits<std::int64_t>::min()));
    CHECK(on_first_order("2 > 1.5") == Value(true));
    CHECK(on_first_order("1 == 1.0") == Value(true));
  }

  TEST_CASE("division by zero") {
    try {
      run("QUERY (\\x -> cons (creditLimit x / (creditLimit x - creditLimit x))) FROM customers TO xml");
      FAIL("expected RuntimeError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::RuntimeError);
    }
  }

  TEST_CASE("folds keep collection order") {
    CHECK(run("QUERY (\\x xs -> cons x xs) FROM customers TO xml") == customers({"c1", "c2", "c3", "c4"}));
    CHECK(run("QUERY (\\x xs -> if length xs == 0 then cons x xs else xs) FROM customers TO xml") ==
          customers({"c4"}));
  }

  TEST_CASE("reference interpreter agrees on examples") {
    for (const auto* name : {"ecommerce", "fleet"}) {
      const auto& s = testing::fixture(name);
      for (const auto& ex : testing::corpus(name)) {
        CAPTURE(ex.query);
        auto typed = check(ex.query, s);
        CHECK(execute(compile(typed), s) == reference_interpret(typed, s));
      }
    }
  }

  TEST_CASE("reference interpreter agrees on random queries") {
    testing::Rng rng(31);
    for (int i = 0; i < 60; ++i) {
      const auto& s = testing::fixture(i % 2 ? "fleet" : "ecommerce");
      auto ast = testing::random_typed_query(rng, s, i % 3);
      CAPTURE(pretty_print(*ast));
      auto typed = typecheck(ast, s.schema(), source_types(s));
      CHECK(execute(compile(typed), s) == reference_interpret(typed, s));
    }
  }

  TEST_CASE("large folds do not overflow the stack") {
    std::vector<std::string> ids;
    Collection c{"rows", "Customer", DataModel::Relational, {}, {}, {}};
    std::map<std::string, MorphismEvaluator> evals;
    for (int i = 0; i < 200000; ++i) {
      auto id = "r" + std::to_string(i);
      c.elements.push_back(id);
      c.members.insert(id);
      evals["creditLimit"].table[id] = Value(i);
      evals["customerName"].table[id] = Value("n");
      evals["id_Customer"].table[id] = Value::entity("Customer", id);
    }
    evals["creditLimit"].morphism = "creditLimit";
    evals["customerName"].morphism = "customerName";
    evals["id_Customer"].morphism = "id_Customer";
    InstanceStore big("big", store().schema(), {c}, evals);
    auto typed = typecheck(parse_query("QUERY (\\x -> if creditLimit x > 100 then cons x else nil) FROM rows TO xml"),
                           big.schema(), source_types(big));
    auto v = execute(compile(typed), big);
    CHECK(v.as_list().size() == 199899);
  }

  TEST_CASE("plan json") {
    auto j = plan_to_json(compile(check(testing::example2())));
    REQUIRE(j["stages"].size() == 2);
    CHECK(j["stages"][0]["binds"] == "t");
    CHECK(j["stages"][0]["sourceKind"] == "collection");
    CHECK(j["stages"][1]["lambda"].get<std::string>().rfind("\\x ->", 0) == 0);
    CHECK(j["stages"][1]["combinerAst"]["params"].size() == 2);
  }
}
