#include <doctest.h>

#include "generators.hpp"
#include "multicat/graph.hpp"

using namespace multicat;

namespace {

GraphTerm v(const std::string& id) { return GraphTerm::vertex(id); }
GraphTerm ov(GraphTerm a, GraphTerm b) { return GraphTerm::overlay(std::move(a), std::move(b)); }
GraphTerm cn(GraphTerm a, GraphTerm b) { return GraphTerm::connect(std::move(a), std::move(b)); }

}  // namespace

TEST_SUITE("graph") {
  TEST_CASE("foldg base case and vertex count") {
    auto count = [](const GraphTerm& g) {
      return foldg<int>(
          0, [](const std::string&) { return 1; }, [](int a, int b) { return a + b; },
          [](int a, int b) { return a + b; }, g);
    };
    CHECK(count(GraphTerm::empty()) == 0);
    CHECK(count(cn(v("a"), v("b"))) == 2);
  }

  TEST_CASE("semantics") {
    CHECK(semantics(GraphTerm::empty()) == GraphSemantics{});
    auto s = semantics(ov(v("a"), v("a")));
    CHECK(s.vertices == std::set<std::string>{"a"});
    CHECK(s.edges.empty());
    s = semantics(cn(v("a"), v("b")));
    CHECK(s.edges == std::set<std::pair<std::string, std::string>>{{"a", "b"}});
    s = semantics(cn(v("a"), ov(v("b"), v("c"))));
    CHECK(s.vertices == std::set<std::string>{"a", "b", "c"});
    CHECK(s.edges == std::set<std::pair<std::string, std::string>>{{"a", "b"}, {"a", "c"}});
  }

  TEST_CASE("graph_eq") {
    auto x = v("x"), y = v("y"), z = v("z");
    CHECK(graph_eq(ov(x, y), ov(y, x)));
    CHECK(graph_eq(cn(x, cn(y, z)), cn(cn(x, y), z)));
    CHECK_FALSE(graph_eq(cn(v("a"), v("b")), ov(v("a"), v("b"))));
  }

  TEST_CASE("induced subgraph") {
    const auto& customers = testing::fixture("ecommerce").find_collection("customers")->graph;
    CHECK(semantics(induced_subgraph(customers, {})) == GraphSemantics{});
    CHECK(graph_eq(induced_subgraph(customers, semantics(customers).vertices), customers));
    auto s = semantics(induced_subgraph(customers, {"c1", "c4"}));
    CHECK(s.vertices == std::set<std::string>{"c1", "c4"});
    CHECK(s.edges == std::set<std::pair<std::string, std::string>>{{"c1", "c4"}, {"c4", "c1"}});
  }

  TEST_CASE("laws on random terms") {
    testing::Rng rng(3);
    for (int i = 0; i < 200; ++i) {
      auto x = testing::random_graph(rng, 1 + i % 17);
      auto y = testing::random_graph(rng, 1 + i % 13);
      auto z = testing::random_graph(rng, 1 + i % 7);
      CHECK(graph_eq(ov(x, y), ov(y, x)));
      CHECK(graph_eq(ov(x, ov(y, z)), ov(ov(x, y), z)));
      CHECK(graph_eq(cn(x, cn(y, z)), cn(cn(x, y), z)));
      CHECK(graph_eq(cn(x, ov(y, z)), ov(cn(x, y), cn(x, z))));
      CHECK(graph_eq(cn(ov(x, y), z), ov(cn(x, z), cn(y, z))));
      CHECK(graph_eq(ov(x, GraphTerm::empty()), x));
      CHECK(graph_eq(cn(x, cn(y, z)), ov(ov(cn(x, y), cn(x, z)), cn(y, z))));
      CHECK(semantics(x) == testing::naive_semantics(x));
    }
  }

  TEST_CASE("canonical term and text syntax") {
    CHECK(to_term_text(canonical_term({})) == "empty");
    CHECK(to_term_text(canonical_term(semantics(v("c1")))) == "vertex c1");
    auto g = cn(v("c1"), v("c4"));
    auto text = to_term_text(canonical_term(semantics(ov(g, cn(v("c4"), v("c1"))))));
    CHECK(text == "overlay(overlay(vertex c1, vertex c4), overlay(connect(vertex c1, vertex c4), connect(vertex c4, vertex c1)))");
    CHECK(graph_eq(parse_term_text(text), ov(g, cn(v("c4"), v("c1")))));
    CHECK_THROWS_AS(parse_term_text("overlay(vertex a"), Error);
  }

  TEST_CASE("random terms survive the text syntax") {
    testing::Rng rng(5);
    for (int i = 0; i < 100; ++i) {
      auto g = testing::random_graph(rng, 1 + i % 30);
      CHECK(graph_eq(parse_term_text(to_term_text(g)), g));
    }
  }

  TEST_CASE("deep terms do not overflow") {
    std::vector<GraphTerm> vs;
    for (int i = 0; i < 100000; ++i) vs.push_back(v("v" + std::to_string(i)));
    CHECK(vertex_count(GraphTerm::overlays(std::move(vs))) == 100000);
  }

  TEST_CASE("dot output") {
    auto dot = to_dot(semantics(cn(v("a"), v("b"))));
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("\"a\" -> \"b\"") != std::string::npos);
  }
}
