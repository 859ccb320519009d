#include <doctest.h>

#include <nlohmann/json.hpp>

#include "examples.hpp"
#include "multicat/render.hpp"

using namespace multicat;

namespace {

const InstanceStore& store() { return testing::fixture("ecommerce"); }

QueryOutcome outcome(const std::string& text) { return run_query(store(), text); }

template <class P>
const P& payload(const QueryOutcome& o, OutputModel m) {
  return std::get<P>(o.rendered.at(m).payload);
}

}  // namespace

TEST_SUITE("render") {
  TEST_CASE("example 1 as a table") {
    auto o = outcome(testing::example1());
    const auto& t = payload<Table>(o, OutputModel::Relational);
    CHECK(t.columns == std::vector<std::string>{"customerId", "customerName", "creditLimit"});
    CHECK(t.rows == std::vector<std::vector<std::string>>{{"c1", "Mary", "5000"}, {"c4", "Alice", "8000"}});
    CHECK(to_csv(t) == "customerId,customerName,creditLimit\r\nc1,Mary,5000\r\nc4,Alice,8000\r\n");
  }

  TEST_CASE("example 2 as a table") {
    auto o = outcome(testing::example2());
    const auto& t = payload<Table>(o, OutputModel::Relational);
    CHECK(t.columns == std::vector<std::string>{"col1", "col2"});
    CHECK(t.rows == std::vector<std::vector<std::string>>{{"Mary", "Finland"}, {"Alice", "USA"}});
  }

  TEST_CASE("empty results") {
    auto o = outcome("QUERY (\\x -> if False then cons x else nil) FROM customers TO xml");
    CHECK(payload<Table>(o, OutputModel::Relational).columns ==
          std::vector<std::string>{"customerId", "customerName", "creditLimit"});
    CHECK(payload<Table>(o, OutputModel::Relational).rows.empty());
    CHECK(payload<XmlDoc>(o, OutputModel::Xml).text == "<result/>\n");
    CHECK(payload<GraphView>(o, OutputModel::Graph).vertices.empty());
    CHECK(payload<GraphTermText>(o, OutputModel::AlgebraicGraph).text == "empty");
  }

  TEST_CASE("example 1 as xml") {
    auto o = outcome(testing::example1());
    CHECK(payload<XmlDoc>(o, OutputModel::Xml).text ==
          "<result>\n"
          "  <item>\n    <customerId>c1</customerId>\n    <customerName>Mary</customerName>\n"
          "    <creditLimit>5000</creditLimit>\n  </item>\n"
          "  <item>\n    <customerId>c4</customerId>\n    <customerName>Alice</customerName>\n"
          "    <creditLimit>8000</creditLimit>\n  </item>\n"
          "</result>\n");
  }

  TEST_CASE("tuple xml uses positional children") {
    auto text = payload<XmlDoc>(outcome(testing::example2()), OutputModel::Xml).text;
    CHECK(text.find("<col1>Mary</col1>\n    <col2>Finland</col2>") != std::string::npos);
  }

  TEST_CASE("xml escapes text") {
    auto o = outcome("QUERY (\\x -> cons (customerName x, \"<&>\")) FROM customers TO xml");
    CHECK(payload<XmlDoc>(o, OutputModel::Xml).text.find("&lt;&amp;&gt;") != std::string::npos);
  }

  TEST_CASE("example 1 as a graph") {
    auto o = outcome(testing::example1());
    auto s = payload<GraphView>(o, OutputModel::Graph).semantics();
    CHECK(s.vertices == std::set<std::string>{"c1", "c4"});
    CHECK(s.edges == std::set<std::pair<std::string, std::string>>{{"c1", "c4"}, {"c4", "c1"}});
    CHECK(payload<GraphTermText>(o, OutputModel::AlgebraicGraph).text ==
          "overlay(overlay(vertex c1, vertex c4), overlay(connect(vertex c1, vertex c4), connect(vertex c4, vertex c1)))");
  }

  TEST_CASE("example 2 as a graph") {
    auto o = outcome(testing::example2());
    const auto& g = payload<GraphView>(o, OutputModel::Graph);
    REQUIRE(g.vertices.size() == 2);
    CHECK(g.vertices[0].id == "n1");
    CHECK(g.vertices[0].props == std::vector<std::pair<std::string, std::string>>{{"col1", "Mary"}, {"col2", "Finland"}});
    CHECK(g.edges.empty());
    CHECK(payload<GraphTermText>(o, OutputModel::AlgebraicGraph).text == "overlay(vertex n1, vertex n2)");
  }

  TEST_CASE("single vertex term") {
    auto o = outcome("QUERY (\\x -> if customerName x == \"Mary\" then cons x else nil) FROM customers TO algebraic graph");
    CHECK(payload<GraphTermText>(o, OutputModel::AlgebraicGraph).text == "vertex c1");
  }

  TEST_CASE("entities of a non-graph collection") {
    auto o = outcome("QUERY (\\x -> cons x) FROM locations TO graph");
    const auto& g = payload<GraphView>(o, OutputModel::Graph);
    REQUIRE(g.vertices.size() == 2);
    CHECK(g.vertices[0].id == "l1");
    CHECK(g.edges.empty());
  }

  TEST_CASE("every rendering holds the same entities") {
    auto o = outcome(testing::example1());
    std::multiset<std::string> table, graph, xml;
    for (const auto& row : payload<Table>(o, OutputModel::Relational).rows) table.insert(row[0]);
    for (const auto& v : payload<GraphView>(o, OutputModel::Graph).vertices) graph.insert(v.id);
    const auto& text = payload<XmlDoc>(o, OutputModel::Xml).text;
    for (auto pos = text.find("<customerId>"); pos != std::string::npos; pos = text.find("<customerId>", pos + 1))
      xml.insert(text.substr(pos + 12, 2));
    CHECK(table == std::multiset<std::string>{"c1", "c4"});
    CHECK(graph == table);
    CHECK(xml == table);
  }

  TEST_CASE("many-valued attributes") {
    const auto& fleet = testing::fixture("fleet");
    auto o = run_query(fleet, "QUERY (\\x -> if driverName x == \"Aino\" then cons x else nil) FROM drivers TO xml");
    const auto& t = std::get<Table>(o.rendered.at(OutputModel::Relational).payload);
    REQUIRE(t.rows.size() == 1);
    const auto& xml = std::get<XmlDoc>(o.rendered.at(OutputModel::Xml).payload).text;
    CHECK(xml.find("<languages>") != xml.rfind("<languages>"));
  }

  TEST_CASE("nested lists are unrenderable") {
    try {
      outcome("QUERY (\\x -> cons (orderProducts x)) FROM orders TO relational");
      FAIL("expected Unrenderable");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Unrenderable);
      CHECK(e.loc().valid());
    }
    CHECK_THROWS_AS(outcome("QUERY (\\x -> cons (orderProducts x)) FROM orders TO xml"), Error);
    CHECK(outcome(testing::example1()).notes.empty());
  }

  TEST_CASE("csv quoting and text layout") {
    Table t{{"a", "b"}, {{"x,y", "say \"hi\""}, {"1", ""}}};
    CHECK(to_csv(t) == "a,b\r\n\"x,y\",\"say \"\"hi\"\"\"\r\n1,\r\n");
    auto text = to_text(t);
    CHECK(text.find(" | ") != std::string::npos);
    CHECK(to_json(t)["rows"].size() == 2);
  }
}
