#include <doctest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "examples.hpp"
#include "multicat/cli.hpp"
#include "multicat/service.hpp"

using namespace multicat;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "multicat");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

const std::string data = testing::data_dir().string();

fs::path scratch(const std::string& tag) {
  auto dir = fs::temp_directory_path() / ("multicat-cli-" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("query as csv") {
    auto r = cli({"query", "--data", data, "-d", "ecommerce", "-q", testing::example1(), "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out == "customerId,customerName,creditLimit\r\nc1,Mary,5000\r\nc4,Alice,8000\r\n");
  }

  TEST_CASE("csv matches the service payload") {
    Service s(DatasetRegistry::load(testing::data_dir()));
    for (const auto& ex : testing::corpus("ecommerce")) {
      auto j = nlohmann::json::parse(
          s.handle("POST", "/datasets/ecommerce/query", nlohmann::json{{"query", ex.query}}.dump()).body);
      if (!j["rendered"].contains("relational")) continue;
      auto r = cli({"query", "--data", data, "-d", "ecommerce", "-q", ex.query, "--format", "csv"});
      CAPTURE(ex.query);
      CHECK(r.out == j["rendered"]["relational"]["csv"].get<std::string>());
    }
  }

  TEST_CASE("default formats follow TO") {
    auto r = cli({"query", "--data", data, "-d", "ecommerce", "-q", testing::example1()});
    CHECK(r.out.rfind("digraph", 0) == 0);
    r = cli({"query", "--data", data, "-d", "ecommerce", "-q", testing::example2()});
    CHECK(r.out == "overlay(vertex n1, vertex n2)\n");
    r = cli({"query", "--data", data, "-d", "ecommerce", "-q", testing::example2(), "--format", "json"});
    CHECK(nlohmann::json::parse(r.out)["term"] == "overlay(vertex n1, vertex n2)");
  }

  TEST_CASE("query file with an error") {
    auto dir = scratch("badquery");
    std::ofstream(dir / "q.mcq") << "QUERY (\\x -> cons x)\nFROM customers\nTO nowhere\n";
    auto r = cli({"query", "--data", data, "-d", "ecommerce", "-f", (dir / "q.mcq").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find((dir / "q.mcq").string() + ":3:4: SyntaxError") == 0);
  }

  TEST_CASE("configuration errors") {
    CHECK(cli({"query", "--data", data, "-d", "nope", "-q", "x"}).code == 2);
    CHECK(cli({"query", "--data", "/nonexistent", "-d", "ecommerce", "-q", "x"}).code == 2);
    CHECK(cli({"query", "--data", data, "-d", "ecommerce"}).code == 2);
    CHECK(cli({"query", "-d", "ecommerce", "-q", "x", "--format", "png"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"--help"}).code == 0);
  }

  TEST_CASE("check") {
    auto r = cli({"check", "--data", data});
    CHECK(r.code == 0);
    CHECK(r.out == "ecommerce: OK\nfleet: OK\n");
    auto empty = scratch("empty");
    r = cli({"check", "--data", empty.string()});
    CHECK(r.code == 0);
    CHECK(r.out == "no datasets\n");
  }

  TEST_CASE("check reports corrupted tables") {
    auto dir = scratch("corrupt");
    fs::copy(testing::data_dir() / "ecommerce", dir / "ecommerce", fs::copy_options::recursive);
    std::ofstream(dir / "ecommerce" / "orderLocation.csv") << "key,value\no1,l2\no2,l2\no3,l2\n";
    auto r = cli({"check", "--data", dir.string()});
    CHECK(r.code == 1);
    CHECK(r.out.find("[composition]") != std::string::npos);
    r = cli({"check", "--data", (dir / "ecommerce").string()});
    CHECK(r.code == 1);
  }

  TEST_CASE("repl") {
    auto r = cli({"repl", "--data", data, "-d", "ecommerce"}, testing::example1() + "\n\n:schema\n:quit\n");
    CHECK(r.code == 0);
    CHECK(r.out.find("Mary") != std::string::npos);
    CHECK(r.out.find("(1 stage, 2 results)") != std::string::npos);
    CHECK(r.out.find("  located: Customer -> Location") != std::string::npos);
    r = cli({"repl", "--data", data, "-d", "ecommerce"}, "QUERY oops\n\n");
    CHECK(r.code == 0);
    CHECK(r.err.find("<repl>:1:7: SyntaxError") == 0);
  }
}
