#include "multicat/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "multicat/engine.hpp"
#include "multicat/service.hpp"

namespace multicat {

namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kDiagnostic = 1;
constexpr int kConfig = 2;

void report(std::ostream& err, const std::string& origin, const Diagnostic& d) {
  err << origin << ":" << d.loc.line << ":" << d.loc.column << ": " << to_string(d.kind) << ": " << d.message;
  err << "\n";
}

std::string default_format(OutputModel m) {
  switch (m) {
    case OutputModel::Relational: return "table";
    case OutputModel::Xml: return "xml";
    case OutputModel::Graph: return "dot";
    case OutputModel::AlgebraicGraph: return "term";
  }
  return "table";
}

const RenderedResult& need(const QueryOutcome& o, OutputModel m) {
  auto it = o.rendered.find(m);
  if (it != o.rendered.end()) return it->second;
  for (const auto& n : o.notes)
    if (n.message.find(std::string(to_string(m))) != std::string::npos) throw Error(n.kind, n.message, n.loc);
  throw Error(ErrorKind::Unrenderable, "cannot render as " + std::string(to_string(m)));
}

/// Text for `format`; throws Error(Unrenderable) when the result has no
/// such rendering.
std::string format_outcome(const QueryOutcome& o, const std::string& format) {
  if (format == "table") return to_text(std::get<Table>(need(o, OutputModel::Relational).payload));
  if (format == "csv") return to_csv(std::get<Table>(need(o, OutputModel::Relational).payload));
  if (format == "xml") return std::get<XmlDoc>(need(o, OutputModel::Xml).payload).text;
  if (format == "dot") return to_dot(std::get<GraphView>(need(o, OutputModel::Graph).payload));
  if (format == "term") return std::get<GraphTermText>(need(o, OutputModel::AlgebraicGraph).payload).text + "\n";
  // json: the payload of the model selected by TO.
  const auto& r = o.primary();
  nlohmann::json j;
  if (const auto* t = std::get_if<Table>(&r.payload)) j = to_json(*t);
  if (const auto* x = std::get_if<XmlDoc>(&r.payload)) j = {{"xml", x->text}};
  if (const auto* g = std::get_if<GraphView>(&r.payload)) j = to_json(*g);
  if (const auto* t = std::get_if<GraphTermText>(&r.payload)) j = {{"term", t->text}};
  return j.dump(2) + "\n";
}

struct Loaded {
  std::optional<Dataset> dataset;
  int code = kOk;
};

Loaded load_one(const fs::path& root, const std::string& id, std::ostream& err) {
  const auto dir = root / id;
  try {
    if (!fs::exists(dir / "manifest.json")) throw Error(ErrorKind::UnknownDataset, "no dataset package at " + dir.string());
    return {Dataset{id, dir, InstanceStore::load(dir), load_examples(dir)}, kOk};
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return {std::nullopt, kConfig};
  }
}

int run_query_command(const fs::path& root, const std::string& id, const std::string& text,
                      const std::string& origin, const std::string& format, std::ostream& out, std::ostream& err) {
  auto loaded = load_one(root, id, err);
  if (!loaded.dataset) return loaded.code;
  try {
    auto outcome = run_query(loaded.dataset->store, text);
    out << format_outcome(outcome, format.empty() ? default_format(outcome.model) : format);
    return kOk;
  } catch (const Error& e) {
    report(err, origin, to_diagnostic(e));
    return kDiagnostic;
  }
}

void print_schema(const InstanceStore& store, std::ostream& out) {
  out << "objects:\n";
  for (const auto& o : store.schema().objects()) {
    out << "  " << o.id;
    if (o.primitive) {
      out << " (primitive)";
    } else if (const auto* c = store.collection_for(o.id)) {
      out << " (" << to_string(c->model) << " collection " << c->name << ", " << c->elements.size() << " elements)";
    }
    out << "\n";
  }
  out << "morphisms:\n";
  for (const auto& m : store.schema().morphisms()) {
    if (m.identity) continue;
    out << "  " << m.id << ": " << m.domain << " -> " << m.codomain;
    if (m.cardinality == Cardinality::Many) out << " (many)";
    out << "\n";
  }
}

int run_repl(const fs::path& root, const std::string& id, std::istream& in, std::ostream& out, std::ostream& err) {
  auto loaded = load_one(root, id, err);
  if (!loaded.dataset) return loaded.code;
  const auto& d = *loaded.dataset;
  out << "multicat: dataset " << d.id << " (" << d.store.name() << "). End a query with a blank line; :quit exits.\n";
  std::string buffer;
  std::string line;
  auto prompt = [&] { out << (buffer.empty() ? "multicat> " : "       .. ") << std::flush; };
  auto submit = [&] {
    try {
      auto outcome = run_query(d.store, buffer);
      std::string text;
      try {
        text = format_outcome(outcome, "table");
      } catch (const Error&) {
        text = format_outcome(outcome, default_format(outcome.model));
      }
      out << text;
      const auto n = outcome.plan.stages.size();
      out << "(" << n << (n == 1 ? " stage" : " stages") << ", " << outcome.value.as_list().size() << " results)\n";
    } catch (const Error& e) {
      report(err, "<repl>", to_diagnostic(e));
    }
    buffer.clear();
  };
  prompt();
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    const bool blank = first == std::string::npos;
    if (buffer.empty() && !blank && line[first] == ':') {
      const auto cmd = line.substr(first, line.find_last_not_of(" \t") - first + 1);
      if (cmd == ":quit" || cmd == ":q") return kOk;
      if (cmd == ":schema") {
        print_schema(d.store, out);
      } else if (cmd == ":examples") {
        for (std::size_t i = 0; i < d.examples.size(); ++i)
          out << "-- " << (i + 1) << ". " << d.examples[i].title << "\n" << d.examples[i].query << "\n\n";
      } else {
        out << "commands: :schema, :examples, :quit\n";
      }
    } else if (blank) {
      if (!buffer.empty()) submit();
    } else {
      buffer += line + "\n";
    }
    prompt();
  }
  if (!buffer.empty()) submit();
  out << "\n";
  return kOk;
}

int run_check(const fs::path& root, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> dirs;
  try {
    if (fs::exists(root / "manifest.json")) {
      dirs.push_back(root);
    } else {
      dirs = DatasetRegistry::package_dirs(root);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  }
  if (dirs.empty()) {
    out << "no datasets\n";
    return kOk;
  }
  LoadOptions opts;
  opts.verify_laws = false;
  int code = kOk;
  for (const auto& dir : dirs) {
    const auto id = fs::absolute(dir).lexically_normal().filename().string();
    InstanceStore store;
    try {
      store = InstanceStore::load(dir, opts);
    } catch (const Error& e) {
      err << id << ": cannot load: " << to_string(e.kind()) << ": " << e.what() << "\n";
      return kConfig;
    }
    auto violations = check_category_laws(store.schema());
    for (auto& v : store.check_functor_laws()) violations.push_back(std::move(v));
    if (violations.empty()) {
      out << id << ": OK\n";
      continue;
    }
    code = kDiagnostic;
    out << id << ": " << violations.size() << (violations.size() == 1 ? " violation\n" : " violations\n");
    for (const auto& v : violations) out << "  [" << to_string(v.kind) << "] " << v.message << "\n";
  }
  return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-model query engine over a schema category of relational, XML, graph and key-value data.",
               "multicat"};
  app.require_subcommand(1);

  std::string data = "data";
  std::string dataset;
  std::string query_text;
  std::string query_file;
  std::string format;
  ServiceOptions serve;

  auto* query = app.add_subcommand("query", "Run one query and print a rendering");
  query->add_option("--data", data, "Dataset root directory")->capture_default_str();
  query->add_option("-d,--dataset", dataset, "Dataset id (directory name under the root)")->required();
  auto* q_opt = query->add_option("-q,--query", query_text, "Query text");
  auto* f_opt = query->add_option("-f,--file", query_file, "File holding the query");
  q_opt->excludes(f_opt);
  query->add_option("--format", format, "Output format (default: the query's TO model)")
      ->check(CLI::IsMember({"table", "csv", "xml", "json", "dot", "term"}));

  auto* repl = app.add_subcommand("repl", "Interactive session");
  repl->add_option("--data", data, "Dataset root directory")->capture_default_str();
  repl->add_option("-d,--dataset", dataset, "Dataset id")->required();

  auto* srv = app.add_subcommand("serve", "Start the HTTP service");
  srv->add_option("--data", data, "Dataset root directory")->capture_default_str();
  srv->add_option("--host", serve.host, "Bind address")->capture_default_str();
  srv->add_option("--port", serve.port, "Port")->capture_default_str()->check(CLI::Range(1, 65535));
  srv->add_option("--cors", serve.cors_origin, "Origin allowed by CORS");

  auto* check = app.add_subcommand("check", "Check category and functor laws of every dataset");
  check->add_option("--data", data, "Dataset root directory, or a single package")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfig;
  }

  if (*query) {
    if (query_text.empty() == query_file.empty()) {
      err << "error: query needs exactly one of --query and --file\n";
      return kConfig;
    }
    std::string origin = "<query>";
    if (!query_file.empty()) {
      std::ifstream f(query_file, std::ios::binary);
      if (!f) {
        err << "error: cannot read " << query_file << "\n";
        return kConfig;
      }
      std::ostringstream ss;
      ss << f.rdbuf();
      query_text = ss.str();
      origin = query_file;
    }
    return run_query_command(data, dataset, query_text, origin, format, out, err);
  }
  if (*repl) return run_repl(data, dataset, in, out, err);
  if (*check) return run_check(data, out, err);

  DatasetRegistry registry;
  try {
    registry = DatasetRegistry::load(data);
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kConfig;
  }
  err << "serving " << registry.datasets().size() << " dataset(s) on http://" << serve.host << ":" << serve.port
      << "\n";
  Service service(std::move(registry), serve);
  if (!service.listen()) {
    err << "error: cannot listen on " << serve.host << ":" << serve.port << "\n";
    return kConfig;
  }
  return kOk;
}

}  // namespace multicat
