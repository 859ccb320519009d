#include "multicat/service.hpp"

#include <algorithm>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace multicat {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<fs::path> DatasetRegistry::package_dirs(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw Error(ErrorKind::MissingFile, "dataset root not found: " + root.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) out.push_back(entry.path());
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return out;
}

DatasetRegistry DatasetRegistry::load(const fs::path& root, const LoadOptions& opts) {
  DatasetRegistry reg;
  for (const auto& dir : package_dirs(root))
    reg.add({dir.filename().string(), dir, InstanceStore::load(dir, opts), load_examples(dir)});
  return reg;
}

void DatasetRegistry::add(Dataset d) {
  auto id = d.id;
  datasets_.insert_or_assign(std::move(id), std::move(d));
}

const Dataset* DatasetRegistry::find(const std::string& id) const {
  auto it = datasets_.find(id);
  return it == datasets_.end() ? nullptr : &it->second;
}

namespace {

HttpResponse json_response(int status, const json& body) { return {status, body.dump(2) + "\n"}; }

HttpResponse failure(int status, std::string_view kind, const std::string& message) {
  return json_response(status, {{"status", "error"}, {"kind", kind}, {"message", message}});
}

HttpResponse no_route(const std::string& path) { return failure(404, "NotFound", "no route " + path); }
HttpResponse bad_method() { return failure(405, "MethodNotAllowed", "method not allowed"); }

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

Service::Service(DatasetRegistry registry, ServiceOptions opts)
    : registry_(std::move(registry)), opts_(std::move(opts)) {}

HttpResponse Service::handle(const std::string& method, const std::string& path, const std::string& body) const {
  const auto parts = split_path(path);
  if (parts.empty() || parts[0] != "datasets") return no_route(path);
  if (parts.size() == 1) {
    if (method != "GET") return bad_method();
    return datasets();
  }
  const auto* d = registry_.find(parts[1]);
  if (!d) return failure(404, to_string(ErrorKind::UnknownDataset), "unknown dataset '" + parts[1] + "'");
  if (parts.size() != 3) return no_route(path);
  const auto& what = parts[2];
  if (what == "schema" && method == "GET") return schema(*d);
  if (what == "examples" && method == "GET") return examples(*d);
  if (what == "query" && method == "POST") return query(*d, body);
  if (what == "schema" || what == "examples" || what == "query")
    return bad_method();
  return no_route(path);
}

HttpResponse Service::datasets() const {
  json out = json::array();
  for (const auto& [id, d] : registry_.datasets()) {
    json models = json::array();
    for (auto m : d.store.models()) models.push_back(std::string(to_string(m)));
    out.push_back({{"id", id},
                   {"name", d.store.name()},
                   {"collectionCount", d.store.collections().size()},
                   {"models", models}});
  }
  return json_response(200, out);
}

HttpResponse Service::schema(const Dataset& d) const {
  const auto& schema = d.store.schema();
  json objects = json::array();
  for (const auto& o : schema.objects()) {
    json obj = {{"id", o.id}, {"kind", o.kind == ObjectKind::Entity ? "entity" : "primitive"}};
    if (o.primitive) obj["type"] = std::string(to_string(*o.primitive));
    if (const auto* c = d.store.collection_for(o.id)) {
      obj["collection"] = c->name;
      obj["model"] = std::string(to_string(c->model));
      obj["count"] = c->elements.size();
    }
    objects.push_back(obj);
  }
  json morphisms = json::array();
  for (const auto& m : schema.morphisms()) {
    if (m.identity) continue;
    morphisms.push_back({{"id", m.id},
                         {"domain", m.domain},
                         {"codomain", m.codomain},
                         {"cardinality", m.cardinality == Cardinality::Many ? "many" : "one"}});
  }
  return json_response(200, {{"objects", objects}, {"morphisms", morphisms}});
}

HttpResponse Service::examples(const Dataset& d) const {
  json out = json::array();
  for (const auto& e : d.examples) out.push_back({{"title", e.title}, {"query", e.query}});
  return json_response(200, out);
}

HttpResponse Service::query(const Dataset& d, const std::string& body) const {
  json req;
  try {
    req = json::parse(body);
  } catch (const json::exception& e) {
    return failure(400, "MalformedBody", std::string("malformed body: ") + e.what());
  }
  if (!req.is_object() || !req.contains("query") || !req["query"].is_string())
    return failure(400, "MalformedBody", "malformed body: expected {\"query\": string}");
  const auto text = req["query"].get<std::string>();
  try {
    return json_response(200, outcome_to_json(run_query(d.store, text)));
  } catch (const Error& e) {
    return json_response(200, error_to_json(to_diagnostic(e)));
  }
}

bool Service::listen() const {
  httplib::Server server;
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    auto r = handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Get(".*", forward);
  server.Post(".*", forward);
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  if (!opts_.cors_origin.empty()) {
    server.set_default_headers({{"Access-Control-Allow-Origin", opts_.cors_origin},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
  }
  return server.listen(opts_.host, opts_.port);
}

}  // namespace multicat
