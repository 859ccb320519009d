#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "multicat/engine.hpp"
#include "multicat/instance.hpp"

namespace multicat {

struct Dataset {
  std::string id;  // directory name
  std::filesystem::path dir;
  InstanceStore store;
  std::vector<ExampleQuery> examples;
};

/// Every package directory (one containing manifest.json) directly under a
/// root, loaded once and never modified.
class DatasetRegistry {
 public:
  DatasetRegistry() = default;
  /// Throws MissingFile if `root` is not a directory; load errors of a
  /// package propagate.
  static DatasetRegistry load(const std::filesystem::path& root, const LoadOptions& opts = {});
  /// Package directories under `root` in ascending id order.
  static std::vector<std::filesystem::path> package_dirs(const std::filesystem::path& root);

  void add(Dataset d);
  const Dataset* find(const std::string& id) const;
  /// Ascending id.
  const std::map<std::string, Dataset>& datasets() const { return datasets_; }

 private:
  std::map<std::string, Dataset> datasets_;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  /// Allowed origin for CORS; empty disables the headers.
  std::string cors_origin;
};

class Service {
 public:
  explicit Service(DatasetRegistry registry, ServiceOptions opts = {});

  /// Transport-independent request handler; `path` excludes the query
  /// string.
  HttpResponse handle(const std::string& method, const std::string& path, const std::string& body) const;

  /// Serves until the process is stopped. Returns false if binding fails.
  bool listen() const;

  const DatasetRegistry& registry() const { return registry_; }

 private:
  HttpResponse datasets() const;
  HttpResponse schema(const Dataset& d) const;
  HttpResponse query(const Dataset& d, const std::string& body) const;
  HttpResponse examples(const Dataset& d) const;

  DatasetRegistry registry_;
  ServiceOptions opts_;
};

}  // namespace multicat
