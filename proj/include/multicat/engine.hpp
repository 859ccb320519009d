#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "multicat/eval.hpp"
#include "multicat/instance.hpp"
#include "multicat/render.hpp"
#include "multicat/typecheck.hpp"

namespace multicat {

struct Diagnostic {
  ErrorKind kind = ErrorKind::SyntaxError;
  std::string message;
  SourceLoc loc;
  std::string hint;
};

/// Location-carrying diagnostic for `err`; errors without a location are
/// pinned to `fallback` (or 1:1).
Diagnostic to_diagnostic(const Error& err, SourceLoc fallback = {});
nlohmann::json to_json(const Diagnostic& d);

/// Everything one query produces: the typed AST, the fold plan, the value
/// and every rendering that applies to it.
struct QueryOutcome {
  TypedQuery typed;
  FoldPlan plan;
  Value value;
  OutputModel model = OutputModel::Relational;
  QueryType element;
  std::map<OutputModel, RenderedResult> rendered;
  /// Why the remaining models could not be rendered.
  std::vector<Diagnostic> notes;

  const RenderedResult& primary() const { return rendered.at(model); }
};

/// parse -> typecheck -> compile -> execute -> render. Throws Error; an
/// Unrenderable error is only raised for the model selected by TO.
QueryOutcome run_query(const InstanceStore& store, std::string_view text);

/// Data models of the collections whose entities the query touches,
/// through its sources or the type of any subexpression.
std::set<DataModel> source_models(const TypedQuery& typed, const InstanceStore& store);

/// Stable JSON key of an output model.
std::string model_key(OutputModel m);

/// `{status: "ok", model, stages, rendered, plan, diagnostics}`.
nlohmann::json outcome_to_json(const QueryOutcome& outcome);
/// `{status: "error", diagnostics: [...]}`.
nlohmann::json error_to_json(const Diagnostic& d);

struct ExampleQuery {
  std::string title;
  std::string query;
};

/// Reads `examples.json` of a dataset package; missing file means none.
std::vector<ExampleQuery> load_examples(const std::filesystem::path& package_dir);

}  // namespace multicat
