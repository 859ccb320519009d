#include "multicat/engine.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace multicat {

Diagnostic to_diagnostic(const Error& err, SourceLoc fallback) {
  Diagnostic d;
  d.kind = err.kind();
  d.message = err.what();
  d.loc = err.loc().valid() ? err.loc() : (fallback.valid() ? fallback : SourceLoc{1, 1});
  d.hint = err.hint;
  return d;
}

nlohmann::json to_json(const Diagnostic& d) {
  nlohmann::json out = {{"kind", std::string(to_string(d.kind))},
                        {"message", d.message},
                        {"line", d.loc.line},
                        {"column", d.loc.column}};
  if (!d.hint.empty()) out["hint"] = d.hint;
  return out;
}

namespace {

void entity_objects(const QueryType& t, std::set<std::string>& out) {
  if (t.kind == QueryType::Kind::Entity) out.insert(t.entity);
  for (const auto& a : t.args) entity_objects(a, out);
}

}  // namespace

std::set<DataModel> source_models(const TypedQuery& typed, const InstanceStore& store) {
  std::set<std::string> objects;
  for (const auto& [e, t] : typed.types) entity_objects(t, objects);
  for (const auto& [b, info] : typed.blocks) {
    entity_objects(info.element, objects);
    entity_objects(info.result_element, objects);
  }
  std::set<DataModel> out;
  for (const auto& o : objects)
    if (const auto* c = store.collection_for(o)) out.insert(c->model);
  return out;
}

std::string model_key(OutputModel m) {
  switch (m) {
    case OutputModel::Graph: return "graph";
    case OutputModel::AlgebraicGraph: return "algebraic_graph";
    case OutputModel::Relational: return "relational";
    case OutputModel::Xml: return "xml";
  }
  return "?";
}

QueryOutcome run_query(const InstanceStore& store, std::string_view text) {
  QueryOutcome out;
  auto ast = parse_query(text);
  out.typed = typecheck(ast, store.schema(), source_types(store));
  out.plan = compile(out.typed);
  out.value = execute(out.plan, store);
  out.model = out.typed.model;
  out.element = out.typed.result.elem();

  const auto& block = result_block(*ast);
  for (auto m : {OutputModel::Graph, OutputModel::AlgebraicGraph, OutputModel::Relational, OutputModel::Xml}) {
    try {
      out.rendered.emplace(m, render(m, out.value, out.element, store));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Unrenderable) throw;
      if (m == out.model) throw Error(ErrorKind::Unrenderable, e.what(), block.model_loc);
      out.notes.push_back(to_diagnostic(e, block.model_loc));
    }
  }
  return out;
}

nlohmann::json outcome_to_json(const QueryOutcome& outcome) {
  using nlohmann::json;
  json rendered = json::object();
  for (const auto& [model, r] : outcome.rendered) {
    std::visit(
        [&, m = model](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Table>) {
            auto j = to_json(p);
            j["csv"] = to_csv(p);
            rendered[model_key(m)] = j;
          } else if constexpr (std::is_same_v<T, XmlDoc>) {
            rendered[model_key(m)] = p.text;
          } else if constexpr (std::is_same_v<T, GraphView>) {
            rendered[model_key(m)] = to_json(p);
          } else {
            rendered[model_key(m)] = p.text;
          }
        },
        r.payload);
  }
  json notes = json::array();
  for (const auto& n : outcome.notes) notes.push_back(to_json(n));
  return {{"status", "ok"},
          {"model", model_key(outcome.model)},
          {"resultType", outcome.typed.result.str()},
          {"stages", outcome.plan.stages.size()},
          {"rendered", rendered},
          {"plan", plan_to_json(outcome.plan)},
          {"diagnostics", notes}};
}

nlohmann::json error_to_json(const Diagnostic& d) {
  return {{"status", "error"}, {"diagnostics", nlohmann::json::array({to_json(d)})}};
}

std::vector<ExampleQuery> load_examples(const std::filesystem::path& package_dir) {
  const auto file = package_dir / "examples.json";
  std::ifstream in(file);
  if (!in) return {};
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    Error err(ErrorKind::ParseError, file.string() + ": " + e.what());
    err.file = file.string();
    throw err;
  }
  std::vector<ExampleQuery> out;
  for (const auto& e : doc) out.push_back({e.at("title").get<std::string>(), e.at("query").get<std::string>()});
  return out;
}

}  // namespace multicat
