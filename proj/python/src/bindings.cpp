#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <nlohmann/json.hpp>

#include "multicat/engine.hpp"
#include "multicat/instance.hpp"

namespace py = pybind11;
using namespace multicat;

namespace {

py::object to_python(const Value& v) {
  return std::visit(
      [](const auto& x) -> py::object {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::int64_t> || std::is_same_v<T, double> || std::is_same_v<T, bool> ||
                      std::is_same_v<T, std::string>) {
          return py::cast(x);
        } else if constexpr (std::is_same_v<T, Entity>) {
          return py::cast(x);
        } else if constexpr (std::is_same_v<T, Tuple>) {
          py::tuple out(x.items.size());
          for (std::size_t i = 0; i < x.items.size(); ++i) out[i] = to_python(x.items[i]);
          return std::move(out);
        } else if constexpr (std::is_same_v<T, List>) {
          py::list out;
          for (const auto& item : x) out.append(to_python(item));
          return std::move(out);
        } else {
          return py::cast(to_term_text(x));
        }
      },
      v.data());
}

py::object json_to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-model query engine core";

  // Leaked on purpose: the type lives as long as the interpreter.
  static py::handle error_type = py::exception<Error>(m, "MulticatError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      auto d = to_diagnostic(e);
      py::object exc = error_type(py::str(e.what()));
      exc.attr("kind") = std::string(to_string(d.kind));
      exc.attr("line") = d.loc.line;
      exc.attr("column") = d.loc.column;
      exc.attr("hint") = d.hint;
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<Entity>(m, "Entity")
      .def(py::init<std::string, std::string>(), py::arg("object"), py::arg("id"))
      .def_readonly("object", &Entity::object)
      .def_readonly("id", &Entity::id)
      .def("__eq__", [](const Entity& a, const Entity& b) { return a.object == b.object && a.id == b.id; })
      .def("__hash__", [](const Entity& e) { return py::hash(py::make_tuple(e.object, e.id)); })
      .def("__repr__", [](const Entity& e) { return "Entity('" + e.object + "', '" + e.id + "')"; });

  py::class_<InstanceStore>(m, "Store")
      .def_static(
          "load",
          [](const std::filesystem::path& dir, bool verify_laws) {
            LoadOptions opts;
            opts.verify_laws = verify_laws;
            return InstanceStore::load(dir, opts);
          },
          py::arg("package_dir"), py::arg("verify_laws") = true)
      .def_property_readonly("name", &InstanceStore::name)
      .def("collections",
           [](const InstanceStore& s) {
             py::list out;
             for (const auto& c : s.collections()) {
               py::dict d;
               d["name"] = c.name;
               d["object"] = c.object;
               d["model"] = std::string(to_string(c.model));
               d["size"] = c.elements.size();
               out.append(d);
             }
             return out;
           })
      .def("elements", &InstanceStore::elements, py::arg("collection"))
      .def(
          "apply", [](const InstanceStore& s, const std::string& morphism, const std::string& entity) {
            return to_python(s.apply(morphism, entity));
          },
          py::arg("morphism"), py::arg("entity"))
      .def("schema", [](const InstanceStore& s) { return json_to_python(s.schema().to_json()); })
      .def("check_laws",
           [](const InstanceStore& s) {
             auto report = check_category_laws(s.schema());
             for (auto& v : s.check_functor_laws()) report.push_back(std::move(v));
             std::vector<std::pair<std::string, std::string>> out;
             for (const auto& v : report) out.emplace_back(std::string(to_string(v.kind)), v.message);
             return out;
           })
      .def(
          "evaluate", [](const InstanceStore& s, const std::string& text) { return to_python(run_query(s, text).value); },
          py::arg("query"))
      .def(
          "run",
          [](const InstanceStore& s, const std::string& text) {
            try {
              return json_to_python(outcome_to_json(run_query(s, text)));
            } catch (const Error& e) {
              return json_to_python(error_to_json(to_diagnostic(e)));
            }
          },
          py::arg("query"), "Service-shaped result: {status, model, rendered, plan, diagnostics}.");

  m.def(
      "format_query", [](const std::string& text) { return pretty_print(*parse_query(text)); }, py::arg("query"),
      "Parses and pretty-prints a query.");
  m.def(
      "examples",
      [](const std::filesystem::path& dir) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& e : load_examples(dir)) out.emplace_back(e.title, e.query);
        return out;
      },
      py::arg("package_dir"));
}
