#include "multicat/graph.hpp"

#include <cctype>

#include "multicat/error.hpp"

namespace multicat {

namespace {
const std::shared_ptr<const GraphTerm::Node>& empty_node() {
  static const auto node = std::make_shared<const GraphTerm::Node>(GraphTerm::Empty{});
  return node;
}
}  // namespace

GraphTerm::GraphTerm() : node_(empty_node()) {}

GraphTerm GraphTerm::vertex(std::string id) {
  return GraphTerm(std::make_shared<const Node>(Vertex{std::move(id)}));
}

GraphTerm GraphTerm::overlay(GraphTerm l, GraphTerm r) {
  return GraphTerm(std::make_shared<const Node>(Overlay{std::move(l), std::move(r)}));
}

GraphTerm GraphTerm::connect(GraphTerm l, GraphTerm r) {
  return GraphTerm(std::make_shared<const Node>(Connect{std::move(l), std::move(r)}));
}

GraphTerm GraphTerm::overlays(std::vector<GraphTerm> terms) {
  if (terms.empty()) return {};
  while (terms.size() > 1) {
    std::vector<GraphTerm> next;
    next.reserve((terms.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < terms.size(); i += 2) next.push_back(overlay(terms[i], terms[i + 1]));
    if (terms.size() % 2 == 1) next.push_back(terms.back());
    terms = std::move(next);
  }
  return terms.front();
}

GraphSemantics semantics(const GraphTerm& g) {
  using S = GraphSemantics;
  return foldg<S>(
      S{},
      [](const std::string& v) { return S{{v}, {}}; },
      [](S a, S b) {
        a.vertices.merge(b.vertices);
        a.edges.merge(b.edges);
        return a;
      },
      [](S a, S b) {
        for (const auto& x : a.vertices)
          for (const auto& y : b.vertices) a.edges.emplace(x, y);
        a.vertices.merge(b.vertices);
        a.edges.merge(b.edges);
        return a;
      },
      g);
}

bool graph_eq(const GraphTerm& a, const GraphTerm& b) { return semantics(a) == semantics(b); }

GraphTerm induced_subgraph(const GraphTerm& g, const std::set<std::string>& keep) {
  return foldg<GraphTerm>(
      GraphTerm::empty(),
      [&](const std::string& v) { return keep.count(v) ? GraphTerm::vertex(v) : GraphTerm::empty(); },
      [](GraphTerm a, GraphTerm b) {
        if (a.is_empty_term()) return b;
        if (b.is_empty_term()) return a;
        return GraphTerm::overlay(std::move(a), std::move(b));
      },
      [](GraphTerm a, GraphTerm b) {
        if (a.is_empty_term()) return b;
        if (b.is_empty_term()) return a;
        return GraphTerm::connect(std::move(a), std::move(b));
      },
      g);
}

std::size_t vertex_count(const GraphTerm& g) { return semantics(g).vertices.size(); }

GraphTerm canonical_term(const GraphSemantics& s) {
  std::vector<GraphTerm> vs, es;
  for (const auto& v : s.vertices) vs.push_back(GraphTerm::vertex(v));
  for (const auto& [a, b] : s.edges) es.push_back(GraphTerm::connect(GraphTerm::vertex(a), GraphTerm::vertex(b)));
  if (es.empty()) return GraphTerm::overlays(std::move(vs));
  return GraphTerm::overlay(GraphTerm::overlays(std::move(vs)), GraphTerm::overlays(std::move(es)));
}

std::string to_term_text(const GraphTerm& g) {
  return foldg<std::string>(
      "empty", [](const std::string& v) { return "vertex " + v; },
      [](const std::string& a, const std::string& b) { return "overlay(" + a + ", " + b + ")"; },
      [](const std::string& a, const std::string& b) { return "connect(" + a + ", " + b + ")"; }, g);
}

namespace {

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  GraphTerm parse() {
    auto t = term();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return t;
  }

 private:
  static bool id_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == ':' || c == '-';
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string word() {
    skip_ws();
    auto start = pos_;
    while (pos_ < text_.size() && id_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  GraphTerm term() {
    if (++depth_ > kMaxDepth) fail("term nested deeper than " + std::to_string(kMaxDepth));
    auto w = word();
    if (w == "empty" || w == "vertex") {
      --depth_;
      return w == "empty" ? GraphTerm::empty() : GraphTerm::vertex(word());
    }
    if (w == "overlay" || w == "connect") {
      expect('(');
      auto l = term();
      expect(',');
      auto r = term();
      expect(')');
      --depth_;
      return w == "overlay" ? GraphTerm::overlay(l, r) : GraphTerm::connect(l, r);
    }
    fail("unknown constructor '" + w + "'");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError, "graph term: " + what + " at offset " + std::to_string(pos_));
  }

  static constexpr int kMaxDepth = 10000;
  std::string_view text_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

std::string dot_id(const std::string& id) {
  std::string out = "\"";
  for (char c : id) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

GraphTerm parse_term_text(std::string_view text) { return TermParser(text).parse(); }

std::string to_dot(const GraphSemantics& s) {
  std::string out = "digraph {\n";
  for (const auto& v : s.vertices) out += "  " + dot_id(v) + ";\n";
  for (const auto& [a, b] : s.edges) out += "  " + dot_id(a) + " -> " + dot_id(b) + ";\n";
  out += "}\n";
  return out;
}

}  // namespace multicat
