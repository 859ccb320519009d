#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace multicat {

/// Algebraic graph term: Empty | Vertex v | Overlay l r | Connect l r.
///
/// Terms are immutable and share subterms. Equality is semantic (see
/// graph_eq); operator== is deliberately not provided.
class GraphTerm {
 public:
  struct Empty {};
  struct Vertex {
    std::string id;
  };
  struct Overlay;
  struct Connect;

  GraphTerm();  // empty

  static GraphTerm empty() { return {}; }
  static GraphTerm vertex(std::string id);
  static GraphTerm overlay(GraphTerm l, GraphTerm r);
  static GraphTerm connect(GraphTerm l, GraphTerm r);

  /// Balanced overlay of many terms, so that large vertex lists do not yield
  /// deep terms.
  static GraphTerm overlays(std::vector<GraphTerm> terms);

  using Node = std::variant<Empty, Vertex, Overlay, Connect>;
  const Node& node() const;
  bool is_empty_term() const;

 private:
  explicit GraphTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct GraphTerm::Overlay {
  GraphTerm left, right;
};
struct GraphTerm::Connect {
  GraphTerm left, right;
};

inline const GraphTerm::Node& GraphTerm::node() const { return *node_; }
inline bool GraphTerm::is_empty_term() const { return std::holds_alternative<Empty>(*node_); }

/// Structural fold: replaces each constructor with the supplied algebra.
template <class B, class OnVertex, class OnOverlay, class OnConnect>
B foldg(const B& on_empty, OnVertex&& on_vertex, OnOverlay&& on_overlay, OnConnect&& on_connect,
        const GraphTerm& g) {
  return std::visit(
      [&](const auto& n) -> B {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, GraphTerm::Empty>) {
          return on_empty;
        } else if constexpr (std::is_same_v<N, GraphTerm::Vertex>) {
          return on_vertex(n.id);
        } else if constexpr (std::is_same_v<N, GraphTerm::Overlay>) {
          return on_overlay(foldg(on_empty, on_vertex, on_overlay, on_connect, n.left),
                            foldg(on_empty, on_vertex, on_overlay, on_connect, n.right));
        } else {
          return on_connect(foldg(on_empty, on_vertex, on_overlay, on_connect, n.left),
                            foldg(on_empty, on_vertex, on_overlay, on_connect, n.right));
        }
      },
      g.node());
}

struct GraphSemantics {
  std::set<std::string> vertices;
  std::set<std::pair<std::string, std::string>> edges;

  friend bool operator==(const GraphSemantics&, const GraphSemantics&) = default;
};

GraphSemantics semantics(const GraphTerm& g);
bool graph_eq(const GraphTerm& a, const GraphTerm& b);

/// Keeps the vertices in `keep` and the edges between them.
GraphTerm induced_subgraph(const GraphTerm& g, const std::set<std::string>& keep);

std::size_t vertex_count(const GraphTerm& g);

/// Canonical term for a vertex/edge set: a balanced overlay of the vertices
/// overlaid with a balanced overlay of one connect per edge, both in
/// ascending order.
GraphTerm canonical_term(const GraphSemantics& s);

/// Text syntax: `empty`, `vertex <id>`, `overlay(t1, t2)`, `connect(t1, t2)`.
std::string to_term_text(const GraphTerm& g);
GraphTerm parse_term_text(std::string_view text);

std::string to_dot(const GraphSemantics& s);

}  // namespace multicat
