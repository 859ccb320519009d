#pragma once

#include <cstdint>
#include <iterator>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "multicat/graph.hpp"

namespace multicat {

class Value;

struct Entity {
  std::string object;  // schema object id
  std::string id;
};

struct Tuple {
  std::vector<Value> items;
};

/// Immutable singly-linked list. Prepending is O(1) and shares the tail,
/// which is what the right folds of the evaluator rely on.
class List {
  struct Cell;

 public:
  List() = default;
  List(const List&) = default;
  List(List&&) noexcept = default;
  // By value so the previous cells are released by ~List.
  List& operator=(List other) noexcept {
    std::swap(head_, other.head_);
    std::swap(size_, other.size_);
    return *this;
  }
  ~List();

  static List from(const std::vector<Value>& items);

  List prepend(Value v) const;

  bool empty() const { return !head_; }
  std::size_t size() const { return size_; }
  const Value& front() const;
  List tail() const;

  std::vector<Value> to_vector() const;

  class const_iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = Value;
    using difference_type = std::ptrdiff_t;
    using pointer = const Value*;
    using reference = const Value&;

    const_iterator() = default;
    explicit const_iterator(const Cell* c) : cell_(c) {}
    reference operator*() const;
    pointer operator->() const { return &**this; }
    const_iterator& operator++();
    const_iterator operator++(int) {
      auto tmp = *this;
      ++*this;
      return tmp;
    }
    friend bool operator==(const const_iterator& a, const const_iterator& b) { return a.cell_ == b.cell_; }

   private:
    const Cell* cell_ = nullptr;
  };

  const_iterator begin() const { return const_iterator(head_.get()); }
  const_iterator end() const { return {}; }

 private:
  List(std::shared_ptr<const Cell> head, std::size_t size) : head_(std::move(head)), size_(size) {}

  std::shared_ptr<const Cell> head_;
  std::size_t size_ = 0;
};

/// Runtime value: primitive, entity reference, tuple, list or graph.
class Value {
 public:
  using Storage = std::variant<std::int64_t, double, std::string, bool, Entity, Tuple, List, GraphTerm>;

  Value() : data_(std::int64_t{0}) {}
  Value(std::int64_t v) : data_(v) {}
  Value(int v) : data_(std::int64_t{v}) {}
  Value(double v) : data_(v) {}
  Value(std::string v) : data_(std::move(v)) {}
  Value(const char* v) : data_(std::string(v)) {}
  Value(bool v) : data_(v) {}
  Value(Entity v) : data_(std::move(v)) {}
  Value(Tuple v) : data_(std::move(v)) {}
  Value(List v) : data_(std::move(v)) {}
  Value(GraphTerm v) : data_(std::move(v)) {}

  static Value entity(std::string object, std::string id) { return Entity{std::move(object), std::move(id)}; }
  static Value tuple(std::vector<Value> items) { return Tuple{std::move(items)}; }
  static Value list(const std::vector<Value>& items) { return List::from(items); }

  const Storage& data() const { return data_; }

  bool is_int() const { return std::holds_alternative<std::int64_t>(data_); }
  bool is_double() const { return std::holds_alternative<double>(data_); }
  bool is_string() const { return std::holds_alternative<std::string>(data_); }
  bool is_bool() const { return std::holds_alternative<bool>(data_); }
  bool is_entity() const { return std::holds_alternative<Entity>(data_); }
  bool is_tuple() const { return std::holds_alternative<Tuple>(data_); }
  bool is_list() const { return std::holds_alternative<List>(data_); }
  bool is_graph() const { return std::holds_alternative<GraphTerm>(data_); }
  bool is_numeric() const { return is_int() || is_double(); }

  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  double as_double() const { return std::get<double>(data_); }
  double as_number() const { return is_int() ? static_cast<double>(as_int()) : as_double(); }
  const std::string& as_string() const { return std::get<std::string>(data_); }
  bool as_bool() const { return std::get<bool>(data_); }
  const Entity& as_entity() const { return std::get<Entity>(data_); }
  const Tuple& as_tuple() const { return std::get<Tuple>(data_); }
  const List& as_list() const { return std::get<List>(data_); }
  const GraphTerm& as_graph() const { return std::get<GraphTerm>(data_); }

  /// Structural equality; graphs compare by graph_eq, entities by object and id.
  friend bool operator==(const Value& a, const Value& b);

 private:
  Storage data_;
};

/// Haskell-flavoured debug rendering, e.g. `[("Mary", "Finland")]`.
std::string show(const Value& v);

/// Plain text used in tables and XML: ints without a decimal point, doubles
/// always with one, bools as true/false, entities as their id.
std::string display(const Value& v);

std::string format_double(double d);

struct List::Cell {
  Value head;
  std::shared_ptr<const Cell> tail;
};

}  // namespace multicat
