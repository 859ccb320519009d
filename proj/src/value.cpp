#include "multicat/value.hpp"

#include <charconv>
#include <cmath>

namespace multicat {

List::~List() {
  // Unlink uniquely owned cells iteratively; the default destructor would
  // recurse once per cell.
  auto cell = std::move(head_);
  while (cell && cell.use_count() == 1) {
    auto next = std::move(const_cast<Cell&>(*cell).tail);
    cell = std::move(next);
  }
}

List List::from(const std::vector<Value>& items) {
  List out;
  for (auto it = items.rbegin(); it != items.rend(); ++it) out = out.prepend(*it);
  return out;
}

List List::prepend(Value v) const {
  return List(std::make_shared<Cell>(Cell{std::move(v), head_}), size_ + 1);
}

const Value& List::front() const { return head_->head; }

List List::tail() const { return List(head_->tail, size_ - 1); }

std::vector<Value> List::to_vector() const {
  std::vector<Value> out;
  out.reserve(size_);
  for (const auto& v : *this) out.push_back(v);
  return out;
}

const Value& List::const_iterator::operator*() const { return cell_->head; }

List::const_iterator& List::const_iterator::operator++() {
  cell_ = cell_->tail.get();
  return *this;
}

bool operator==(const Value& a, const Value& b) {
  if (a.data_.index() != b.data_.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.data_);
        if constexpr (std::is_same_v<T, Entity>) {
          return x.object == y.object && x.id == y.id;
        } else if constexpr (std::is_same_v<T, Tuple>) {
          return x.items == y.items;
        } else if constexpr (std::is_same_v<T, List>) {
          if (x.size() != y.size()) return false;
          auto i = x.begin();
          auto j = y.begin();
          for (; i != x.end(); ++i, ++j)
            if (!(*i == *j)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, GraphTerm>) {
          return graph_eq(x, y);
        } else {
          return x == y;
        }
      },
      a.data_);
}

std::string format_double(double d) {
  if (std::isnan(d)) return "NaN";
  if (std::isinf(d)) return d > 0 ? "Infinity" : "-Infinity";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace {
std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}
}  // namespace

std::string show(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return quote(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "True" : "False";
        } else if constexpr (std::is_same_v<T, Entity>) {
          return x.object + "#" + x.id;
        } else if constexpr (std::is_same_v<T, Tuple>) {
          std::string out = "(";
          for (std::size_t i = 0; i < x.items.size(); ++i) out += (i ? ", " : "") + show(x.items[i]);
          return out + ")";
        } else if constexpr (std::is_same_v<T, List>) {
          std::string out = "[";
          bool first = true;
          for (const auto& item : x) {
            out += (first ? "" : ", ") + show(item);
            first = false;
          }
          return out + "]";
        } else {
          return to_term_text(x);
        }
      },
      v.data());
}

std::string display(const Value& v) {
  if (v.is_string()) return v.as_string();
  if (v.is_bool()) return v.as_bool() ? "true" : "false";
  if (v.is_entity()) return v.as_entity().id;
  if (v.is_list()) {
    std::string out;
    bool first = true;
    for (const auto& item : v.as_list()) {
      out += (first ? "" : ";") + display(item);
      first = false;
    }
    return out;
  }
  return show(v);
}

}  // namespace multicat
