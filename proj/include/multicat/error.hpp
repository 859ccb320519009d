#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace multicat {

enum class ErrorKind {
  TypeMismatch,
  MissingComposite,
  MissingFile,
  SchemaViolation,
  DanglingReference,
  ParseError,
  UnknownMorphism,
  UnknownEntity,
  UnknownCollection,
  UnknownDataset,
  SyntaxError,
  TypeError,
  RuntimeError,
  Unrenderable,
};

std::string_view to_string(ErrorKind kind);

// 1-based; line 0 means "no location".
struct SourceLoc {
  int line = 0;
  int column = 0;

  bool valid() const { return line > 0; }
  friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, SourceLoc loc = {})
      : std::runtime_error(std::move(message)), kind_(kind), loc_(loc) {}

  ErrorKind kind() const { return kind_; }
  const SourceLoc& loc() const { return loc_; }

  // SyntaxError: the token set the parser would have accepted.
  std::vector<std::string> expected;
  // TypeMismatch in composePath: index of the offending pair.
  std::optional<std::size_t> index;
  // ParseError: file that failed to parse.
  std::string file;
  // UnknownMorphism: closest known name, if any is within edit distance 2.
  std::string hint;

 private:
  ErrorKind kind_;
  SourceLoc loc_;
};

}  // namespace multicat
