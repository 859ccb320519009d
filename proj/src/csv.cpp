#include "multicat/csv.hpp"

#include "multicat/error.hpp"

namespace multicat::csv {

namespace {
[[noreturn]] void fail(const std::string& file, int line, const std::string& what) {
  Error err(ErrorKind::ParseError, file + ":" + std::to_string(line) + ": " + what, SourceLoc{line, 0});
  err.file = file;
  throw err;
}
}  // namespace

std::vector<Record> parse(std::string_view text, const std::string& file) {
  std::vector<Record> out;
  Record current;
  std::string field;
  int line = 1;
  current.line = 1;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_has_content = false;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    if (record_has_content || !current.fields.empty()) {
      end_field();
      out.push_back(std::move(current));
    }
    current = Record{};
    record_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) fail(file, line, "unexpected quote inside unquoted field");
        in_quotes = true;
        field_was_quoted = true;
        record_has_content = true;
        break;
      case ',':
        end_field();
        record_has_content = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        fail(file, line, "bare carriage return");
      case '\n':
        end_record();
        ++line;
        current.line = line;
        break;
      default:
        if (field_was_quoted) fail(file, line, "characters after closing quote");
        field += c;
        record_has_content = true;
    }
  }
  if (in_quotes) fail(file, current.line, "unterminated quoted field");
  end_record();
  return out;
}

std::string escape_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += escape_field(fields[i]);
  }
  return out + "\r\n";
}

}  // namespace multicat::csv
