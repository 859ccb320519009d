#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace multicat::csv {

struct Record {
  std::vector<std::string> fields;
  int line = 0;  // 1-based line the record starts on
};

/// RFC-4180 reader: quoted fields may contain commas, doubled quotes and
/// line breaks; both LF and CRLF record separators are accepted. Throws
/// ParseError with the offending line.
std::vector<Record> parse(std::string_view text, const std::string& file = "<csv>");

std::string escape_field(std::string_view field);

/// One record terminated by CRLF.
std::string format_row(const std::vector<std::string>& fields);

}  // namespace multicat::csv
