#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "corrtree/error.hpp"

namespace corrtree::csv {

// Minimal RFC 4180 reader: comma separated, double-quoted fields with "" escapes,
// LF or CRLF line endings. `line` tracks the physical line of the record start.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Returns false at end of input. Blank lines are skipped.
  bool next(std::vector<std::string>& fields) {
    for (;;) {
      fields.clear();
      if (in_.peek() == std::char_traits<char>::eof()) return false;
      ++physical_line_;
      record_line_ = physical_line_;
      std::string field;
      bool quoted = false;
      bool any = false;
      for (;;) {
        int ch = in_.get();
        if (ch == std::char_traits<char>::eof()) {
          if (quoted) {
            throw Error(ErrorCode::parse_error,
                        "line " + std::to_string(record_line_) + ": unterminated quoted field");
          }
          break;
        }
        any = true;
        char c = static_cast<char>(ch);
        if (quoted) {
          if (c == '"') {
            if (in_.peek() == '"') {
              in_.get();
              field.push_back('"');
            } else {
              quoted = false;
            }
          } else {
            if (c == '\n') ++physical_line_;
            field.push_back(c);
          }
          continue;
        }
        if (c == '"') {
          quoted = true;
        } else if (c == ',') {
          fields.push_back(std::move(field));
          field.clear();
        } else if (c == '\n') {
          break;
        } else if (c == '\r') {
          if (in_.peek() == '\n') in_.get();
          break;
        } else {
          field.push_back(c);
        }
      }
      fields.push_back(std::move(field));
      if (!any || (fields.size() == 1 && fields.front().empty())) continue;
      if (first_ && !fields.empty()) {
        strip_bom(fields.front());
        first_ = false;
      }
      return true;
    }
  }

  std::size_t line() const noexcept { return record_line_; }

 private:
  static void strip_bom(std::string& s) {
    if (s.size() >= 3 && static_cast<unsigned char>(s[0]) == 0xEF &&
        static_cast<unsigned char>(s[1]) == 0xBB && static_cast<unsigned char>(s[2]) == 0xBF) {
      s.erase(0, 3);
    }
  }

  std::istream& in_;
  std::size_t physical_line_ = 0;
  std::size_t record_line_ = 0;
  bool first_ = true;
};

inline void write_field(std::ostream& out, std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace corrtree::csv
