#pragma once

// Minimal ordered JSON document builder. Fields print in insertion order and
// doubles at 17 significant digits, so equal inputs give byte-identical text.
// Non-finite doubles print as strings ("inf", "-inf", "nan").

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "byzfusion/format.hpp"

namespace byzfusion::json {

class Value;
using Array = std::vector<Value>;
using Object = std::vector<std::pair<std::string, Value>>;

class Value {
 public:
  Value() : data_(nullptr) {}
  Value(std::nullptr_t) : data_(nullptr) {}
  Value(bool b) : data_(b) {}
  Value(int i) : data_(static_cast<std::int64_t>(i)) {}
  Value(std::int64_t i) : data_(i) {}
  Value(std::uint64_t u) : data_(u) {}
  Value(double d) : data_(d) {}
  Value(const char* s) : data_(std::string(s)) {}
  Value(std::string s) : data_(std::move(s)) {}
  Value(Array a) : data_(std::move(a)) {}
  Value(Object o) : data_(std::move(o)) {}

  [[nodiscard]] std::string dump(int indent = 2) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
  }

 private:
  static void quote(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
      }
    }
    out += '"';
  }

  static void newline(std::string& out, int indent, int depth) {
    out += '\n';
    out.append(static_cast<std::size_t>(indent * depth), ' ');
  }

  void write(std::string& out, int indent, int depth) const {
    if (std::holds_alternative<std::nullptr_t>(data_)) {
      out += "null";
    } else if (const bool* b = std::get_if<bool>(&data_)) {
      out += *b ? "true" : "false";
    } else if (const auto* i = std::get_if<std::int64_t>(&data_)) {
      out += std::to_string(*i);
    } else if (const auto* u = std::get_if<std::uint64_t>(&data_)) {
      out += std::to_string(*u);
    } else if (const double* d = std::get_if<double>(&data_)) {
      if (std::isfinite(*d)) {
        out += format_double(*d);
      } else {
        quote(out, format_double(*d));
      }
    } else if (const auto* s = std::get_if<std::string>(&data_)) {
      quote(out, *s);
    } else if (const auto* a = std::get_if<Array>(&data_)) {
      if (a->empty()) {
        out += "[]";
        return;
      }
      out += '[';
      for (std::size_t k = 0; k < a->size(); ++k) {
        if (k) out += ',';
        newline(out, indent, depth + 1);
        (*a)[k].write(out, indent, depth + 1);
      }
      newline(out, indent, depth);
      out += ']';
    } else if (const auto* o = std::get_if<Object>(&data_)) {
      if (o->empty()) {
        out += "{}";
        return;
      }
      out += '{';
      for (std::size_t k = 0; k < o->size(); ++k) {
        if (k) out += ',';
        newline(out, indent, depth + 1);
        quote(out, (*o)[k].first);
        out += ": ";
        (*o)[k].second.write(out, indent, depth + 1);
      }
      newline(out, indent, depth);
      out += '}';
    }
  }

  std::variant<std::nullptr_t, bool, std::int64_t, std::uint64_t, double, std::string, Array, Object> data_;
};

}  // namespace byzfusion::json
