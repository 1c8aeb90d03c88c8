#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "lph/poly.hpp"

namespace lph {

namespace {

// Recursive-descent parser over a single line.
//
//   expr    := ['+'|'-'] term (('+'|'-') term)*
//   term    := factor (['*'] factor)*        implicit '*' when a factor follows
//   factor  := ['-'] primary ['^' integer]
//   primary := number | identifier | '(' expr ')'
class LineParser {
 public:
  LineParser(std::string_view text, const std::vector<std::string>& vars, int line, int column_offset)
      : text_(text), vars_(vars), line_(line), column_offset_(column_offset) {}

  MultiPoly parse() {
    skip_ws();
    if (at_end()) fail("empty polynomial");
    MultiPoly p = expr();
    skip_ws();
    if (!at_end()) fail(std::string("unexpected character '") + text_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, column_offset_ + static_cast<int>(pos_) + 1);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool starts_factor() const {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' ||
           std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  MultiPoly expr() {
    skip_ws();
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = peek() == '-';
      ++pos_;
    }
    MultiPoly acc = term();
    if (negate) acc = -acc;
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      MultiPoly rhs = term();
      if (c == '+') {
        acc += rhs;
      } else {
        acc -= rhs;
      }
    }
    return acc;
  }

  MultiPoly term() {
    MultiPoly acc = factor();
    for (;;) {
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        acc = acc * factor();
      } else if (starts_factor()) {
        acc = acc * factor();
      } else {
        break;
      }
    }
    return acc;
  }

  MultiPoly factor() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return -factor();
    }
    MultiPoly base = primary();
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      const std::size_t start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (start == pos_) fail("expected non-negative integer exponent after '^'");
      int e = 0;
      auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, e);
      if (ec != std::errc()) fail("exponent out of range");
      skip_ws();
      if (peek() == '^') fail("chained '^' is not allowed");
      return base.pow(e);
    }
    return base;
  }

  MultiPoly primary() {
    skip_ws();
    const char c = peek();
    if (c == '(') {
      ++pos_;
      MultiPoly inner = expr();
      skip_ws();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (at_end()) fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  MultiPoly number() {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (peek() == '.') {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    // Exponent only if digits follow, so "2e" still reads as 2 * e.
    if (peek() == 'e' || peek() == 'E') {
      std::size_t q = pos_ + 1;
      if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
      if (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) {
        pos_ = q;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return MultiPoly::constant(vars_.size(), Complex(value));
  }

  MultiPoly identifier() {
    const std::size_t start = pos_;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    const auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it != vars_.end()) {
      return MultiPoly::variable(vars_.size(), static_cast<std::size_t>(it - vars_.begin()));
    }
    if (name == "I") return MultiPoly::constant(vars_.size(), Complex(0.0, 1.0));
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  int line_;
  int column_offset_;
  std::size_t pos_ = 0;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

MultiPoly parse_poly(const std::string& text, const std::vector<std::string>& variable_order, int line,
                     int column_offset) {
  return LineParser(text, variable_order, line, column_offset).parse();
}

PolySystem parse(const std::string& text, const std::vector<std::string>& variable_order) {
  PolySystem sys(variable_order.size());
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    sys.push_back(parse_poly(line, variable_order, line_no));
  }
  return sys;
}

std::string to_string(const MultiPoly& p, const std::vector<std::string>& variable_names) {
  if (variable_names.size() != p.n_vars()) throw DimensionMismatch("variable name count mismatch");
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    std::string mono;
    for (std::size_t i = 0; i < p.n_vars(); ++i) {
      const int e = t.exponents[i];
      if (e == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += variable_names[i];
      if (e > 1) mono += "^" + std::to_string(e);
    }
    const Complex c = t.coefficient;
    std::string coef;
    bool negative = false;
    if (c.imag() == 0.0) {
      negative = c.real() < 0.0;
      const double mag = std::abs(c.real());
      if (mag != 1.0 || mono.empty()) coef = format_double(mag);
    } else {
      coef = "(" + format_double(c.real()) + (c.imag() < 0.0 ? " - " : " + ") +
             format_double(std::abs(c.imag())) + "*I)";
    }
    std::string body = coef;
    if (!coef.empty() && !mono.empty()) body += "*";
    body += mono;
    if (first) {
      out += negative ? "-" + body : body;
    } else {
      out += negative ? " - " + body : " + " + body;
    }
    first = false;
  }
  return out;
}

}  // namespace lph
