#include "nfold/cli/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "nfold/error.hpp"

namespace nfold::cli {

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::string_view variable) : text_(text), variable_(variable) {}

  ScalarFunction parse() {
    ScalarFunction f = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError, what + " at position " + std::to_string(pos_) + " in \"" +
                                           std::string(text_) + "\"");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  ScalarFunction expr() {
    ScalarFunction f = term();
    for (;;) {
      if (accept('+')) {
        f = f + term();
      } else if (accept('-')) {
        f = f - term();
      } else {
        return f;
      }
    }
  }

  ScalarFunction term() {
    ScalarFunction f = unary();
    for (;;) {
      if (accept('*')) {
        f = f * unary();
      } else if (accept('/')) {
        f = f / unary();
      } else {
        return f;
      }
    }
  }

  ScalarFunction unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  ScalarFunction power() {
    ScalarFunction base = atom();
    if (!accept('^')) return base;
    const ScalarFunction exponent = unary();
    if (const Complex* c = exponent.constant_value()) {
      const double re = c->real();
      if (c->imag() == 0.0 && re == std::round(re) && std::abs(re) <= 64.0) return pow(base, static_cast<int>(re));
      return pow(base, *c);
    }
    return exp(exponent * log(base));
  }

  ScalarFunction atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (accept('(')) {
      ScalarFunction f = expr();
      expect(')');
      return f;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  ScalarFunction number() {
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, text_.data() + text_.size(), value);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return ScalarFunction::constant(value);
  }

  ScalarFunction name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string_view id = text_.substr(start, pos_ - start);
    if (id == variable_) return ScalarFunction::variable();
    if (id == "pi") return ScalarFunction::constant(std::numbers::pi);
    if (id == "i") return ScalarFunction::constant(Complex(0.0, 1.0));
    using Fn = ScalarFunction (*)(const ScalarFunction&);
    static const std::pair<std::string_view, Fn> functions[] = {
        {"exp", [](const ScalarFunction& f) { return exp(f); }},
        {"log", [](const ScalarFunction& f) { return log(f); }},
        {"sqrt", [](const ScalarFunction& f) { return sqrt(f); }},
        {"sin", [](const ScalarFunction& f) { return sin(f); }},
        {"cos", [](const ScalarFunction& f) { return cos(f); }},
        {"sinh", [](const ScalarFunction& f) { return sinh(f); }},
        {"cosh", [](const ScalarFunction& f) { return cosh(f); }},
        {"tanh", [](const ScalarFunction& f) { return tanh(f); }},
        {"atan", [](const ScalarFunction& f) { return atan(f); }},
    };
    for (const auto& [fname, fn] : functions) {
      if (id == fname) {
        expect('(');
        ScalarFunction arg = expr();
        expect(')');
        return fn(arg);
      }
    }
    pos_ = start;
    fail("unknown name '" + std::string(id) + "'");
  }

  std::string_view text_;
  std::string_view variable_;
  std::size_t pos_ = 0;
};

}  // namespace

ScalarFunction parse_expression(std::string_view text, std::string_view variable) {
  return Parser(text, variable).parse();
}

}  // namespace nfold::cli
