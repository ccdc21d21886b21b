#include <cctype>

#include "affkit/expr.hpp"

namespace affkit {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr run() {
    Expr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  void expect_identifier(const std::string& name) {
    std::size_t at = pos_;
    if (identifier() != name) {
      pos_ = at;
      fail("expected '" + name + "'");
    }
  }

  std::string digits() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(src_.substr(start, pos_ - start));
  }

  // int ("/" posint)?; the slash binds to the literal only when a digit follows.
  Rational rational() {
    skip_ws();
    std::string text = digits();
    if (pos_ + 1 < src_.size() && src_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      ++pos_;
      std::size_t den_at = pos_;
      std::string den = digits();
      if (Rational(den) == 0) {
        pos_ = den_at;
        fail("zero denominator");
      }
      text += "/" + den;
    }
    Rational q(text);
    q.canonicalize();
    return q;
  }

  int signed_int() {
    bool negative = accept('-');
    if (!negative) accept('+');
    skip_ws();
    std::string d = digits();
    if (d.size() > 6) fail("exponent too large");
    int v = std::stoi(d);
    return negative ? -v : v;
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e += term();
      } else if (accept('-')) {
        e -= term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = factor();
    for (;;) {
      if (accept('*')) {
        e *= factor();
      } else if (peek() == '/') {
        ++pos_;
        skip_ws();
        std::size_t at = pos_;
        Expr d = factor();
        if (!d.is_unit_monomial()) {
          throw DivisionError("divisor '" + d.str() + "' is not a unit monomial x1^m*cos(x1)^c", at);
        }
        e *= d.unit_inverse();
      } else {
        return e;
      }
    }
  }

  Expr factor() {
    skip_ws();
    std::size_t at = pos_;
    Expr a = atom();
    if (accept('^')) {
      int n = signed_int();
      if (n < 0 && !a.is_unit_monomial()) {
        throw DivisionError("negative power of '" + a.str() + "', which is not a unit monomial", at);
      }
      a = a.pow(n);
    }
    return a;
  }

  void expect_x1_argument() {
    expect('(');
    expect_identifier("x1");
    expect(')');
  }

  Expr atom() {
    char c = peek();
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return Expr(Scalar(rational()));
    if (!std::isalpha(static_cast<unsigned char>(c))) {
      if (c == '\0') fail("unexpected end of input");
      fail("unexpected '" + std::string(1, c) + "'");
    }
    std::size_t at = pos_;
    std::string id = identifier();
    if (id == "i") return Expr(Scalar::i());
    if (id == "x1") return Expr::x1();
    if (id == "x2") return Expr::x2();
    if (id == "sin" || id == "cos" || id == "tan" || id == "sec") {
      expect_x1_argument();
      if (id == "sin") return Expr::sin();
      if (id == "cos") return Expr::cos();
      if (id == "tan") return Expr::tan();
      return Expr::sec();
    }
    if (id == "exp") {
      expect('(');
      Scalar f = exp_coefficient();
      expect(')');
      return Expr::exp_x2(f);
    }
    pos_ = at;
    fail("unknown symbol '" + id + "'");
  }

  bool at_imaginary_unit() {
    if (peek() != 'i') return false;
    return pos_ + 1 >= src_.size() || !std::isalnum(static_cast<unsigned char>(src_[pos_ + 1]));
  }

  // Consumes "*i" if present.
  bool accept_times_i() {
    std::size_t save = pos_;
    if (accept('*') && at_imaginary_unit()) {
      ++pos_;
      return true;
    }
    pos_ = save;
    return false;
  }

  // coef "*x2", with coef := rational | rational "*i" | rational ("+"|"-") rational "*i".
  // Also accepts the shorthand exp(x2), exp(-x2), exp(i*x2).
  Scalar exp_coefficient() {
    Rational sign = accept('-') ? -1 : 1;
    Scalar f;
    if (peek() == 'x') {
      expect_identifier("x2");
      return Scalar(sign);
    }
    if (at_imaginary_unit()) {
      ++pos_;
      f = Scalar(0, sign);
    } else {
      Rational r = sign * rational();
      if (accept_times_i()) {
        f = Scalar(0, r);
      } else {
        f = Scalar(r);
        char op = peek();
        std::size_t save = pos_;
        if (op == '+' || op == '-') {
          ++pos_;
          Rational s2 = op == '-' ? -1 : 1;
          if (at_imaginary_unit()) {
            ++pos_;
            f = Scalar(r, s2);
          } else if (std::isdigit(static_cast<unsigned char>(peek()))) {
            Rational r2 = rational();
            if (!accept_times_i()) fail("expected '*i' in exponential coefficient");
            f = Scalar(r, s2 * r2);
          } else {
            pos_ = save;
          }
        }
      }
    }
    expect('*');
    expect_identifier("x2");
    return f;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

}  // namespace affkit
