#include "affkit/expr.hpp"

#include <algorithm>
#include <sstream>

namespace affkit {

int Term::compare_key(const Term& a, const Term& b) {
  if (int c = Scalar::compare(a.freq, b.freq); c != 0) return c;
  auto three_way = [](int x, int y) { return x < y ? -1 : (x > y ? 1 : 0); };
  if (a.p1 != b.p1) return three_way(a.p1, b.p1);
  if (a.p2 != b.p2) return three_way(a.p2, b.p2);
  if (a.s != b.s) return three_way(a.s, b.s);
  return three_way(a.c, b.c);
}

Expr::Expr(const Scalar& v) {
  if (!v.is_zero()) terms_.push_back(Term{v, 0, 0, 0, 0, Scalar()});
}

Expr Expr::from_terms(std::vector<Term> terms) {
  // sin^2 -> 1 - cos^2 until every stored term has s in {0, 1}.
  std::vector<Term> reduced;
  reduced.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    Term t = terms[i];
    if (t.p2 < 0) throw Error("negative power of x2 is outside the expression class");
    if (t.s < 0) throw Error("negative power of sin(x1) is outside the expression class");
    if (t.s >= 2) {
      Term other = t;
      other.s -= 2;
      other.c += 2;
      other.coeff = -other.coeff;
      t.s -= 2;
      terms.push_back(t);
      terms.push_back(std::move(other));
      continue;
    }
    reduced.push_back(std::move(t));
  }
  std::sort(reduced.begin(), reduced.end(),
            [](const Term& a, const Term& b) { return Term::compare_key(a, b) < 0; });
  Expr e;
  for (Term& t : reduced) {
    if (!e.terms_.empty() && e.terms_.back().same_key(t)) {
      e.terms_.back().coeff += t.coeff;
    } else {
      e.terms_.push_back(std::move(t));
    }
  }
  std::erase_if(e.terms_, [](const Term& t) { return t.coeff.is_zero(); });
  return e;
}

Expr Expr::monomial(Scalar coeff, int p1, int p2, int s, int c, Scalar freq) {
  return from_terms({Term{std::move(coeff), p1, p2, s, c, std::move(freq)}});
}

Scalar Expr::constant_value() const {
  if (!is_constant()) throw Error("expression '" + str() + "' is not constant");
  return terms_.empty() ? Scalar() : terms_[0].coeff;
}

Expr Expr::operator-() const {
  Expr r = *this;
  for (Term& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

Expr& Expr::operator+=(const Expr& o) {
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    int cmp = a == terms_.end() ? 1 : (b == o.terms_.end() ? -1 : Term::compare_key(*a, *b));
    if (cmp < 0) {
      merged.push_back(*a++);
    } else if (cmp > 0) {
      merged.push_back(*b++);
    } else {
      Term t = *a++;
      t.coeff += (b++)->coeff;
      if (!t.coeff.is_zero()) merged.push_back(std::move(t));
    }
  }
  terms_ = std::move(merged);
  return *this;
}

Expr& Expr::operator-=(const Expr& o) { return *this += -o; }

Expr operator*(const Expr& a, const Expr& b) {
  std::vector<Term> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const Term& x : a.terms_) {
    for (const Term& y : b.terms_) {
      out.push_back(Term{x.coeff * y.coeff, x.p1 + y.p1, x.p2 + y.p2, x.s + y.s, x.c + y.c, x.freq + y.freq});
    }
  }
  return Expr::from_terms(std::move(out));
}

Expr& Expr::operator*=(const Expr& o) { return *this = *this * o; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!a.terms_[i].same_key(b.terms_[i]) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

Expr Expr::scaled(const Scalar& k) const {
  if (k.is_zero()) return Expr();
  Expr r = *this;
  for (Term& t : r.terms_) t.coeff *= k;
  return r;
}

bool Expr::is_unit_monomial() const {
  if (terms_.size() != 1) return false;
  const Term& t = terms_[0];
  return t.coeff.is_real() && abs(t.coeff.re()) == 1 && t.p2 == 0 && t.s == 0 && t.freq.is_zero();
}

Expr Expr::unit_inverse() const {
  if (!is_unit_monomial()) throw Error("'" + str() + "' is not a unit monomial x1^m*cos(x1)^c");
  const Term& t = terms_[0];
  return monomial(t.coeff, -t.p1, 0, 0, -t.c);
}

Expr Expr::pow(int exponent) const {
  if (exponent < 0) return unit_inverse().pow(-exponent);
  Expr result(1);
  Expr base = *this;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return result;
}

Expr Expr::diff(Var v) const {
  std::vector<Term> out;
  for (const Term& t : terms_) {
    if (v == Var::x1) {
      if (t.p1 != 0) {
        Term d = t;
        d.coeff *= Scalar(t.p1);
        d.p1 -= 1;
        out.push_back(d);
      }
      if (t.s == 0) {
        // d cos^c = -c sin cos^(c-1)
        if (t.c != 0) {
          Term d = t;
          d.coeff *= Scalar(-t.c);
          d.s = 1;
          d.c -= 1;
          out.push_back(d);
        }
      } else {
        // d (sin cos^c) = (1 + c) cos^(c+1) - c cos^(c-1)
        Term up = t;
        up.s = 0;
        up.c += 1;
        up.coeff *= Scalar(1 + t.c);
        out.push_back(up);
        if (t.c != 0) {
          Term down = t;
          down.s = 0;
          down.c -= 1;
          down.coeff *= Scalar(-t.c);
          out.push_back(down);
        }
      }
    } else {
      if (t.p2 != 0) {
        Term d = t;
        d.coeff *= Scalar(t.p2);
        d.p2 -= 1;
        out.push_back(d);
      }
      if (!t.freq.is_zero()) {
        Term d = t;
        d.coeff *= t.freq;
        out.push_back(d);
      }
    }
  }
  return from_terms(std::move(out));
}

Expr Expr::conjugate() const {
  std::vector<Term> out = terms_;
  for (Term& t : out) {
    t.coeff = t.coeff.conj();
    t.freq = t.freq.conj();
  }
  // Conjugating frequencies can reorder keys.
  return from_terms(std::move(out));
}

Scalar Expr::eval_exact(const Rational& x1, const Rational& x2) const {
  Scalar total;
  for (const Term& t : terms_) {
    if ((t.s != 0 || t.c != 0) && sgn(x1) != 0) {
      throw NotExactlyEvaluable("sin/cos(x1) at x1 = " + x1.get_str() + " is not rational");
    }
    if (!t.freq.is_zero() && sgn(x2) != 0) {
      throw NotExactlyEvaluable("exp(" + t.freq.str() + "*x2) at x2 = " + x2.get_str() + " is not rational");
    }
    if (t.p1 < 0 && sgn(x1) == 0) {
      throw NotExactlyEvaluable("x1^" + std::to_string(t.p1) + " has a pole at x1 = 0");
    }
    if (t.s != 0) continue;  // sin(0) = 0
    Scalar v = t.coeff;
    if (t.p1 != 0) v *= affkit::pow(Scalar(x1), t.p1);
    if (t.p2 != 0) v *= affkit::pow(Scalar(x2), t.p2);
    total += v;
  }
  return total;
}

std::complex<double> Expr::eval_numeric(double x1, double x2) const {
  return evaluate<std::complex<double>>(x1, x2);
}

namespace {

std::string power(const std::string& base, int k) { return k == 1 ? base : base + "^" + std::to_string(k); }

std::string freq_text(const Scalar& f) {
  if (f.is_real()) return f.re().get_str();
  std::string im = f.im().get_str() + "*i";
  if (sgn(f.re()) == 0) return im;
  return f.re().get_str() + (sgn(f.im()) > 0 ? "+" : "") + im;
}

std::string term_text(const Term& t) {
  std::vector<std::string> num;
  std::vector<std::string> den;
  if (t.p1 > 0) num.push_back(power("x1", t.p1));
  if (t.p2 > 0) num.push_back(power("x2", t.p2));
  if (t.s != 0) num.push_back("sin(x1)");
  if (t.c > 0) num.push_back(power("cos(x1)", t.c));
  if (!t.freq.is_zero()) num.push_back("exp(" + freq_text(t.freq) + "*x2)");
  if (t.p1 < 0) den.push_back(power("x1", -t.p1));
  if (t.c < 0) den.push_back(power("cos(x1)", -t.c));

  std::string out;
  const Scalar& k = t.coeff;
  if (num.empty()) {
    if (k.is_real()) {
      out = k.re().get_str();
    } else if (sgn(k.re()) == 0) {
      out = k.str();
    } else {
      out = "(" + k.str() + ")";
    }
  } else {
    if (k.is_one()) {
    } else if (k.is_real() && k.re() == -1) {
      out = "-";
    } else if (k.is_real() || sgn(k.re()) == 0) {
      out = k.str() + "*";
    } else {
      out = "(" + k.str() + ")*";
    }
    for (std::size_t i = 0; i < num.size(); ++i) {
      if (i > 0) out += "*";
      out += num[i];
    }
  }
  for (const std::string& d : den) out += "/" + d;
  return out;
}

}  // namespace

std::string Expr::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    std::string t = term_text(terms_[i]);
    if (i == 0) {
      out = t;
    } else if (t[0] == '-') {
      out += " - " + t.substr(1);
    } else {
      out += " + " + t;
    }
  }
  return out;
}

}  // namespace affkit
