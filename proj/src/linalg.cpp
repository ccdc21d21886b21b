#include "affkit/linalg.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "affkit/error.hpp"

namespace affkit {

ExactMatrix ExactMatrix::identity(std::size_t n) {
  ExactMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
  return m;
}

ExactMatrix ExactMatrix::from_rows(const std::vector<ScalarVec>& rows, std::size_t cols) {
  ExactMatrix m(0, cols);
  for (const ScalarVec& r : rows) m.append_row(r);
  return m;
}

ExactMatrix ExactMatrix::from_columns(const std::vector<ScalarVec>& cols, std::size_t rows) {
  ExactMatrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw std::invalid_argument("column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

ScalarVec ExactMatrix::row(std::size_t r) const {
  return ScalarVec(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

ScalarVec ExactMatrix::column(std::size_t c) const {
  ScalarVec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void ExactMatrix::append_row(const ScalarVec& row) {
  if (row.size() != cols_) throw std::invalid_argument("row length mismatch");
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
  ExactMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        if (!o(k, j).is_zero()) r(i, j) += a * o(k, j);
      }
    }
  }
  return r;
}

ScalarVec ExactMatrix::operator*(const ScalarVec& v) const {
  if (v.size() != cols_) throw std::invalid_argument("matrix-vector shape mismatch");
  ScalarVec r(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      if (!(*this)(i, k).is_zero() && !v[k].is_zero()) r[i] += (*this)(i, k) * v[k];
    }
  }
  return r;
}

ExactMatrix ExactMatrix::operator+(const ExactMatrix& o) const {
  ExactMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
  return r;
}

ExactMatrix ExactMatrix::operator-(const ExactMatrix& o) const {
  ExactMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
  return r;
}

ExactMatrix ExactMatrix::scaled(const Scalar& k) const {
  ExactMatrix r = *this;
  for (Scalar& x : r.data_) x *= k;
  return r;
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

bool ExactMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
}

std::vector<std::size_t> rref(ExactMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    }
    Scalar inv = m(r, c).inverse();
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Scalar f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) {
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank(ExactMatrix m) { return rref(m).size(); }

std::vector<ScalarVec> nullspace(ExactMatrix m) {
  std::vector<std::size_t> pivots = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t p : pivots) is_pivot[p] = true;
  std::vector<ScalarVec> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    ScalarVec v(m.cols());
    v[f] = Scalar(1);
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<ScalarVec> solve(const ExactMatrix& m, const ScalarVec& b) {
  ExactMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  std::vector<std::size_t> pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  ScalarVec x(m.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, m.cols());
  return x;
}

Scalar determinant(ExactMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  Scalar det(1);
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return Scalar();
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    Scalar inv = m(c, c).inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      Scalar f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

bool is_zero(const ScalarVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

ScalarVec operator+(const ScalarVec& a, const ScalarVec& b) {
  ScalarVec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

ScalarVec operator-(const ScalarVec& a, const ScalarVec& b) {
  ScalarVec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

ScalarVec scaled(const ScalarVec& v, const Scalar& k) {
  ScalarVec r = v;
  for (Scalar& x : r) x *= k;
  return r;
}

Poly characteristic_polynomial(const ExactMatrix& a) {
  const std::size_t n = a.rows();
  // c_n = 1; M_k = A M_{k-1} + c_{n-k+1} I; c_{n-k} = -tr(A M_k) / k.
  Poly c(n + 1);
  c[n] = Scalar(1);
  ExactMatrix mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = a * mk;
    for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[n - k + 1];
    ExactMatrix am = a * mk;
    Scalar tr;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / Scalar(static_cast<long>(k));
  }
  return c;
}

Scalar eval_poly(const Poly& p, const Scalar& t) {
  Scalar acc;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Poly deflate(const Poly& p, const Scalar& root) {
  if (p.size() < 2) return {};
  Poly q(p.size() - 1);
  Scalar carry;
  for (std::size_t i = p.size() - 1; i >= 1; --i) {
    carry = p[i] + carry * root;
    q[i - 1] = carry;
  }
  return q;
}

void trim(Poly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

namespace {

std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  std::vector<mpz_class> out;
  if (n == 0) return out;
  // Coefficients here come from at most 6x6 structure-constant matrices with
  // small entries, so trial division is adequate.
  for (mpz_class d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      if (d * d != n) out.push_back(n / d);
    }
  }
  return out;
}

}  // namespace

std::vector<std::pair<Rational, int>> rational_roots(const Poly& input) {
  Poly p = input;
  trim(p);
  std::vector<std::pair<Rational, int>> roots;
  if (p.size() < 2) return roots;
  for (const Scalar& s : p) {
    if (!s.is_real()) return roots;
  }
  int zero_mult = 0;
  while (p.size() > 1 && p.front().is_zero()) {
    p.erase(p.begin());
    ++zero_mult;
  }
  if (zero_mult > 0) roots.emplace_back(Rational(0), zero_mult);
  if (p.size() >= 2) {
    mpz_class lcm_den = 1;
    for (const Scalar& s : p) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), s.re().get_den_mpz_t());
    std::vector<mpz_class> ints;
    for (const Scalar& s : p) ints.push_back(Rational(s.re() * lcm_den).get_num());
    std::vector<mpz_class> num = divisors(ints.front());
    std::vector<mpz_class> den = divisors(ints.back());
    std::map<Rational, int> found;
    for (const mpz_class& a : num) {
      for (const mpz_class& b : den) {
        for (int sign : {1, -1}) {
          Rational cand(sign * a, b);
          cand.canonicalize();
          if (found.count(cand)) continue;
          int mult = 0;
          Poly q = p;
          while (q.size() >= 2 && eval_poly(q, Scalar(cand)).is_zero()) {
            q = deflate(q, Scalar(cand));
            ++mult;
          }
          if (mult > 0) found[cand] = mult;
        }
      }
    }
    for (auto& [r, m] : found) roots.emplace_back(r, m);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace affkit
