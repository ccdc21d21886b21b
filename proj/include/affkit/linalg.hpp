#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "affkit/scalar.hpp"

namespace affkit {

using ScalarVec = std::vector<Scalar>;

// Dense exact matrix over the Gaussian rationals, row-major.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ExactMatrix identity(std::size_t n);
  static ExactMatrix from_rows(const std::vector<ScalarVec>& rows, std::size_t cols);
  static ExactMatrix from_columns(const std::vector<ScalarVec>& cols, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  ScalarVec row(std::size_t r) const;
  ScalarVec column(std::size_t c) const;
  void append_row(const ScalarVec& row);

  ExactMatrix operator*(const ExactMatrix& o) const;
  ScalarVec operator*(const ScalarVec& v) const;
  ExactMatrix operator+(const ExactMatrix& o) const;
  ExactMatrix operator-(const ExactMatrix& o) const;
  ExactMatrix scaled(const Scalar& k) const;
  ExactMatrix transpose() const;
  bool is_zero() const;
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(ExactMatrix& m);
std::size_t rank(ExactMatrix m);
// Basis of {v : m v = 0}, one vector per free column, in column order.
std::vector<ScalarVec> nullspace(ExactMatrix m);
// Some x with m x = b, or nullopt when inconsistent.
std::optional<ScalarVec> solve(const ExactMatrix& m, const ScalarVec& b);
Scalar determinant(ExactMatrix m);

bool is_zero(const ScalarVec& v);
ScalarVec operator+(const ScalarVec& a, const ScalarVec& b);
ScalarVec operator-(const ScalarVec& a, const ScalarVec& b);
ScalarVec scaled(const ScalarVec& v, const Scalar& k);

// Polynomials are coefficient vectors, lowest degree first.
using Poly = std::vector<Scalar>;

// det(t I - m), monic, via Faddeev-LeVerrier.
Poly characteristic_polynomial(const ExactMatrix& m);
Scalar eval_poly(const Poly& p, const Scalar& t);
// p / (t - root), assuming root is a root.
Poly deflate(const Poly& p, const Scalar& root);
// Distinct rational roots of a polynomial with rational coefficients, with
// multiplicities, ascending. Non-rational coefficients yield no roots.
std::vector<std::pair<Rational, int>> rational_roots(const Poly& p);
void trim(Poly& p);

}  // namespace affkit
