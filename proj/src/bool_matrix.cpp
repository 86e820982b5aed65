#include "cognilog/bool_matrix.hpp"

#include <bit>

#include "cognilog/error.hpp"

namespace cognilog {

BoolMatrix::BoolMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), bits_(rows * ((cols + kBits - 1) / kBits), 0) {}

BoolMatrix BoolMatrix::identity(std::size_t n) {
  BoolMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

bool BoolMatrix::get(std::size_t r, std::size_t c) const {
  return (row_ptr(r)[c / kBits] >> (c % kBits)) & 1u;
}

void BoolMatrix::set(std::size_t r, std::size_t c, bool value) {
  std::uint64_t mask = std::uint64_t{1} << (c % kBits);
  if (value)
    row_ptr(r)[c / kBits] |= mask;
  else
    row_ptr(r)[c / kBits] &= ~mask;
}

bool BoolMatrix::row_any(std::size_t r) const {
  const std::uint64_t* p = row_ptr(r);
  for (std::size_t w = 0; w < words_per_row(); ++w)
    if (p[w]) return true;
  return false;
}

bool BoolMatrix::col_any(std::size_t c) const {
  for (std::size_t r = 0; r < rows_; ++r)
    if (get(r, c)) return true;
  return false;
}

bool BoolMatrix::is_zero() const {
  for (auto w : bits_)
    if (w) return false;
  return true;
}

std::size_t BoolMatrix::count() const {
  std::size_t n = 0;
  for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

BoolMatrix BoolMatrix::operator*(const BoolMatrix& other) const {
  if (cols_ != other.rows_)
    throw Error(ErrorCode::dimension_mismatch, "product of " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                                                   " and " + std::to_string(other.rows_) + "x" +
                                                   std::to_string(other.cols_));
  BoolMatrix out(rows_, other.cols_);
  const std::size_t ow = other.words_per_row();
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t* dst = out.row_ptr(i);
    for (std::size_t k = 0; k < cols_; ++k) {
      if (!get(i, k)) continue;
      const std::uint64_t* src = other.row_ptr(k);
      for (std::size_t w = 0; w < ow; ++w) dst[w] |= src[w];
    }
  }
  return out;
}

BoolMatrix& BoolMatrix::operator+=(const BoolMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw Error(ErrorCode::dimension_mismatch, "sum of differently shaped matrices");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
  return *this;
}

BoolMatrix BoolMatrix::operator+(const BoolMatrix& other) const {
  BoolMatrix out = *this;
  out += other;
  return out;
}

BoolMatrix BoolMatrix::operator&(const BoolMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw Error(ErrorCode::dimension_mismatch, "AND of differently shaped matrices");
  BoolMatrix out = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] &= other.bits_[i];
  return out;
}

BoolMatrix BoolMatrix::transpose() const {
  BoolMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (get(r, c)) out.set(c, r);
  return out;
}

bool BoolMatrix::strictly_lower() const {
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r; c < cols_; ++c)
      if (get(r, c)) return false;
  return true;
}

bool BoolMatrix::strictly_upper() const { return transpose().strictly_lower(); }

std::vector<std::string> BoolMatrix::to_strings() const {
  std::vector<std::string> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::string row(cols_, '0');
    for (std::size_t c = 0; c < cols_; ++c)
      if (get(r, c)) row[c] = '1';
    out.push_back(std::move(row));
  }
  return out;
}

ClosureResult causal_closure(const BoolMatrix& m) {
  if (!m.square()) throw Error(ErrorCode::dimension_mismatch, "closure needs a square matrix");
  ClosureResult res{m, 0};
  BoolMatrix power = m;
  const std::size_t n = m.rows();
  // power holds M^(k+1) after k multiplications; M^n must vanish.
  while (!power.is_zero()) {
    if (res.multiplications + 1 >= n)
      throw Error(ErrorCode::not_triangular, "matrix is not nilpotent: the cause relation has a cycle");
    power = power * m;
    ++res.multiplications;
    res.closure += power;
  }
  return res;
}

BoolMatrix transitive_closure(const BoolMatrix& m) {
  if (!m.square()) throw Error(ErrorCode::dimension_mismatch, "closure needs a square matrix");
  BoolMatrix r = m;
  const std::size_t n = m.rows();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r.get(i, k))
        for (std::size_t j = 0; j < n; ++j)
          if (r.get(k, j)) r.set(i, j);
  return r;
}

}  // namespace cognilog
