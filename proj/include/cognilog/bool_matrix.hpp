#pragma once

// Bit-packed Boolean matrix over the (OR, AND) semiring: 1 + 1 = 1.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cognilog {

class BoolMatrix {
 public:
  BoolMatrix() = default;
  BoolMatrix(std::size_t rows, std::size_t cols);

  static BoolMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  bool get(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, bool value = true);

  bool row_any(std::size_t r) const;
  bool col_any(std::size_t c) const;
  bool is_zero() const;
  std::size_t count() const;

  /// Boolean product; throws dimension_mismatch.
  BoolMatrix operator*(const BoolMatrix& other) const;
  /// Element-wise OR; throws dimension_mismatch.
  BoolMatrix operator+(const BoolMatrix& other) const;
  BoolMatrix& operator+=(const BoolMatrix& other);
  /// Element-wise AND.
  BoolMatrix operator&(const BoolMatrix& other) const;
  BoolMatrix transpose() const;

  /// True when every entry at or above the diagonal is zero.
  bool strictly_lower() const;
  bool strictly_upper() const;

  /// Rows as "0101" strings.
  std::vector<std::string> to_strings() const;

  bool operator==(const BoolMatrix&) const = default;

 private:
  static constexpr std::size_t kBits = 64;
  std::size_t words_per_row() const noexcept { return (cols_ + kBits - 1) / kBits; }
  const std::uint64_t* row_ptr(std::size_t r) const { return bits_.data() + r * words_per_row(); }
  std::uint64_t* row_ptr(std::size_t r) { return bits_.data() + r * words_per_row(); }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct ClosureResult {
  BoolMatrix closure;
  /// Boolean multiplications performed.
  std::size_t multiplications = 0;
};

/// Sum of M^k for k >= 1 on a nilpotent (acyclic) square matrix, by the
/// power series. Uses at most n - 1 multiplications; throws not_triangular
/// if M^n is still non-zero.
ClosureResult causal_closure(const BoolMatrix& m);

/// Transitive closure of any square matrix (reachability in >= 1 steps).
BoolMatrix transitive_closure(const BoolMatrix& m);

}  // namespace cognilog
