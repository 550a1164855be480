#pragma once

// Dense small square matrices, the self-adjoint dilation and the operator norm.
//
// Entries are stored row-major; entry (p, q) is row p, column q. Every value
// is immutable once built and all entries are checked finite at construction.

#include <cstddef>
#include <span>
#include <vector>

namespace pacconf {

class SquareMatrix {
 public:
  /// Zero matrix of the given order.
  explicit SquareMatrix(std::size_t order);

  /// Takes `entries` in row-major order; throws DataError on a size mismatch
  /// or on any NaN/Inf entry.
  SquareMatrix(std::size_t order, std::vector<double> entries);

  static SquareMatrix identity(std::size_t order);
  static SquareMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t order() const noexcept { return order_; }
  double operator()(std::size_t row, std::size_t col) const noexcept {
    return entries_[row * order_ + col];
  }
  std::span<const double> entries() const noexcept { return entries_; }
  std::span<const double> row(std::size_t r) const noexcept {
    return std::span<const double>(entries_).subspan(r * order_, order_);
  }
  std::vector<std::vector<double>> to_rows() const;

  SquareMatrix transpose() const;
  double max_abs() const noexcept;

  friend SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b);
  friend SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b);
  friend SquareMatrix operator*(double s, const SquareMatrix& a);
  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t order_;
  std::vector<double> entries_;
};

/// Exactly symmetric matrix. Construction from a full array rejects any
/// asymmetric pair; `from_upper` mirrors the upper triangle.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(const SquareMatrix& m);
  static SymmetricMatrix from_upper(const SquareMatrix& m);

  std::size_t order() const noexcept { return m_.order(); }
  double operator()(std::size_t r, std::size_t c) const noexcept { return m_(r, c); }
  const SquareMatrix& matrix() const noexcept { return m_; }

 private:
  struct Trusted {};
  SymmetricMatrix(SquareMatrix m, Trusted) : m_(std::move(m)) {}
  SquareMatrix m_;
};

struct JacobiOptions {
  /// Sweeps stop once the off-diagonal Frobenius norm drops to
  /// `tolerance * max(1, ||A||_F)`.
  double tolerance = 1e-13;
  int max_sweeps = 100;
};

/// [[0, C], [C^T, 0]], of order 2Q.
SymmetricMatrix dilate(const SquareMatrix& c);

/// All eigenvalues in ascending order, by cyclic Jacobi rotations.
/// Throws NumericalError (carrying the off-diagonal residual) when the sweep
/// budget is exhausted.
std::vector<double> symmetric_eigenvalues(const SymmetricMatrix& a,
                                          const JacobiOptions& opts = {});

double max_eigenvalue_symmetric(const SymmetricMatrix& a, const JacobiOptions& opts = {});

/// Largest singular value of `c`, read off as the top eigenvalue of its dilation.
double operator_norm(const SquareMatrix& c, const JacobiOptions& opts = {});

}  // namespace pacconf
