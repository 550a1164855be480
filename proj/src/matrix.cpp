#include "pacconf/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pacconf/error.hpp"

namespace pacconf {

SquareMatrix::SquareMatrix(std::size_t order) : order_(order), entries_(order * order, 0.0) {
  if (order == 0) throw DataError("matrix order must be at least 1");
}

SquareMatrix::SquareMatrix(std::size_t order, std::vector<double> entries)
    : order_(order), entries_(std::move(entries)) {
  if (order == 0) throw DataError("matrix order must be at least 1");
  if (entries_.size() != order * order) {
    throw DataError("expected " + std::to_string(order * order) + " entries, got " +
                    std::to_string(entries_.size()));
  }
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (!std::isfinite(entries_[k])) {
      throw DataError("non-finite matrix entry at (" + std::to_string(k / order) + ", " +
                      std::to_string(k % order) + ")");
    }
  }
}

SquareMatrix SquareMatrix::identity(std::size_t order) {
  std::vector<double> e(order * order, 0.0);
  for (std::size_t i = 0; i < order; ++i) e[i * order + i] = 1.0;
  return SquareMatrix(order, std::move(e));
}

SquareMatrix SquareMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> e;
  e.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw DataError("matrix rows must all have length " + std::to_string(n));
    e.insert(e.end(), r.begin(), r.end());
  }
  return SquareMatrix(n, std::move(e));
}

std::vector<std::vector<double>> SquareMatrix::to_rows() const {
  std::vector<std::vector<double>> rows(order_);
  for (std::size_t r = 0; r < order_; ++r) rows[r].assign(row(r).begin(), row(r).end());
  return rows;
}

SquareMatrix SquareMatrix::transpose() const {
  std::vector<double> e(entries_.size());
  for (std::size_t r = 0; r < order_; ++r)
    for (std::size_t c = 0; c < order_; ++c) e[c * order_ + r] = entries_[r * order_ + c];
  return SquareMatrix(order_, std::move(e));
}

double SquareMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

void require_same_order(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.order() != b.order()) {
    throw DimensionError("matrix orders differ: " + std::to_string(a.order()) + " vs " +
                         std::to_string(b.order()));
  }
}

}  // namespace

SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
  require_same_order(a, b);
  std::vector<double> e(a.entries_);
  for (std::size_t k = 0; k < e.size(); ++k) e[k] += b.entries_[k];
  return SquareMatrix(a.order_, std::move(e));
}

SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
  require_same_order(a, b);
  std::vector<double> e(a.entries_);
  for (std::size_t k = 0; k < e.size(); ++k) e[k] -= b.entries_[k];
  return SquareMatrix(a.order_, std::move(e));
}

SquareMatrix operator*(double s, const SquareMatrix& a) {
  std::vector<double> e(a.entries_);
  for (double& v : e) v *= s;
  return SquareMatrix(a.order_, std::move(e));
}

SymmetricMatrix::SymmetricMatrix(const SquareMatrix& m) : m_(m) {
  for (std::size_t r = 0; r < m.order(); ++r)
    for (std::size_t c = r + 1; c < m.order(); ++c)
      if (m(r, c) != m(c, r)) {
        throw DataError("matrix is not symmetric at (" + std::to_string(r) + ", " +
                        std::to_string(c) + ")");
      }
}

SymmetricMatrix SymmetricMatrix::from_upper(const SquareMatrix& m) {
  const std::size_t n = m.order();
  std::vector<double> e(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) e[r * n + c] = e[c * n + r] = m(r, c);
  return SymmetricMatrix(SquareMatrix(n, std::move(e)), Trusted{});
}

SymmetricMatrix dilate(const SquareMatrix& c) {
  const std::size_t q = c.order();
  const std::size_t n = 2 * q;
  std::vector<double> e(n * n, 0.0);
  for (std::size_t r = 0; r < q; ++r) {
    for (std::size_t k = 0; k < q; ++k) {
      e[r * n + (q + k)] = c(r, k);  // upper-right block: C
      e[(q + k) * n + r] = c(r, k);  // lower-left block: C^T
    }
  }
  return SymmetricMatrix(SquareMatrix(n, std::move(e)));
}

std::vector<double> symmetric_eigenvalues(const SymmetricMatrix& sym, const JacobiOptions& opts) {
  const std::size_t n = sym.order();
  const auto src = sym.matrix().entries();
  std::vector<double> a(src.begin(), src.end());
  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * n + c]; };

  double frob_sq = 0.0;
  for (double v : a) frob_sq += v * v;
  const double threshold = opts.tolerance * std::max(1.0, std::sqrt(frob_sq));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r + 1; c < n; ++c) s += 2.0 * at(r, c) * at(r, c);
    return std::sqrt(s);
  };

  double residual = off_norm();
  int sweep = 0;
  while (residual > threshold) {
    if (sweep == opts.max_sweeps) {
      throw NumericalError("Jacobi eigensolver did not converge in " +
                               std::to_string(opts.max_sweeps) + " sweeps (residual " +
                               std::to_string(residual) + ")",
                           residual);
    }
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double app = at(p, p);
        const double aqq = at(q, q);
        // Rotation angle that annihilates (p, q); the smaller root of
        // t^2 + 2 theta t - 1 = 0 keeps |angle| <= pi/4.
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        at(p, q) = at(q, p) = 0.0;
      }
    }
    residual = off_norm();
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double max_eigenvalue_symmetric(const SymmetricMatrix& a, const JacobiOptions& opts) {
  return symmetric_eigenvalues(a, opts).back();
}

double operator_norm(const SquareMatrix& c, const JacobiOptions& opts) {
  // The dilation's spectrum is {+s_i, -s_i}, so its top eigenvalue is >= 0
  // up to rounding.
  return std::max(0.0, max_eigenvalue_symmetric(dilate(c), opts));
}

}  // namespace pacconf
