#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "topochain/errors.hpp"

namespace topochain {

using Complex = std::complex<double>;

/// Dense complex vector (Euclidean norm contract).
class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t n) : v_(n, Complex{0.0, 0.0}) {}
  ComplexVector(std::initializer_list<Complex> xs) : v_(xs) {}
  explicit ComplexVector(std::vector<Complex> xs) : v_(std::move(xs)) {}

  std::size_t size() const { return v_.size(); }
  Complex& operator[](std::size_t i) { return v_[i]; }
  const Complex& operator[](std::size_t i) const { return v_[i]; }
  const std::vector<Complex>& data() const { return v_; }

  double norm() const {
    double s = 0.0;
    for (const Complex& x : v_) s += std::norm(x);
    return std::sqrt(s);
  }

 private:
  std::vector<Complex> v_;
};

/// Dense complex matrix, row-major. Frobenius norm contract.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, Complex{0.0, 0.0}) {}

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const Complex& x : a_) s += std::norm(x);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const Complex& x : a_) m = std::max(m, std::abs(x));
    return m;
  }

  /// max |M(i,j) - conj(M(j,i))| over all entries; requires a square matrix.
  double hermiticity_defect() const {
    double d = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
  }

  ComplexVector multiply(const ComplexVector& x) const {
    ComplexVector y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      Complex acc{0.0, 0.0};
      for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
      y[i] = acc;
    }
    return y;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Complex> a_;
};

/// Ascending eigenvalues and matching orthonormal eigenvector columns.
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix vectors;
};

namespace detail {

using EigenRowMajor =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Eigen::Map<const EigenRowMajor> map_of(const ComplexMatrix& m) {
  return {&m(0, 0), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

inline void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw ValidationError(std::string(who) + ": matrix must be square and non-empty, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

}  // namespace detail

/// Full spectrum of a Hermitian matrix.
///
/// Contract: values ascending; each pair satisfies
/// ||M v - lambda v|| <= 1e-10 ||M||_F ||v||, and the eigenvector columns are
/// orthonormal to 1e-10. Rejects matrices whose hermiticity defect exceeds
/// 1e-12 * max|M|.
inline HermitianEigen hermitian_eig(const ComplexMatrix& m) {
  detail::require_square(m, "hermitian_eig");
  const double defect = m.hermiticity_defect();
  if (defect > 1e-12 * m.max_abs())
    throw ValidationError("hermitian_eig: matrix is not Hermitian (asymmetry " +
                          std::to_string(defect) + ", max entry " +
                          std::to_string(m.max_abs()) + ")");
  Eigen::SelfAdjointEigenSolver<detail::EigenRowMajor> solver(detail::map_of(m));
  if (solver.info() != Eigen::Success)
    throw NumericalError("hermitian_eig: eigensolver failed to converge at dimension " +
                         std::to_string(m.rows()));
  const std::size_t n = m.rows();
  HermitianEigen out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < n; ++j)
      out.vectors(i, j) = solver.eigenvectors()(static_cast<Eigen::Index>(i),
                                                static_cast<Eigen::Index>(j));
  }
  return out;
}

/// Solves A x = b by LU with partial pivoting.
///
/// Contract: ||A x - b|| <= 1e-10 ||A||_F ||x||. A pivot below
/// 1e-14 ||A||_F marks the matrix as numerically singular.
inline ComplexVector solve_linear(const ComplexMatrix& a, const ComplexVector& b) {
  detail::require_square(a, "solve_linear");
  if (a.rows() != b.size())
    throw ValidationError("solve_linear: dimension mismatch, matrix " +
                          std::to_string(a.rows()) + ", rhs " + std::to_string(b.size()));
  Eigen::PartialPivLU<detail::EigenRowMajor> lu(detail::map_of(a));
  const double pivot_floor = 1e-14 * a.frobenius_norm();
  const auto diag = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i)
    if (std::abs(diag(i)) <= pivot_floor)
      throw NumericalError("solve_linear: singular or rank-deficient matrix (pivot " +
                           std::to_string(std::abs(diag(i))) + " below threshold " +
                           std::to_string(pivot_floor) + ")");
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < b.size(); ++i) rhs(static_cast<Eigen::Index>(i)) = b[i];
  Eigen::VectorXcd x = lu.solve(rhs);
  ComplexVector out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = x(static_cast<Eigen::Index>(i));
  return out;
}

/// Single element (i, j) of the inverse, computed as e_i . solve(A, e_j).
inline Complex inverse_element(const ComplexMatrix& a, std::size_t i, std::size_t j) {
  detail::require_square(a, "inverse_element");
  if (i >= a.rows() || j >= a.cols())
    throw ValidationError("inverse_element: index out of range");
  ComplexVector unit(a.rows());
  unit[j] = 1.0;
  return solve_linear(a, unit)[i];
}

}  // namespace topochain
