// Small dense linear algebra used by the integrators.
//
// Everything here is sized for the handful of degrees of freedom the
// oscillatory test problems carry (d <= 32). Storage is row-major.

#ifndef VIMEX_LINALG_HPP
#define VIMEX_LINALG_HPP

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace vimex {

using Vector = std::vector<double>;

class NotPositiveDefinite : public std::runtime_error {
public:
  explicit NotPositiveDefinite(std::size_t pivot);
  std::size_t pivot() const { return pivot_; }

private:
  std::size_t pivot_;
};

/// Square dense matrix, row-major.
class Matrix {
public:
  Matrix() = default;
  explicit Matrix(std::size_t dim, double fill = 0.0);

  static Matrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }

  Vector apply(std::span<const double> x) const;
  Matrix transpose() const;
  Matrix operator*(const Matrix& rhs) const;

private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Symmetric matrix. Symmetry is enforced at construction: `set` writes both
/// triangles, and `from_matrix` rejects asymmetric input.
class SymMatrix {
public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim) : m_(dim) {}

  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(std::span<const double> diag);
  /// Throws std::invalid_argument unless m(i,j) == m(j,i) exactly.
  static SymMatrix from_matrix(const Matrix& m);

  std::size_t dim() const { return m_.dim(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  void set(std::size_t i, std::size_t j, double v);

  Vector apply(std::span<const double> x) const { return m_.apply(x); }
  double quadratic_form(std::span<const double> x) const;
  const Matrix& matrix() const { return m_; }

  SymMatrix operator+(const SymMatrix& rhs) const;
  SymMatrix scaled(double s) const;

private:
  Matrix m_;
};

/// Antisymmetric matrix with zero diagonal.
class SkewMatrix {
public:
  SkewMatrix() = default;
  explicit SkewMatrix(std::size_t dim) : m_(dim) {}

  std::size_t dim() const { return m_.dim(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  /// Sets (i,j) to v and (j,i) to -v. Diagonal writes must be zero.
  void set(std::size_t i, std::size_t j, double v);
  const Matrix& matrix() const { return m_; }

private:
  Matrix m_;
};

/// Cholesky factor L with A = L L^T. Factor once, solve many times.
class Cholesky {
public:
  explicit Cholesky(const SymMatrix& a);

  std::size_t dim() const { return lower_.dim(); }
  Vector solve(std::span<const double> b) const;

private:
  Matrix lower_;
};

Vector solve_spd(const SymMatrix& a, std::span<const double> b);

/// Cayley transform (I - S/2)^{-1} (I + S/2). Orthogonal with det +1.
Matrix cayley(const SkewMatrix& s);

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Largest eigenvalue modulus of a 2x2 matrix.
double spectral_radius_2x2(const Matrix2& p);

double determinant_2x2(const Matrix2& p);

double norm_inf(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);

} // namespace vimex

#endif
