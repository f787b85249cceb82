#include "vimex/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

namespace vimex {

NotPositiveDefinite::NotPositiveDefinite(std::size_t pivot)
    : std::runtime_error("matrix is not positive definite (pivot " + std::to_string(pivot) + ")"),
      pivot_(pivot) {}

Matrix::Matrix(std::size_t dim, double fill) : dim_(dim), data_(dim * dim, fill) {}

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    m(i, i) = 1.0;
  }
  return m;
}

Vector Matrix::apply(std::span<const double> x) const {
  assert(x.size() == dim_);
  Vector y(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      acc += data_[i * dim_ + j] * x[j];
    }
    y[i] = acc;
  }
  return y;
}

Matrix Matrix::transpose() const {
  Matrix t(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      t(j, i) = (*this)(i, j);
    }
  }
  return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  assert(rhs.dim_ == dim_);
  Matrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t k = 0; k < dim_; ++k) {
      const double a = (*this)(i, k);
      for (std::size_t j = 0; j < dim_; ++j) {
        out(i, j) += a * rhs(k, j);
      }
    }
  }
  return out;
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix s;
  s.m_ = Matrix::identity(dim);
  return s;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix s(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    s.m_(i, i) = diag[i];
  }
  return s;
}

SymMatrix SymMatrix::from_matrix(const Matrix& m) {
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = i + 1; j < m.dim(); ++j) {
      if (m(i, j) != m(j, i)) {
        throw std::invalid_argument("matrix is not symmetric");
      }
    }
  }
  SymMatrix s;
  s.m_ = m;
  return s;
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
  m_(i, j) = v;
  m_(j, i) = v;
}

double SymMatrix::quadratic_form(std::span<const double> x) const {
  return dot(x, m_.apply(x));
}

SymMatrix SymMatrix::operator+(const SymMatrix& rhs) const {
  assert(rhs.dim() == dim());
  SymMatrix out(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = 0; j < dim(); ++j) {
      out.m_(i, j) = m_(i, j) + rhs.m_(i, j);
    }
  }
  return out;
}

SymMatrix SymMatrix::scaled(double s) const {
  SymMatrix out(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = 0; j < dim(); ++j) {
      out.m_(i, j) = s * m_(i, j);
    }
  }
  return out;
}

void SkewMatrix::set(std::size_t i, std::size_t j, double v) {
  if (i == j) {
    if (v != 0.0) {
      throw std::invalid_argument("skew matrix diagonal must be zero");
    }
    return;
  }
  m_(i, j) = v;
  m_(j, i) = -v;
}

Cholesky::Cholesky(const SymMatrix& a) : lower_(a.dim()) {
  const std::size_t n = a.dim();
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) {
      diag -= lower_(j, k) * lower_(j, k);
    }
    if (!(diag > 0.0)) {
      throw NotPositiveDefinite(j);
    }
    const double ljj = std::sqrt(diag);
    lower_(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) {
        s -= lower_(i, k) * lower_(j, k);
      }
      lower_(i, j) = s / ljj;
    }
  }
}

Vector Cholesky::solve(std::span<const double> b) const {
  const std::size_t n = dim();
  assert(b.size() == n);
  Vector x(b.begin(), b.end());
  // L y = b
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) {
      s -= lower_(i, k) * x[k];
    }
    x[i] = s / lower_(i, i);
  }
  // L^T x = y
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) {
      s -= lower_(k, ii) * x[k];
    }
    x[ii] = s / lower_(ii, ii);
  }
  return x;
}

Vector solve_spd(const SymMatrix& a, std::span<const double> b) {
  if (b.size() != a.dim()) {
    throw std::invalid_argument("solve_spd: dimension mismatch");
  }
  return Cholesky(a).solve(b);
}

namespace {

// LU with partial pivoting; I - S/2 is not symmetric so Cholesky does not apply.
class LuFactor {
public:
  explicit LuFactor(Matrix a) : lu_(std::move(a)), perm_(lu_.dim()) {
    const std::size_t n = lu_.dim();
    for (std::size_t i = 0; i < n; ++i) {
      perm_[i] = i;
    }
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      for (std::size_t i = k + 1; i < n; ++i) {
        if (std::abs(lu_(i, k)) > std::abs(lu_(piv, k))) {
          piv = i;
        }
      }
      if (lu_(piv, k) == 0.0) {
        throw std::runtime_error("singular matrix in LU factorization");
      }
      if (piv != k) {
        for (std::size_t j = 0; j < n; ++j) {
          std::swap(lu_(k, j), lu_(piv, j));
        }
        std::swap(perm_[k], perm_[piv]);
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        lu_(i, k) /= lu_(k, k);
        for (std::size_t j = k + 1; j < n; ++j) {
          lu_(i, j) -= lu_(i, k) * lu_(k, j);
        }
      }
    }
  }

  Vector solve(std::span<const double> b) const {
    const std::size_t n = lu_.dim();
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = b[perm_[i]];
      for (std::size_t k = 0; k < i; ++k) {
        s -= lu_(i, k) * x[k];
      }
      x[i] = s;
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double s = x[ii];
      for (std::size_t k = ii + 1; k < n; ++k) {
        s -= lu_(ii, k) * x[k];
      }
      x[ii] = s / lu_(ii, ii);
    }
    return x;
  }

private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

} // namespace

Matrix cayley(const SkewMatrix& s) {
  const std::size_t n = s.dim();
  Matrix minus = Matrix::identity(n);
  Matrix plus = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      minus(i, j) -= 0.5 * s(i, j);
      plus(i, j) += 0.5 * s(i, j);
    }
  }
  const LuFactor lu(minus);
  Matrix out(n);
  Vector column(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      column[i] = plus(i, j);
    }
    const Vector x = lu.solve(column);
    for (std::size_t i = 0; i < n; ++i) {
      out(i, j) = x[i];
    }
  }
  return out;
}

double determinant_2x2(const Matrix2& p) {
  return p[0][0] * p[1][1] - p[0][1] * p[1][0];
}

double spectral_radius_2x2(const Matrix2& p) {
  // lambda^2 - tr lambda + det = 0
  const double tr = p[0][0] + p[1][1];
  const double det = determinant_2x2(p);
  const double disc = 0.25 * tr * tr - det;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    return std::max(std::abs(0.5 * tr + root), std::abs(0.5 * tr - root));
  }
  // complex pair, |lambda|^2 = det
  return std::sqrt(det);
}

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) {
    if (std::isnan(v)) {
      return v;
    }
    m = std::max(m, std::abs(v));
  }
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i] * b[i];
  }
  return s;
}

} // namespace vimex
