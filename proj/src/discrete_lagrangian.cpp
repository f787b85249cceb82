#include "vimex/discrete_lagrangian.hpp"

#include <stdexcept>

namespace vimex {

const char* to_string(Quadrature q) {
  switch (q) {
  case Quadrature::Trapezoidal:
    return "trapezoidal";
  case Quadrature::Midpoint:
    return "midpoint";
  case Quadrature::Imex:
    return "imex";
  }
  return "?";
}

DiscreteLagrangian::DiscreteLagrangian(const OscillatorySystem& sys, double h, Quadrature variant)
    : DiscreteLagrangian(sys, h, variant, SymMatrix::identity(sys.dim())) {}

DiscreteLagrangian::DiscreteLagrangian(const OscillatorySystem& sys, double h, Quadrature variant,
                                       SymMatrix mass)
    : sys_(&sys), h_(h), variant_(variant), mass_(std::move(mass)) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("discrete Lagrangian: h must be positive");
  }
  if (mass_.dim() != sys.dim()) {
    throw std::invalid_argument("discrete Lagrangian: mass dimension mismatch");
  }
}

namespace {

Vector velocity(std::span<const double> q0, std::span<const double> q1, double h) {
  if (q0.size() != q1.size()) {
    throw std::invalid_argument("discrete Lagrangian: dimension mismatch");
  }
  Vector v(q0.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = (q1[i] - q0[i]) / h;
  }
  return v;
}

Vector midpoint(std::span<const double> q0, std::span<const double> q1) {
  Vector m(q0.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = 0.5 * (q0[i] + q1[i]);
  }
  return m;
}

bool slow_at_endpoints(Quadrature q) { return q != Quadrature::Midpoint; }
bool fast_at_endpoints(Quadrature q) { return q == Quadrature::Trapezoidal; }

} // namespace

double DiscreteLagrangian::value(std::span<const double> q0, std::span<const double> q1) const {
  const Vector v = velocity(q0, q1, h_);
  const Vector mid = midpoint(q0, q1);
  double out = 0.5 * h_ * mass_.quadratic_form(v);
  if (slow_at_endpoints(variant_)) {
    out -= 0.5 * h_ * (sys_->slow_potential(q0) + sys_->slow_potential(q1));
  } else {
    out -= h_ * sys_->slow_potential(mid);
  }
  if (fast_at_endpoints(variant_)) {
    out -= 0.5 * h_ * (sys_->fast_potential(q0) + sys_->fast_potential(q1));
  } else {
    out -= h_ * sys_->fast_potential(mid);
  }
  return out;
}

Vector DiscreteLagrangian::gradient(std::span<const double> q0, std::span<const double> q1,
                                    bool wrt_first) const {
  const Vector v = velocity(q0, q1, h_);
  const Vector mid = midpoint(q0, q1);
  const std::span<const double> self = wrt_first ? q0 : q1;
  Vector out = mass_.apply(v);
  if (wrt_first) {
    for (double& x : out) {
      x = -x;
    }
  }
  // -grad U = g, so a U term contributes +(h/2) g.
  const Vector g_slow = sys_->slow_force(slow_at_endpoints(variant_) ? self : std::span<const double>(mid));
  const Vector grad_fast = sys_->fast_gradient(fast_at_endpoints(variant_) ? self : std::span<const double>(mid));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] += 0.5 * h_ * g_slow[i] - 0.5 * h_ * grad_fast[i];
  }
  return out;
}

Vector DiscreteLagrangian::d1(std::span<const double> q0, std::span<const double> q1) const {
  return gradient(q0, q1, true);
}

Vector DiscreteLagrangian::d2(std::span<const double> q0, std::span<const double> q1) const {
  return gradient(q0, q1, false);
}

Vector DiscreteLagrangian::del_residual(std::span<const double> q_prev, std::span<const double> q,
                                        std::span<const double> q_next) const {
  Vector r = d1(q, q_next);
  const Vector b = d2(q_prev, q);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] += b[i];
  }
  return r;
}

Vector DiscreteLagrangian::legendre_minus(std::span<const double> q0,
                                          std::span<const double> q1) const {
  Vector p = d1(q0, q1);
  for (double& x : p) {
    x = -x;
  }
  return p;
}

Vector DiscreteLagrangian::legendre_plus(std::span<const double> q0,
                                         std::span<const double> q1) const {
  return d2(q0, q1);
}

} // namespace vimex
