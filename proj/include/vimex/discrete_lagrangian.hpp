// Discrete Lagrangians L_h(q0, q1) approximating the action of
// L = 1/2 v^T M v - U(q) - W(q) over one step, with exact partial
// derivatives, the discrete Euler-Lagrange residual and the discrete
// Legendre transforms.

#ifndef VIMEX_DISCRETE_LAGRANGIAN_HPP
#define VIMEX_DISCRETE_LAGRANGIAN_HPP

#include <span>

#include "vimex/linalg.hpp"
#include "vimex/systems.hpp"

namespace vimex {

enum class Quadrature {
  Trapezoidal, // both potentials at the endpoints
  Midpoint,    // both potentials at the midpoint
  Imex,        // U at the endpoints, W at the midpoint
};

const char* to_string(Quadrature q);

class DiscreteLagrangian {
public:
  /// Identity mass.
  DiscreteLagrangian(const OscillatorySystem& sys, double h, Quadrature variant);
  /// Arbitrary SPD mass, e.g. the modified mass I + (h Omega / 2)^2.
  DiscreteLagrangian(const OscillatorySystem& sys, double h, Quadrature variant, SymMatrix mass);

  double h() const { return h_; }
  Quadrature variant() const { return variant_; }
  const SymMatrix& mass() const { return mass_; }

  double value(std::span<const double> q0, std::span<const double> q1) const;
  /// D_1 L_h: gradient with respect to q0.
  Vector d1(std::span<const double> q0, std::span<const double> q1) const;
  /// D_2 L_h: gradient with respect to q1.
  Vector d2(std::span<const double> q0, std::span<const double> q1) const;

  /// D_1 L_h(q, q_next) + D_2 L_h(q_prev, q).
  Vector del_residual(std::span<const double> q_prev, std::span<const double> q,
                      std::span<const double> q_next) const;

  /// p0 = -D_1 L_h(q0, q1)
  Vector legendre_minus(std::span<const double> q0, std::span<const double> q1) const;
  /// p1 = D_2 L_h(q0, q1)
  Vector legendre_plus(std::span<const double> q0, std::span<const double> q1) const;

private:
  // d1 when wrt_first, else d2.
  Vector gradient(std::span<const double> q0, std::span<const double> q1, bool wrt_first) const;

  const OscillatorySystem* sys_;
  double h_;
  Quadrature variant_;
  SymMatrix mass_;
};

} // namespace vimex

#endif
