// Highly oscillatory mechanical systems of the form
//
//     q'' + Omega^2 q = g(q),   g = -grad U,
//
// with unit mass, a fast quadratic potential W(q) = 1/2 q^T Omega^2 q and a
// slow potential U. Two concrete instances are provided: a scalar pair of
// coupled linear springs and the Fermi-Pasta-Ulam chain of alternating stiff
// linear and soft cubic springs.

#ifndef VIMEX_SYSTEMS_HPP
#define VIMEX_SYSTEMS_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "vimex/linalg.hpp"

namespace vimex {

struct State {
  double t = 0.0;
  Vector q;
  Vector p;
};

struct FpuParams {
  int ell = 3;
  double omega = 50.0;
};

struct StiffEnergies {
  Vector per_spring; // I_1 .. I_ell
  double total = 0.0;
};

class OscillatorySystem {
public:
  using PotentialFn = std::function<double(std::span<const double>)>;
  using ForceFn = std::function<Vector(std::span<const double>)>;

  /// `force` must be the negative gradient of `potential`.
  OscillatorySystem(std::string label, SymMatrix omega2, std::optional<Vector> omega_diag,
                    PotentialFn potential, ForceFn force);

  std::size_t dim() const { return omega2_.dim(); }
  const std::string& label() const { return label_; }
  const SymMatrix& omega2() const { return omega2_; }
  const std::optional<Vector>& omega_diag() const { return omega_diag_; }
  const std::optional<FpuParams>& fpu_params() const { return fpu_; }

  double slow_potential(std::span<const double> q) const { return potential_(q); }
  /// g(q) = -grad U(q)
  Vector slow_force(std::span<const double> q) const { return force_(q); }
  double fast_potential(std::span<const double> q) const { return 0.5 * omega2_.quadratic_form(q); }
  /// grad W(q) = Omega^2 q
  Vector fast_gradient(std::span<const double> q) const { return omega2_.apply(q); }

  /// H = 1/2 |p|^2 + W(q) + U(q)
  double hamiltonian(const State& s) const;

  /// Same system with U removed (pure fast dynamics).
  OscillatorySystem without_slow() const;
  /// Same system with Omega = 0 (pure slow dynamics).
  OscillatorySystem without_fast() const;

private:
  friend OscillatorySystem fpu_build(const FpuParams& params);

  std::string label_;
  SymMatrix omega2_;
  std::optional<Vector> omega_diag_;
  PotentialFn potential_;
  ForceFn force_;
  std::optional<FpuParams> fpu_;
};

/// Scalar model with U = q^2/2 and W = omega^2 q^2/2. Accepts omega == 0.
OscillatorySystem coupled_oscillator_build(double omega);

/// FPU chain in the transformed coordinates (x_0 block, then x_1 block).
OscillatorySystem fpu_build(const FpuParams& params);

/// Original displacements (q_1..q_2l) to spring centres/lengths (x_0, x_1).
std::pair<Vector, Vector> fpu_transform(std::span<const double> q, std::span<const double> p);
std::pair<Vector, Vector> fpu_inverse_transform(std::span<const double> x, std::span<const double> y);

/// Standard initial condition: x_{0,1} = 1, y_{0,1} = 1, x_{1,1} = 1/omega,
/// y_{1,1} = 1, everything else zero.
State fpu_initial_state(const FpuParams& params);

double fpu_hamiltonian(const OscillatorySystem& sys, const State& s);

/// I_j = 1/2 (y_{1,j}^2 + omega^2 x_{1,j}^2). Requires an FPU system.
StiffEnergies stiff_energies(const OscillatorySystem& sys, const State& s);

} // namespace vimex

#endif
