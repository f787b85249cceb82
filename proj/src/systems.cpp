#include "vimex/systems.hpp"

#include <cmath>
#include <stdexcept>

namespace vimex {

OscillatorySystem::OscillatorySystem(std::string label, SymMatrix omega2,
                                     std::optional<Vector> omega_diag, PotentialFn potential,
                                     ForceFn force)
    : label_(std::move(label)), omega2_(std::move(omega2)), omega_diag_(std::move(omega_diag)),
      potential_(std::move(potential)), force_(std::move(force)) {
  if (omega_diag_ && omega_diag_->size() != omega2_.dim()) {
    throw std::invalid_argument("omega_diag length does not match Omega^2");
  }
}

double OscillatorySystem::hamiltonian(const State& s) const {
  return 0.5 * dot(s.p, s.p) + fast_potential(s.q) + slow_potential(s.q);
}

OscillatorySystem OscillatorySystem::without_slow() const {
  const std::size_t d = dim();
  OscillatorySystem out(
      label_ + "-fast", omega2_, omega_diag_, [](std::span<const double>) { return 0.0; },
      [d](std::span<const double>) { return Vector(d, 0.0); });
  out.fpu_ = fpu_;
  return out;
}

OscillatorySystem OscillatorySystem::without_fast() const {
  OscillatorySystem out(label_ + "-slow", SymMatrix(dim()), Vector(dim(), 0.0), potential_,
                        force_);
  out.fpu_ = fpu_;
  return out;
}

OscillatorySystem coupled_oscillator_build(double omega) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("coupled oscillator: omega must be finite and nonnegative");
  }
  const Vector diag{omega};
  const Vector diag2{omega * omega};
  return OscillatorySystem(
      "model", SymMatrix::diagonal(diag2), diag,
      [](std::span<const double> q) { return 0.5 * q[0] * q[0]; },
      [](std::span<const double> q) { return Vector{-q[0]}; });
}

namespace {

// Soft-spring elongations in transformed coordinates. Spring k (k = 0..ell)
// connects mass 2k to mass 2k+1, with the fixed walls q_0 = q_{2l+1} = 0.
// Each elongation is (1/sqrt 2) * linear form; the 1/4 prefactor in U
// absorbs the (1/sqrt 2)^4.
template <typename Fn>
void for_each_soft_spring(int ell, std::span<const double> x, Fn&& fn) {
  const auto l = static_cast<std::size_t>(ell);
  const auto x0 = [&](std::size_t i) { return x[i]; };
  const auto x1 = [&](std::size_t i) { return x[l + i]; };
  fn(x0(0) - x1(0), std::array<std::pair<std::size_t, double>, 4>{
                        {{0, 1.0}, {l, -1.0}, {0, 0.0}, {0, 0.0}}});
  for (std::size_t i = 0; i + 1 < l; ++i) {
    fn(x0(i + 1) - x1(i + 1) - x0(i) - x1(i),
       std::array<std::pair<std::size_t, double>, 4>{
           {{i + 1, 1.0}, {l + i + 1, -1.0}, {i, -1.0}, {l + i, -1.0}}});
  }
  fn(x0(l - 1) + x1(l - 1), std::array<std::pair<std::size_t, double>, 4>{
                                {{l - 1, 1.0}, {2 * l - 1, 1.0}, {0, 0.0}, {0, 0.0}}});
}

} // namespace

OscillatorySystem fpu_build(const FpuParams& params) {
  if (params.ell < 1 || !(params.omega > 0.0)) {
    throw std::invalid_argument("fpu: need ell >= 1 and omega > 0");
  }
  const auto l = static_cast<std::size_t>(params.ell);
  Vector diag(2 * l, 0.0);
  Vector diag2(2 * l, 0.0);
  for (std::size_t i = l; i < 2 * l; ++i) {
    diag[i] = params.omega;
    diag2[i] = params.omega * params.omega;
  }
  const int ell = params.ell;
  auto potential = [ell](std::span<const double> x) {
    double s = 0.0;
    for_each_soft_spring(ell, x, [&](double e, const auto&) { s += e * e * e * e; });
    return 0.25 * s;
  };
  auto force = [ell, l](std::span<const double> x) {
    Vector g(2 * l, 0.0);
    for_each_soft_spring(ell, x, [&](double e, const auto& terms) {
      const double c = e * e * e; // d/de (e^4/4)
      for (const auto& [idx, coef] : terms) {
        g[idx] -= coef * c;
      }
    });
    return g;
  };
  OscillatorySystem sys("fpu", SymMatrix::diagonal(diag2), diag, potential, force);
  sys.fpu_ = params;
  return sys;
}

std::pair<Vector, Vector> fpu_transform(std::span<const double> q, std::span<const double> p) {
  if (q.size() % 2 != 0 || q.size() != p.size()) {
    throw std::invalid_argument("fpu_transform: need equal even lengths");
  }
  const std::size_t l = q.size() / 2;
  const double s = 1.0 / std::sqrt(2.0);
  Vector x(2 * l);
  Vector y(2 * l);
  for (std::size_t i = 0; i < l; ++i) {
    // q_{2i-1}, q_{2i} in one-based numbering
    const double qa = q[2 * i];
    const double qb = q[2 * i + 1];
    x[i] = (qb + qa) * s;
    x[l + i] = (qb - qa) * s;
    y[i] = (p[2 * i + 1] + p[2 * i]) * s;
    y[l + i] = (p[2 * i + 1] - p[2 * i]) * s;
  }
  return {x, y};
}

std::pair<Vector, Vector> fpu_inverse_transform(std::span<const double> x,
                                                std::span<const double> y) {
  if (x.size() % 2 != 0 || x.size() != y.size()) {
    throw std::invalid_argument("fpu_inverse_transform: need equal even lengths");
  }
  const std::size_t l = x.size() / 2;
  const double s = 1.0 / std::sqrt(2.0);
  Vector q(2 * l);
  Vector p(2 * l);
  for (std::size_t i = 0; i < l; ++i) {
    q[2 * i] = (x[i] - x[l + i]) * s;
    q[2 * i + 1] = (x[i] + x[l + i]) * s;
    p[2 * i] = (y[i] - y[l + i]) * s;
    p[2 * i + 1] = (y[i] + y[l + i]) * s;
  }
  return {q, p};
}

State fpu_initial_state(const FpuParams& params) {
  const auto l = static_cast<std::size_t>(params.ell);
  State s{0.0, Vector(2 * l, 0.0), Vector(2 * l, 0.0)};
  s.q[0] = 1.0;
  s.p[0] = 1.0;
  s.q[l] = 1.0 / params.omega;
  s.p[l] = 1.0;
  return s;
}

double fpu_hamiltonian(const OscillatorySystem& sys, const State& s) {
  const auto& params = sys.fpu_params();
  if (!params) {
    throw std::invalid_argument("fpu_hamiltonian: not an FPU system");
  }
  const auto l = static_cast<std::size_t>(params->ell);
  const double w2 = params->omega * params->omega;
  double kinetic = 0.0;
  double stiff = 0.0;
  for (std::size_t i = 0; i < 2 * l; ++i) {
    kinetic += s.p[i] * s.p[i];
  }
  for (std::size_t i = l; i < 2 * l; ++i) {
    stiff += s.q[i] * s.q[i];
  }
  return 0.5 * kinetic + 0.5 * w2 * stiff + sys.slow_potential(s.q);
}

StiffEnergies stiff_energies(const OscillatorySystem& sys, const State& s) {
  const auto& params = sys.fpu_params();
  if (!params) {
    throw std::invalid_argument("stiff_energies: not an FPU system");
  }
  const auto l = static_cast<std::size_t>(params->ell);
  const double w2 = params->omega * params->omega;
  StiffEnergies out;
  out.per_spring.resize(l);
  for (std::size_t j = 0; j < l; ++j) {
    const double x1 = s.q[l + j];
    const double y1 = s.p[l + j];
    out.per_spring[j] = 0.5 * (y1 * y1 + w2 * x1 * x1);
    out.total += out.per_spring[j];
  }
  return out;
}

} // namespace vimex
