#include "vimex/integrators.hpp"

#include <cmath>


namespace vimex {

const char* to_string(Method m) {
  switch (m) {
  case Method::StormerVerlet:
    return "sv";
  case Method::Imex:
    return "imex";
  case Method::Respa:
    return "respa";
  case Method::MidpointFull:
    return "midpoint";
  case Method::ModifiedImpulse:
    return "modified-impulse";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  for (Method m : {Method::StormerVerlet, Method::Imex, Method::Respa, Method::MidpointFull,
                   Method::ModifiedImpulse}) {
    if (name == to_string(m)) {
      return m;
    }
  }
  return std::nullopt;
}

NoConvergence::NoConvergence(int iterations)
    : std::runtime_error("midpoint fixed-point iteration did not converge after " +
                         std::to_string(iterations) + " iterations"),
      iterations_(iterations) {}

MissingDiagonalOmega::MissingDiagonalOmega()
    : std::invalid_argument("modified impulse step needs a diagonal Omega") {}

namespace {

// grad V = Omega^2 q - g(q)
Vector total_gradient(const OscillatorySystem& sys, std::span<const double> q) {
  Vector grad = sys.fast_gradient(q);
  const Vector g = sys.slow_force(q);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    grad[i] -= g[i];
  }
  return grad;
}

SymMatrix fast_matrix(const OscillatorySystem& sys, double h) {
  return SymMatrix::identity(sys.dim()) + sys.omega2().scaled(0.25 * h * h);
}

State midpoint_fast_with(const Cholesky& solver, const OscillatorySystem& sys, const State& s,
                         double h) {
  // (I + h^2/4 Omega^2) q' = (I - h^2/4 Omega^2) q + h p
  const std::size_t d = sys.dim();
  const Vector w_q = sys.fast_gradient(s.q);
  Vector rhs(d);
  for (std::size_t i = 0; i < d; ++i) {
    rhs[i] = s.q[i] - 0.25 * h * h * w_q[i] + h * s.p[i];
  }
  State out{s.t + h, solver.solve(rhs), Vector(d)};
  const Vector w_next = sys.fast_gradient(out.q);
  for (std::size_t i = 0; i < d; ++i) {
    out.p[i] = s.p[i] - 0.5 * h * (w_q[i] + w_next[i]);
  }
  return out;
}

State stormer_verlet_impl(const OscillatorySystem& sys, const State& s, double h,
                          const Cholesky* mass) {
  const std::size_t d = sys.dim();
  Vector p_half = s.p;
  const Vector grad0 = total_gradient(sys, s.q);
  for (std::size_t i = 0; i < d; ++i) {
    p_half[i] -= 0.5 * h * grad0[i];
  }
  const Vector velocity = mass ? mass->solve(p_half) : p_half;
  State out{s.t + h, s.q, p_half};
  for (std::size_t i = 0; i < d; ++i) {
    out.q[i] += h * velocity[i];
  }
  const Vector grad1 = total_gradient(sys, out.q);
  for (std::size_t i = 0; i < d; ++i) {
    out.p[i] -= 0.5 * h * grad1[i];
  }
  return out;
}

// Verlet on T + W only.
State fast_verlet(const OscillatorySystem& sys, State s, double dt) {
  const std::size_t d = sys.dim();
  Vector grad = sys.fast_gradient(s.q);
  for (std::size_t i = 0; i < d; ++i) {
    s.p[i] -= 0.5 * dt * grad[i];
    s.q[i] += dt * s.p[i];
  }
  grad = sys.fast_gradient(s.q);
  for (std::size_t i = 0; i < d; ++i) {
    s.p[i] -= 0.5 * dt * grad[i];
  }
  s.t += dt;
  return s;
}

State respa_impl(const OscillatorySystem& sys, const State& s, double h, int substeps) {
  if (substeps < 1) {
    throw std::invalid_argument("respa: substeps must be >= 1");
  }
  const double dt = h / substeps;
  State inner = kick(sys, s, 0.5 * h);
  for (int k = 0; k < substeps; ++k) {
    inner = fast_verlet(sys, std::move(inner), dt);
  }
  inner.t = s.t + h;
  return kick(sys, inner, 0.5 * h);
}

// Per mode: c = cos(h w~), (h/2)(1 + c), (2/h)(1 - c). With x = h w / 2 and
// tan(h w~ / 2) = x these are rational in x, which avoids cancellation in 1 - c.
std::vector<std::array<double, 3>> rotation_coefficients(const Vector& omega, double h) {
  std::vector<std::array<double, 3>> r(omega.size());
  const double ah = std::abs(h);
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const double x2 = 0.25 * ah * ah * omega[i] * omega[i];
    const double den = 1.0 + x2;
    r[i] = {(1.0 - x2) / den, h / den, h * omega[i] * omega[i] / den};
  }
  return r;
}

State modified_rotation(const State& s, double h, const std::vector<std::array<double, 3>>& rot) {
  State out{s.t + h, Vector(s.q.size()), Vector(s.p.size())};
  for (std::size_t i = 0; i < s.q.size(); ++i) {
    const auto& [c, q_from_p, p_from_q] = rot[i];
    out.q[i] = c * s.q[i] + q_from_p * s.p[i];
    out.p[i] = -p_from_q * s.q[i] + c * s.p[i];
  }
  return out;
}

} // namespace

State kick(const OscillatorySystem& sys, const State& s, double tau) {
  State out = s;
  const Vector g = sys.slow_force(s.q);
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.p[i] += tau * g[i];
  }
  return out;
}

State step_stormer_verlet(const OscillatorySystem& sys, const State& s, double h) {
  return stormer_verlet_impl(sys, s, h, nullptr);
}

State step_stormer_verlet(const OscillatorySystem& sys, const State& s, double h,
                          const SymMatrix& mass_override) {
  const Cholesky mass(mass_override);
  return stormer_verlet_impl(sys, s, h, &mass);
}

State step_midpoint_fast(const OscillatorySystem& sys, const State& s, double h) {
  const Cholesky solver(fast_matrix(sys, h));
  return midpoint_fast_with(solver, sys, s, h);
}

State step_imex(const OscillatorySystem& sys, const State& s, double h) {
  const Cholesky solver(fast_matrix(sys, h));
  const State a = kick(sys, s, 0.5 * h);
  const State b = midpoint_fast_with(solver, sys, a, h);
  return kick(sys, b, 0.5 * h);
}

State step_respa(const OscillatorySystem& sys, const State& s, double h, int substeps) {
  return respa_impl(sys, s, h, substeps);
}

State step_modified_impulse(const OscillatorySystem& sys, const State& s, double h) {
  if (!sys.omega_diag()) {
    throw MissingDiagonalOmega();
  }
  const auto rot = rotation_coefficients(*sys.omega_diag(), h);
  const State a = kick(sys, s, 0.5 * h);
  const State b = modified_rotation(a, h, rot);
  return kick(sys, b, 0.5 * h);
}

State step_midpoint_full(const OscillatorySystem& sys, const State& s, double h, double fp_tol,
                         int fp_max_iter) {
  if (!(fp_tol > 0.0)) {
    throw std::invalid_argument("midpoint: fp_tol must be positive");
  }
  // mid = q + (h/2) p - (h^2/4) grad V(mid)
  const std::size_t d = sys.dim();
  Vector base(d);
  for (std::size_t i = 0; i < d; ++i) {
    base[i] = s.q[i] + 0.5 * h * s.p[i];
  }
  Vector mid = base;
  Vector next(d);
  for (int iter = 1; iter <= fp_max_iter; ++iter) {
    const Vector grad = total_gradient(sys, mid);
    double change = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      next[i] = base[i] - 0.25 * h * h * grad[i];
      change = std::max(change, std::abs(next[i] - mid[i]));
    }
    if (!std::isfinite(change)) {
      throw NoConvergence(iter);
    }
    mid.swap(next);
    if (change <= fp_tol) {
      const Vector grad_mid = total_gradient(sys, mid);
      State out{s.t + h, Vector(d), Vector(d)};
      for (std::size_t i = 0; i < d; ++i) {
        out.q[i] = 2.0 * mid[i] - s.q[i];
        out.p[i] = s.p[i] - h * grad_mid[i];
      }
      return out;
    }
  }
  throw NoConvergence(fp_max_iter);
}

Stepper::Stepper(const OscillatorySystem& sys, StepperSpec spec)
    : sys_(&sys), spec_(std::move(spec)) {
  if (spec_.h == 0.0 || !std::isfinite(spec_.h)) {
    throw std::invalid_argument("stepper: h must be finite and nonzero");
  }
  switch (spec_.method) {
  case Method::Imex:
    fast_solver_.emplace(fast_matrix(sys, spec_.h));
    break;
  case Method::StormerVerlet:
    if (spec_.mass_override) {
      mass_solver_.emplace(*spec_.mass_override);
    }
    break;
  case Method::ModifiedImpulse:
    if (!sys.omega_diag()) {
      throw MissingDiagonalOmega();
    }
    rotation_ = rotation_coefficients(*sys.omega_diag(), spec_.h);
    break;
  case Method::Respa:
    if (spec_.substeps < 1) {
      throw std::invalid_argument("respa: substeps must be >= 1");
    }
    break;
  case Method::MidpointFull:
    if (!(spec_.fp_tol > 0.0) || spec_.fp_max_iter < 1) {
      throw std::invalid_argument("midpoint: need fp_tol > 0 and fp_max_iter >= 1");
    }
    break;
  }
}

State Stepper::advance(const State& s) const {
  const double h = spec_.h;
  switch (spec_.method) {
  case Method::StormerVerlet:
    return stormer_verlet_impl(*sys_, s, h, mass_solver_ ? &*mass_solver_ : nullptr);
  case Method::Imex: {
    const State a = kick(*sys_, s, 0.5 * h);
    const State b = midpoint_fast_with(*fast_solver_, *sys_, a, h);
    return kick(*sys_, b, 0.5 * h);
  }
  case Method::Respa:
    return respa_impl(*sys_, s, h, spec_.substeps);
  case Method::MidpointFull:
    return step_midpoint_full(*sys_, s, h, spec_.fp_tol, spec_.fp_max_iter);
  case Method::ModifiedImpulse: {
    const State a = kick(*sys_, s, 0.5 * h);
    const State b = modified_rotation(a, h, rotation_);
    return kick(*sys_, b, 0.5 * h);
  }
  }
  return s;
}

long step_count(double t0, double t_end, double h) {
  const double ratio = (t_end - t0) / h;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, std::abs(ratio))) {
    return static_cast<long>(nearest);
  }
  return static_cast<long>(std::ceil(ratio));
}

namespace {

Sample make_sample(const OscillatorySystem& sys, State s) {
  Sample out;
  out.energy = sys.hamiltonian(s);
  if (sys.fpu_params()) {
    out.stiff = stiff_energies(sys, s);
  }
  out.state = std::move(s);
  return out;
}

bool escaped(const State& s) {
  const double qn = norm_inf(s.q);
  const double pn = norm_inf(s.p);
  return !std::isfinite(qn) || !std::isfinite(pn) || qn > kBlowupCap || pn > kBlowupCap;
}

} // namespace

Trajectory integrate(const OscillatorySystem& sys, const StepperSpec& spec, const State& state0,
                     double t_end, long stride) {
  if (!(spec.h > 0.0)) {
    throw std::invalid_argument("integrate: h must be positive");
  }
  if (!(t_end > state0.t)) {
    throw std::invalid_argument("integrate: t_end must exceed the initial time");
  }
  if (stride < 1) {
    throw std::invalid_argument("integrate: stride must be >= 1");
  }
  if (state0.q.size() != sys.dim() || state0.p.size() != sys.dim()) {
    throw std::invalid_argument("integrate: state dimension does not match system");
  }
  const Stepper stepper(sys, spec);
  Trajectory traj;
  traj.h = spec.h;
  traj.method = spec.method;
  traj.label = sys.label();

  const long n_steps = step_count(state0.t, t_end, spec.h);
  traj.samples.reserve(static_cast<std::size_t>(n_steps / stride + 2));
  traj.samples.push_back(make_sample(sys, state0));

  State current = state0;
  for (long n = 1; n <= n_steps; ++n) {
    const double t_n = state0.t + static_cast<double>(n) * spec.h;
    try {
      current = stepper.advance(current);
    } catch (const std::exception& e) {
      traj.status = TrajectoryStatus::Blowup;
      traj.blowup_time = t_n;
      traj.blowup_cause = e.what();
      return traj;
    }
    current.t = t_n;
    if (escaped(current)) {
      traj.status = TrajectoryStatus::Blowup;
      traj.blowup_time = t_n;
      traj.blowup_cause = "state left the finite region";
      traj.samples.push_back(make_sample(sys, current));
      return traj;
    }
    if (n % stride == 0) {
      traj.samples.push_back(make_sample(sys, current));
    }
  }
  return traj;
}

} // namespace vimex
