// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "vimex/analysis.hpp"
#include "vimex/discrete_lagrangian.hpp"
#include "vimex/harness.hpp"
#include "vimex/integrators.hpp"
#include "vimex/systems.hpp"

using namespace vimex;

namespace {

std::mt19937_64 rng(7);

Vector random_vector(std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector v(n);
  for (double& x : v) {
    x = dist(rng);
  }
  return v;
}

double max_abs_diff(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

double state_diff(const State& a, const State& b) {
  return std::max(max_abs_diff(a.q, b.q), max_abs_diff(a.p, b.p));
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%s] %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(),
              o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) {
    ++failures;
  }
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

const FpuParams kFpu{3, 50.0};

Outcome equivalence_modified_mass() {
  const auto sys = fpu_build(kFpu);
  const double h = 0.1;
  StepperSpec sv{Method::StormerVerlet, h};
  sv.mass_override = modified_mass(h, sys.omega2());
  const Stepper imex(sys, StepperSpec{Method::Imex, h});
  const Stepper verlet(sys, sv);
  double worst = 0.0;
  std::vector<State> starts{fpu_initial_state(kFpu)};
  for (int i = 0; i < 4; ++i) {
    starts.push_back(State{0.0, random_vector(6, -0.5, 0.5), random_vector(6, -0.5, 0.5)});
  }
  for (const State& s0 : starts) {
    State a = s0;
    State b = s0;
    for (int n = 0; n < 1000; ++n) {
      a = imex.advance(a);
      b = verlet.advance(b);
      worst = std::max(worst, state_diff(a, b));
    }
  }
  return {worst <= 1e-10, "max |IMEX - SV(M~)|_inf = " + num(worst) + " (tol 1e-10)"};
}

Outcome lagrangian_identity() {
  double worst = 0.0;
  for (const auto& full : {fpu_build(kFpu), coupled_oscillator_build(50.0)}) {
    const auto fast_only = full.without_slow();
    for (double h : {0.03, 0.1}) {
      const DiscreteLagrangian mid(fast_only, h, Quadrature::Midpoint);
      const DiscreteLagrangian trap(fast_only, h, Quadrature::Trapezoidal,
                                    modified_mass(h, fast_only.omega2()));
      const DiscreteLagrangian imex(full, h, Quadrature::Imex);
      const DiscreteLagrangian trap_full(full, h, Quadrature::Trapezoidal,
                                         modified_mass(h, full.omega2()));
      for (int i = 0; i < 1000; ++i) {
        const Vector q0 = random_vector(full.dim(), -1.0, 1.0);
        const Vector q1 = random_vector(full.dim(), -1.0, 1.0);
        const double a = mid.value(q0, q1);
        const double b = trap.value(q0, q1);
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
        const double c = imex.value(q0, q1);
        const double d = trap_full.value(q0, q1);
        worst = std::max(worst, std::abs(c - d) / std::max(1.0, std::abs(d)));
      }
    }
  }
  return {worst <= 1e-12, "max relative difference = " + num(worst) + " (tol 1e-12)"};
}

Outcome stability_bound() {
  bool ok = true;
  double worst_stable = 0.0;
  double least_unstable = 1e300;
  for (double omega : {1.0, 10.0, 1e3, 1e6}) {
    for (double h : {1.0, 1.9, 1.99}) {
      const auto r = imex_stability(h, omega);
      ok = ok && r.spectral_radius <= 1.0 + 1e-12;
      worst_stable = std::max(worst_stable, r.spectral_radius);
    }
    for (double h : {2.01, 2.5}) {
      const auto r = imex_stability(h, omega);
      ok = ok && r.spectral_radius > 1.0;
      least_unstable = std::min(least_unstable, r.spectral_radius);
    }
  }
  return {ok, "max rho (h<=1.99) = 1 + " + num(worst_stable - 1.0) +
                  ", min rho (h>=2.01) = 1 + " + num(least_unstable - 1.0)};
}

std::size_t row_at(const std::vector<SweepRow>& rows, double r) {
  std::size_t best = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (std::abs(rows[k].omega_h_over_pi - r) < std::abs(rows[best].omega_h_over_pi - r)) {
      best = k;
    }
  }
  return best;
}

Outcome resonance_sweep_ratios() {
  const SweepConfig cfg; // h = 0.1, T = 1000, 100 substeps, grid 0.01 up to 4.5
  const auto rows = resonance_sweep(cfg);
  if (rows.size() != 450) {
    return {false, "expected 450 rows, got " + std::to_string(rows.size())};
  }
  const double r1 = rows[row_at(rows, 1.0)].err_respa / rows[row_at(rows, 0.5)].err_respa;
  const double r2 = rows[row_at(rows, 2.0)].err_respa / rows[row_at(rows, 1.5)].err_respa;
  double lo = 1e300;
  double hi = 0.0;
  for (const auto& row : rows) {
    lo = std::min(lo, row.err_imex);
    hi = std::max(hi, row.err_imex);
  }
  const double spread = hi / lo;
  const bool ok = r1 >= 1e3 && r2 >= 1e3 && spread < 10.0;
  return {ok, "respa(1.0)/respa(0.5) = " + num(r1) + ", respa(2.0)/respa(1.5) = " + num(r2) +
                  " (need >= 1e3); imex max/min = " + num(spread) + " (need < 10)"};
}

Outcome slow_exchange() {
  ExchangeConfig cfg;
  cfg.method = "imex";
  cfg.t_end = 200.0;
  cfg.reference_h = 0.001;
  cfg.window = 1.0;
  bool ok = true;
  std::string detail;
  for (const auto& [h, tol] : {std::pair{0.03, 0.1}, std::pair{0.1, 0.2}}) {
    cfg.h = h;
    const ExchangeResult r = run_fpu_exchange(cfg);
    if (r.sup_difference.size() != 3) {
      return {false, "h=" + num(h) + ": run or reference did not complete"};
    }
    detail += "h=" + num(h) + " sup|<I_j>-<I_j^ref>| =";
    for (double d : r.sup_difference) {
      ok = ok && d <= tol;
      detail += " " + num(d);
    }
    detail += " (tol " + num(tol) + "); ";
  }
  return {ok, detail};
}

Outcome adiabatic_invariant() {
  ExchangeConfig ref_cfg;
  ref_cfg.method = "sv";
  ref_cfg.h = 0.001;
  ref_cfg.t_end = 200.0;
  ref_cfg.stride = 10;
  const ExchangeResult ref = run_fpu_exchange(ref_cfg);

  ExchangeConfig long_cfg;
  long_cfg.method = "imex";
  long_cfg.h = 0.1;
  long_cfg.t_end = 4000.0;
  const ExchangeResult run = run_fpu_exchange(long_cfg);

  const bool completed = run.run.status == TrajectoryStatus::Completed &&
                         ref.run.status == TrajectoryStatus::Completed;
  const bool ok = completed && ref.adiabatic_drift <= 0.05 && run.adiabatic_drift <= 0.25;
  return {ok, "reference drift = " + num(ref.adiabatic_drift) +
                  " (tol 0.05); IMEX h=0.1 T=4000 drift = " + num(run.adiabatic_drift) +
                  " (tol 0.25), status " + (completed ? "completed" : "blow-up")};
}

Outcome long_step_blowup() {
  const auto sys = fpu_build(kFpu);
  const Trajectory traj =
      integrate(sys, StepperSpec{Method::Imex, 0.3}, fpu_initial_state(kFpu), 4000.0, 100);
  double peak = 0.0;
  for (const auto& s : traj.samples) {
    peak = std::max(peak, s.stiff->total);
  }
  if (traj.status == TrajectoryStatus::Blowup) {
    return {true, "blow-up at t = " + num(traj.blowup_time)};
  }
  return {false, "completed to t=4000 without blow-up; peak sampled I = " + num(peak) +
                     ", final I = " + num(traj.samples.back().stiff->total)};
}

double mi_imex_gap(const OscillatorySystem& sys, double h, const State& s0) {
  const Stepper imex(sys, StepperSpec{Method::Imex, h});
  const Stepper mi(sys, StepperSpec{Method::ModifiedImpulse, h});
  State a = s0;
  State b = s0;
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    a = imex.advance(a);
    b = mi.advance(b);
    worst = std::max(worst, state_diff(a, b));
  }
  return worst;
}

Outcome modified_impulse() {
  const auto sys = fpu_build(kFpu);
  double worst = 0.0;
  double worst_coarse = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    const State s0 = trial == 0 ? fpu_initial_state(kFpu)
                                : State{0.0, random_vector(6, -0.5, 0.5), random_vector(6, -0.5, 0.5)};
    worst = std::max(worst, mi_imex_gap(sys, 0.03, s0));
    worst_coarse = std::max(worst_coarse, mi_imex_gap(sys, 0.1, s0));
  }
  // grid: the stability grid plus the FPU and small-step settings
  double tan_worst = 0.0;
  double tan_at_h = 0.0;
  double tan_at_omega = 0.0;
  for (double h : {1e-6, 0.01, 0.03, 0.1, 1.0, 1.9, 1.99, 2.01, 2.5}) {
    for (double omega : {0.0, 1.0, 10.0, 50.0, 1e3, 1e6}) {
      const double w = modified_frequency(h, omega);
      if (omega == 0.0) {
        tan_worst = std::max(tan_worst, std::abs(w));
        continue;
      }
      const long double x = 0.5L * h * omega;
      const long double err = std::abs(std::tan(0.5L * h * w) - x) / x;
      if (static_cast<double>(err) > tan_worst) {
        tan_worst = static_cast<double>(err);
        tan_at_h = h;
        tan_at_omega = omega;
      }
    }
  }
  return {worst <= 1e-12 && tan_worst <= 1e-12,
          "max |MI - IMEX| at h=0.03 = " + num(worst) + " (tol 1e-12; h=0.1 gives " +
              num(worst_coarse) + "); max rel tan defect = " + num(tan_worst) + " at h=" +
              num(tan_at_h) + ", omega=" + num(tan_at_omega) + " (tol 1e-12)"};
}

Outcome structure_preservation() {
  const auto fpu = fpu_build(kFpu);
  const auto model = coupled_oscillator_build(50.0);
  double sym = 0.0;
  for (const OscillatorySystem* sys : {&fpu, &model}) {
    for (int i = 0; i < 20; ++i) {
      const State s{0.0, random_vector(sys->dim(), -1, 1), random_vector(sys->dim(), -1, 1)};
      for (double h : {0.01, 0.1}) {
        sym = std::max(sym, state_diff(step_stormer_verlet(*sys, step_stormer_verlet(*sys, s, h), -h), s));
        sym = std::max(sym, state_diff(step_imex(*sys, step_imex(*sys, s, h), -h), s));
        sym = std::max(sym, state_diff(step_modified_impulse(*sys, step_modified_impulse(*sys, s, h), -h), s));
      }
    }
  }
  double det = 0.0;
  for (double omega : {0.0, 1.0, 50.0, 1e3}) {
    const auto m = coupled_oscillator_build(omega);
    for (double h : {0.01, 0.1, 1.0}) {
      if (h * std::sqrt(1.0 + omega * omega) < 2.0) {
        det = std::max(det, std::abs(determinant_2x2(propagation_matrix(m, {Method::StormerVerlet, h})) - 1.0));
      }
      det = std::max(det, std::abs(determinant_2x2(propagation_matrix(m, {Method::Imex, h})) - 1.0));
    }
  }
  const ConvergenceConfig cfg;
  bool orders_ok = true;
  std::string orders;
  for (Method m : {Method::StormerVerlet, Method::Imex, Method::MidpointFull}) {
    const ConvergenceResult r = run_convergence(m, cfg);
    const bool ok = r.order && *r.order >= 1.9 && *r.order <= 2.1;
    orders_ok = orders_ok && ok;
    orders += std::string(" ") + to_string(m) + "=" + (r.order ? num(*r.order) : "n/a");
  }
  const bool ok = sym <= 1e-10 && det <= 1e-12 && orders_ok;
  return {ok, "symmetry defect = " + num(sym) + " (tol 1e-10); |det-1| = " + num(det) +
                  " (tol 1e-12); orders" + orders + " (need [1.9, 2.1])"};
}

Outcome del_residual() {
  const auto fpu = fpu_build(kFpu);
  const auto model = coupled_oscillator_build(50.0);
  StepperSpec mid{Method::MidpointFull, 0.01};
  mid.fp_tol = 1e-15;
  mid.fp_max_iter = 500;
  const std::vector<std::pair<Quadrature, StepperSpec>> pairs{
      {Quadrature::Trapezoidal, StepperSpec{Method::StormerVerlet, 0.01}},
      {Quadrature::Imex, StepperSpec{Method::Imex, 0.1}},
      {Quadrature::Midpoint, mid}};
  double worst = 0.0;
  for (const OscillatorySystem* sys : {&fpu, &model}) {
    const State start = sys == &fpu ? fpu_initial_state(kFpu) : State{0.0, {1.0}, {1.0}};
    for (const auto& [variant, spec] : pairs) {
      const Stepper stepper(*sys, spec);
      std::vector<State> states{start};
      for (int n = 0; n < 100; ++n) {
        states.push_back(stepper.advance(states.back()));
      }
      const DiscreteLagrangian ld(*sys, spec.h, variant);
      for (std::size_t n = 1; n + 1 < states.size(); ++n) {
        const Vector r = ld.del_residual(states[n - 1].q, states[n].q, states[n + 1].q);
        worst = std::max(worst, norm_inf(r) / (1.0 + norm_inf(states[n].p)));
      }
    }
  }
  return {worst <= 1e-10, "max scaled residual = " + num(worst) + " (tol 1e-10)"};
}

} // namespace

int main() {
  report(1, "IMEX == Stormer/Verlet with modified mass (FPU, 1000 steps)", equivalence_modified_mass);
  report(2, "midpoint == trapezoidal with modified mass (discrete Lagrangians)", lagrangian_identity);
  report(3, "IMEX linear stability iff h <= 2", stability_bound);
  report(4, "resonance sweep: r-RESPA spikes, IMEX flat", resonance_sweep_ratios);
  report(5, "FPU slow energy exchange vs reference", slow_exchange);
  report(6, "FPU adiabatic invariant", adiabatic_invariant);
  report(7, "FPU IMEX h=0.3 blows up before t=4000", long_step_blowup);
  report(8, "modified impulse == IMEX; tan identity", modified_impulse);
  report(9, "symmetry, unit determinant, second order", structure_preservation);
  report(10, "discrete Euler-Lagrange residual", del_residual);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
