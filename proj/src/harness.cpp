#include "vimex/harness.hpp"

#include <numbers>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <thread>

namespace vimex {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

namespace {

std::optional<Method> method_or_report(const std::string& name, std::ostream& err) {
  auto m = parse_method(name);
  if (!m) {
    err << "error: unknown method '" << name
        << "' (expected sv, imex, respa, midpoint, modified-impulse)\n";
  }
  return m;
}

bool open_output(const std::string& path, std::ofstream& file, std::ostream& err) {
  if (path.empty()) {
    err << "error: --out is required\n";
    return false;
  }
  file.open(path, std::ios::out | std::ios::trunc);
  if (!file) {
    err << "error: cannot open '" << path << "' for writing\n";
    return false;
  }
  return true;
}

std::string status_string(const Trajectory& traj) {
  if (traj.status == TrajectoryStatus::Completed) {
    return "completed";
  }
  return "blowup t=" + format_double(traj.blowup_time) + " cause=" + traj.blowup_cause;
}

} // namespace

void write_trajectory_csv(std::ostream& os, const OscillatorySystem& sys, const Trajectory& traj,
                          const std::vector<std::string>& metadata) {
  for (const auto& line : metadata) {
    os << "# " << line << '\n';
  }
  os << "# status=" << status_string(traj) << '\n';
  const std::size_t d = sys.dim();
  os << 't';
  for (std::size_t i = 1; i <= d; ++i) {
    os << ",q_" << i;
  }
  for (std::size_t i = 1; i <= d; ++i) {
    os << ",p_" << i;
  }
  os << ",H";
  const auto& fpu = sys.fpu_params();
  if (fpu) {
    for (int j = 1; j <= fpu->ell; ++j) {
      os << ",I_" << j;
    }
    os << ",I_total";
  }
  os << '\n';
  for (const Sample& s : traj.samples) {
    os << format_double(s.state.t);
    for (double v : s.state.q) {
      os << ',' << format_double(v);
    }
    for (double v : s.state.p) {
      os << ',' << format_double(v);
    }
    os << ',' << format_double(s.energy);
    if (s.stiff) {
      for (double v : s.stiff->per_spring) {
        os << ',' << format_double(v);
      }
      os << ',' << format_double(s.stiff->total);
    }
    os << '\n';
  }
}

int cmd_integrate(const IntegrateConfig& cfg, std::ostream& err) {
  const auto method = method_or_report(cfg.method, err);
  if (!method) {
    return kExitConfig;
  }
  if (!(cfg.h > 0.0) || !(cfg.t_end > 0.0) || cfg.stride < 1 || cfg.substeps < 1 ||
      !(cfg.fp_tol > 0.0) || cfg.fp_max_iter < 1) {
    err << "error: h, t-end, stride, substeps, fp-tol and fp-max-iter must be positive\n";
    return kExitConfig;
  }
  std::optional<OscillatorySystem> sys;
  State state0;
  try {
    if (cfg.system == "fpu") {
      const FpuParams params{cfg.ell, cfg.omega};
      sys.emplace(fpu_build(params));
      state0 = fpu_initial_state(params);
    } else if (cfg.system == "model") {
      if (!(cfg.omega > 0.0)) {
        err << "error: omega must be positive\n";
        return kExitConfig;
      }
      sys.emplace(coupled_oscillator_build(cfg.omega));
      state0 = State{0.0, {cfg.q0}, {cfg.p0}};
    } else {
      err << "error: unknown system '" << cfg.system << "' (expected fpu or model)\n";
      return kExitConfig;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::ofstream file;
  if (!open_output(cfg.out, file, err)) {
    return kExitConfig;
  }

  StepperSpec spec;
  spec.method = *method;
  spec.h = cfg.h;
  spec.substeps = cfg.substeps;
  spec.fp_tol = cfg.fp_tol;
  spec.fp_max_iter = cfg.fp_max_iter;
  Trajectory traj;
  try {
    traj = integrate(*sys, spec, state0, cfg.t_end, cfg.stride);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  std::vector<std::string> meta{
      "vimex integrate",
      "system=" + cfg.system + " method=" + cfg.method + " h=" + format_double(cfg.h) +
          " t_end=" + format_double(cfg.t_end) + " stride=" + std::to_string(cfg.stride),
      "omega=" + format_double(cfg.omega) +
          (cfg.system == "fpu" ? " ell=" + std::to_string(cfg.ell) : std::string{})};
  if (*method == Method::Respa) {
    meta.push_back("substeps=" + std::to_string(cfg.substeps));
  }
  write_trajectory_csv(file, *sys, traj, meta);
  file.flush();
  if (!file) {
    err << "error: failed writing '" << cfg.out << "'\n";
    return kExitConfig;
  }
  if (traj.status == TrajectoryStatus::Blowup) {
    err << "blow-up at t=" << traj.blowup_time << ": " << traj.blowup_cause << '\n';
    return kExitBlowup;
  }
  return kExitOk;
}

State sweep_initial_state(double omega) {
  return State{0.0, {1.0 / std::sqrt(1.0 + omega * omega)}, {0.0}};
}

double sweep_point_error(Method method, double omega, const SweepConfig& cfg) {
  const OscillatorySystem model = coupled_oscillator_build(omega);
  StepperSpec spec;
  spec.method = method;
  spec.h = cfg.h;
  spec.substeps = cfg.substeps;
  // Only the energy is needed; stride over the whole run would drop the
  // maximum, so keep every step.
  const Trajectory traj = integrate(model, spec, sweep_initial_state(omega), cfg.t_end, 1);
  return max_energy_error(traj);
}

std::vector<SweepRow> resonance_sweep(const SweepConfig& cfg) {
  if (!(cfg.grid > 0.0) || !(cfg.sweep_max > 0.0) || !(cfg.h > 0.0) || !(cfg.t_end > 0.0) ||
      cfg.substeps < 1) {
    throw std::invalid_argument("resonance_sweep: grid, max, h, t_end, substeps must be positive");
  }
  const auto count = static_cast<std::size_t>(std::floor(cfg.sweep_max / cfg.grid + 1e-9));
  std::vector<SweepRow> rows(count);
  for (std::size_t k = 0; k < count; ++k) {
    rows[k].omega_h_over_pi = static_cast<double>(k + 1) * cfg.grid;
    rows[k].omega = rows[k].omega_h_over_pi * std::numbers::pi / cfg.h;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      rows[k].err_respa = sweep_point_error(Method::Respa, rows[k].omega, cfg);
      rows[k].err_imex = sweep_point_error(Method::Imex, rows[k].omega, cfg);
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& t : pool) {
    t.join();
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const SweepConfig& cfg, const std::vector<SweepRow>& rows) {
  os << "# vimex resonance-sweep\n";
  os << "# h=" << format_double(cfg.h) << " t_end=" << format_double(cfg.t_end)
     << " substeps=" << cfg.substeps << " grid=" << format_double(cfg.grid)
     << " max=" << format_double(cfg.sweep_max) << '\n';
  os << "# initial state q0=1/sqrt(1+omega^2) p0=0; errors capped at "
     << format_double(kEnergyErrorCap) << '\n';
  os << "omega_h_over_pi,omega,err_respa,err_imex\n";
  for (const SweepRow& r : rows) {
    os << format_double(r.omega_h_over_pi) << ',' << format_double(r.omega) << ','
       << format_double(r.err_respa) << ',' << format_double(r.err_imex) << '\n';
  }
}

int cmd_resonance_sweep(const SweepConfig& cfg, std::ostream& err) {
  if (!(cfg.grid > 0.0) || !(cfg.sweep_max > 0.0) || !(cfg.h > 0.0) || !(cfg.t_end > 0.0) ||
      cfg.substeps < 1) {
    err << "error: grid, max, h, t-end and substeps must be positive\n";
    return kExitConfig;
  }
  std::ofstream file;
  if (!open_output(cfg.out, file, err)) {
    return kExitConfig;
  }
  const auto rows = resonance_sweep(cfg);
  write_sweep_csv(file, cfg, rows);
  file.flush();
  if (!file) {
    err << "error: failed writing '" << cfg.out << "'\n";
    return kExitConfig;
  }
  return kExitOk;
}

Series windowed_stiff_energy(const Trajectory& traj, std::size_t j, double window) {
  Series raw;
  raw.reserve(traj.samples.size());
  for (const Sample& s : traj.samples) {
    if (!s.stiff) {
      throw std::invalid_argument("windowed_stiff_energy: trajectory has no stiff energies");
    }
    const double v = j < s.stiff->per_spring.size() ? s.stiff->per_spring[j] : s.stiff->total;
    raw.push_back({s.state.t, v});
  }
  return windowed_mean(raw, window);
}

namespace {

double adiabatic_drift(const Trajectory& traj, double window) {
  const auto& first = traj.samples.front();
  const std::size_t ell = first.stiff->per_spring.size();
  const double i0 = first.stiff->total;
  double drift = 0.0;
  for (const TimePoint& tp : windowed_stiff_energy(traj, ell, window)) {
    drift = std::max(drift, std::abs(tp.value - i0));
  }
  return drift;
}

// Reference samples every 0.01 time units: ~100 per default window.
long reference_stride(double reference_h) {
  return std::max(1L, std::lround(0.01 / reference_h));
}

} // namespace

ExchangeResult run_fpu_exchange(const ExchangeConfig& cfg) {
  const auto method = parse_method(cfg.method);
  if (!method) {
    throw std::invalid_argument("unknown method '" + cfg.method + "'");
  }
  if (!(cfg.h > 0.0) || !(cfg.t_end > 0.0) || cfg.stride < 1 || !(cfg.window > 0.0) ||
      (cfg.reference_h && !(*cfg.reference_h > 0.0))) {
    throw std::invalid_argument("h, t-end, stride, window and reference-h must be positive");
  }
  const FpuParams params{cfg.ell, cfg.omega};
  const OscillatorySystem sys = fpu_build(params);
  const State state0 = fpu_initial_state(params);

  ExchangeResult result;
  StepperSpec spec;
  spec.method = *method;
  spec.h = cfg.h;
  result.run = integrate(sys, spec, state0, cfg.t_end, cfg.stride);
  result.adiabatic_drift = adiabatic_drift(result.run, cfg.window);

  if (cfg.reference_h) {
    StepperSpec ref_spec;
    ref_spec.method = Method::StormerVerlet;
    ref_spec.h = *cfg.reference_h;
    result.reference =
        integrate(sys, ref_spec, state0, cfg.t_end, reference_stride(*cfg.reference_h));
    result.reference_adiabatic_drift = adiabatic_drift(*result.reference, cfg.window);
    if (result.run.status == TrajectoryStatus::Completed &&
        result.reference->status == TrajectoryStatus::Completed) {
      for (std::size_t j = 0; j < static_cast<std::size_t>(cfg.ell); ++j) {
        const Series a = windowed_stiff_energy(result.run, j, cfg.window);
        const Series b = windowed_stiff_energy(*result.reference, j, cfg.window);
        result.sup_difference.push_back(vimex::sup_difference(a, b));
      }
    }
  }
  return result;
}

int cmd_fpu_exchange(const ExchangeConfig& cfg, std::ostream& err) {
  if (!parse_method(cfg.method)) {
    method_or_report(cfg.method, err);
    return kExitConfig;
  }
  ExchangeResult result;
  try {
    result = run_fpu_exchange(cfg);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  std::ofstream file;
  if (!open_output(cfg.out, file, err)) {
    return kExitConfig;
  }
  file << "# vimex fpu-exchange\n";
  file << "# ell=" << cfg.ell << " omega=" << format_double(cfg.omega) << " method=" << cfg.method
       << " h=" << format_double(cfg.h) << " t_end=" << format_double(cfg.t_end)
       << " stride=" << cfg.stride << " window=" << format_double(cfg.window) << '\n';
  file << "# status=" << status_string(result.run) << '\n';
  file << 't';
  for (int j = 1; j <= cfg.ell; ++j) {
    file << ",I_" << j;
  }
  file << ",I_total,H\n";
  for (const Sample& s : result.run.samples) {
    file << format_double(s.state.t);
    for (double v : s.stiff->per_spring) {
      file << ',' << format_double(v);
    }
    file << ',' << format_double(s.stiff->total) << ',' << format_double(s.energy) << '\n';
  }
  file << "# adiabatic_drift=" << format_double(result.adiabatic_drift) << '\n';
  if (result.reference) {
    file << "# reference method=sv h=" << format_double(*cfg.reference_h)
         << " status=" << status_string(*result.reference)
         << " adiabatic_drift=" << format_double(*result.reference_adiabatic_drift) << '\n';
    if (!result.sup_difference.empty()) {
      file << "# comparison window=" << format_double(cfg.window);
      for (std::size_t j = 0; j < result.sup_difference.size(); ++j) {
        file << " sup_diff_I_" << (j + 1) << '=' << format_double(result.sup_difference[j]);
      }
      file << '\n';
    }
  }
  file.flush();
  if (!file) {
    err << "error: failed writing '" << cfg.out << "'\n";
    return kExitConfig;
  }
  const bool blown = result.run.status == TrajectoryStatus::Blowup ||
                     (result.reference && result.reference->status == TrajectoryStatus::Blowup);
  if (blown) {
    err << "blow-up: run " << status_string(result.run) << '\n';
    return kExitBlowup;
  }
  return kExitOk;
}

ConvergenceResult run_convergence(Method method, const ConvergenceConfig& cfg) {
  const OscillatorySystem model = coupled_oscillator_build(cfg.omega);
  const double nu = std::sqrt(1.0 + cfg.omega * cfg.omega);
  const State state0{0.0, {1.0}, {0.0}};
  ConvergenceResult result;
  result.method = method;
  for (int level = 0; level < 4; ++level) {
    const double h = cfg.h / static_cast<double>(1 << level);
    StepperSpec spec;
    spec.method = method;
    spec.h = h;
    spec.fp_tol = 1e-14;
    spec.fp_max_iter = 200;
    const Trajectory traj = integrate(model, spec, state0, cfg.t_end, 1);
    if (traj.status == TrajectoryStatus::Blowup) {
      result.blowup = true;
      return result;
    }
    const State& last = traj.samples.back().state;
    const double t = last.t;
    const double q_exact = std::cos(nu * t) * state0.q[0] + std::sin(nu * t) * state0.p[0] / nu;
    const double p_exact = -nu * std::sin(nu * t) * state0.q[0] + std::cos(nu * t) * state0.p[0];
    result.errors.emplace_back(h, std::max(std::abs(last.q[0] - q_exact),
                                           std::abs(last.p[0] - p_exact)));
  }
  try {
    result.order = convergence_order(result.errors);
  } catch (const DegenerateInput&) {
    result.order.reset();
  }
  return result;
}

int cmd_convergence(const ConvergenceConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!(cfg.h > 0.0) || !(cfg.t_end > 0.0) || !(cfg.omega >= 0.0) || cfg.methods.empty()) {
    err << "error: h and t-end must be positive, omega nonnegative, at least one method\n";
    return kExitConfig;
  }
  std::vector<Method> methods;
  for (const auto& name : cfg.methods) {
    const auto m = method_or_report(name, err);
    if (!m) {
      return kExitConfig;
    }
    methods.push_back(*m);
  }
  bool all_ok = true;
  out << "method,h,error\n";
  for (Method m : methods) {
    const ConvergenceResult r = run_convergence(m, cfg);
    for (const auto& [h, e] : r.errors) {
      out << to_string(m) << ',' << format_double(h) << ',' << format_double(e) << '\n';
    }
    if (r.blowup) {
      out << "# " << to_string(m) << " order=n/a (blow-up)\n";
      all_ok = false;
      continue;
    }
    if (!r.order) {
      out << "# " << to_string(m) << " order=n/a (zero error)\n";
      all_ok = false;
      continue;
    }
    const bool ok = *r.order >= cfg.order_min && *r.order <= cfg.order_max;
    out << "# " << to_string(m) << " order=" << format_double(*r.order) << (ok ? " ok" : " FAIL")
        << '\n';
    all_ok = all_ok && ok;
  }
  return all_ok ? kExitOk : kExitCheckFailed;
}

} // namespace vimex
