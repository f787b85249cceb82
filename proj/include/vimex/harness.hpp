// Experiment drivers behind the `vimex` command line tool.
//
// Every command returns a process exit code:
//   0 success, 1 configuration or IO error, 2 numerical blow-up,
//   3 a check performed by the command failed.
//
// CSV files start with `#` metadata lines, then a header row. Floats are
// written as 17-significant-digit scientific ("%.16e"), so identical runs
// produce byte-identical files.

#ifndef VIMEX_HARNESS_HPP
#define VIMEX_HARNESS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vimex/analysis.hpp"
#include "vimex/integrators.hpp"
#include "vimex/systems.hpp"

namespace vimex {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitBlowup = 2, kExitCheckFailed = 3 };

std::string format_double(double v);

// --- integrate -------------------------------------------------------------

struct IntegrateConfig {
  std::string system = "fpu"; // "fpu" or "model"
  int ell = 3;
  double omega = 50.0;
  std::string method = "imex";
  double h = 0.03;
  double t_end = 200.0;
  long stride = 1;
  int substeps = 100;
  double fp_tol = 1e-12;
  int fp_max_iter = 100;
  double q0 = 1.0; // model system only
  double p0 = 0.0; // model system only
  std::string out;
};

void write_trajectory_csv(std::ostream& os, const OscillatorySystem& sys, const Trajectory& traj,
                          const std::vector<std::string>& metadata);

int cmd_integrate(const IntegrateConfig& cfg, std::ostream& err);

// --- resonance-sweep -------------------------------------------------------

struct SweepConfig {
  double h = 0.1;
  double t_end = 1000.0;
  int substeps = 100;
  double grid = 0.01;
  double sweep_max = 4.5;
  unsigned threads = 0; // 0: hardware concurrency
  std::string out;
};

struct SweepRow {
  double omega_h_over_pi = 0.0;
  double omega = 0.0;
  double err_respa = 0.0;
  double err_imex = 0.0;
};

/// Initial state for one sweep point: all energy in the position,
/// H_0 = 1/2 for every omega (q0 = 1/sqrt(1 + omega^2), p0 = 0).
State sweep_initial_state(double omega);

/// Capped maximum absolute energy error of one method at one frequency.
double sweep_point_error(Method method, double omega, const SweepConfig& cfg);

/// floor(sweep_max / grid) rows at r = k * grid, ordered by k.
std::vector<SweepRow> resonance_sweep(const SweepConfig& cfg);

void write_sweep_csv(std::ostream& os, const SweepConfig& cfg, const std::vector<SweepRow>& rows);

int cmd_resonance_sweep(const SweepConfig& cfg, std::ostream& err);

// --- fpu-exchange ----------------------------------------------------------

struct ExchangeConfig {
  int ell = 3;
  double omega = 50.0;
  std::string method = "imex";
  double h = 0.03;
  double t_end = 200.0;
  long stride = 1;
  std::optional<double> reference_h;
  double window = 1.0;
  std::string out;
};

struct ExchangeResult {
  Trajectory run;
  std::optional<Trajectory> reference;
  /// sup_t |<I_j>(t) - <I_j^ref>(t)| per stiff spring, when a reference ran.
  std::vector<double> sup_difference;
  /// sup_t |<I>(t) - I(0)| of the windowed total stiff energy.
  double adiabatic_drift = 0.0;
  std::optional<double> reference_adiabatic_drift;
};

/// Windowed stiff energy I_j (j < ell) or total I (j == ell) of a trajectory.
Series windowed_stiff_energy(const Trajectory& traj, std::size_t j, double window);

ExchangeResult run_fpu_exchange(const ExchangeConfig& cfg);

int cmd_fpu_exchange(const ExchangeConfig& cfg, std::ostream& err);

// --- convergence -----------------------------------------------------------

struct ConvergenceConfig {
  double h = 0.1;
  double t_end = 10.0;
  double omega = 1.0; // fast frequency of the model oscillator
  std::vector<std::string> methods{"sv", "imex", "midpoint"};
  double order_min = 1.9;
  double order_max = 2.1;
};

struct ConvergenceResult {
  Method method = Method::StormerVerlet;
  std::vector<std::pair<double, double>> errors; // (h, global error at t_end)
  std::optional<double> order;                   // empty if a run blew up
  bool blowup = false;
};

/// Global error against the exact solution of q'' = -(1 + omega^2) q at
/// h, h/2, h/4, h/8.
ConvergenceResult run_convergence(Method method, const ConvergenceConfig& cfg);

int cmd_convergence(const ConvergenceConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace vimex

#endif
