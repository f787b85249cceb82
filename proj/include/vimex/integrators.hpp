// One-step maps on phase space and the trajectory driver.
//
// The variational IMEX step is the symmetric composition
//
//     kick(h/2, U)  o  midpoint(h, T + W)  o  kick(h/2, U)
//
// where the midpoint substep is linear in (q, p) because W is quadratic and
// therefore costs one SPD solve with I + (h^2/4) Omega^2.

#ifndef VIMEX_INTEGRATORS_HPP
#define VIMEX_INTEGRATORS_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vimex/linalg.hpp"
#include "vimex/systems.hpp"

namespace vimex {

enum class Method { StormerVerlet, Imex, Respa, MidpointFull, ModifiedImpulse };

const char* to_string(Method m);
/// Accepts the CLI spellings: sv, imex, respa, midpoint, modified-impulse.
std::optional<Method> parse_method(const std::string& name);

class NoConvergence : public std::runtime_error {
public:
  explicit NoConvergence(int iterations);
  int iterations() const { return iterations_; }

private:
  int iterations_;
};

class MissingDiagonalOmega : public std::invalid_argument {
public:
  MissingDiagonalOmega();
};

struct StepperSpec {
  Method method = Method::Imex;
  double h = 0.1;
  int substeps = 1;                       // Respa only
  std::optional<SymMatrix> mass_override; // StormerVerlet only
  double fp_tol = 1e-12;                  // MidpointFull only
  int fp_max_iter = 100;                  // MidpointFull only
};

/// p <- p + tau g(q)
State kick(const OscillatorySystem& sys, const State& s, double tau);

State step_stormer_verlet(const OscillatorySystem& sys, const State& s, double h);
State step_stormer_verlet(const OscillatorySystem& sys, const State& s, double h,
                          const SymMatrix& mass_override);

/// Implicit midpoint on T + W only.
State step_midpoint_fast(const OscillatorySystem& sys, const State& s, double h);

State step_imex(const OscillatorySystem& sys, const State& s, double h);

/// Impulse method: half kicks from U around `substeps` Verlet steps on W.
State step_respa(const OscillatorySystem& sys, const State& s, double h, int substeps);

/// IMEX with the fast substep written as the exact rotation of the
/// modified-frequency oscillator. Needs a diagonal Omega.
State step_modified_impulse(const OscillatorySystem& sys, const State& s, double h);

/// Implicit midpoint on the full potential, fixed-point iteration on the
/// midpoint configuration. Throws NoConvergence.
State step_midpoint_full(const OscillatorySystem& sys, const State& s, double h, double fp_tol,
                         int fp_max_iter);

/// Reusable one-step map for a fixed (system, spec). Factorizations that
/// depend only on h are computed once.
class Stepper {
public:
  Stepper(const OscillatorySystem& sys, StepperSpec spec);

  const StepperSpec& spec() const { return spec_; }
  State advance(const State& s) const;

private:
  const OscillatorySystem* sys_;
  StepperSpec spec_;
  std::optional<Cholesky> fast_solver_; // I + (h^2/4) Omega^2
  std::optional<Cholesky> mass_solver_; // mass override
  std::vector<std::array<double, 3>> rotation_; // modified impulse, per mode
};

enum class TrajectoryStatus { Completed, Blowup };

struct Sample {
  State state;
  double energy = 0.0;
  std::optional<StiffEnergies> stiff;
};

struct Trajectory {
  std::vector<Sample> samples;
  TrajectoryStatus status = TrajectoryStatus::Completed;
  double blowup_time = 0.0;
  std::string blowup_cause;
  double h = 0.0;
  Method method = Method::Imex;
  std::string label;
};

inline constexpr double kBlowupCap = 1e8;

/// Number of steps of size h needed to cover [t0, t_end].
long step_count(double t0, double t_end, double h);

/// Records the initial state and every `stride`-th step. Stops at the first
/// non-finite value, |q|_inf or |p|_inf above kBlowupCap, or stepper error;
/// the offending state (when one exists) is kept as the last sample.
Trajectory integrate(const OscillatorySystem& sys, const StepperSpec& spec, const State& state0,
                     double t_end, long stride = 1);

} // namespace vimex

#endif
