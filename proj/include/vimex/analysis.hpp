// Stability and diagnostic computations for the oscillatory integrators.

#ifndef VIMEX_ANALYSIS_HPP
#define VIMEX_ANALYSIS_HPP

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vimex/integrators.hpp"
#include "vimex/linalg.hpp"

namespace vimex {

/// Frequency whose exact rotation over one step equals the implicit midpoint
/// step on an oscillator of frequency omega: tan(h w~ / 2) = h omega / 2.
/// Always in [0, pi/h).
double modified_frequency(double h, double omega);

/// I + (h^2/4) Omega^2.
SymMatrix modified_mass(double h, const SymMatrix& omega2);

/// Linear one-step map (q, p) -> (q', p') of a stepper on a scalar system,
/// obtained by stepping the basis states (1, 0) and (0, 1).
Matrix2 propagation_matrix(const OscillatorySystem& sys, const StepperSpec& spec);

/// IMEX on the scalar model U = q^2/2, W = omega^2 q^2/2.
Matrix2 imex_propagation_matrix(double h, double omega);

struct StabilityReport {
  std::string method;
  double h = 0.0;
  double omega = 0.0;
  double spectral_radius = 0.0;
  bool stable = false;
};

inline constexpr double kStabilityTolerance = 1e-12;

StabilityReport imex_stability(double h, double omega);

inline constexpr double kEnergyErrorCap = 1e12;

/// max_n |H_n - H_0| using the stored sample energies; kEnergyErrorCap for
/// blown-up trajectories.
double max_energy_error(const Trajectory& traj);
double max_energy_error(const Trajectory& traj, const std::function<double(const State&)>& energy);

struct TimePoint {
  double t = 0.0;
  double value = 0.0;
};
using Series = std::vector<TimePoint>;

/// Centered moving average over [t - window/2, t + window/2], truncated at
/// the ends of the series.
Series windowed_mean(std::span<const TimePoint> series, double window);

/// sup_t |a(t) - b(t)| over the sample times of `a`, with `b` linearly
/// interpolated. Times of `a` outside the span of `b` are skipped.
double sup_difference(std::span<const TimePoint> a, std::span<const TimePoint> b);

class DegenerateInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Least-squares slope of log(err) against log(h).
double convergence_order(std::span<const std::pair<double, double>> errors);

} // namespace vimex

#endif
