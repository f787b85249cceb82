#include "vimex/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace vimex {

double modified_frequency(double h, double omega) {
  if (!(h > 0.0) || !(omega >= 0.0)) {
    throw std::invalid_argument("modified_frequency: need h > 0 and omega >= 0");
  }
  // The arccos form loses accuracy near h omega = 2; the arctan form does not.
  return 2.0 * std::atan(0.5 * h * omega) / h;
}

SymMatrix modified_mass(double h, const SymMatrix& omega2) {
  return SymMatrix::identity(omega2.dim()) + omega2.scaled(0.25 * h * h);
}

Matrix2 propagation_matrix(const OscillatorySystem& sys, const StepperSpec& spec) {
  if (sys.dim() != 1) {
    throw std::invalid_argument("propagation_matrix: scalar systems only");
  }
  const Stepper stepper(sys, spec);
  const State e_q = stepper.advance(State{0.0, {1.0}, {0.0}});
  const State e_p = stepper.advance(State{0.0, {0.0}, {1.0}});
  return Matrix2{{{e_q.q[0], e_p.q[0]}, {e_q.p[0], e_p.p[0]}}};
}

Matrix2 imex_propagation_matrix(double h, double omega) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("imex_propagation_matrix: h must be positive");
  }
  const OscillatorySystem model = coupled_oscillator_build(omega);
  StepperSpec spec;
  spec.method = Method::Imex;
  spec.h = h;
  return propagation_matrix(model, spec);
}

StabilityReport imex_stability(double h, double omega) {
  StabilityReport r;
  r.method = to_string(Method::Imex);
  r.h = h;
  r.omega = omega;
  r.spectral_radius = spectral_radius_2x2(imex_propagation_matrix(h, omega));
  r.stable = r.spectral_radius <= 1.0 + kStabilityTolerance;
  return r;
}

double max_energy_error(const Trajectory& traj) {
  if (traj.samples.empty()) {
    throw std::invalid_argument("max_energy_error: empty trajectory");
  }
  if (traj.status == TrajectoryStatus::Blowup) {
    return kEnergyErrorCap;
  }
  const double h0 = traj.samples.front().energy;
  double err = 0.0;
  for (const Sample& s : traj.samples) {
    err = std::max(err, std::abs(s.energy - h0));
  }
  return std::isfinite(err) ? std::min(err, kEnergyErrorCap) : kEnergyErrorCap;
}

double max_energy_error(const Trajectory& traj,
                        const std::function<double(const State&)>& energy) {
  if (traj.samples.empty()) {
    throw std::invalid_argument("max_energy_error: empty trajectory");
  }
  if (traj.status == TrajectoryStatus::Blowup) {
    return kEnergyErrorCap;
  }
  const double h0 = energy(traj.samples.front().state);
  double err = 0.0;
  for (const Sample& s : traj.samples) {
    err = std::max(err, std::abs(energy(s.state) - h0));
  }
  return std::isfinite(err) ? std::min(err, kEnergyErrorCap) : kEnergyErrorCap;
}

Series windowed_mean(std::span<const TimePoint> series, double window) {
  if (!(window > 0.0)) {
    throw std::invalid_argument("windowed_mean: window must be positive");
  }
  const std::size_t n = series.size();
  // prefix[i] = sum of values[0, i)
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + series[i].value;
  }
  const double half = 0.5 * window;
  Series out(n);
  std::size_t lo = 0;
  std::size_t hi = 0; // one past the last index inside the window
  for (std::size_t i = 0; i < n; ++i) {
    const double t = series[i].t;
    while (lo < i && series[lo].t < t - half) {
      ++lo;
    }
    hi = std::max(hi, i + 1);
    while (hi < n && series[hi].t <= t + half) {
      ++hi;
    }
    out[i] = {t, (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo)};
  }
  return out;
}

double sup_difference(std::span<const TimePoint> a, std::span<const TimePoint> b) {
  if (b.empty()) {
    throw std::invalid_argument("sup_difference: empty reference series");
  }
  double sup = 0.0;
  std::size_t j = 0;
  for (const TimePoint& pa : a) {
    if (pa.t < b.front().t || pa.t > b.back().t) {
      continue;
    }
    while (j + 1 < b.size() && b[j + 1].t < pa.t) {
      ++j;
    }
    double vb = b[j].value;
    if (j + 1 < b.size() && b[j + 1].t > b[j].t) {
      const double w = std::clamp((pa.t - b[j].t) / (b[j + 1].t - b[j].t), 0.0, 1.0);
      vb = (1.0 - w) * b[j].value + w * b[j + 1].value;
    }
    sup = std::max(sup, std::abs(pa.value - vb));
  }
  return sup;
}

double convergence_order(std::span<const std::pair<double, double>> errors) {
  if (errors.size() < 2) {
    throw DegenerateInput("convergence_order: need at least two points");
  }
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& [h, err] : errors) {
    if (!(err > 0.0) || !std::isfinite(err) || !(h > 0.0)) {
      throw DegenerateInput("convergence_order: step sizes and errors must be positive");
    }
    sx += std::log(h);
    sy += std::log(err);
  }
  const double n = static_cast<double>(errors.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [h, err] : errors) {
    const double dx = std::log(h) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(err) - my);
  }
  if (sxx == 0.0) {
    throw DegenerateInput("convergence_order: step sizes must differ");
  }
  return sxy / sxx;
}

} // namespace vimex
