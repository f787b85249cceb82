// vimex: run the oscillatory-integrator experiments and export CSV.

#include <iostream>

#include "CLI11.hpp"
#include "vimex/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Variational IMEX integrators for highly oscillatory systems"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  vimex::IntegrateConfig integrate_cfg;
  auto* integrate = app.add_subcommand("integrate", "Run one integration and write its trajectory");
  integrate->add_option("--system", integrate_cfg.system, "fpu or model")
      ->check(CLI::IsMember({"fpu", "model"}))
      ->capture_default_str();
  integrate->add_option("--ell", integrate_cfg.ell, "Number of stiff FPU springs")
      ->capture_default_str();
  integrate->add_option("--omega", integrate_cfg.omega, "Fast frequency")->capture_default_str();
  integrate->add_option("--method", integrate_cfg.method, "sv, imex, respa, midpoint, modified-impulse")
      ->capture_default_str();
  integrate->add_option("--h", integrate_cfg.h, "Step size")->capture_default_str();
  integrate->add_option("--t-end", integrate_cfg.t_end, "Final time")->capture_default_str();
  integrate->add_option("--stride", integrate_cfg.stride, "Record every n-th step")
      ->capture_default_str();
  integrate->add_option("--substeps", integrate_cfg.substeps, "Fast substeps per step (respa)")
      ->capture_default_str();
  integrate->add_option("--fp-tol", integrate_cfg.fp_tol, "Fixed-point tolerance (midpoint)")
      ->capture_default_str();
  integrate->add_option("--fp-max-iter", integrate_cfg.fp_max_iter, "Fixed-point iteration cap (midpoint)")
      ->capture_default_str();
  integrate->add_option("--q0", integrate_cfg.q0, "Initial position (model)")->capture_default_str();
  integrate->add_option("--p0", integrate_cfg.p0, "Initial momentum (model)")->capture_default_str();
  integrate->add_option("--out", integrate_cfg.out, "Output CSV path");

  vimex::SweepConfig sweep_cfg;
  auto* sweep = app.add_subcommand("resonance-sweep",
                                   "Max energy error of r-RESPA and IMEX against omega h / pi");
  sweep->add_option("--h", sweep_cfg.h, "Step size")->capture_default_str();
  sweep->add_option("--t-end", sweep_cfg.t_end, "Final time")->capture_default_str();
  sweep->add_option("--substeps", sweep_cfg.substeps, "r-RESPA fast substeps")->capture_default_str();
  sweep->add_option("--grid", sweep_cfg.grid, "Spacing in omega h / pi")->capture_default_str();
  sweep->add_option("--max", sweep_cfg.sweep_max, "Largest omega h / pi")->capture_default_str();
  sweep->add_option("--threads", sweep_cfg.threads, "Worker threads (0: all cores)")
      ->capture_default_str();
  sweep->add_option("--out", sweep_cfg.out, "Output CSV path");

  vimex::ExchangeConfig exchange_cfg;
  double reference_h = 0.0;
  auto* exchange = app.add_subcommand("fpu-exchange", "Stiff-spring energies of the FPU chain");
  exchange->add_option("--ell", exchange_cfg.ell, "Number of stiff springs")->capture_default_str();
  exchange->add_option("--omega", exchange_cfg.omega, "Stiff frequency")->capture_default_str();
  exchange->add_option("--method", exchange_cfg.method, "Integrator")->capture_default_str();
  exchange->add_option("--h", exchange_cfg.h, "Step size")->capture_default_str();
  exchange->add_option("--t-end", exchange_cfg.t_end, "Final time")->capture_default_str();
  exchange->add_option("--stride", exchange_cfg.stride, "Record every n-th step")
      ->capture_default_str();
  auto* ref_opt = exchange->add_option("--reference-h", reference_h,
                                       "Also run a Stormer/Verlet reference with this step");
  exchange->add_option("--window", exchange_cfg.window, "Averaging window for I_j")
      ->capture_default_str();
  exchange->add_option("--out", exchange_cfg.out, "Output CSV path");

  vimex::ConvergenceConfig conv_cfg;
  auto* conv = app.add_subcommand("convergence", "Measure the order of the symmetric methods");
  conv->add_option("--h", conv_cfg.h, "Base step size (then h/2, h/4, h/8)")->capture_default_str();
  conv->add_option("--t-end", conv_cfg.t_end, "Final time")->capture_default_str();
  conv->add_option("--omega", conv_cfg.omega, "Fast frequency of the model oscillator")
      ->capture_default_str();
  conv->add_option("--method", conv_cfg.methods, "Restrict to these methods")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return vimex::kExitConfig;
  }

  if (*integrate) {
    return vimex::cmd_integrate(integrate_cfg, std::cerr);
  }
  if (*sweep) {
    return vimex::cmd_resonance_sweep(sweep_cfg, std::cerr);
  }
  if (*exchange) {
    if (*ref_opt) {
      exchange_cfg.reference_h = reference_h;
    }
    return vimex::cmd_fpu_exchange(exchange_cfg, std::cerr);
  }
  return vimex::cmd_convergence(conv_cfg, std::cout, std::cerr);
}
