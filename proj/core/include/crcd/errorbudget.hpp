#pragma once

#include <string>
#include <vector>

#include "crcd/coupled.hpp"
#include "crcd/drive.hpp"
#include "crcd/evolve.hpp"
#include "crcd/fluxonium.hpp"
#include "crcd/metrics.hpp"
#include "crcd/types.hpp"

namespace crcd {

// Elementwise split of a dressed drive operator into the on-resonance part
// (same branch, Fock index +/- 1, for every branch) and the remainder.
struct DrivePartition {
  Mat on_res;
  Mat off_res;
};

DrivePartition partition_drive(const Mat& op_dressed,
                               const CoupledSpectrum& spec);

struct BudgetRow {
  double gate_time = 0.0;       // ns
  double amplitude_full = 0.0;  // calibrated A for the full drive, GHz
  double amplitude_onres = 0.0;
  double infid_full = 0.0;
  double infid_onres = 0.0;
  double leakage_fluxonium = 0.0;  // decoupled-fluxonium leakage
  bool ok = true;
  std::string note;
};

struct BudgetSetup {
  const FluxoniumModel& model;
  const CoupledSpectrum& spec;
  double target_length = 1.6;
  int n_in = 10;
  int darkened_branch = 1;
  PulseSpec pulse_template;  // amplitude is calibrated per row
  PropagationConfig prop;
};

// One Fig.-3-style row per gate time: calibrate the drive to the target
// length, then run full-drive and on-resonance-only gates plus the
// decoupled-fluxonium leakage. Calibration failures are recorded per row and
// the sweep continues.
std::vector<BudgetRow> budget_sweep(const BudgetSetup& setup,
                                    const std::vector<double>& gate_times);

// Appendix-D mismatched-rate toy: system levels {nu, mu, i} (nu a spectator
// with rate r_nu = r_mu - r_cd), oscillator attached, driven at omega with
// the echoed envelope.
struct ToyModelParams {
  double delta = 0.0;        // Delta_{mu,i}, GHz
  double omega = 0.0;        // oscillator and drive frequency, GHz
  double amplitude_a = 0.0;  // GHz
  double phi_x = 0.0;        // <i|phi|mu>
  double phi_z = 0.0;        // (<i|phi|i> - <mu|phi|mu>)/2
  double r_mu = 0.0;
  double r_i = 0.0;
  double r_cd = 2.4e-3;
  double gate_time = 0.0;  // ns
  int fock_cutoff = 30;
  int n_in = 1;
  int steps_per_carrier_period = 24;
};

struct ToyResult {
  double infidelity = 0.0;
  double displacement_length = 0.0;  // |alpha_mu(T) - alpha_nu(T)|
  Complex alpha_end_mu{0.0, 0.0};    // column started in mu
  Complex alpha_end_nu{0.0, 0.0};
};

ToyResult toy_model_run(const ToyModelParams& params);

}  // namespace crcd
