#pragma once

#include <vector>

#include "crcd/coupled.hpp"
#include "crcd/drive.hpp"
#include "crcd/types.hpp"

namespace crcd {

enum class Frame { lab, interaction };

struct PropagationConfig {
  int steps_per_carrier_period = 24;
  Frame frame = Frame::interaction;
  int record_stride = 0;   // 0: auto (~200 samples per gate)
  double norm_tol = 1e-6;  // bound on the per-step pre-projection norm drift;
                           // exceeding it raises a step-size error
  bool fast_calibration = true;  // single-precision arithmetic inside
                                 // calibration iterations

  void validate() const;
};

struct TrajectoryPoint {
  double t = 0.0;
  Complex alpha_cond_0{0.0, 0.0};  // column 0, conditioned on its branch
  Complex alpha_cond_1{0.0, 0.0};  // column 1
  double leakage = 0.0;            // mean non-computational population
};

// Propagated gate in the rotating frame of the dressed Hamiltonian: with the
// drive off the report is exactly the identity on the propagated columns.
struct GateReport {
  CMat final_columns;
  std::vector<TrajectoryPoint> trajectory;
  double leakage = 0.0;
  double calibrated_t = 0.0;
  double norm_drift = 0.0;           // max per-step pre-projection |1 - norm|
  double boundary_population = 0.0;  // max top-Fock population seen
};

GateReport propagate(const CoupledSpectrum& spec, const DriveSchedule& schedule,
                     const CMat& initial_columns, const PropagationConfig& config);

// Same propagation with an explicit dressed drive operator (for filtered
// drives); `drive_op` replaces phi_eigen + c_sd * x_eigen.
GateReport propagate_with_operator(const CoupledSpectrum& spec,
                                   const DriveSchedule& schedule,
                                   const Mat& drive_op, const CMat& initial_columns,
                                   const PropagationConfig& config);

// Coherent amplitude of the oscillator state conditioned on a dressed
// fluxonium branch: argmax_a |<a|psi_branch>|^2, seeded at <a> and refined
// by simplex search to 1e-6.
Complex coherent_amplitude(const CVec& state, const CoupledSpectrum& spec,
                           int branch);

// Branch population of a normalized state (diagnostic for the above).
double branch_population(const CVec& state, const CoupledSpectrum& spec,
                         int branch);

// Leakage of the decoupled fluxonium driven by f(t) phi with the schedule's
// envelope and echo: mean final population outside {0, 1} starting from each
// computational state.
double fluxonium_leakage(const FluxoniumModel& model,
                         const DriveSchedule& schedule,
                         const PropagationConfig& config);

// Secant iteration on the gate time until the conditional displacement of
// the active column reaches target_length / 2 within 0.5%. Template
// amplitude is fixed; returns the calibrated T (ns).
double calibrate_gate_time(double target_length,
                           const DriveSchedule& schedule_template,
                           const CoupledSpectrum& spec,
                           const PropagationConfig& config);

// Same iteration on the amplitude at fixed gate time.
double calibrate_amplitude(double target_length,
                           const DriveSchedule& schedule_template,
                           const CoupledSpectrum& spec,
                           const PropagationConfig& config);

// Generic driven two-index system used by both the main gate and the toy
// model: diagonal energies + drive_op modulated by the scheduled pulse, with
// the echo swapping system levels 0 and 1.
struct GenericSystem {
  Vec energies;      // flat index = level * fock_dim + n (fock_dim >= 1)
  Mat drive_op;      // same indexing, real symmetric
  int levels = 0;
  int fock_dim = 1;
};

GateReport propagate_generic(const GenericSystem& sys,
                             const DriveSchedule& schedule,
                             const CMat& initial_columns,
                             const PropagationConfig& config);

// Single-precision variant for calibration loops.
GateReport propagate_generic_fast(const GenericSystem& sys,
                                  const DriveSchedule& schedule,
                                  const CMat& initial_columns,
                                  const PropagationConfig& config);

}  // namespace crcd
