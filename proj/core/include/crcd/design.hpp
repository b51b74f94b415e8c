#pragma once

#include <optional>
#include <vector>

#include "crcd/fluxonium.hpp"
#include "crcd/rates.hpp"
#include "crcd/types.hpp"

namespace crcd {

struct SelectionConstraints {
  double c_r = 0.2;   // mismatch-ratio bound
  double c_g = 0.1;   // coupling hybridization bound
  double c_a = 1.0;   // drive hybridization bound
  int n_levels = 10;  // highest Fock index of interest

  void validate() const;
};

struct OperatingPoint {
  int mu = 0;  // computational state of the activating transition
  int i = 0;   // non-computational partner
  double omega_osc = 0.0;
  double ratio = 0.0;      // |r_i - r_mu| / |r_CD|
  double dominance = 0.0;  // signed r_CD fraction of the (mu,i) contribution
  double g_max = 0.0;      // GHz
  double a_max = 0.0;      // GHz
  double t_min = 0.0;      // ns
};

// The transition (mu in {0,1}, i >= 2) credited with activating the gate at
// this frequency: among allowed transitions inside a pole window around
// omega_osc, the one contributing most to r_CD. Empty when no allowed
// transition has any weight.
std::optional<std::pair<int, int>> identify_activating_transition(
    const FluxoniumModel& model, double omega_osc);

// Eq.-10 style scan: evaluates the rate breakdown on each grid frequency,
// keeps points whose mismatch ratio and dominance pass the constraints.
// Grid points within 2 MHz of a pole of r_0, r_1 or r_i are skipped.
std::vector<OperatingPoint> scan_frequencies(
    const FluxoniumModel& model, const std::vector<double>& freq_grid,
    const SelectionConstraints& constraints = {});

// g_max = C_g |Delta_{i,mu} - omega| / (sqrt(N) |<i|n|mu>|)
double max_coupling(const FluxoniumModel& model, int mu, int i,
                    double omega_osc, const SelectionConstraints& c = {});

// A_max = C_A |Delta_{i,mu} - omega| / |<i|phi|mu>|
double max_drive(const FluxoniumModel& model, int mu, int i, double omega_osc,
                 const SelectionConstraints& c = {});

// Smallest T with (1/2) A_max r_CD^max Int_0^T |Omega| dt >= L; for the
// echoed sin^2 envelope Int |Omega| = T/2, so T = 4 L / (2 pi A_max r_CD).
double min_gate_time(double target_length, double a_max, double r_cd_max);

}  // namespace crcd
