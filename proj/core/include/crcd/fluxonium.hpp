#pragma once

#include "crcd/types.hpp"

namespace crcd {

// Circuit energies in GHz (E/h); delta_phi is the static deviation of the
// external flux from the half-flux-quantum sweet spot, in units of Phi_0.
struct FluxoniumSpec {
  double e_j = 0.0;
  double e_l = 0.0;
  double e_c = 0.0;
  double delta_phi = 0.0;

  void validate() const;
  // Flux is periodic in one flux quantum; returns delta_phi wrapped to
  // [-0.5, 0.5].
  double normalized_delta_phi() const;
};

// Truncated eigen-decomposition of
//   H_f/h = 4 E_C n^2 + E_J cos(phi) + E_L/2 (phi - 2 pi dPhi)^2
// in the harmonic basis of the linearized circuit (plasma frequency
// sqrt(8 E_L E_C)). Eigenvector gauge: the largest-magnitude component of
// each eigenvector is real and positive, which makes phi real symmetric
// and n purely imaginary.
struct FluxoniumModel {
  FluxoniumSpec spec;
  int levels_kept = 0;
  int basis_dim = 0;
  Vec energies;    // GHz, sorted ascending, energies(0) == 0
  Mat phi_elems;   // <i|phi|j>, real symmetric
  Mat n_elems;     // Im <i|n|j>; <i|n|j> = i * n_elems(i,j), antisymmetric
};

FluxoniumModel build_fluxonium(const FluxoniumSpec& spec, int basis_dim = 120,
                               int levels_kept = 12);

// Delta_{k,j} = E_j - E_k
double transition_frequency(const FluxoniumModel& model, int k, int j);

}  // namespace crcd
