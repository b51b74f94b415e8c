#pragma once

#include "crcd/fluxonium.hpp"
#include "crcd/types.hpp"

namespace crcd {

struct OscillatorSpec {
  double omega_osc = 0.0;  // GHz
  int fock_cutoff = 45;

  void validate() const;
};

// Eigen-decomposition of the static coupled Hamiltonian
//   H_sys/h = H_f x I + I x omega_osc a^dag a + i g n x (a - a^dag),
// with eigenstates labeled by their dominant bare product state. In the
// real-wavefunction gauge (n purely imaginary) H_sys is real symmetric, so
// u0 is real orthogonal. Columns of u0 are ordered by bare label
// flat(i, n) = i * fock_cutoff + n; the diagonal is gauged positive.
struct CoupledSpectrum {
  int levels_kept = 0;
  int fock_cutoff = 0;
  double g = 0.0;
  double omega_osc = 0.0;
  Vec energies;          // indexed by bare flat label
  Mat u0;                // bare -> eigen, column flat(i,n) = |phi_{i,n}>
  Vec overlap_quality;   // |<i,n|phi_{i,n}>|^2 per label
  Mat phi_eigen;         // u0^T (phi x I) u0   (drive operator, dressed)
  Mat x_eigen;           // u0^T (I x (a+a^dag)) u0

  int dim() const { return levels_kept * fock_cutoff; }
  int flat(int i, int n) const { return i * fock_cutoff + n; }
  double energy(int i, int n) const { return energies(flat(i, n)); }
};

CoupledSpectrum build_coupled(const FluxoniumModel& model,
                              const OscillatorSpec& osc, double g);

// E_{mu,1} - E_{mu,0}
double dressed_oscillator_frequency(const CoupledSpectrum& spec, int mu);

// Dispersive shift in the chi*sigma_z*a^dag*a normalization: half of the
// branch splitting (E_{1,1}-E_{1,0}) - (E_{0,1}-E_{0,0}).
double dispersive_shift(const CoupledSpectrum& spec);

// E_{mu,2} - 2 E_{mu,1} + E_{mu,0}
double self_kerr(const CoupledSpectrum& spec, int mu);

}  // namespace crcd
