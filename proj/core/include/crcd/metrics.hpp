#pragma once

#include <vector>

#include "crcd/coupled.hpp"
#include "crcd/types.hpp"

namespace crcd {

// Input subspace of interest: dressed computational labels (i in {0,1},
// n < n_in).
struct SubspaceProjector {
  int n_in = 10;
  std::vector<int> dressed_indices;  // flat labels, size 2*n_in

  static SubspaceProjector computational(const CoupledSpectrum& spec, int n_in);
};

// F = [Tr(M^dag M) + |Tr M|^2] / (Np (Np + 1)) for the Np x Np block M.
double pedersen_fidelity(const CMat& m);

// Truncated displacement operator exp(alpha a^dag - alpha* a).
CMat displacement_operator(Complex alpha, int nmax);

// Bare-structure echoed conditional displacement on `levels` x `nmax`:
// |1><0| x D(alpha/2) + |0><1| x D(-alpha/2), identity on levels >= 2.
CMat target_ecd(Complex alpha0, int levels, int nmax);

struct FidelityResult {
  double fidelity = 0.0;
  double fidelity_unoptimized = 0.0;
  double theta_opt = 0.0;
  Complex alpha_opt{0.0, 0.0};
  Complex m_trace{0.0, 0.0};
  bool improved = true;  // false when no seed beat the unoptimized value
};

// Maximize the Pedersen fidelity of M(theta, alpha) =
// P ECD_{alpha0} Z_f(theta) D_alpha U P over the fluxonium phase theta and
// the unconditional displacement alpha (free operations), from four theta
// seeds. `u_cols` are the propagated images of the projector's dressed
// basis states (dim x Np), i.e. U P in the rotating frame.
FidelityResult optimize_free_ops(const CMat& u_cols, Complex alpha0,
                                 const SubspaceProjector& projector,
                                 const CoupledSpectrum& spec);

// Same optimization on a generic `levels` x `nmax` system with computational
// levels {0, 1} (used by the two-level-plus-spectator toy model).
FidelityResult optimize_free_ops_generic(const CMat& u_cols, Complex alpha0,
                                         int n_in, int levels, int nmax);

}  // namespace crcd
