#pragma once

#include "crcd/coupled.hpp"
#include "crcd/fluxonium.hpp"
#include "crcd/types.hpp"

namespace crcd {

// First-order conditional displacement rate for one fluxonium branch,
//   r_k = sum_{j != k} i g n_{k,j} phi_{j,k} [1/(D_kj - w) - 1/(D_kj + w)],
// kept term by term. Real in the chosen gauge.
struct RateBreakdown {
  int branch = 0;
  double g = 0.0;
  double omega_osc = 0.0;
  Vec per_transition;  // j-th summand; entry at j == branch is zero
  double total = 0.0;
};

RateBreakdown perturbative_rate(const FluxoniumModel& model, int branch,
                                double omega_osc, double g);

// r_CD = r_1 - r_0
double cd_rate(const FluxoniumModel& model, double omega_osc, double g);

// per_transition / total (signed fractions summing to 1)
Vec dominance_fractions(const RateBreakdown& breakdown);

// Least-squares extraction of the displacement rate from the dressed flux
// operator: fit <phi_{k,n}|phi|phi_{k,n-1}> to r sqrt(n) + p n^{3/2} over
// n = 1..fock_fit_range.
struct ExtractedRates {
  double r = 0.0;
  double p = 0.0;
  double residual = 0.0;         // Frobenius norm of the two-term fit residual
  double residual_linear = 0.0;  // residual of the r-only fit
  int fock_fit_range = 0;
};

ExtractedRates extract_rates(const CoupledSpectrum& spec, const Mat& phi_eigen,
                             int branch, int fock_fit_range = 10);

}  // namespace crcd
