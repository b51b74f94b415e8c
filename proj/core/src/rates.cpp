#include "crcd/rates.hpp"

#include <cmath>
#include <iostream>

namespace crcd {

RateBreakdown perturbative_rate(const FluxoniumModel& model, int branch,
                                double omega_osc, double g) {
  const int kf = model.levels_kept;
  if (branch < 0 || branch >= kf)
    throw ValidationError("perturbative_rate: branch out of range");
  if (!(omega_osc > 0.0))
    throw ValidationError("perturbative_rate: omega_osc must be positive");

  RateBreakdown out;
  out.branch = branch;
  out.g = g;
  out.omega_osc = omega_osc;
  out.per_transition = Vec::Zero(kf);
  for (int j = 0; j < kf; ++j) {
    if (j == branch) continue;
    const double dkj = model.energies(j) - model.energies(branch);
    const double near = std::min(std::abs(dkj - omega_osc),
                                 std::abs(dkj + omega_osc));
    if (near < 1e-9)
      throw PoleProximityError("omega_osc coincides with |Delta_{" +
                               std::to_string(branch) + "," +
                               std::to_string(j) + "}|");
    if (near < 1e-3)
      std::cerr << "warning: omega_osc within 1 MHz of |Delta_{" << branch
                << "," << j << "}| (" << near * 1e3 << " MHz)\n";
    // i n_{k,j} phi_{j,k} with <k|n|j> = i n_elems(k,j)
    const double c = -model.n_elems(branch, j) * model.phi_elems(j, branch);
    out.per_transition(j) =
        g * c * (1.0 / (dkj - omega_osc) - 1.0 / (dkj + omega_osc));
  }
  out.total = out.per_transition.sum();
  return out;
}

double cd_rate(const FluxoniumModel& model, double omega_osc, double g) {
  return perturbative_rate(model, 1, omega_osc, g).total -
         perturbative_rate(model, 0, omega_osc, g).total;
}

Vec dominance_fractions(const RateBreakdown& breakdown) {
  if (breakdown.total == 0.0)
    throw ValidationError("dominance_fractions: total rate is zero");
  return breakdown.per_transition / breakdown.total;
}

ExtractedRates extract_rates(const CoupledSpectrum& spec, const Mat& phi_eigen,
                             int branch, int fock_fit_range) {
  if (fock_fit_range < 2)
    throw ValidationError("extract_rates: fock_fit_range must be >= 2 "
                          "(normal matrix degenerate)");
  if (fock_fit_range > spec.fock_cutoff - 1)
    throw ValidationError("extract_rates: fock_fit_range exceeds cutoff - 1");
  if (branch < 0 || branch >= spec.levels_kept)
    throw ValidationError("extract_rates: branch out of range");

  // closed-form 2x2 normal equations for m_n ~ r sqrt(n) + p n^{3/2}
  double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0, mm = 0;
  for (int n = 1; n <= fock_fit_range; ++n) {
    const double x1 = std::sqrt(double(n));
    const double x2 = x1 * n;
    const double m =
        phi_eigen(spec.flat(branch, n), spec.flat(branch, n - 1));
    s11 += x1 * x1;
    s12 += x1 * x2;
    s22 += x2 * x2;
    b1 += x1 * m;
    b2 += x2 * m;
    mm += m * m;
  }
  const double det = s11 * s22 - s12 * s12;
  if (std::abs(det) < 1e-14)
    throw ValidationError("extract_rates: degenerate normal matrix");

  ExtractedRates out;
  out.fock_fit_range = fock_fit_range;
  out.r = (s22 * b1 - s12 * b2) / det;
  out.p = (s11 * b2 - s12 * b1) / det;
  const double res2 = mm - 2.0 * (out.r * b1 + out.p * b2) +
                      out.r * out.r * s11 + 2.0 * out.r * out.p * s12 +
                      out.p * out.p * s22;
  out.residual = std::sqrt(std::max(0.0, res2));
  const double r_only = b1 / s11;
  const double res2_lin = mm - 2.0 * r_only * b1 + r_only * r_only * s11;
  out.residual_linear = std::sqrt(std::max(0.0, res2_lin));
  return out;
}

}  // namespace crcd
