#include "crcd/design.hpp"

#include <cmath>
#include <iostream>
#include <limits>

namespace crcd {

void SelectionConstraints::validate() const {
  if (!(c_r > 0.0) || !(c_g > 0.0) || !(c_a > 0.0) || n_levels <= 0)
    throw ValidationError("selection constraints must be positive");
}

namespace {

// signed contribution of transition (mu, i) to r_CD = r_1 - r_0
double rcd_contribution(const RateBreakdown& b0, const RateBreakdown& b1,
                        int mu, int i) {
  return mu == 1 ? b1.per_transition(i) : -b0.per_transition(i);
}

}  // namespace

std::optional<std::pair<int, int>> identify_activating_transition(
    const FluxoniumModel& model, double omega_osc) {
  const double n_scale = model.n_elems.cwiseAbs().maxCoeff();
  const RateBreakdown b0 = perturbative_rate(model, 0, omega_osc, 1e-3);
  const RateBreakdown b1 = perturbative_rate(model, 1, omega_osc, 1e-3);

  // Heavy-fluxonium doublet transitions contribute large near-cancelling
  // common modes to r_0 and r_1; the gate-activating transition is the
  // pole-enhanced one. Rank by |r_CD contribution| inside a detuning window,
  // fall back to the global maximum if the window is empty.
  const double window = std::max(0.5, omega_osc / 10.0);
  std::optional<std::pair<int, int>> best;
  double best_c = 0.0;
  for (int pass = 0; pass < 2 && !best; ++pass) {
    for (int mu = 0; mu <= 1; ++mu) {
      for (int i = 2; i < model.levels_kept; ++i) {
        if (std::abs(model.n_elems(mu, i)) < 1e-9 * n_scale) continue;
        const double det = transition_frequency(model, mu, i) - omega_osc;
        if (pass == 0 && std::abs(det) > window) continue;
        const double c = std::abs(rcd_contribution(b0, b1, mu, i));
        if (!best || c > best_c) {
          best = std::make_pair(mu, i);
          best_c = c;
        }
      }
    }
  }
  return best;
}

std::vector<OperatingPoint> scan_frequencies(
    const FluxoniumModel& model, const std::vector<double>& freq_grid,
    const SelectionConstraints& constraints) {
  constraints.validate();
  const double pole_margin = 2e-3;  // GHz
  std::vector<OperatingPoint> accepted;

  for (double omega : freq_grid) {
    auto act = identify_activating_transition(model, omega);
    if (!act) continue;
    const auto [mu, i] = *act;

    // skip points too close to any pole of the three relevant branches
    bool near_pole = false;
    for (int k : {0, 1, i}) {
      for (int j = 0; j < model.levels_kept && !near_pole; ++j) {
        if (j == k) continue;
        const double dkj = std::abs(transition_frequency(model, k, j));
        if (std::abs(dkj - omega) < pole_margin) near_pole = true;
      }
      if (near_pole) break;
    }
    if (near_pole) continue;

    const RateBreakdown b0 = perturbative_rate(model, 0, omega, 1e-3);
    const RateBreakdown b1 = perturbative_rate(model, 1, omega, 1e-3);
    const RateBreakdown bi = perturbative_rate(model, i, omega, 1e-3);
    const double rcd = b1.total - b0.total;
    if (rcd == 0.0) continue;
    const double r_mu = (mu == 1 ? b1 : b0).total;
    const double ratio = std::abs(bi.total - r_mu) / std::abs(rcd);
    const double dominance = rcd_contribution(b0, b1, mu, i) / rcd;
    if (ratio > constraints.c_r || dominance <= 0.5) continue;

    OperatingPoint pt;
    pt.mu = mu;
    pt.i = i;
    pt.omega_osc = omega;
    pt.ratio = ratio;
    pt.dominance = dominance;
    pt.g_max = max_coupling(model, mu, i, omega, constraints);
    pt.a_max = max_drive(model, mu, i, omega, constraints);
    const double r_cd_max = cd_rate(model, omega, pt.g_max);
    pt.t_min = min_gate_time(1.6, pt.a_max, r_cd_max);
    accepted.push_back(pt);
  }
  return accepted;
}

double max_coupling(const FluxoniumModel& model, int mu, int i,
                    double omega_osc, const SelectionConstraints& c) {
  c.validate();
  const double det =
      std::abs(transition_frequency(model, mu, i) - omega_osc);
  const double n_el = std::abs(model.n_elems(mu, i));
  const double cap = 1e3;  // GHz
  if (n_el * std::sqrt(double(c.n_levels)) * cap < c.c_g * det) {
    std::cerr << "warning: max_coupling unbounded for transition (" << mu
              << "," << i << ") (vanishing charge element); capping at " << cap
              << " GHz\n";
    return cap;
  }
  return c.c_g * det / (std::sqrt(double(c.n_levels)) * n_el);
}

double max_drive(const FluxoniumModel& model, int mu, int i, double omega_osc,
                 const SelectionConstraints& c) {
  c.validate();
  const double det =
      std::abs(transition_frequency(model, mu, i) - omega_osc);
  const double phi_el = std::abs(model.phi_elems(mu, i));
  const double cap = 1e4;  // GHz
  if (phi_el * cap < c.c_a * det) {
    std::cerr << "warning: max_drive unbounded for transition (" << mu << ","
              << i << ") (vanishing flux element); capping at " << cap
              << " GHz\n";
    return cap;
  }
  return c.c_a * det / phi_el;
}

double min_gate_time(double target_length, double a_max, double r_cd_max) {
  if (!(std::abs(r_cd_max) > 0.0))
    throw ValidationError("min_gate_time: r_cd_max must be nonzero");
  if (target_length == 0.0) return 0.0;
  return 4.0 * std::abs(target_length) / (two_pi * a_max * std::abs(r_cd_max));
}

}  // namespace crcd
