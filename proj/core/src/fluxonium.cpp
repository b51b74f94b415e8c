#include "crcd/fluxonium.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "crcd/operators.hpp"

namespace crcd {

void FluxoniumSpec::validate() const {
  if (!(e_j > 0.0) || !(e_l > 0.0) || !(e_c > 0.0))
    throw ValidationError("fluxonium energies must be positive (e_j=" +
                          std::to_string(e_j) + ", e_l=" + std::to_string(e_l) +
                          ", e_c=" + std::to_string(e_c) + ")");
  if (!std::isfinite(delta_phi))
    throw ValidationError("delta_phi must be finite");
}

double FluxoniumSpec::normalized_delta_phi() const {
  double d = delta_phi - std::round(delta_phi);
  // round() maps to (-0.5, 0.5]; fold the boundary for determinism
  if (d > 0.5) d -= 1.0;
  return d;
}

namespace {

struct Eigensystem {
  Vec energies;  // levels_kept entries, ground at zero
  Mat vectors;   // basis_dim x levels_kept, gauge-fixed
};

Eigensystem solve_in_basis(const FluxoniumSpec& spec, int basis_dim,
                           int levels_kept) {
  const double phi_zpf = std::pow(2.0 * spec.e_c / spec.e_l, 0.25);
  const double n_zpf = std::pow(spec.e_l / (32.0 * spec.e_c), 0.25);

  Mat b = fock_annihilation(basis_dim);
  Mat phi = phi_zpf * (b + b.transpose());
  Mat nmat = n_zpf * (b.transpose() - b);  // n = i * nmat
  Mat n_sq = -nmat * nmat;

  // cos(phi) through the eigen-decomposition of phi
  Eigen::SelfAdjointEigenSolver<Mat> phisolve(phi);
  Mat cos_phi = phisolve.eigenvectors() *
                phisolve.eigenvalues().array().cos().matrix().asDiagonal() *
                phisolve.eigenvectors().transpose();

  const double shift = two_pi * spec.normalized_delta_phi();
  Mat displaced = phi - shift * Mat::Identity(basis_dim, basis_dim);
  Mat h = 4.0 * spec.e_c * n_sq + spec.e_j * cos_phi +
          0.5 * spec.e_l * displaced * displaced;

  Eigen::SelfAdjointEigenSolver<Mat> solver(h);
  Eigensystem out;
  out.energies = solver.eigenvalues().head(levels_kept);
  out.energies.array() -= out.energies(0);
  out.vectors = solver.eigenvectors().leftCols(levels_kept);
  for (int k = 0; k < levels_kept; ++k) {
    int imax = 0;
    out.vectors.col(k).cwiseAbs().maxCoeff(&imax);
    if (out.vectors(imax, k) < 0.0) out.vectors.col(k) *= -1.0;
  }
  return out;
}

}  // namespace

FluxoniumModel build_fluxonium(const FluxoniumSpec& spec, int basis_dim,
                               int levels_kept) {
  spec.validate();
  if (levels_kept < 2)
    throw ValidationError("levels_kept must be >= 2");
  if (basis_dim < 4 * levels_kept)
    throw ValidationError("basis_dim must be >= 4 * levels_kept for headroom");

  Eigensystem sys = solve_in_basis(spec, basis_dim, levels_kept);
  Eigensystem check = solve_in_basis(spec, 2 * basis_dim, levels_kept);
  const double drift = (sys.energies - check.energies).cwiseAbs().maxCoeff();
  if (drift > 1e-6)
    throw ConvergenceError(
        "fluxonium spectrum not converged: doubling basis_dim moved a kept "
        "level by " +
        std::to_string(drift) + " GHz (> 1e-6)");

  const double phi_zpf = std::pow(2.0 * spec.e_c / spec.e_l, 0.25);
  const double n_zpf = std::pow(spec.e_l / (32.0 * spec.e_c), 0.25);
  Mat b = fock_annihilation(basis_dim);
  Mat phi = phi_zpf * (b + b.transpose());
  Mat nmat = n_zpf * (b.transpose() - b);

  FluxoniumModel model;
  model.spec = spec;
  model.levels_kept = levels_kept;
  model.basis_dim = basis_dim;
  model.energies = sys.energies;
  model.phi_elems = sys.vectors.transpose() * phi * sys.vectors;
  model.n_elems = sys.vectors.transpose() * nmat * sys.vectors;
  return model;
}

double transition_frequency(const FluxoniumModel& model, int k, int j) {
  if (k < 0 || j < 0 || k >= model.levels_kept || j >= model.levels_kept)
    throw ValidationError("transition_frequency: level index out of range");
  return model.energies(j) - model.energies(k);
}

}  // namespace crcd
