#include "crcd/coupled.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "crcd/operators.hpp"

namespace crcd {

void OscillatorSpec::validate() const {
  if (!(omega_osc > 0.0))
    throw ValidationError("oscillator frequency must be positive");
  if (fock_cutoff < 2) throw ValidationError("fock_cutoff must be >= 2");
}

CoupledSpectrum build_coupled(const FluxoniumModel& model,
                              const OscillatorSpec& osc, double g) {
  osc.validate();
  const int kf = model.levels_kept;
  const int nm = osc.fock_cutoff;
  const int dim = kf * nm;
  if (dim > 4000)
    std::cerr << "warning: dense diagonalization of dimension " << dim
              << " (levels_kept * fock_cutoff > 4000)\n";

  Mat ident_f = Mat::Identity(kf, kf);
  Mat ident_o = Mat::Identity(nm, nm);
  // i g n x (a - a^dag) = -g n_elems x (a - a^dag) in the real gauge
  Mat h = kron(Mat(model.energies.asDiagonal()), ident_o) +
          kron(ident_f, Mat(osc.omega_osc * fock_number(nm))) -
          g * kron(model.n_elems, fock_amom(nm));

  Eigen::SelfAdjointEigenSolver<Mat> solver(h);
  const Vec& vals = solver.eigenvalues();
  const Mat& vecs = solver.eigenvectors();

  // greedy maximum-overlap labeling with uniqueness
  struct Cand {
    double q;
    int bare, col;
  };
  std::vector<Cand> cands;
  cands.reserve(size_t(dim) * 4);
  for (int c = 0; c < dim; ++c) {
    // a handful of top overlaps per eigenvector is enough in practice;
    // a full fallback pass below guarantees completeness
    Vec ov = vecs.col(c).cwiseAbs2();
    for (int rep = 0; rep < 4; ++rep) {
      int b = 0;
      double q = ov.maxCoeff(&b);
      cands.push_back({q, b, c});
      ov(b) = -1.0;
    }
  }
  std::sort(cands.begin(), cands.end(),
            [](const Cand& a, const Cand& b) { return a.q > b.q; });
  std::vector<int> col_of_bare(dim, -1), bare_of_col(dim, -1);
  for (const Cand& c : cands) {
    if (col_of_bare[c.bare] >= 0 || bare_of_col[c.col] >= 0) continue;
    col_of_bare[c.bare] = c.col;
    bare_of_col[c.col] = c.bare;
  }
  for (int c = 0; c < dim; ++c) {  // fallback for leftovers
    if (bare_of_col[c] >= 0) continue;
    Vec ov = vecs.col(c).cwiseAbs2();
    int best = -1;
    double bq = -1.0;
    for (int b = 0; b < dim; ++b)
      if (col_of_bare[b] < 0 && ov(b) > bq) {
        bq = ov(b);
        best = b;
      }
    col_of_bare[best] = c;
    bare_of_col[c] = best;
  }

  CoupledSpectrum spec;
  spec.levels_kept = kf;
  spec.fock_cutoff = nm;
  spec.g = g;
  spec.omega_osc = osc.omega_osc;
  spec.energies.resize(dim);
  spec.u0.resize(dim, dim);
  spec.overlap_quality.resize(dim);
  for (int b = 0; b < dim; ++b) {
    const int c = col_of_bare[b];
    spec.energies(b) = vals(c);
    Vec v = vecs.col(c);
    if (v(b) < 0.0) v *= -1.0;
    spec.u0.col(b) = v;
    spec.overlap_quality(b) = v(b) * v(b);
    if (spec.overlap_quality(b) <= 0.5) {
      const int i = b / nm, n = b % nm;
      throw LabelingError("dressed-state labeling ambiguous for (i=" +
                          std::to_string(i) + ", n=" + std::to_string(n) +
                          "): best overlap " +
                          std::to_string(spec.overlap_quality(b)) + " <= 0.5");
    }
  }

  spec.phi_eigen =
      spec.u0.transpose() * kron(model.phi_elems, ident_o) * spec.u0;
  spec.x_eigen = spec.u0.transpose() * kron(ident_f, fock_position(nm)) * spec.u0;
  return spec;
}

double dressed_oscillator_frequency(const CoupledSpectrum& spec, int mu) {
  if (mu < 0 || mu >= spec.levels_kept || spec.fock_cutoff < 2)
    throw ValidationError("dressed_oscillator_frequency: bad branch index");
  return spec.energy(mu, 1) - spec.energy(mu, 0);
}

double dispersive_shift(const CoupledSpectrum& spec) {
  return 0.5 * (dressed_oscillator_frequency(spec, 1) -
                dressed_oscillator_frequency(spec, 0));
}

double self_kerr(const CoupledSpectrum& spec, int mu) {
  if (mu < 0 || mu >= spec.levels_kept || spec.fock_cutoff < 3)
    throw ValidationError("self_kerr: bad branch index or cutoff");
  return spec.energy(mu, 2) - 2.0 * spec.energy(mu, 1) + spec.energy(mu, 0);
}

}  // namespace crcd
