#include "crcd/metrics.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "crcd/simplex.hpp"

namespace crcd {

SubspaceProjector SubspaceProjector::computational(const CoupledSpectrum& spec,
                                                   int n_in) {
  if (n_in < 1 || n_in > spec.fock_cutoff)
    throw ValidationError("projector n_in out of range");
  SubspaceProjector p;
  p.n_in = n_in;
  for (int i = 0; i <= 1; ++i)
    for (int n = 0; n < n_in; ++n) p.dressed_indices.push_back(spec.flat(i, n));
  return p;
}

double pedersen_fidelity(const CMat& m) {
  if (m.rows() != m.cols()) throw ValidationError("pedersen: M must be square");
  const double np = double(m.rows());
  const double t1 = m.squaredNorm();  // Tr(M^dag M)
  const Complex tr = m.trace();
  return (t1 + std::norm(tr)) / (np * (np + 1.0));
}

CMat displacement_operator(Complex alpha, int nmax) {
  // exp(G) with G = alpha a^dag - alpha* a; iG is Hermitian
  CMat g = CMat::Zero(nmax, nmax);
  for (int n = 1; n < nmax; ++n) {
    g(n, n - 1) = alpha * std::sqrt(double(n));
    g(n - 1, n) = -std::conj(alpha) * std::sqrt(double(n));
  }
  Eigen::SelfAdjointEigenSolver<CMat> solver(Complex(0, 1) * g);
  CVec phase(nmax);
  for (int k = 0; k < nmax; ++k)
    phase(k) = std::exp(Complex(0.0, -solver.eigenvalues()(k)));
  return solver.eigenvectors() * phase.asDiagonal() *
         solver.eigenvectors().adjoint();
}

CMat target_ecd(Complex alpha0, int levels, int nmax) {
  if (levels < 2) throw ValidationError("target_ecd: need >= 2 levels");
  CMat out = CMat::Zero(levels * nmax, levels * nmax);
  CMat dp = displacement_operator(0.5 * alpha0, nmax);
  CMat dm = displacement_operator(-0.5 * alpha0, nmax);
  out.block(1 * nmax, 0, nmax, nmax) = dp;   // |1><0| x D(+a/2)
  out.block(0, 1 * nmax, nmax, nmax) = dm;   // |0><1| x D(-a/2)
  for (int l = 2; l < levels; ++l)
    out.block(l * nmax, l * nmax, nmax, nmax) = CMat::Identity(nmax, nmax);
  return out;
}

namespace {

struct FreeOpObjective {
  // rows of P * ECD_{alpha0} (Np x dim), precomputed
  CMat w0;
  const CMat& u_cols;  // dim x Np
  int levels, nmax, n_in;

  FreeOpObjective(const CMat& cols, Complex alpha0, int n_in_, int levels_,
                  int nmax_)
      : u_cols(cols), levels(levels_), nmax(nmax_), n_in(n_in_) {
    const int np = 2 * n_in;
    const int dim = levels * nmax;
    CMat dp = displacement_operator(0.5 * alpha0, nmax);
    CMat dm = displacement_operator(-0.5 * alpha0, nmax);
    w0 = CMat::Zero(np, dim);
    for (int m = 0; m < n_in; ++m) {
      // row (0, m): <0,m| ECD = <1| x row m of D(-a/2)
      w0.block(m, 1 * nmax, 1, nmax) = dm.row(m);
      // row (1, m): <1,m| ECD = <0| x row m of D(+a/2)
      w0.block(n_in + m, 0, 1, nmax) = dp.row(m);
    }
  }

  CMat build_m(double theta, Complex alpha) const {
    const int np = 2 * n_in;
    // X = (I x D_alpha) U P, block-diagonal application
    CMat d = displacement_operator(alpha, nmax);
    CMat x(u_cols.rows(), u_cols.cols());
    for (int l = 0; l < levels; ++l)
      x.middleRows(l * nmax, nmax).noalias() =
          d * u_cols.middleRows(l * nmax, nmax);
    // Z_f(theta): phase on fluxonium level 1 (applied between ECD and D)
    const Complex z = std::exp(Complex(0.0, theta));
    CMat m(np, np);
    // W0 * diag(Zf x I) * X; Zf only scales the level-1 block of columns
    CMat wz = w0;
    wz.middleCols(1 * nmax, nmax) *= z;
    m.noalias() = wz * x;
    return m;
  }

  double operator()(const Vec& p) const {
    return -pedersen_fidelity(build_m(p(0), Complex(p(1), p(2))));
  }
};

}  // namespace

FidelityResult optimize_free_ops_generic(const CMat& u_cols, Complex alpha0,
                                         int n_in, int levels, int nmax) {
  if (u_cols.cols() != 2 * n_in)
    throw ValidationError("optimize_free_ops: need 2*n_in columns");
  FreeOpObjective obj(u_cols, alpha0, n_in, levels, nmax);

  FidelityResult res;
  res.fidelity_unoptimized = pedersen_fidelity(obj.build_m(0.0, {0.0, 0.0}));
  res.fidelity = res.fidelity_unoptimized;
  res.theta_opt = 0.0;
  res.alpha_opt = {0.0, 0.0};

  const double pi = 3.14159265358979323846;
  Vec steps(3);
  steps << 0.25, 0.02, 0.02;
  bool any = false;
  for (double seed : {0.0, 0.5 * pi, pi, 1.5 * pi}) {
    Vec x0(3);
    x0 << seed, 0.0, 0.0;
    SimplexResult r = nelder_mead([&](const Vec& x) { return obj(x); }, x0,
                                  steps, 1e-7, 500);
    const double f = -r.value;
    if (f > res.fidelity) {
      res.fidelity = f;
      res.theta_opt = std::remainder(r.x(0), 2.0 * pi);
      res.alpha_opt = Complex(r.x(1), r.x(2));
      any = true;
    }
  }
  res.improved = any;
  res.m_trace = obj.build_m(res.theta_opt, res.alpha_opt).trace();
  return res;
}

FidelityResult optimize_free_ops(const CMat& u_cols, Complex alpha0,
                                 const SubspaceProjector& projector,
                                 const CoupledSpectrum& spec) {
  return optimize_free_ops_generic(u_cols, alpha0, projector.n_in,
                                   spec.levels_kept, spec.fock_cutoff);
}

}  // namespace crcd
