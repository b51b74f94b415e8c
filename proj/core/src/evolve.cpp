#include "crcd/evolve.hpp"

#include <cmath>
#include <limits>

#include "crcd/simplex.hpp"

namespace crcd {

void PropagationConfig::validate() const {
  if (steps_per_carrier_period < 12)
    throw ValidationError("steps_per_carrier_period must be >= 12");
  if (!(norm_tol > 0.0)) throw ValidationError("norm_tol must be positive");
}

namespace {

// Complex column block stored as separate real and imaginary parts so the
// hot matrix product runs as one real GEMM over [re | im].
template <typename Real>
struct Block {
  using RMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  RMat data;  // dim x 2*cols: [re | im]
  int cols = 0;

  void init(const CMat& columns) {
    cols = int(columns.cols());
    data.resize(columns.rows(), 2 * cols);
    data.leftCols(cols) = columns.real().template cast<Real>();
    data.rightCols(cols) = columns.imag().template cast<Real>();
  }
  CMat to_complex() const {
    CMat out(data.rows(), cols);
    out.real() = data.leftCols(cols).template cast<double>();
    out.imag() = data.rightCols(cols).template cast<double>();
    return out;
  }
};

template <typename Real>
struct Engine {
  using RMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using RVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

  const GenericSystem& sys;
  const DriveSchedule& sched;
  const PropagationConfig& cfg;
  RMat m;      // drive operator
  RVec omega;  // 2*pi*E per ns (angular)
  int dim;

  // workspaces
  RMat w, z, k1, k2, k3, k4, tmp;
  RVec cph, sph;

  Engine(const GenericSystem& s, const DriveSchedule& d,
         const PropagationConfig& c)
      : sys(s), sched(d), cfg(c) {
    dim = int(sys.energies.size());
    m = sys.drive_op.template cast<Real>();
    omega = (two_pi * sys.energies).template cast<Real>();
  }

  void phases_at(double t) {
    cph = (omega.template cast<double>() * t)
              .array()
              .cos()
              .matrix()
              .template cast<Real>();
    sph = (omega.template cast<double>() * t)
              .array()
              .sin()
              .matrix()
              .template cast<Real>();
  }

  // out = -i * 2*pi*f(t) * e^{i th} M e^{-i th} psi, th = 2*pi*E*t
  void apply_h(double t, const RMat& psi, RMat& out, int ncols) {
    const double env =
        envelope(std::min(std::max(t, 0.0), sched.pulse.gate_time_t),
                 sched.pulse);
    const double f = sched.pulse.amplitude_a * env *
                     std::cos(two_pi * sched.omega_d * t +
                              sched.pulse.carrier_phase);
    phases_at(t);
    auto re = psi.leftCols(ncols);
    auto im = psi.rightCols(ncols);
    // w = e^{-i th} psi
    w.leftCols(ncols) = cph.asDiagonal() * re + sph.asDiagonal() * im;
    w.rightCols(ncols) = cph.asDiagonal() * im - sph.asDiagonal() * re;
    z.noalias() = m * w;
    // zp = e^{+i th} z ; out = -i * c * zp
    const Real c = Real(two_pi * f);
    auto zre = z.leftCols(ncols);
    auto zim = z.rightCols(ncols);
    out.leftCols(ncols) = c * (cph.asDiagonal() * zim + sph.asDiagonal() * zre);
    out.rightCols(ncols) =
        -c * (cph.asDiagonal() * zre - sph.asDiagonal() * zim);
  }

  // lab frame: out = -i (diag(2 pi E) + 2 pi f(t) M) psi
  void apply_h_lab(double t, const RMat& psi, RMat& out, int ncols) {
    const double env =
        envelope(std::min(std::max(t, 0.0), sched.pulse.gate_time_t),
                 sched.pulse);
    const double f = sched.pulse.amplitude_a * env *
                     std::cos(two_pi * sched.omega_d * t +
                              sched.pulse.carrier_phase);
    auto re = psi.leftCols(ncols);
    auto im = psi.rightCols(ncols);
    z.leftCols(ncols) = omega.asDiagonal() * re;
    z.rightCols(ncols) = omega.asDiagonal() * im;
    z.leftCols(ncols).noalias() += Real(two_pi * f) * (m * re);
    z.rightCols(ncols).noalias() += Real(two_pi * f) * (m * im);
    out.leftCols(ncols) = z.rightCols(ncols);
    out.rightCols(ncols) = -z.leftCols(ncols);
  }

  void echo_swap(RMat& psi, double t, int ncols, bool interaction) {
    // unwrap to the Schrodinger picture, swap system levels 0 and 1, rewrap
    if (interaction) {
      phases_at(t);
      tmp.leftCols(ncols) =
          cph.asDiagonal() * psi.leftCols(ncols) +
          sph.asDiagonal() * psi.rightCols(ncols);
      tmp.rightCols(ncols) = cph.asDiagonal() * psi.rightCols(ncols) -
                             sph.asDiagonal() * psi.leftCols(ncols);
    } else {
      tmp = psi;
    }
    const int nf = sys.fock_dim;
    for (int n = 0; n < nf; ++n) tmp.row(n).swap(tmp.row(nf + n));
    if (interaction) {
      psi.leftCols(ncols) = cph.asDiagonal() * tmp.leftCols(ncols) -
                            sph.asDiagonal() * tmp.rightCols(ncols);
      psi.rightCols(ncols) = cph.asDiagonal() * tmp.rightCols(ncols) +
                             sph.asDiagonal() * tmp.leftCols(ncols);
    } else {
      psi = tmp;
    }
  }
};

double top_fock_population(const CMat& cols, int levels, int fock_dim) {
  double worst = 0.0;
  for (int c = 0; c < cols.cols(); ++c) {
    double p = 0.0;
    for (int i = 0; i < levels; ++i)
      p += std::norm(cols(i * fock_dim + fock_dim - 1, c));
    worst = std::max(worst, p);
  }
  return worst;
}

Complex coherent_amplitude_raw(const CVec& cond, int nmax);

template <typename Real>
GateReport run_propagation(const GenericSystem& sys,
                           const DriveSchedule& sched, const CMat& initial,
                           const PropagationConfig& cfg,
                           const CoupledSpectrum* spec_for_traj) {
  cfg.validate();
  sched.pulse.validate();
  const double T = sched.pulse.gate_time_t;
  if (sched.pulse.echo &&
      !(sched.echo_time > 0.0 && sched.echo_time < T))
    throw ValidationError("echo_time must lie inside (0, T)");
  for (int c = 0; c < initial.cols(); ++c) {
    if (std::abs(initial.col(c).norm() - 1.0) > 1e-9)
      throw ValidationError("initial columns must be normalized");
  }

  Engine<Real> eng(sys, sched, cfg);
  const bool interaction = cfg.frame == Frame::interaction;
  double f_res = sched.omega_d;
  if (!interaction)
    f_res += sys.energies.maxCoeff() - sys.energies.minCoeff();
  int nsteps = 2 * int(std::ceil(T * f_res * cfg.steps_per_carrier_period / 2.0));
  nsteps = std::max(nsteps, 16);
  const double h = T / nsteps;
  const int echo_step =
      sched.pulse.echo ? int(std::lround(sched.echo_time / h)) : -1;

  Block<Real> blk;
  blk.init(initial);
  const int ncols = blk.cols;
  const int dim = eng.dim;
  eng.w.resize(dim, 2 * ncols);
  eng.z.resize(dim, 2 * ncols);
  eng.tmp.resize(dim, 2 * ncols);
  eng.k1.resize(dim, 2 * ncols);
  eng.k2.resize(dim, 2 * ncols);
  eng.k3.resize(dim, 2 * ncols);
  eng.k4.resize(dim, 2 * ncols);

  GateReport report;
  const int stride =
      cfg.record_stride > 0 ? cfg.record_stride : std::max(1, nsteps / 200);

  auto sample = [&](double t) {
    CMat cols = blk.to_complex();
    if (sys.fock_dim >= 2) {
      const double boundary =
          top_fock_population(cols, sys.levels, sys.fock_dim);
      report.boundary_population =
          std::max(report.boundary_population, boundary);
      if (boundary > 1e-4)
        throw CutoffError(
            "population at the Fock boundary exceeded 1e-4 (got " +
            std::to_string(boundary) + "); increase fock_cutoff");
    }
    if (spec_for_traj && ncols >= 1) {
      TrajectoryPoint pt;
      pt.t = t;
      double leak = 0.0;
      for (int c = 0; c < std::min(2, int(cols.cols())); ++c) {
        // amplitude conditioned on the column's dominant branch
        Vec pops = Vec::Zero(sys.levels);
        for (int i = 0; i < sys.levels; ++i)
          for (int n = 0; n < sys.fock_dim; ++n)
            pops(i) += std::norm(cols(i * sys.fock_dim + n, c));
        int dom = 0;
        pops.maxCoeff(&dom);
        CVec cond(sys.fock_dim);
        for (int n = 0; n < sys.fock_dim; ++n)
          cond(n) = cols(dom * sys.fock_dim + n, c);
        cond /= std::sqrt(std::max(pops(dom), 1e-300));
        const Complex a = coherent_amplitude_raw(cond, sys.fock_dim);
        if (c == 0)
          pt.alpha_cond_0 = a;
        else
          pt.alpha_cond_1 = a;
      }
      for (int c = 0; c < cols.cols(); ++c) {
        double comp = 0.0;
        for (int i = 0; i < std::min(2, sys.levels); ++i)
          for (int n = 0; n < sys.fock_dim; ++n)
            comp += std::norm(cols(i * sys.fock_dim + n, c));
        leak += 1.0 - comp;
      }
      pt.leakage = leak / double(cols.cols());
      report.trajectory.push_back(pt);
    }
  };

  sample(0.0);
  double worst_drift = 0.0;
  for (int s = 0; s < nsteps; ++s) {
    const double t = s * h;
    if (s == echo_step) eng.echo_swap(blk.data, t, ncols, interaction);

    auto rhs = [&](double tt, const typename Engine<Real>::RMat& y,
                   typename Engine<Real>::RMat& out) {
      if (interaction)
        eng.apply_h(tt, y, out, ncols);
      else
        eng.apply_h_lab(tt, y, out, ncols);
    };
    rhs(t, blk.data, eng.k1);
    eng.tmp = blk.data + Real(0.5 * h) * eng.k1;
    rhs(t + 0.5 * h, eng.tmp, eng.k2);
    eng.tmp = blk.data + Real(0.5 * h) * eng.k2;
    rhs(t + 0.5 * h, eng.tmp, eng.k3);
    eng.tmp = blk.data + Real(h) * eng.k3;
    rhs(t + h, eng.tmp, eng.k4);
    blk.data += Real(h / 6.0) * (eng.k1 + Real(2.0) * eng.k2 +
                                 Real(2.0) * eng.k3 + eng.k4);

    // projection: the exact flow is unitary, RK4 error here is almost purely
    // a scalar norm drift; rescale columns and track the accumulated drift
    double step_drift = 0.0;
    for (int c = 0; c < ncols; ++c) {
      const Real nrm2 = blk.data.col(c).squaredNorm() +
                        blk.data.col(ncols + c).squaredNorm();
      const double nrm = std::sqrt(double(nrm2));
      step_drift = std::max(step_drift, std::abs(nrm - 1.0));
      const Real inv = Real(1.0 / nrm);
      blk.data.col(c) *= inv;
      blk.data.col(ncols + c) *= inv;
    }
    worst_drift = std::max(worst_drift, step_drift);
    const double drift_tol =
        std::max(cfg.norm_tol, 100.0 * std::numeric_limits<Real>::epsilon());
    if (step_drift > drift_tol)
      throw StepSizeError(
          "per-step norm drift " + std::to_string(step_drift) +
          " exceeds tolerance " + std::to_string(drift_tol) +
          "; increase steps_per_carrier_period");
    if ((s + 1) % stride == 0 && s + 1 < nsteps) sample((s + 1) * h);
  }
  report.norm_drift = worst_drift;

  sample(T);
  report.final_columns = blk.to_complex();
  if (!interaction) {
    // report in the rotating frame for comparability
    for (int b = 0; b < dim; ++b) {
      const Complex ph =
          std::exp(Complex(0.0, two_pi * sys.energies(b) * T));
      report.final_columns.row(b) *= ph;
    }
  }
  double leak = 0.0;
  for (int c = 0; c < report.final_columns.cols(); ++c) {
    double comp = 0.0;
    for (int i = 0; i < std::min(2, sys.levels); ++i)
      for (int n = 0; n < sys.fock_dim; ++n)
        comp += std::norm(report.final_columns(i * sys.fock_dim + n, c));
    leak += 1.0 - comp;
  }
  report.leakage = leak / std::max(1, int(report.final_columns.cols()));
  report.calibrated_t = T;
  return report;
}

GenericSystem system_from_spectrum(const CoupledSpectrum& spec,
                                   const Mat& drive_op) {
  GenericSystem sys;
  sys.energies = spec.energies;
  sys.drive_op = drive_op;
  sys.levels = spec.levels_kept;
  sys.fock_dim = spec.fock_cutoff;
  return sys;
}

}  // namespace

GateReport propagate_with_operator(const CoupledSpectrum& spec,
                                   const DriveSchedule& schedule,
                                   const Mat& drive_op, const CMat& initial_columns,
                                   const PropagationConfig& config) {
  GenericSystem sys = system_from_spectrum(spec, drive_op);
  return run_propagation<double>(sys, schedule, initial_columns, config, &spec);
}

GateReport propagate(const CoupledSpectrum& spec, const DriveSchedule& schedule,
                     const CMat& initial_columns, const PropagationConfig& config) {
  Mat op = spec.phi_eigen + schedule.c_sd * spec.x_eigen;
  return propagate_with_operator(spec, schedule, op, initial_columns, config);
}

GateReport propagate_generic(const GenericSystem& sys,
                             const DriveSchedule& schedule,
                             const CMat& initial_columns,
                             const PropagationConfig& config) {
  return run_propagation<double>(sys, schedule, initial_columns, config,
                                 nullptr);
}

GateReport propagate_generic_fast(const GenericSystem& sys,
                                  const DriveSchedule& schedule,
                                  const CMat& initial_columns,
                                  const PropagationConfig& config) {
  return run_propagation<float>(sys, schedule, initial_columns, config,
                                nullptr);
}

namespace {

Complex coherent_overlap(const CVec& cond, Complex alpha, int nmax) {
  // <alpha|cond> with coherent coefficients built by stable recurrence
  Complex term = std::exp(-0.5 * std::norm(alpha));
  Complex acc = term * cond(0);
  for (int n = 1; n < nmax; ++n) {
    term *= std::conj(alpha) / std::sqrt(double(n));
    acc += term * cond(n);
  }
  return acc;
}

Complex coherent_amplitude_raw(const CVec& cond, int nmax) {
  // seed at <a>
  Complex seed(0.0, 0.0);
  for (int n = 1; n < nmax; ++n)
    seed += std::sqrt(double(n)) * std::conj(cond(n - 1)) * cond(n);
  auto objective = [&](const Vec& x) {
    return -std::norm(coherent_overlap(cond, Complex(x(0), x(1)), nmax));
  };
  Vec x0(2);
  x0 << seed.real(), seed.imag();
  Vec steps(2);
  steps << 0.05, 0.05;
  SimplexResult res = nelder_mead(objective, x0, steps, 1e-7, 400);
  return Complex(res.x(0), res.x(1));
}

}  // namespace

double branch_population(const CVec& state, const CoupledSpectrum& spec,
                         int branch) {
  double p = 0.0;
  for (int n = 0; n < spec.fock_cutoff; ++n)
    p += std::norm(state(spec.flat(branch, n)));
  return p;
}

Complex coherent_amplitude(const CVec& state, const CoupledSpectrum& spec,
                           int branch) {
  if (branch < 0 || branch >= spec.levels_kept)
    throw ValidationError("coherent_amplitude: branch out of range");
  const double pop = branch_population(state, spec, branch);
  if (pop < 1e-6)
    throw AmplitudeUndefinedError(
        "coherent_amplitude: branch population below 1e-6");
  CVec cond(spec.fock_cutoff);
  for (int n = 0; n < spec.fock_cutoff; ++n)
    cond(n) = state(spec.flat(branch, n));
  cond /= std::sqrt(pop);
  return coherent_amplitude_raw(cond, spec.fock_cutoff);
}

double fluxonium_leakage(const FluxoniumModel& model,
                         const DriveSchedule& schedule,
                         const PropagationConfig& config) {
  GenericSystem sys;
  sys.energies = model.energies;
  sys.drive_op = model.phi_elems;
  sys.levels = model.levels_kept;
  sys.fock_dim = 1;
  CMat cols = CMat::Zero(model.levels_kept, 2);
  cols(0, 0) = 1.0;
  cols(1, 1) = 1.0;
  GateReport rep = run_propagation<double>(sys, schedule, cols, config, nullptr);
  return rep.leakage;
}

namespace {

// shared secant loop for the two calibrations
double calibrate(double target_length, const DriveSchedule& tmpl,
                 const CoupledSpectrum& spec, const PropagationConfig& config,
                 bool on_time) {
  if (!(target_length > 0.0))
    throw ValidationError("calibrate: target length must be positive");
  const int active = 1 - tmpl.darkened_branch;

  // initial guess from the extracted CD rate at the operating coupling
  const ExtractedRates e1 = extract_rates(spec, spec.phi_eigen, 1);
  const ExtractedRates e0 = extract_rates(spec, spec.phi_eigen, 0);
  const double r_cd = e1.r - e0.r;
  if (std::abs(r_cd) < 1e-12)
    throw CalibrationError("calibrate: vanishing CD rate");

  CMat col = CMat::Zero(spec.dim(), 1);
  col(spec.flat(active, 0), 0) = 1.0;

  PropagationConfig fast = config;
  fast.record_stride = 1 << 30;  // no trajectory sampling inside calibration

  auto measure = [&](double val) {
    DriveSchedule s = tmpl;
    if (on_time) {
      s.pulse.gate_time_t = val;
      s.echo_time = s.pulse.echo ? 0.5 * val : 0.0;
    } else {
      s.pulse.amplitude_a = val;
    }
    Mat op = spec.phi_eigen + s.c_sd * spec.x_eigen;
    GenericSystem sys = system_from_spectrum(spec, op);
    GateReport rep =
        config.fast_calibration
            ? run_propagation<float>(sys, s, col, fast, nullptr)
            : run_propagation<double>(sys, s, col, fast, nullptr);
    // after the echo the active column sits in the darkened branch
    const int end_branch = s.pulse.echo ? tmpl.darkened_branch : active;
    return std::abs(
        coherent_amplitude(rep.final_columns.col(0), spec, end_branch));
  };

  const double want = 0.5 * target_length;
  double x0 = on_time
                  ? 4.0 * target_length /
                        (two_pi * tmpl.pulse.amplitude_a * std::abs(r_cd))
                  : 4.0 * target_length /
                        (two_pi * tmpl.pulse.gate_time_t * std::abs(r_cd));
  double f0 = measure(x0) - want;
  double x1 = x0 * (f0 > 0 ? 0.9 : 1.1);
  double f1 = measure(x1) - want;
  for (int it = 0; it < 12; ++it) {
    if (std::abs(f1) < 0.002 * want) return x1;
    const double denom = f1 - f0;
    if (std::abs(denom) < 1e-15)
      throw CalibrationError("calibrate: stalled secant (flat response)");
    double x2 = x1 - f1 * (x1 - x0) / denom;
    if (!(x2 > 0.0)) x2 = 0.5 * x1;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = measure(x1) - want;
  }
  if (std::abs(f1) < 0.005 * want) return x1;
  throw CalibrationError(
      "calibrate: no convergence in 12 iterations; last bracket x=" +
      std::to_string(x0) + " -> " + std::to_string(x1) + ", residual " +
      std::to_string(f1 / want));
}

}  // namespace

double calibrate_gate_time(double target_length,
                           const DriveSchedule& schedule_template,
                           const CoupledSpectrum& spec,
                           const PropagationConfig& config) {
  return calibrate(target_length, schedule_template, spec, config, true);
}

double calibrate_amplitude(double target_length,
                           const DriveSchedule& schedule_template,
                           const CoupledSpectrum& spec,
                           const PropagationConfig& config) {
  return calibrate(target_length, schedule_template, spec, config, false);
}

}  // namespace crcd
