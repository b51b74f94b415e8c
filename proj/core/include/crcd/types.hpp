#pragma once

// Units used throughout: energies are linear frequencies in GHz (E/h),
// times are in ns, fluxes in units of the flux quantum. The angular 2*pi
// enters only inside propagation and rate formulas.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace crcd {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr double two_pi = 6.283185307179586476925286766559;

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Spectrum did not converge when the basis was enlarged.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dressed-state labeling ambiguous (overlap with every bare state <= 0.5).
struct LabelingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PoleProximityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepSizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Population reached the Fock-space boundary during propagation.
struct CutoffError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AmplitudeUndefinedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace crcd
