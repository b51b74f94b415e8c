#pragma once

#include <string>
#include <utility>

#include "crcd/coupled.hpp"
#include "crcd/fluxonium.hpp"
#include "crcd/rates.hpp"
#include "crcd/types.hpp"

namespace crcd {

enum class EnvelopeKind { sin2, gaussian };

struct PulseSpec {
  double amplitude_a = 0.0;  // flux-drive amplitude A, GHz
  double gate_time_t = 0.0;  // ns
  EnvelopeKind envelope_kind = EnvelopeKind::sin2;
  bool echo = true;
  double carrier_phase = 0.0;  // rad, shared by both tones

  void validate() const;
};

// Two-tone drive: flux tone f(t) = A Omega(t) cos(2 pi omega_d t + phase)
// and selective-darkening tone f'(t) = c_sd f(t) on the oscillator.
struct DriveSchedule {
  PulseSpec pulse;
  double omega_d = 0.0;      // GHz
  double c_sd = 0.0;         // unitless
  int darkened_branch = 1;   // mu
  double echo_time = 0.0;    // ns, = T/2

  std::string to_record() const;               // structured text (JSON)
  static DriveSchedule from_record(const std::string&);
};

// Echoed envelope, Eq.-9 shape: sin^2(2 pi t / T) on [0, T/2], sign-flipped
// mirror on (T/2, T]. The gaussian option uses half-gate pulses truncated at
// 3 sigma, shifted to zero at the edges and renormalized to unit peak.
double envelope(double t, const PulseSpec& pulse);

// c_SD = -r_mu for the darkened branch
double sd_coefficient(const RateBreakdown& rate0, const RateBreakdown& rate1,
                      int darkened_branch);

// drive at the dressed oscillator frequency of the non-darkened branch
double drive_frequency(const CoupledSpectrum& spec, int non_darkened);

// peak external flux modulation in units of Phi_0: A / (2 pi E_L)
double flux_modulation_amplitude(double amplitude_a, double e_l);

// (phi x I, I x (a + a^dag)) on the bare product space
std::pair<Mat, Mat> build_drive_operators(const FluxoniumModel& model,
                                          const OscillatorSpec& osc);

// Convenience assembly of the full schedule for a gate darkening `mu`.
DriveSchedule make_schedule(const FluxoniumModel& model,
                            const CoupledSpectrum& spec, const PulseSpec& pulse,
                            int darkened_branch);

}  // namespace crcd
