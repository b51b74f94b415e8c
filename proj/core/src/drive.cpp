#include "crcd/drive.hpp"

#include <cmath>

#include <json.hpp>

#include "crcd/operators.hpp"

namespace crcd {

void PulseSpec::validate() const {
  if (amplitude_a < 0.0)
    throw ValidationError("pulse amplitude must be non-negative");
  if (!(gate_time_t > 0.0))
    throw ValidationError("gate time must be positive");
}

double envelope(double t, const PulseSpec& pulse) {
  const double T = pulse.gate_time_t;
  if (t < 0.0 || t > T)
    throw ValidationError("envelope: t outside [0, T]");
  const bool second_half = pulse.echo && t > 0.5 * T;
  const double tau = second_half ? t - 0.5 * T : t;
  double omega;
  switch (pulse.envelope_kind) {
    case EnvelopeKind::sin2: {
      const double s = std::sin(two_pi * tau / T);
      omega = s * s;
      break;
    }
    case EnvelopeKind::gaussian: {
      const double half = 0.5 * T;
      const double sigma = half / 6.0;  // 3 sigma per side of the half-gate
      const double edge = std::exp(-4.5);
      const double raw = std::exp(-0.5 * std::pow((tau - 0.5 * half) / sigma, 2));
      omega = (raw - edge) / (1.0 - edge);
      break;
    }
    default:
      throw ValidationError("unknown envelope kind");
  }
  return second_half ? -omega : omega;
}

double sd_coefficient(const RateBreakdown& rate0, const RateBreakdown& rate1,
                      int darkened_branch) {
  if (darkened_branch == 0) return -rate0.total;
  if (darkened_branch == 1) return -rate1.total;
  throw ValidationError("sd_coefficient: darkened branch must be 0 or 1");
}

double drive_frequency(const CoupledSpectrum& spec, int non_darkened) {
  return dressed_oscillator_frequency(spec, non_darkened);
}

double flux_modulation_amplitude(double amplitude_a, double e_l) {
  if (!(e_l > 0.0)) throw ValidationError("flux_modulation_amplitude: e_l > 0");
  return amplitude_a / (two_pi * e_l);
}

std::pair<Mat, Mat> build_drive_operators(const FluxoniumModel& model,
                                          const OscillatorSpec& osc) {
  osc.validate();
  Mat ident_o = Mat::Identity(osc.fock_cutoff, osc.fock_cutoff);
  Mat ident_f = Mat::Identity(model.levels_kept, model.levels_kept);
  return {kron(model.phi_elems, ident_o),
          kron(ident_f, fock_position(osc.fock_cutoff))};
}

DriveSchedule make_schedule(const FluxoniumModel& model,
                            const CoupledSpectrum& spec, const PulseSpec& pulse,
                            int darkened_branch) {
  pulse.validate();
  if (darkened_branch != 0 && darkened_branch != 1)
    throw ValidationError("darkened branch must be 0 or 1");
  DriveSchedule s;
  s.pulse = pulse;
  s.darkened_branch = darkened_branch;
  s.omega_d = drive_frequency(spec, 1 - darkened_branch);
  const RateBreakdown b0 = perturbative_rate(model, 0, spec.omega_osc, spec.g);
  const RateBreakdown b1 = perturbative_rate(model, 1, spec.omega_osc, spec.g);
  s.c_sd = sd_coefficient(b0, b1, darkened_branch);
  s.echo_time = pulse.echo ? 0.5 * pulse.gate_time_t : 0.0;
  return s;
}

std::string DriveSchedule::to_record() const {
  nlohmann::json j;
  j["amplitude_a"] = pulse.amplitude_a;
  j["gate_time_t"] = pulse.gate_time_t;
  j["envelope"] = pulse.envelope_kind == EnvelopeKind::sin2 ? "sin2" : "gaussian";
  j["echo"] = pulse.echo;
  j["carrier_phase"] = pulse.carrier_phase;
  j["omega_d"] = omega_d;
  j["c_sd"] = c_sd;
  j["darkened_branch"] = darkened_branch;
  j["echo_time"] = echo_time;
  return j.dump();
}

DriveSchedule DriveSchedule::from_record(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  DriveSchedule s;
  s.pulse.amplitude_a = j.at("amplitude_a").get<double>();
  s.pulse.gate_time_t = j.at("gate_time_t").get<double>();
  const std::string env = j.at("envelope").get<std::string>();
  if (env == "sin2")
    s.pulse.envelope_kind = EnvelopeKind::sin2;
  else if (env == "gaussian")
    s.pulse.envelope_kind = EnvelopeKind::gaussian;
  else
    throw ValidationError("unknown envelope in schedule record: " + env);
  s.pulse.echo = j.at("echo").get<bool>();
  s.pulse.carrier_phase = j.at("carrier_phase").get<double>();
  s.omega_d = j.at("omega_d").get<double>();
  s.c_sd = j.at("c_sd").get<double>();
  s.darkened_branch = j.at("darkened_branch").get<int>();
  s.echo_time = j.at("echo_time").get<double>();
  return s;
}

}  // namespace crcd
