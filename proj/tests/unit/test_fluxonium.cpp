#include <doctest.h>

#include "crcd/fluxonium.hpp"

using namespace crcd;

namespace {
const FluxoniumSpec f1{3.395, 0.132, 0.479, 0.0};
const FluxoniumSpec f4{4.0, 1.0, 1.0, 0.017};
}  // namespace

TEST_CASE("table-I qubit frequencies") {
  // F1 and F4 rows; F2/F3 are covered by the acceptance suite
  FluxoniumModel m1 = build_fluxonium(f1);
  CHECK(transition_frequency(m1, 0, 1) == doctest::Approx(0.014).epsilon(0.02));
  FluxoniumModel m4 = build_fluxonium(f4);
  CHECK(transition_frequency(m4, 0, 1) == doctest::Approx(0.734).epsilon(0.02));
}

TEST_CASE("harmonic limit: vanishing E_J gives uniform plasma spacing") {
  // E_J -> 0 realized as a negligibly small junction
  FluxoniumSpec spec{1e-12, 0.25, 0.5, 0.0};
  FluxoniumModel m = build_fluxonium(spec, 96, 8);
  const double plasma = std::sqrt(8.0 * spec.e_l * spec.e_c);
  for (int k = 1; k < 8; ++k)
    CHECK(m.energies(k) - m.energies(k - 1) ==
          doctest::Approx(plasma).epsilon(1e-8));
}

TEST_CASE("matrix element structure") {
  FluxoniumModel m = build_fluxonium(f1);
  const double scale = m.phi_elems.cwiseAbs().maxCoeff();

  SUBCASE("phi symmetric, n antisymmetric") {
    CHECK((m.phi_elems - m.phi_elems.transpose()).cwiseAbs().maxCoeff() <
          1e-10 * scale);
    CHECK((m.n_elems + m.n_elems.transpose()).cwiseAbs().maxCoeff() <
          1e-10 * m.n_elems.cwiseAbs().maxCoeff());
  }

  SUBCASE("parity selection at the sweet spot: (0,6) forbidden") {
    CHECK(std::abs(m.phi_elems(0, 6)) < 1e-8);
    CHECK(std::abs(m.n_elems(0, 6)) < 1e-8);
  }

  SUBCASE("commutator identity ties n to phi") {
    // [H, phi] = -8i E_C n gives n_elems(k,j) = -Delta_{k,j} phi_kj/(8 E_C);
    // an independent consistency check of both element sets and the gauge
    // (in which i n_{k,j} phi_{j,k} is manifestly real).
    const double n_scale = m.n_elems.cwiseAbs().maxCoeff();
    for (int k = 0; k < 8; ++k)
      for (int j = 0; j < 8; ++j) {
        const double expect = -(m.energies(j) - m.energies(k)) *
                              m.phi_elems(k, j) / (8.0 * f1.e_c);
        CHECK(std::abs(m.n_elems(k, j) - expect) < 1e-6 * n_scale);
      }
  }
}

TEST_CASE("spectrum anchors for F1") {
  FluxoniumModel m = build_fluxonium(f1);
  // Delta_16 - 5.03 GHz = 100.4 MHz +/- 5 MHz
  CHECK(transition_frequency(m, 1, 6) - 5.03 ==
        doctest::Approx(0.1004).epsilon(0.05));
  CHECK(transition_frequency(m, 1, 1) == 0.0);
  CHECK(transition_frequency(m, 0, 3) ==
        -transition_frequency(m, 3, 0));
}

TEST_CASE("flux periodicity") {
  FluxoniumSpec a{4.0, 1.0, 1.0, 0.3};
  FluxoniumSpec b{4.0, 1.0, 1.0, 1.3};
  FluxoniumModel ma = build_fluxonium(a, 80, 6);
  FluxoniumModel mb = build_fluxonium(b, 80, 6);
  CHECK((ma.energies - mb.energies).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("ground offset and ordering") {
  FluxoniumModel m = build_fluxonium(f4, 80, 6);
  CHECK(m.energies(0) == 0.0);
  for (int k = 1; k < 6; ++k) CHECK(m.energies(k) >= m.energies(k - 1));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(build_fluxonium({-1.0, 1.0, 1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(build_fluxonium(f1, 10, 12), ValidationError);
  CHECK_THROWS_AS(build_fluxonium(f1, 120, 1), ValidationError);
  CHECK_THROWS_AS(transition_frequency(build_fluxonium(f1, 80, 4), 0, 9),
                  ValidationError);
}
