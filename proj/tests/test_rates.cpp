// Copyright 2026 the qdlaser authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

#include "errors.hpp"
#include "rates.hpp"

using namespace qdl;

namespace {

BathParams calibrated_bath(double temperature) {
    BathParams b;
    b.temperature = temperature;
    b.g1_abs = 99.529264;  // fixes <B>(5K) = 0.9
    return b;
}

std::shared_ptr<const PhononKernel> kernel5() {
    static auto k = PhononKernel::build(calibrated_bath(5.0));
    return k;
}

// Independent of the tabulated kernel: integrates G_+ e^{-i delta tau} from
// live phi(). The 5 K correlation is dead beyond tau ~ 3.
Cplx direct_k_plus(const BathParams& bath, double delta) {
    using boost::math::quadrature::gauss_kronrod;
    const double b2 = std::pow(franck_condon(bath), 2);
    Cplx acc = 0.0;
    for (int seg = 0; seg < 10; ++seg) {
        auto part = [&](int comp) {
            return gauss_kronrod<double, 15>::integrate(
                [&](double tau) {
                    const Cplx g = b2 * (std::exp(phi(tau, bath)) - 1.0);
                    const Cplx val = g * std::polar(1.0, -delta * tau);
                    return comp == 0 ? val.real() : val.imag();
                },
                seg, seg + 1.0, 10, 1e-12);
        };
        acc += Cplx(part(0), part(1));
    }
    return acc;
}

}  // namespace

TEST_CASE("zero couplings produce zero rates") {
    RateSet r = rates_incoherent(0.0, 0.0, 1.5, -2.0, kernel5());
    for (int i = 0; i < 2; ++i)
        for (int s = 0; s < 2; ++s) {
            CHECK(r.gamma_i_pm[i][s] == 0.0);
            CHECK(r.delta_i_pm[i][s] == 0.0);
            CHECK(r.omega_ii_pm[i][s] == Cplx(0.0));
        }
    CHECK(r.omega_2ph == Cplx(0.0));
    CHECK(r.omega_pm[0] == Cplx(0.0));
    CHECK(r.gamma12_mm == Cplx(0.0));

    RateSet c = rates_coherent(1.0, 1.0, 0.0, 0.0, -13.5, -13.5, -14.0,
                               kernel5());
    for (int i = 0; i < 2; ++i)
        for (int s = 0; s < 2; ++s) {
            CHECK(c.gamma_p_sigma_pm[i][s] == 0.0);
            CHECK(c.delta_p_sigma_pm[i][s] == 0.0);
        }
    CHECK(c.omega_p_pp == Cplx(0.0));
    // cavity-sector fields reduce to the incoherent ones at the shifted
    // detuning (identical kernel lookups)
    RateSet shifted = rates_incoherent(1.0, 1.0, 0.5, 0.5, kernel5());
    CHECK(c.gamma_i_pm[0][0] == shifted.gamma_i_pm[0][0]);
    CHECK(c.gamma_i_pm[1][1] == shifted.gamma_i_pm[1][1]);
    CHECK(c.omega_2ph == shifted.omega_2ph);
}

TEST_CASE("degenerate zero detuning symmetrizes the rates") {
    RateSet r = rates_incoherent(1.0, 1.0, 0.0, 0.0, kernel5());
    for (int i = 0; i < 2; ++i) {
        CHECK(r.gamma_i_pm[i][0] == r.gamma_i_pm[i][1]);
        CHECK(r.gamma_i_pm[i][0] >= 0.0);
    }
    // K+(0) - K+(0)* is purely imaginary
    CHECK(r.omega_pm[0].real() == 0.0);
    CHECK(r.omega_pm[1].real() == 0.0);
    // equal couplings and detunings collapse the cross coefficient onto the
    // diagonal rate
    CHECK(r.gamma12_mm.real() == doctest::Approx(r.gamma_i_pm[0][1]));
    CHECK(r.gamma12_mm.imag() == doctest::Approx(0.0));
}

TEST_CASE("gamma and delta match direct quadrature of the defining integral") {
    const BathParams bath = calibrated_bath(5.0);
    const double g1 = 1.0, g2 = 0.7, d1 = 2.0, d2 = -1.3;
    RateSet r = rates_incoherent(g1, g2, d1, d2, kernel5());
    const Cplx k_at_p1 = direct_k_plus(bath, d1);
    const Cplx k_at_m1 = direct_k_plus(bath, -d1);
    CHECK(r.gamma_i_pm[0][0] ==
          doctest::Approx(2.0 * g1 * g1 * k_at_m1.real()).epsilon(1e-8));
    CHECK(r.gamma_i_pm[0][1] ==
          doctest::Approx(2.0 * g1 * g1 * k_at_p1.real()).epsilon(1e-8));
    CHECK(r.delta_i_pm[0][0] ==
          doctest::Approx(g1 * g1 * k_at_m1.imag()).epsilon(1e-8));
    CHECK(r.delta_i_pm[0][1] ==
          doctest::Approx(g1 * g1 * k_at_p1.imag()).epsilon(1e-8));
    const Cplx k_at_p2 = direct_k_plus(bath, d2);
    CHECK(r.gamma_i_pm[1][1] ==
          doctest::Approx(2.0 * g2 * g2 * k_at_p2.real()).epsilon(1e-8));
    // exchange term from the same building blocks
    const Cplx want = 0.5 * g1 * g2 * (k_at_p2 - std::conj(k_at_p1));
    CHECK(std::abs(r.omega_pm[1] - want) < 1e-8);
}

TEST_CASE("rates scale exactly with coupling products") {
    RateSet base = rates_incoherent(1.0, 1.0, 1.2, -0.4, kernel5());
    RateSet scaled = rates_incoherent(2.0, 4.0, 1.2, -0.4, kernel5());
    CHECK(scaled.gamma_i_pm[0][0] == 4.0 * base.gamma_i_pm[0][0]);
    CHECK(scaled.gamma_i_pm[1][1] == 16.0 * base.gamma_i_pm[1][1]);
    CHECK(scaled.delta_i_pm[0][1] == 4.0 * base.delta_i_pm[0][1]);
    CHECK(scaled.omega_2ph == 8.0 * base.omega_2ph);
    CHECK(scaled.gamma12_pm == 8.0 * base.gamma12_pm);
    CHECK(scaled.omega_ii_pm[1][0] == 16.0 * base.omega_ii_pm[1][0]);

    RateSet cb = rates_coherent(1.0, 1.0, 1.0, 1.0, -13.5, -13.5, -14.0,
                                kernel5());
    RateSet cs = rates_coherent(1.0, 1.0, 2.0, 4.0, -13.5, -13.5, -14.0,
                                kernel5());
    CHECK(cs.gamma_p_sigma_pm[0][0] == 4.0 * cb.gamma_p_sigma_pm[0][0]);
    CHECK(cs.gamma_p_sigsig[0][1][0][1] == 8.0 * cb.gamma_p_sigsig[0][1][0][1]);
    CHECK(cs.omega_p_pp == 8.0 * cb.omega_p_pp);
}

TEST_CASE("zero-temperature rates keep only emission-assisted channels") {
    auto k0 = PhononKernel::build(calibrated_bath(0.0));
    // dot above cavity: transfer into the photon sheds energy as a phonon
    RateSet r = rates_incoherent(1.0, 1.0, 3.0, 3.0, k0);
    CHECK(r.gamma_i_pm[0][0] > 1e-4);
    CHECK(std::abs(r.gamma_i_pm[0][1]) < 1e-10);
    // blue-detuned drive: the raising channel survives at T=0
    RateSet c = rates_coherent(1.0, 1.0, 3.0, 3.0, -13.5, -13.5, -14.77, k0);
    CHECK(c.gamma_p_sigma_pm[0][0] > 1e-4);
    CHECK(std::abs(c.gamma_p_sigma_pm[0][1]) < 1e-10);
}

TEST_CASE("sandwich coefficients close under hermitian pairing") {
    RateSet c = rates_coherent(1.0, -0.8, 0.7, 1.3, -13.5, -11.0, -3.0,
                               kernel5());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    const Cplx lhs = c.gamma_p_sigsig[i][j][k][l];
                    const Cplx rhs =
                        std::conj(c.gamma_p_sigsig[j][i][1 - l][1 - k]);
                    CHECK(std::abs(lhs - rhs) < 1e-14);
                }
    CHECK(std::abs(c.omega_p_sigsig[0][1] - std::conj(c.omega_p_sigsig[0][0])) <
          1e-14);
}

TEST_CASE("symmetric pumping symmetrizes the cross-dot coefficients") {
    RateSet c = rates_coherent(1.0, 1.0, 2.0, 2.0, -13.5, -13.5, -14.0,
                               kernel5());
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
            CHECK(c.gamma_p_sigsig[0][1][k][l] == c.gamma_p_sigsig[1][0][k][l]);
}

TEST_CASE("alpha_p = 0 kills every rate at full coupling") {
    BathParams b = calibrated_bath(5.0);
    b.alpha_p = 0.0;
    auto k = PhononKernel::build(b);
    RateSet c = rates_coherent(1.0, 1.0, 2.0, 2.0, -13.5, -13.5, -14.0, k);
    CHECK(c.gamma_i_pm[0][0] == 0.0);
    CHECK(c.gamma_p_sigma_pm[1][0] == 0.0);
    CHECK(c.omega_2ph == Cplx(0.0));
    CHECK(c.omega_p_pm[0] == Cplx(0.0));
    CHECK(c.gamma12_mp == Cplx(0.0));
}
