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

#pragma once

#include <array>
#include <memory>

#include "phonon.hpp"

namespace qdl {

enum class PumpMode { incoherent, coherent };

// Phonon-induced scattering rates and coherent shifts. Writing K(d) for
// half_fourier(plus_or_minus, d), the dissipative sandwich coefficients
// follow one table: the density-matrix derivative gains X_i rho Y_j with
//   [raise, lower]: c_i c_j (K+(d_i) + K+(d_j)*)
//   [lower, raise]: c_i c_j (K+(-d_i) + K+(-d_j)*)
//   [raise, raise]: c_i c_j (K-(d_i) + K-(-d_j)*)
//   [lower, lower]: c_i c_j (K-(-d_i) + K-(d_j)*)
// where "raise" is sigma_i^+ a (cavity sector, d_i = d_cav[i]) or sigma_i^+
// (pump sector, d_i = d_pump[i]). Trailing [0]/[1] indices select the +/-
// branch of a pm pair throughout.
struct RateSet {
    PumpMode mode = PumpMode::incoherent;
    std::array<double, 2> g{};       // cavity couplings
    std::array<double, 2> eta{};     // pump amplitudes (coherent mode)
    std::array<double, 2> d_cav{};   // detunings in the cavity-sector kernels
    std::array<double, 2> d_pump{};  // detunings in the pump-sector kernels
    std::shared_ptr<const PhononKernel> kernel;

    // Cavity sector.
    std::array<std::array<double, 2>, 2> delta_i_pm{};  // g_i^2 Im K+(-+d_i)
    std::array<std::array<double, 2>, 2> gamma_i_pm{};  // 2 g_i^2 Re K+(-+d_i)
    Cplx omega_2ph{};
    std::array<Cplx, 2> omega_pm{};  // photon-assisted exchange
    // Cross-dot sandwich coefficients; the 1 <-> 2 partners are conjugates.
    Cplx gamma12_pp{};  // (sigma_1^- a') rho (a sigma_2^+)
    Cplx gamma12_mm{};  // (sigma_1^+ a) rho (a' sigma_2^-)
    Cplx gamma12_pm{};  // (sigma_1^- a') rho (sigma_2^- a')
    Cplx gamma12_mp{};  // (sigma_1^+ a) rho (sigma_2^+ a)
    // Same-dot anomalous coefficients; [i][1] = conj([i][0]).
    std::array<std::array<Cplx, 2>, 2> omega_ii_pm{};

    // Pump sector, zero in incoherent mode.
    std::array<std::array<double, 2>, 2> delta_p_sigma_pm{};
    std::array<std::array<double, 2>, 2> gamma_p_sigma_pm{};
    // [i][j][k][l] = coefficient of sigma_i^k rho sigma_j^l, k/l 0:+ 1:-.
    std::array<std::array<std::array<std::array<Cplx, 2>, 2>, 2>, 2>
        gamma_p_sigsig{};
    std::array<std::array<Cplx, 2>, 2> omega_p_sigsig{};
    Cplx omega_p_pp{};
    std::array<Cplx, 2> omega_p_pm{};
};

RateSet rates_incoherent(double g1, double g2, double delta1, double delta2,
                         std::shared_ptr<const PhononKernel> kernel);

// Cavity-sector fields are evaluated at delta_ip - delta_cp, the pump-frame
// rotation frequency of sigma_i^+ a; pump-sector fields at delta_ip.
RateSet rates_coherent(double g1, double g2, double eta1, double eta2,
                       double delta1p, double delta2p, double delta_cp,
                       std::shared_ptr<const PhononKernel> kernel);

}  // namespace qdl
