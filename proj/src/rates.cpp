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

#include "rates.hpp"

#include <utility>

#include "errors.hpp"

namespace qdl {

namespace {

void fill_cavity(RateSet& r) {
    const PhononKernel& k = *r.kernel;
    auto kp = [&](double d) { return k.half_fourier(Greens::plus, d); };
    auto km = [&](double d) { return k.half_fourier(Greens::minus, d); };
    for (int i = 0; i < 2; ++i) {
        const double gi2 = r.g[i] * r.g[i];
        const double d = r.d_cav[i];
        r.gamma_i_pm[i][0] = 2.0 * gi2 * kp(-d).real();
        r.gamma_i_pm[i][1] = 2.0 * gi2 * kp(d).real();
        r.delta_i_pm[i][0] = gi2 * kp(-d).imag();
        r.delta_i_pm[i][1] = gi2 * kp(d).imag();
        r.omega_ii_pm[i][0] = gi2 * (km(d) + std::conj(km(-d)));
        r.omega_ii_pm[i][1] = std::conj(r.omega_ii_pm[i][0]);
    }
    const double g12 = r.g[0] * r.g[1];
    const double d1 = r.d_cav[0], d2 = r.d_cav[1];
    r.omega_2ph = 0.5 * g12 *
                  (km(d1) + km(d2) - std::conj(km(-d1)) - std::conj(km(-d2)));
    r.omega_pm[0] = 0.5 * g12 * (kp(-d2) - std::conj(kp(-d1)));
    r.omega_pm[1] = 0.5 * g12 * (kp(d2) - std::conj(kp(d1)));
    r.gamma12_mm = g12 * (kp(d1) + std::conj(kp(d2)));
    r.gamma12_pp = g12 * (kp(-d1) + std::conj(kp(-d2)));
    r.gamma12_mp = g12 * (km(d1) + std::conj(km(-d2)));
    r.gamma12_pm = g12 * (km(-d1) + std::conj(km(d2)));
}

}  // namespace

RateSet rates_incoherent(double g1, double g2, double delta1, double delta2,
                         std::shared_ptr<const PhononKernel> kernel) {
    if (!kernel) throw InvalidArgError("rates_incoherent: null kernel");
    RateSet r;
    r.mode = PumpMode::incoherent;
    r.g = {g1, g2};
    r.d_cav = {delta1, delta2};
    r.kernel = std::move(kernel);
    fill_cavity(r);
    return r;
}

RateSet rates_coherent(double g1, double g2, double eta1, double eta2,
                       double delta1p, double delta2p, double delta_cp,
                       std::shared_ptr<const PhononKernel> kernel) {
    if (!kernel) throw InvalidArgError("rates_coherent: null kernel");
    RateSet r;
    r.mode = PumpMode::coherent;
    r.g = {g1, g2};
    r.eta = {eta1, eta2};
    r.d_cav = {delta1p - delta_cp, delta2p - delta_cp};
    r.d_pump = {delta1p, delta2p};
    r.kernel = std::move(kernel);
    fill_cavity(r);

    const PhononKernel& k = *r.kernel;
    auto kp = [&](double d) { return k.half_fourier(Greens::plus, d); };
    auto km = [&](double d) { return k.half_fourier(Greens::minus, d); };
    for (int i = 0; i < 2; ++i) {
        const double e2 = r.eta[i] * r.eta[i];
        const double dp = r.d_pump[i];
        // A blue-detuned drive excites the dot through phonon emission, so
        // the raising dissipator carries Re K+(+dp).
        r.gamma_p_sigma_pm[i][0] = 2.0 * e2 * kp(dp).real();
        r.gamma_p_sigma_pm[i][1] = 2.0 * e2 * kp(-dp).real();
        r.delta_p_sigma_pm[i][0] = e2 * kp(-dp).imag();
        r.delta_p_sigma_pm[i][1] = e2 * kp(dp).imag();
        r.omega_p_sigsig[i][0] = e2 * (km(dp) + std::conj(km(-dp)));
        r.omega_p_sigsig[i][1] = std::conj(r.omega_p_sigsig[i][0]);
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double ee = r.eta[i] * r.eta[j];
            const double di = r.d_pump[i], dj = r.d_pump[j];
            r.gamma_p_sigsig[i][j][0][1] = ee * (kp(di) + std::conj(kp(dj)));
            r.gamma_p_sigsig[i][j][1][0] = ee * (kp(-di) + std::conj(kp(-dj)));
            r.gamma_p_sigsig[i][j][0][0] = ee * (km(di) + std::conj(km(-dj)));
            r.gamma_p_sigsig[i][j][1][1] = ee * (km(-di) + std::conj(km(dj)));
        }
    const double ee = r.eta[0] * r.eta[1];
    const double dp1 = r.d_pump[0], dp2 = r.d_pump[1];
    r.omega_p_pp = 0.5 * ee *
                   (km(dp1) + km(dp2) - std::conj(km(-dp1)) -
                    std::conj(km(-dp2)));
    r.omega_p_pm[0] = 0.5 * ee * (kp(-dp2) - std::conj(kp(-dp1)));
    r.omega_p_pm[1] = 0.5 * ee * (kp(dp2) - std::conj(kp(dp1)));
    return r;
}

}  // namespace qdl
