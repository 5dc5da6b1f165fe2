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

#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace qdl {

using Cplx = std::complex<double>;

inline constexpr double k_boltzmann_microev_per_kelvin = 86.17333262;

// Super-ohmic deformation-potential bath. alpha_p and omega_b are expressed
// relative to g1; g1_abs (micro-eV) only enters through the temperature.
struct BathParams {
    double alpha_p = 1.42e-3;
    double omega_b = 10.0;
    double temperature = 5.0;  // Kelvin
    double g1_abs = 100.0;     // micro-eV
};

// J(w) = alpha_p w^3 exp(-w^2 / 2 omega_b^2)
double spectral_density(double omega, const BathParams& bath);

// coth with the small-argument limit handled analytically.
double coth_safe(double x);

// Correlation phase phi(tau) = int J/w^2 [coth(bw/2) cos(w tau) - i sin(w tau)].
Cplx phi(double tau, const BathParams& bath);

// <B> = exp(-Re phi(0) / 2), in (0, 1].
double franck_condon(const BathParams& bath);

// Returns the g1_abs (micro-eV) for which <B>(temperature_k) = target_b.
double calibrate_g1_abs(const BathParams& bath, double target_b = 0.9,
                        double temperature_k = 5.0);

// Linear combinations of the displacement correlators:
//   plus  = <B>^2 (e^{+phi} - 1)      minus = <B>^2 (e^{-phi} - 1)
//   g     = (plus + minus) / 2        u     = (plus - minus) / 2
enum class Greens { g, u, plus, minus };

// Cubic interpolant on a non-uniform knot set, clamped on the left and
// natural on the right. Coefficients are per-interval in the local offset.
struct ComplexSpline {
    std::vector<double> knots;
    std::vector<Cplx> c0, c1, c2, c3;

    Cplx eval(double t) const;
};

ComplexSpline build_spline(const std::vector<double>& x,
                           const std::vector<Cplx>& y, Cplx left_slope);

// Tau-grid parameters: two uniform sections followed by a geometric tail.
// Defaults hold |phi(tau_end)| below 1e-10 |phi(0)| for the default bath.
struct TauGridSpec {
    double h_fine = 2e-4;
    double t_fine = 0.3;
    double h_mid = 1e-3;
    double t_mid = 2.0;
    double ratio = 1.0175;
    double t_end_scale = 3e5;  // tau_end = t_end_scale / omega_b
};

// Tabulates the correlators for one bath and serves their half Fourier
// transforms K(delta) = int_0^inf G(tau) e^{-i delta tau} dtau. Immutable
// after build; the transform cache makes eval const-threadsafe.
class PhononKernel {
  public:
    static std::shared_ptr<const PhononKernel> build(
        const BathParams& bath, const TauGridSpec& grid = TauGridSpec());

    const BathParams& bath() const { return bath_; }
    double franck_condon() const { return fc_; }
    const std::vector<double>& tau_grid() const { return tau_; }

    // Spline evaluation of G_which at tau >= 0.
    Cplx correlation(Greens which, double tau) const;

    // K_which(delta), cached per distinct delta.
    Cplx half_fourier(Greens which, double delta) const;

  private:
    PhononKernel() = default;

    BathParams bath_;
    double fc_ = 1.0;
    std::vector<double> tau_;
    ComplexSpline g_plus_, g_minus_;

    mutable std::mutex cache_mutex_;
    mutable std::unordered_map<std::uint64_t, Cplx> cache_plus_, cache_minus_;
};

}  // namespace qdl
