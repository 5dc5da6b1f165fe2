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

#include "phonon.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <bit>
#include <cmath>

#include "errors.hpp"

namespace qdl {
namespace {

constexpr double kPi = 3.14159265358979323846;

struct ThermalSetup {
    double beta_g = 0.0;   // inverse temperature, 1/g1
    double tau_max = 0.0;  // thermal part < 1e-13 of its peak beyond this
    bool active = false;
};

ThermalSetup thermal_setup(const BathParams& b) {
    ThermalSetup s;
    // Below 10 mK the thermal correction is under ~2e-7 while its tau range
    // diverges as 1/T; treat as zero temperature.
    if (b.temperature < 0.01) return s;
    s.beta_g = b.g1_abs / (k_boltzmann_microev_per_kelvin * b.temperature);
    s.tau_max = 1.0 + 30.0 * s.beta_g / (2.0 * kPi);
    s.active = true;
    return s;
}

// Integrates f(w) cos(w tau)-type integrands over [0, 9.5 omega_b]; the
// Gaussian envelope is below 1e-19 beyond the cut. Panels are sized to hold
// about one cos period so a shallow adaptive depth suffices everywhere.
template <class F>
double bath_quadrature(F&& f, double omega_b, double tau,
                       double support = 0.0) {
    using boost::math::quadrature::gauss_kronrod;
    const double width = std::min(omega_b, 6.0 / std::max(tau, 0.3));
    double cut = 9.5 * omega_b;
    if (support > 0.0) cut = std::min(cut, support);
    const int n = int(std::ceil(cut / width));
    const double h = cut / n;
    double total = 0.0;
    double err_total = 0.0;
    for (int seg = 0; seg < n; ++seg) {
        double err = 0.0;
        total += gauss_kronrod<double, 15>::integrate(f, seg * h, (seg + 1) * h,
                                                      4, 1e-13, &err);
        err_total += err;
    }
    if (!(err_total < 1e-9))
        throw QuadratureError("bath quadrature error estimate " +
                              std::to_string(err_total));
    return total;
}

// Re phi at T=0. Quadrature below x = omega_b tau / sqrt(2) = 6, asymptotic
// series beyond (optimal truncation error ~ e^{-36}).
double phi0_re(double tau, const BathParams& b) {
    const double x = b.omega_b * tau / std::sqrt(2.0);
    if (x < 6.0) {
        const double inv2wb2 = 1.0 / (2.0 * b.omega_b * b.omega_b);
        return bath_quadrature(
            [&](double w) {
                return b.alpha_p * w * std::exp(-w * w * inv2wb2) *
                       std::cos(w * tau);
            },
            b.omega_b, tau);
    }
    const double u = 1.0 / (b.omega_b * b.omega_b * tau * tau);
    double sum = 0.0;
    double term = u;
    for (int k = 1; k <= 40; ++k) {
        sum += term;
        const double next = term * (2 * k + 1) * u;
        if (next >= term || next < 1e-18 * sum) break;
        term = next;
    }
    return -b.alpha_p * b.omega_b * b.omega_b * sum;
}

double phi0_im(double tau, const BathParams& b) {
    const double z = b.omega_b * tau;
    return -b.alpha_p * std::sqrt(kPi / 2.0) * b.omega_b * b.omega_b *
           b.omega_b * tau * std::exp(-0.5 * z * z);
}

double phi_thermal(double tau, const BathParams& b, const ThermalSetup& th) {
    if (!th.active || tau > th.tau_max || b.alpha_p == 0.0) return 0.0;
    const double inv2wb2 = 1.0 / (2.0 * b.omega_b * b.omega_b);
    // coth(beta w / 2) - 1 ~ 2 e^{-beta w}; dead beyond w = 45 / beta.
    return bath_quadrature(
        [&](double w) {
            const double x = 0.5 * th.beta_g * w;
            return b.alpha_p * w * (coth_safe(x) - 1.0) *
                   std::exp(-w * w * inv2wb2) * std::cos(w * tau);
        },
        b.omega_b, tau, 45.0 / th.beta_g);
}

Cplx phi_at(double tau, const BathParams& b, const ThermalSetup& th) {
    // Beyond the thermal window the algebraic tails of the T=0 and thermal
    // parts cancel term by term (the full Re phi decays like e^{-2 pi tau /
    // beta}), so only the Gaussian-damped Im part survives.
    if (th.active && tau > th.tau_max) return Cplx(0.0, phi0_im(tau, b));
    return Cplx(phi0_re(tau, b) + phi_thermal(tau, b, th), phi0_im(tau, b));
}

void check_bath(const BathParams& b) {
    if (!(b.alpha_p >= 0.0) || !(b.omega_b > 0.0) || !(b.temperature >= 0.0) ||
        !(b.g1_abs > 0.0))
        throw ConfigError("bath parameters out of range");
}

// int_0^h s^k e^{-i delta s} ds for k = 0..3.
struct IntervalMoments {
    Cplx m[4];
};

IntervalMoments interval_moments(double delta, double h) {
    IntervalMoments out;
    const double dh = delta * h;
    if (std::abs(dh) < 0.8) {
        // Taylor series in (-i delta h); converges to 1e-18 within ~25 terms.
        for (int k = 0; k < 4; ++k) {
            Cplx term = std::pow(h, k + 1) / double(k + 1);
            Cplx sum = term;
            for (int m = 1; m < 30; ++m) {
                term *= Cplx(0.0, -dh) *
                        (double(k + m) / (double(m) * double(k + m + 1)));
                sum += term;
                if (std::abs(term) < 1e-18 * std::abs(sum)) break;
            }
            out.m[k] = sum;
        }
        return out;
    }
    const Cplx id(0.0, delta);
    const Cplx e = std::polar(1.0, -dh);
    out.m[0] = (1.0 - e) / id;
    double hk = 1.0;
    for (int k = 1; k < 4; ++k) {
        hk *= h;
        out.m[k] = (double(k) * out.m[k - 1] - hk * e) / id;
    }
    return out;
}

// int_0^end spline(tau) e^{-i delta tau} d tau, exact per cubic piece.
Cplx filon_half_fourier(const ComplexSpline& sp, double delta) {
    const auto& x = sp.knots;
    Cplx acc = 0.0;
    double prev_h = -1.0;
    IntervalMoments mm{};
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double h = x[i + 1] - x[i];
        if (std::abs(h - prev_h) > 1e-14 * h) {
            mm = interval_moments(delta, h);
            prev_h = h;
        }
        const Cplx phase = std::polar(1.0, -delta * x[i]);
        acc += phase * (sp.c0[i] * mm.m[0] + sp.c1[i] * mm.m[1] +
                        sp.c2[i] * mm.m[2] + sp.c3[i] * mm.m[3]);
    }
    return acc;
}

Cplx fd_slope_left(const std::vector<double>& x, const std::vector<Cplx>& y) {
    // 4th-order one-sided difference; the first five knots are uniform.
    const double h = x[1] - x[0];
    return (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] -
            3.0 * y[4]) /
           (12.0 * h);
}

}  // namespace

double spectral_density(double omega, const BathParams& bath) {
    if (!(omega >= 0.0)) throw InvalidArgError("spectral_density: omega < 0");
    return bath.alpha_p * omega * omega * omega *
           std::exp(-omega * omega / (2.0 * bath.omega_b * bath.omega_b));
}

double coth_safe(double x) {
    if (x < 1e-6) return 1.0 / x + x / 3.0;
    return 1.0 / std::tanh(x);
}

Cplx phi(double tau, const BathParams& bath) {
    check_bath(bath);
    if (!(tau >= 0.0)) throw InvalidArgError("phi: tau < 0");
    return phi_at(tau, bath, thermal_setup(bath));
}

double franck_condon(const BathParams& bath) {
    return std::exp(-0.5 * phi(0.0, bath).real());
}

double calibrate_g1_abs(const BathParams& bath, double target_b,
                        double temperature_k) {
    check_bath(bath);
    if (!(target_b > 0.0 && target_b < 1.0) || !(temperature_k > 0.0))
        throw InvalidArgError("calibrate_g1_abs: bad target");
    BathParams probe = bath;
    probe.temperature = temperature_k;
    const double re0 = phi0_re(0.0, probe);
    auto b_of = [&](double g1_abs) {
        probe.g1_abs = g1_abs;
        return std::exp(
            -0.5 * (re0 + phi_thermal(0.0, probe, thermal_setup(probe))));
    };
    double lo = 5.0, hi = 2000.0;
    if (b_of(lo) > target_b || b_of(hi) < target_b)
        throw ConfigError("calibrate_g1_abs: target outside [5, 2000] ueV");
    // <B> is monotone increasing in g1_abs (colder in g1 units).
    for (int it = 0; it < 80 && (hi - lo) > 1e-9 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (b_of(mid) < target_b ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Cplx ComplexSpline::eval(double t) const {
    const auto it = std::upper_bound(knots.begin(), knots.end(), t);
    const int i = std::clamp(int(it - knots.begin()) - 1, 0,
                             int(knots.size()) - 2);
    const double s = t - knots[i];
    return c0[i] + s * (c1[i] + s * (c2[i] + s * c3[i]));
}

ComplexSpline build_spline(const std::vector<double>& x,
                           const std::vector<Cplx>& y, Cplx left_slope) {
    const int n = int(x.size());
    if (n < 3 || y.size() != x.size())
        throw InvalidArgError("build_spline: need at least 3 knots");
    std::vector<double> h(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        if (!(h[i] > 0.0))
            throw InvalidArgError("build_spline: knots must increase");
    }

    // Tridiagonal system for second derivatives; clamped left, natural right.
    std::vector<double> diag(n), upper(n - 1), lower(n - 1);
    std::vector<Cplx> rhs(n);
    diag[0] = h[0] / 3.0;
    upper[0] = h[0] / 6.0;
    rhs[0] = (y[1] - y[0]) / h[0] - left_slope;
    for (int i = 1; i + 1 < n; ++i) {
        lower[i - 1] = h[i - 1] / 6.0;
        diag[i] = (h[i - 1] + h[i]) / 3.0;
        upper[i] = h[i] / 6.0;
        rhs[i] = (y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1];
    }
    lower[n - 2] = 0.0;
    diag[n - 1] = 1.0;
    rhs[n - 1] = 0.0;

    std::vector<double> cp(n - 1);
    std::vector<Cplx> dp(n);
    cp[0] = upper[0] / diag[0];
    dp[0] = rhs[0] / diag[0];
    for (int i = 1; i < n; ++i) {
        const double m = diag[i] - lower[i - 1] * cp[i - 1];
        if (i + 1 < n) cp[i] = upper[i] / m;
        dp[i] = (rhs[i] - lower[i - 1] * dp[i - 1]) / m;
    }
    std::vector<Cplx> m2(n);
    m2[n - 1] = dp[n - 1];
    for (int i = n - 2; i >= 0; --i) m2[i] = dp[i] - cp[i] * m2[i + 1];

    ComplexSpline sp;
    sp.knots = x;
    sp.c0.resize(n - 1);
    sp.c1.resize(n - 1);
    sp.c2.resize(n - 1);
    sp.c3.resize(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        sp.c0[i] = y[i];
        sp.c1[i] = (y[i + 1] - y[i]) / h[i] -
                   h[i] * (2.0 * m2[i] + m2[i + 1]) / 6.0;
        sp.c2[i] = 0.5 * m2[i];
        sp.c3[i] = (m2[i + 1] - m2[i]) / (6.0 * h[i]);
    }
    return sp;
}

std::shared_ptr<const PhononKernel> PhononKernel::build(
    const BathParams& bath, const TauGridSpec& grid) {
    check_bath(bath);
    if (!(grid.h_fine > 0) || !(grid.t_fine > grid.h_fine) ||
        !(grid.h_mid > 0) || !(grid.t_mid > grid.t_fine) ||
        !(grid.ratio > 1.0) || !(grid.t_end_scale > 0))
        throw ConfigError("PhononKernel: bad tau grid spec");

    auto k = std::shared_ptr<PhononKernel>(new PhononKernel());
    k->bath_ = bath;

    std::vector<double> tau;
    const int n_fine = int(std::lround(grid.t_fine / grid.h_fine));
    const int n_mid = int(std::lround((grid.t_mid - grid.t_fine) / grid.h_mid));
    tau.reserve(n_fine + n_mid + 1024);
    for (int i = 0; i <= n_fine; ++i) tau.push_back(i * grid.h_fine);
    for (int i = 1; i <= n_mid; ++i) tau.push_back(grid.t_fine + i * grid.h_mid);
    const double t_end = grid.t_end_scale / bath.omega_b;
    if (t_end > grid.t_mid) {
        const int n_geo = int(
            std::ceil(std::log(t_end / grid.t_mid) / std::log(grid.ratio)));
        const double r_eff = std::pow(t_end / grid.t_mid, 1.0 / n_geo);
        for (int i = 1; i < n_geo; ++i)
            tau.push_back(grid.t_mid * std::pow(r_eff, i));
        tau.push_back(t_end);
    }

    const ThermalSetup th = thermal_setup(bath);
    std::vector<Cplx> phiv(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i)
        phiv[i] = phi_at(tau[i], bath, th);

    if (std::abs(phiv.front()) > 0.0 &&
        std::abs(phiv.back()) > 1e-10 * std::abs(phiv.front()))
        throw QuadratureError("phi tail above 1e-10 of phi(0) at grid end");

    k->fc_ = std::exp(-0.5 * phiv.front().real());
    const double b2 = k->fc_ * k->fc_;
    std::vector<Cplx> gp(tau.size()), gm(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) {
        gp[i] = b2 * (std::exp(phiv[i]) - 1.0);
        gm[i] = b2 * (std::exp(-phiv[i]) - 1.0);
    }
    k->g_plus_ = build_spline(tau, gp, fd_slope_left(tau, gp));
    k->g_minus_ = build_spline(tau, gm, fd_slope_left(tau, gm));
    k->tau_ = std::move(tau);
    return k;
}

Cplx PhononKernel::correlation(Greens which, double tau) const {
    if (!(tau >= 0.0)) throw InvalidArgError("correlation: tau < 0");
    switch (which) {
        case Greens::plus: return g_plus_.eval(tau);
        case Greens::minus: return g_minus_.eval(tau);
        case Greens::g:
            return 0.5 * (g_plus_.eval(tau) + g_minus_.eval(tau));
        case Greens::u:
            return 0.5 * (g_plus_.eval(tau) - g_minus_.eval(tau));
    }
    throw InvalidArgError("correlation: bad selector");
}

Cplx PhononKernel::half_fourier(Greens which, double delta) const {
    if (!std::isfinite(delta))
        throw InvalidArgError("half_fourier: delta not finite");
    if (delta == 0.0) delta = 0.0;  // collapse -0 onto +0 for the cache key

    auto cached = [&](std::unordered_map<std::uint64_t, Cplx>& cache,
                      const ComplexSpline& sp) {
        const std::uint64_t key = std::bit_cast<std::uint64_t>(delta);
        {
            std::lock_guard<std::mutex> lock(cache_mutex_);
            const auto it = cache.find(key);
            if (it != cache.end()) return it->second;
        }
        const Cplx v = filon_half_fourier(sp, delta);
        std::lock_guard<std::mutex> lock(cache_mutex_);
        return cache.emplace(key, v).first->second;
    };

    switch (which) {
        case Greens::plus: return cached(cache_plus_, g_plus_);
        case Greens::minus: return cached(cache_minus_, g_minus_);
        case Greens::g:
            return 0.5 * (cached(cache_plus_, g_plus_) +
                          cached(cache_minus_, g_minus_));
        case Greens::u:
            return 0.5 * (cached(cache_plus_, g_plus_) -
                          cached(cache_minus_, g_minus_));
    }
    throw InvalidArgError("half_fourier: bad selector");
}

}  // namespace qdl
