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

#include "errors.hpp"
#include "reduction.hpp"
#include "steady.hpp"

using namespace qdl;

namespace {

ModelConfig base_config() {
    ModelConfig c;
    c.bath.temperature = 5.0;
    c.bath.g1_abs = 99.529264;
    c.n_max = 8;
    return c;
}

std::shared_ptr<const PhononKernel> kernel5() {
    static auto k = PhononKernel::build(base_config().bath);
    return k;
}

}  // namespace

TEST_CASE("damped uncoupled model classifies to nothing") {
    ModelConfig c = base_config();
    c.g1 = c.g2 = 0.0;
    c.gamma1 = c.gamma2 = 0.05;
    c.phonons_enabled = false;
    Superoperator gen = sme_generator(c, kernel5(), rates_for(c, kernel5()));
    PhotonRateModel m = reduce(gen, c.kappa);
    for (int p = 0; p < 4; ++p) {
        CHECK(m.emission[p].cwiseAbs().maxCoeff() < 1e-12);
        CHECK(m.absorption[p].cwiseAbs().maxCoeff() < 1e-12);
        for (double a : m.alpha[p]) CHECK(std::abs(a) < 1e-12);
        for (double o : m.overflow_out[p]) CHECK(std::abs(o) < 1e-12);
    }
    CHECK(m.diag_steady(0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(m.negative_cells == 0);
    CHECK(m.most_negative == 0.0);
    CHECK_NOTHROW(require_nonnegative(m));
}

TEST_CASE("reduction reproduces the generator steady state") {
    ModelConfig c = base_config();
    c.eta1 = c.eta2 = 0.35;
    Superoperator gen = sme_generator(c, kernel5(), rates_for(c, kernel5()));
    PhotonRateModel m = reduce(gen, c.kappa);

    CHECK(m.column_defect < 1e-8);
    CHECK(m.max_imag < 1e-10);
    CHECK(balance_defect(m) < 1e-8);

    SteadyState s = solve_steady(gen);
    const int f = c.n_max + 1;
    for (int p = 0; p < 4; ++p)
        for (int n = 0; n < f; ++n)
            CHECK(std::abs(m.diag_steady(p * f + n) - s.pn_ab[p][n]) < 1e-8);

    // flow through shifts beyond m_max is marginal (converged near 1.5e-3
    // of total flux at this pump strength, independent of n_max)
    double total = 0.0, over = 0.0;
    for (int p = 0; p < 4; ++p)
        for (int n = 0; n < f; ++n) {
            total += m.alpha[p][n] * m.diag_steady(p * f + n);
            over += std::abs(m.overflow_out[p][n]) * m.diag_steady(p * f + n);
        }
    CHECK(over < 5e-3 * total);

    EmissionReport r = excess_emission(m, c.kappa);
    double sum = 0.0;
    for (double e : r.excess) sum += e;
    CHECK(sum == r.mean_n_rate_eq);
    CHECK(r.mean_n_sme == doctest::Approx(s.mean_n).epsilon(1e-7));
    CHECK(r.discrepancy < 0.02);

    // strong coupling: resonant eliminated coherences leave signed cells
    CHECK(m.negative_cells > 0);
    CHECK(m.most_negative < -1e-10);
    CHECK_NOTHROW(require_nonnegative(m, 2.0 * -m.most_negative));
    try {
        require_nonnegative(m);
        CHECK(false);
    } catch (const NegativeRateError& e) {
        const std::string what = e.what();
        CHECK(what.find("(pair ") != std::string::npos);
        const bool labeled = what.find("emission(") != std::string::npos ||
                             what.find("absorption(") != std::string::npos;
        CHECK(labeled);
    }
}

TEST_CASE("dressed splitting formula") {
    CHECK(dressed_resonance(-13.5, 3.0) ==
          doctest::Approx(14.7733).epsilon(1e-4));
    CHECK(dressed_resonance(-13.5, 1.9) ==
          doctest::Approx(14.0246).epsilon(1e-4));
    CHECK(dressed_resonance(-7.0, 0.0) == doctest::Approx(7.0));
    CHECK(dressed_resonance(-13.5, 3.0) ==
          doctest::Approx(std::sqrt(13.5 * 13.5 + 36.0)).epsilon(1e-14));
}

TEST_CASE("argument checks and singular coherence block") {
    ModelConfig c = base_config();
    Superoperator gen = sme_generator(c, kernel5(), rates_for(c, kernel5()));
    CHECK_THROWS_AS(reduce(gen, 0.0), InvalidArgError);
    CHECK_THROWS_AS(reduce(gen, c.kappa, 0), InvalidArgError);
    CHECK_THROWS_AS(reduce(gen, c.kappa, c.n_max + 1), InvalidArgError);
    CHECK_THROWS_AS(excess_emission(reduce(gen, c.kappa), -1.0),
                    InvalidArgError);

    // cavity decay alone leaves zero-photon dot coherences undamped
    const HilbertLayout lay(4);
    Superoperator bare = lindblad_dissipator(lay, annihilation(lay), 0.5);
    CHECK_THROWS_AS(reduce(bare, 0.5), SingularError);
}
