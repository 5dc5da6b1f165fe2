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
#include <vector>

#include "generator.hpp"

namespace qdl {

// Photon-number rate picture of a generator: coherences adiabatically
// eliminated, remaining diagonal flow classified by photon-number shift.
// All per-state arrays are indexed [pair][n] with pair = dot1 * 2 + dot2;
// the flat diagonal index is pair * (n_max + 1) + n.
struct PhotonRateModel {
    int n_max = 0;
    int m_max = 4;
    double kappa = 0.0;

    // photon-shifting outflow per source state, cavity decay excluded
    std::array<std::vector<double>, 4> alpha;
    // emission[pair](n, k-1): k-photon emission coefficient out of (pair, n);
    // absorption is its downward mirror. Source-indexed, destinations summed.
    std::array<Eigen::MatrixXd, 4> emission;
    std::array<Eigen::MatrixXd, 4> absorption;
    // flow through shifts beyond m_max, kept out of the classified arrays
    std::array<std::vector<double>, 4> overflow_out;
    // dot-label redistribution at fixed photon number; not photon flow
    std::array<std::vector<double>, 4> redist_out;

    // effective generator over diagonal states, cavity decay included
    Eigen::MatrixXd reduced_generator;
    // its null vector, normalized to unit sum
    Eigen::VectorXd diag_steady;

    double max_imag = 0.0;       // largest imaginary part dropped
    double column_defect = 0.0;  // worst column sum of reduced_generator

    // Strong dot-cavity coupling makes the eliminated coherences resonant,
    // and the exact elimination then yields some negative classified
    // coefficients. They are kept (the balance identity and the mean photon
    // decomposition need them) and summarized here.
    double most_negative = 0.0;  // most negative classified cell, <= 0
    int negative_cells = 0;      // cells below the noise floor
};

struct EmissionReport {
    std::vector<double> excess;  // [k-1]: k-photon net emission / kappa
    double mean_n_rate_eq = 0.0;
    double mean_n_sme = 0.0;
    double discrepancy = 0.0;  // relative gap between the two means
};

// Schur-eliminate the coherence block of a generator and classify the
// effective diagonal flow. kappa must be the cavity decay rate the
// generator was built with; its known diagonal action is subtracted before
// classification so cavity decay is not double counted as emission.
// Classified cells in [-1e-10, 0) are clamped to zero as solver noise.
// Throws SingularError when the coherence block is not invertible.
PhotonRateModel reduce(const Superoperator& gen, double kappa, int m_max = 4);

// Throws NegativeRateError listing every classified cell below -tolerance.
// Not called by reduce: strongly coupled regimes produce legitimate
// negative coefficients, see PhotonRateModel::most_negative.
void require_nonnegative(const PhotonRateModel& m, double tolerance = 1e-10);

// Worst per-shell mismatch of outflow against classified flow, relative to
// the total flux scale. Zero up to the Schur column defect by construction.
double balance_defect(const PhotonRateModel& m);

// Evaluate the k-resolved net emission at the model's own steady diagonal.
EmissionReport excess_emission(const PhotonRateModel& m, double kappa);

// Splitting of the dressed dot states under a coherent drive.
double dressed_resonance(double delta_p, double eta);

}  // namespace qdl
