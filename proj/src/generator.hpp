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

#include <Eigen/Sparse>

#include <memory>

#include "hilbert.hpp"
#include "rates.hpp"

namespace qdl {

using SparseMatrix = Eigen::SparseMatrix<Cplx>;

struct ModelConfig {
    PumpMode pump_mode = PumpMode::incoherent;
    double g1 = 1.0;
    double g2 = 1.0;  // negative for anti-symmetric coupling
    double kappa = 0.5;
    double gamma1 = 0.01;
    double gamma2 = 0.01;
    double gamma1p = 0.0;  // pure dephasing
    double gamma2p = 0.0;
    double eta1 = 0.0;  // incoherent: pump rate; coherent: drive amplitude
    double eta2 = 0.0;
    double delta1 = 0.0;  // dot minus cavity, incoherent mode
    double delta2 = 0.0;
    double delta1p = 0.0;  // dot minus laser, coherent mode
    double delta2p = 0.0;
    double delta_cp = 0.0;  // cavity minus laser, coherent mode
    BathParams bath;
    int n_max = 10;
    bool phonons_enabled = true;
};

// Throws ConfigError; detuning fields of the inactive pump mode must be zero.
void validate(const ModelConfig& config);

// Generator matrices use column-stacked vectorization: vec(A rho B) =
// (B^T kron A) vec(rho).
struct Superoperator {
    HilbertLayout layout;
    SparseMatrix matrix;
};

Matrix apply_superop(const Superoperator& op, const Matrix& rho);

// Largest column sum of the trace functional; 0 for a trace-preserving
// generator.
double max_trace_violation(const Superoperator& op);

Matrix system_hamiltonian(const ModelConfig& config, const PhononKernel& kernel);

// -(rate/2)(O'O rho - 2 O rho O' + rho O'O)
Superoperator lindblad_dissipator(const HilbertLayout& layout, const Matrix& op,
                                  double rate);

// -(rate/2){O2 O1, rho} + rate O1 rho O2; preserves hermiticity only once
// the caller adds the partner term cross(O2', O1', conj(rate)).
Superoperator cross_dissipator(const HilbertLayout& layout, const Matrix& o1,
                               const Matrix& o2, Cplx rate);

// Dispatches on pump_mode; coherent cavity-sector detunings are
// delta_ip - delta_cp.
RateSet rates_for(const ModelConfig& config,
                  std::shared_ptr<const PhononKernel> kernel);

Superoperator sme_generator(const ModelConfig& config,
                            std::shared_ptr<const PhononKernel> kernel,
                            const RateSet& rates);

Superoperator full_polaron_generator(const ModelConfig& config,
                                     std::shared_ptr<const PhononKernel> kernel);

}  // namespace qdl
