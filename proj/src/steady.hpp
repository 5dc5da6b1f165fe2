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
#include <vector>

#include "generator.hpp"

namespace qdl {

struct Populations {
    double ee = 0.0;
    double plus = 0.0;
    double minus = 0.0;
    double gg = 0.0;
};

// Diagonal observables of a two-dot + cavity state. pn_ab is indexed
// [pair][n] with pair = dot1 * 2 + dot2 (so gg, ge, eg, ee); pn is its
// marginal over the pair label.
struct Observables {
    Populations populations;
    double mean_n = 0.0;
    std::vector<double> pn;
    std::array<std::vector<double>, 4> pn_ab;
};

Observables observables(const Matrix& rho, const HilbertLayout& lay);

struct SteadyState {
    Matrix rho;
    double residual = 0.0;  // ||L(rho)||_max against the unmodified generator
    Populations populations;
    double mean_n = 0.0;
    std::vector<double> pn;
    std::array<std::vector<double>, 4> pn_ab;
    double herm_defect = 0.0;  // asymmetry removed by the post-solve averaging
    double min_eig = 0.0;
};

// Stationary state of a trace-preserving generator. The vacuum-diagonal row
// of the vectorized system (always structurally nonzero) is replaced by the
// trace constraint and the result factorized directly, sparse or dense
// depending on fill. Throws SingularError when the steady manifold is
// degenerate; the message carries a null-space dimension estimate.
SteadyState solve_steady(const Superoperator& gen);

// Integrate drho/dt = L(rho) with an Arnoldi exponential propagator and
// adaptive step size. Snapshots are recorded at t = 0, every dt_control
// (when positive), and t_final. Throws NoConvergenceError on step-size
// collapse.
std::vector<SteadyState> evolve(const Superoperator& gen, const Matrix& rho0,
                                double t_final, double dt_control = 0.0);

enum class GeneratorKind { sme, full_me };

struct ConvergedSolve {
    int n_max = 0;
    SteadyState state;
};

// Re-solve with n_max increased in steps of 4 until mean_n (relative) and
// all four dot populations (absolute) move by less than tolerance. Throws
// NoConvergenceError with the trend when the cap is reached first.
ConvergedSolve converge_n_max(const ModelConfig& config,
                              std::shared_ptr<const PhononKernel> kernel,
                              double tolerance = 1e-3,
                              GeneratorKind kind = GeneratorKind::sme,
                              int n_max_cap = 40);

}  // namespace qdl
