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

#include <Eigen/Dense>
#include <complex>
#include <string>

namespace qdl {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Product basis (dot1, dot2, n): two two-level emitters and one cavity mode
// truncated at n_max photons. n runs fastest, so each dot configuration owns
// a contiguous Fock block and photon sectors are plain strides.
struct HilbertLayout {
    int n_max;
    int dim;

    explicit HilbertLayout(int n_max);

    struct Label {
        int dot1;  // 0 = ground, 1 = excited
        int dot2;
        int n;
    };

    int index(int dot1, int dot2, int n) const {
        return (dot1 * 2 + dot2) * (n_max + 1) + n;
    }
    Label label(int idx) const {
        const int f = n_max + 1;
        return Label{idx / f / 2, (idx / f) % 2, idx % f};
    }
    int fock_dim() const { return n_max + 1; }
    std::string label_string(int idx) const;
};

enum class Ladder { raise, lower };

// Cavity annihilation operator; identity on both dots.
Matrix annihilation(const HilbertLayout& lay);

// sigma^+ or sigma^- on dot `which` (1 or 2); identity elsewhere.
Matrix qd_sigma(const HilbertLayout& lay, int which, Ladder kind);

Matrix identity(const HilbertLayout& lay);

// a^dag a
Matrix number_operator(const HilbertLayout& lay);

// Projectors onto the four collective dot configurations, traced over nothing:
// each keeps the full photon ladder. plus/minus are (|eg> +- |ge>)/sqrt(2).
struct CollectiveProjectors {
    Matrix ee, plus, minus, gg;
};
CollectiveProjectors collective_projectors(const HilbertLayout& lay);

bool is_hermitian(const Matrix& m, double tol = 1e-12);

}  // namespace qdl
