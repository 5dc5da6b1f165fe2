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

#include "hilbert.hpp"

#include <cmath>

#include "errors.hpp"

namespace qdl {

HilbertLayout::HilbertLayout(int n_max_) : n_max(n_max_), dim(4 * (n_max_ + 1)) {
    if (n_max_ < 0) throw InvalidArgError("HilbertLayout: n_max must be >= 0");
}

std::string HilbertLayout::label_string(int idx) const {
    const Label l = label(idx);
    std::string s;
    s += l.dot1 ? 'e' : 'g';
    s += l.dot2 ? 'e' : 'g';
    s += ',';
    s += std::to_string(l.n);
    return s;
}

Matrix annihilation(const HilbertLayout& lay) {
    Matrix a = Matrix::Zero(lay.dim, lay.dim);
    for (int d1 = 0; d1 < 2; ++d1)
        for (int d2 = 0; d2 < 2; ++d2)
            for (int n = 1; n <= lay.n_max; ++n)
                a(lay.index(d1, d2, n - 1), lay.index(d1, d2, n)) =
                    std::sqrt(double(n));
    return a;
}

Matrix qd_sigma(const HilbertLayout& lay, int which, Ladder kind) {
    if (which != 1 && which != 2)
        throw InvalidArgError("qd_sigma: which must be 1 or 2");
    Matrix s = Matrix::Zero(lay.dim, lay.dim);
    for (int other = 0; other < 2; ++other)
        for (int n = 0; n <= lay.n_max; ++n) {
            // row = excited, col = ground for raise; transposed for lower.
            int e1 = which == 1 ? 1 : other;
            int e2 = which == 1 ? other : 1;
            int g1 = which == 1 ? 0 : other;
            int g2 = which == 1 ? other : 0;
            int ie = lay.index(e1, e2, n);
            int ig = lay.index(g1, g2, n);
            if (kind == Ladder::raise)
                s(ie, ig) = 1.0;
            else
                s(ig, ie) = 1.0;
        }
    return s;
}

Matrix identity(const HilbertLayout& lay) {
    return Matrix::Identity(lay.dim, lay.dim);
}

Matrix number_operator(const HilbertLayout& lay) {
    Matrix n_op = Matrix::Zero(lay.dim, lay.dim);
    for (int i = 0; i < lay.dim; ++i) n_op(i, i) = double(lay.label(i).n);
    return n_op;
}

CollectiveProjectors collective_projectors(const HilbertLayout& lay) {
    CollectiveProjectors p;
    p.ee = Matrix::Zero(lay.dim, lay.dim);
    p.plus = Matrix::Zero(lay.dim, lay.dim);
    p.minus = Matrix::Zero(lay.dim, lay.dim);
    p.gg = Matrix::Zero(lay.dim, lay.dim);
    for (int n = 0; n <= lay.n_max; ++n) {
        const int iee = lay.index(1, 1, n);
        const int ieg = lay.index(1, 0, n);
        const int ige = lay.index(0, 1, n);
        const int igg = lay.index(0, 0, n);
        p.ee(iee, iee) = 1.0;
        p.gg(igg, igg) = 1.0;
        p.plus(ieg, ieg) = 0.5;
        p.plus(ige, ige) = 0.5;
        p.plus(ieg, ige) = 0.5;
        p.plus(ige, ieg) = 0.5;
        p.minus(ieg, ieg) = 0.5;
        p.minus(ige, ige) = 0.5;
        p.minus(ieg, ige) = -0.5;
        p.minus(ige, ieg) = -0.5;
    }
    return p;
}

bool is_hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace qdl
